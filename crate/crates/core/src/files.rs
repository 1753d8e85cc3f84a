//! On-disk formats: model and RBM parameter files as JSON, written
//! canonically (alphabetically sorted keys, `%.17g` floats) so that
//! load → save is byte-stable.
//!
//! Variable indices in files are 0-based. Interaction sets may repeat; their
//! weights are summed on load.

use serde::Deserialize;

use crate::covering::StarTuple;
use crate::error::Error;
use crate::softplus::SoftplusUnit;
use crate::subsetpoly::VarSet;
use crate::synth::{HierarchicalModelSpec, RBMParams};
use crate::Result;

#[derive(Deserialize)]
struct ModelFileRaw {
    v: usize,
    interactions: Vec<InteractionRaw>,
}

#[derive(Deserialize)]
struct InteractionRaw {
    set: Vec<usize>,
    weight: f64,
}

#[derive(Deserialize)]
struct RbmFileRaw {
    v: usize,
    visible_bias: Vec<f64>,
    hidden: Vec<HiddenRaw>,
}

#[derive(Deserialize)]
struct HiddenRaw {
    w: Vec<f64>,
    c: f64,
}

fn json_error(what: &str, err: serde_json::Error) -> Error {
    Error::InvalidArgument(format!("invalid {what} file: {err}"))
}

/// Parses a model file: `{"v": n, "interactions": [{"set": [...], "weight": x}]}`.
pub fn parse_model(json: &str) -> Result<HierarchicalModelSpec> {
    let raw: ModelFileRaw = serde_json::from_str(json).map_err(|e| json_error("model", e))?;
    let mut interactions = Vec::with_capacity(raw.interactions.len());
    for entry in raw.interactions {
        let set = VarSet::from_indices(entry.set)?;
        interactions.push((set, entry.weight));
    }
    HierarchicalModelSpec::new(raw.v, interactions)
}

/// Parses an RBM file: `{"v": n, "visible_bias": [...], "hidden": [{"w": [...], "c": x}]}`.
pub fn parse_rbm(json: &str) -> Result<RBMParams> {
    let raw: RbmFileRaw = serde_json::from_str(json).map_err(|e| json_error("rbm", e))?;
    let mut units = Vec::with_capacity(raw.hidden.len());
    for h in raw.hidden {
        units.push(SoftplusUnit::new(raw.v, h.w, h.c)?);
    }
    RBMParams::new(raw.v, raw.visible_bias, units)
}

/// Canonical model serialization: sorted keys, interactions ordered by set.
pub fn model_to_json(spec: &HierarchicalModelSpec) -> String {
    let mut out = String::from("{\n  \"interactions\": [");
    let mut first = true;
    for (set, weight) in spec.interactions() {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str("\n    { \"set\": ");
        push_index_array(&mut out, set);
        out.push_str(", \"weight\": ");
        out.push_str(&format_g17(weight));
        out.push_str(" }");
    }
    if !first {
        out.push_str("\n  ");
    }
    out.push_str("],\n  \"v\": ");
    out.push_str(&spec.v().to_string());
    out.push_str("\n}\n");
    out
}

/// Canonical RBM serialization: sorted keys, units in stored order.
pub fn rbm_to_json(params: &RBMParams) -> String {
    let mut out = String::from("{\n  \"hidden\": [");
    let mut first = true;
    for unit in params.units() {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str("\n    { \"c\": ");
        out.push_str(&format_g17(unit.bias()));
        out.push_str(", \"w\": ");
        push_float_array(&mut out, unit.weights());
        out.push_str(" }");
    }
    if !first {
        out.push_str("\n  ");
    }
    out.push_str("],\n  \"v\": ");
    out.push_str(&params.v().to_string());
    out.push_str(",\n  \"visible_bias\": ");
    push_float_array(&mut out, params.visible_bias());
    out.push_str("\n}\n");
    out
}

/// Star tuples as JSON: `[{ "leaves": [...], "root": [...] }, …]`.
pub fn cover_to_json(tuples: &[StarTuple]) -> String {
    let mut out = String::from("[");
    for (i, tuple) in tuples.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("\n  { \"leaves\": ");
        push_index_array(&mut out, tuple.leaves());
        out.push_str(", \"root\": ");
        push_index_array(&mut out, tuple.root());
        out.push_str(" }");
    }
    if !tuples.is_empty() {
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

fn push_index_array(out: &mut String, set: VarSet) {
    out.push('[');
    for (n, i) in set.iter().enumerate() {
        if n > 0 {
            out.push_str(", ");
        }
        out.push_str(&i.to_string());
    }
    out.push(']');
}

fn push_float_array(out: &mut String, values: &[f64]) {
    out.push('[');
    for (n, x) in values.iter().enumerate() {
        if n > 0 {
            out.push_str(", ");
        }
        out.push_str(&format_g17(*x));
    }
    out.push(']');
}

/// Formats a double the way C's `printf("%.17g", x)` does: 17 significant
/// digits, fixed or scientific notation by exponent, trailing zeros stripped.
/// 17 digits are always enough to reparse the exact same double.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".to_string()
        } else {
            "0".to_string()
        };
    }
    if !x.is_finite() {
        // Never produced by validated inputs; kept total for safety.
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let negative = x < 0.0;
    let formatted = format!("{:.16e}", x.abs());
    let (mantissa, exp) = formatted.split_once('e').expect("scientific format");
    let exponent: i32 = exp.parse().expect("numeric exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), 17);

    let body = if !(-4..17).contains(&exponent) {
        let frac = digits[1..].trim_end_matches('0');
        let lead = &digits[..1];
        let mantissa = if frac.is_empty() {
            lead.to_string()
        } else {
            format!("{lead}.{frac}")
        };
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else if exponent >= 0 {
        let split = exponent as usize + 1;
        let int_part = &digits[..split];
        let frac = digits[split..].trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exponent - 1) as usize);
        let frac = digits.trim_end_matches('0');
        format!("0.{zeros}{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
