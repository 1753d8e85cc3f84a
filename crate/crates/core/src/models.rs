//! Exact probability semantics by full enumeration: hierarchical-model
//! distributions, RBM free energies and marginals, and divergences.
//!
//! Everything here is brute force on the 2^v states (and, in the test oracles,
//! the 2^h hidden states), which is the point: synthesized parameters are
//! checked against exact distributions, not samples. Normalizations subtract
//! the max log-weight first since synthesized energies contain ω-scale values.

use crate::error::Error;
use crate::softplus::softplus_value;
use crate::subsetpoly::{zeta_transform, FunctionTable, VarSet};
use crate::synth::{HierarchicalModelSpec, RBMParams};
use crate::{Result, MAX_ENUM_HIDDEN, MAX_ENUM_VARS};

/// A probability distribution on `{0,1}^v`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbTable {
    v: usize,
    probs: Vec<f64>,
}

impl ProbTable {
    /// Validates an explicit table: nonnegative entries summing to one.
    pub fn from_probs(v: usize, probs: Vec<f64>) -> Result<ProbTable> {
        if probs.len() != 1 << v {
            return Err(Error::BadTableLength {
                len: probs.len(),
                v,
            });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::NonFinite {
                what: "probability entries".into(),
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(ProbTable { v, probs })
    }

    /// Softmax of a table of log-weights; max-subtracted for stability.
    pub fn from_log_weights(table: &FunctionTable) -> ProbTable {
        let max = table
            .values()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut probs: Vec<f64> = table.values().iter().map(|&x| (x - max).exp()).collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        ProbTable {
            v: table.v(),
            probs,
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: VarSet) -> f64 {
        self.probs[x.as_index()]
    }
}

fn check_enum_size(v: usize) -> Result<()> {
    if v > MAX_ENUM_VARS {
        return Err(Error::TooLargeForExact {
            v,
            max: MAX_ENUM_VARS,
        });
    }
    Ok(())
}

/// The normalized distribution `p(x) ∝ exp(E(x))` of a hierarchical model.
pub fn hierarchical_distribution(spec: &HierarchicalModelSpec) -> Result<ProbTable> {
    check_enum_size(spec.v())?;
    let energy = zeta_transform(&spec.to_poly());
    Ok(ProbTable::from_log_weights(&energy))
}

/// Exact energy table of a hierarchical model (zeta transform of its
/// interaction weights).
pub fn hierarchical_energy(spec: &HierarchicalModelSpec) -> Result<FunctionTable> {
    check_enum_size(spec.v())?;
    Ok(zeta_transform(&spec.to_poly()))
}

/// Free energy `F(x) = Σ_i b_i x_i + Σ_j f(Σ_i w_ji x_i + c_j)` over all
/// states, using the factorized per-unit form.
pub fn rbm_free_energy(params: &RBMParams) -> Result<FunctionTable> {
    let v = params.v();
    check_enum_size(v)?;
    if params.hidden_count() > MAX_ENUM_HIDDEN {
        return Err(Error::TooManyHidden {
            h: params.hidden_count(),
            max: MAX_ENUM_HIDDEN,
        });
    }
    let n = 1usize << v;
    // Units are summed in a canonical order so that the table (and everything
    // derived from it) is bit-identical under reordering of the unit list.
    let mut ordered: Vec<&crate::softplus::SoftplusUnit> = params.units().iter().collect();
    ordered.sort_by(|a, b| {
        a.bias()
            .total_cmp(&b.bias())
            .then_with(|| {
                a.weights()
                    .iter()
                    .zip(b.weights())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    // Incremental dot products over the state lattice, once for the bias and
    // once per unit.
    let mut values = vec![0.0f64; n];
    let mut pre = vec![0.0f64; n];
    let bias = params.visible_bias();
    for x in 1..n {
        let low = x & x.wrapping_neg();
        pre[x] = pre[x ^ low] + bias[low.trailing_zeros() as usize];
    }
    values.copy_from_slice(&pre);
    for unit in ordered {
        let w = unit.weights();
        pre[0] = unit.bias();
        for x in 1..n {
            let low = x & x.wrapping_neg();
            pre[x] = pre[x ^ low] + w[low.trailing_zeros() as usize];
        }
        for x in 0..n {
            values[x] += softplus_value(pre[x]);
        }
    }
    FunctionTable::from_values(v, values)
}

/// The visible marginal `p(x) ∝ exp(F(x))` of an RBM.
pub fn rbm_marginal(params: &RBMParams) -> Result<ProbTable> {
    Ok(ProbTable::from_log_weights(&rbm_free_energy(params)?))
}

/// Kullback–Leibler divergence `Σ p log(p/q)` in nats.
pub fn kl_divergence(p: &ProbTable, q: &ProbTable) -> Result<f64> {
    if p.v != q.v {
        return Err(Error::VariableCountMismatch {
            left: p.v,
            right: q.v,
        });
    }
    let mut total = 0.0;
    for (x, (&pp, &qq)) in p.probs.iter().zip(&q.probs).enumerate() {
        if pp > 0.0 {
            if qq <= 0.0 {
                return Err(Error::SupportViolation { state: x as u32 });
            }
            total += pp * (pp / qq).ln();
        }
    }
    Ok(total)
}

/// KL divergence between the distributions induced by two energy tables,
/// `KL(softmax(E) ‖ softmax(F))`, computed in energy space.
///
/// With the per-state gap `δ_x = E_x - F_x` and `p = softmax(E)`, the
/// divergence equals `E_p[δ] + log E_p[exp(-δ)]`, which is invariant under
/// constant shifts of either energy. When the gaps are small, the second term
/// goes through `log1p`/`expm1`, so the result stays accurate far below the
/// `~1e-16` floor of the probability-space form; that matters when the two
/// energies differ only by synthesis residuals.
pub fn kl_between_energies(e: &FunctionTable, f: &FunctionTable) -> Result<f64> {
    if e.v() != f.v() {
        return Err(Error::VariableCountMismatch {
            left: e.v(),
            right: f.v(),
        });
    }
    let p = ProbTable::from_log_weights(e);
    let gaps: Vec<f64> = e
        .values()
        .iter()
        .zip(f.values())
        .map(|(&ex, &fx)| ex - fx)
        .collect();
    let mean_gap: f64 = p.probs.iter().zip(&gaps).map(|(&px, &d)| px * d).sum();
    let max_abs_gap = gaps.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let log_mean_exp = if max_abs_gap <= 1.0 {
        // log E_p[exp(-δ)] = log1p(Σ p·expm1(-δ)), exact to second order.
        p.probs
            .iter()
            .zip(&gaps)
            .map(|(&px, &d)| px * (-d).exp_m1())
            .sum::<f64>()
            .ln_1p()
    } else {
        let max = gaps.iter().fold(f64::NEG_INFINITY, |m, d| m.max(-d));
        max + p
            .probs
            .iter()
            .zip(&gaps)
            .map(|(&px, &d)| px * (-d - max).exp())
            .sum::<f64>()
            .ln()
    };
    Ok(mean_gap + log_mean_exp)
}

/// Total variation distance `½ Σ |p - q|`, in `[0, 1]`.
pub fn total_variation(p: &ProbTable, q: &ProbTable) -> Result<f64> {
    if p.v != q.v {
        return Err(Error::VariableCountMismatch {
            left: p.v,
            right: q.v,
        });
    }
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0)
}
