//! End-to-end synthesis: compile a hierarchical-model energy polynomial into
//! RBM parameters along a cover plan, highest degrees first.
//!
//! Each star-tuple group is built against the *residual* polynomial rather
//! than the original targets: after a unit is synthesized, its actual
//! coefficients (by Möbius inversion) are subtracted from the residual, so the
//! large root coefficient a unit leaves one degree down simply becomes part of
//! the targets of a later group. Degree-one leftovers go to the visible biases
//! and the constant is absorbed by normalization.

use std::collections::{BTreeMap, BTreeSet};

use crate::constructions::{omega_floor, synthesize_star_tuple, StarTupleSpec, OMEGA_MIN};
use crate::covering::{make_cover_plan, CoverPlan};
use crate::error::Error;
use crate::softplus::{unit_coefficients, ActivationKind, SoftplusUnit};
use crate::subsetpoly::{MultilinearPoly, SimplicialComplex, VarSet};
use crate::{Result, MAX_VARS};

/// Multiplier applied when a group's targets force a larger scale.
const ESCALATION_FACTOR: f64 = 20.0;
/// How many escalations are attempted before giving up.
const MAX_ESCALATIONS: u32 = 3;

/// A hierarchical-model energy: interaction sets with real weights.
/// Duplicate sets are merged by summation.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchicalModelSpec {
    v: usize,
    interactions: BTreeMap<VarSet, f64>,
}

impl HierarchicalModelSpec {
    pub fn new<I: IntoIterator<Item = (VarSet, f64)>>(
        v: usize,
        interactions: I,
    ) -> Result<HierarchicalModelSpec> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        let mut merged: BTreeMap<VarSet, f64> = BTreeMap::new();
        for (set, weight) in interactions {
            if !set.fits_within(v) {
                return Err(Error::IndexOutOfRange {
                    index: set.max_index().unwrap_or(0),
                    v,
                });
            }
            if !weight.is_finite() {
                return Err(Error::NonFinite {
                    what: format!("interaction weight of {set}"),
                });
            }
            *merged.entry(set).or_insert(0.0) += weight;
        }
        Ok(HierarchicalModelSpec {
            v,
            interactions: merged,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn interactions(&self) -> impl Iterator<Item = (VarSet, f64)> + '_ {
        self.interactions.iter().map(|(&s, &w)| (s, w))
    }

    pub fn weight(&self, set: VarSet) -> f64 {
        self.interactions.get(&set).copied().unwrap_or(0.0)
    }

    /// The energy polynomial with these interaction weights.
    pub fn to_poly(&self) -> MultilinearPoly {
        MultilinearPoly::from_coeffs(self.v, self.interactions())
            .expect("interactions validated at construction")
    }

    /// Downward closure of the interaction sets.
    pub fn induced_complex(&self) -> SimplicialComplex {
        let generators: Vec<VarSet> = self.interactions.keys().copied().collect();
        SimplicialComplex::downward_closure(self.v, &generators)
            .expect("interactions validated at construction")
    }
}

/// Full parameter set of an RBM: visible biases plus one soft-plus unit per
/// hidden variable.
#[derive(Clone, Debug, PartialEq)]
pub struct RBMParams {
    v: usize,
    visible_bias: Vec<f64>,
    units: Vec<SoftplusUnit>,
}

impl RBMParams {
    pub fn new(v: usize, visible_bias: Vec<f64>, units: Vec<SoftplusUnit>) -> Result<RBMParams> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        if visible_bias.len() != v {
            return Err(Error::InvalidArgument(format!(
                "visible bias has length {}, expected v={v}",
                visible_bias.len()
            )));
        }
        if visible_bias.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite {
                what: "visible bias".into(),
            });
        }
        for unit in &units {
            if unit.v() != v {
                return Err(Error::VariableCountMismatch {
                    left: unit.v(),
                    right: v,
                });
            }
        }
        Ok(RBMParams {
            v,
            visible_bias,
            units,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn hidden_count(&self) -> usize {
        self.units.len()
    }

    pub fn visible_bias(&self) -> &[f64] {
        &self.visible_bias
    }

    pub fn units(&self) -> &[SoftplusUnit] {
        &self.units
    }
}

/// What the synthesis actually achieved.
#[derive(Clone, Debug)]
pub struct SynthesisReport {
    pub plan: CoverPlan,
    /// Scale used for each unit, in plan order.
    pub omega_used: Vec<f64>,
    /// Largest residual coefficient magnitude over sets of size >= 2.
    pub residual_max: f64,
    /// Max-norm of the residual per degree (degrees >= 2 with any leftover).
    pub per_degree_residual: BTreeMap<usize, f64>,
}

/// Compiles `spec` into RBM parameters along `plan`.
///
/// Groups are processed in plan order (nonincreasing degree). Each unit
/// targets the residual coefficients of its covered sets; its actual
/// coefficients are then subtracted from the residual. A unit whose targets
/// (inflated by the roughly ω/2-sized root coefficients of earlier units)
/// violate the scale floor gets its own ω escalated by ×20, at most three
/// times. Degree-one residuals become visible biases; the constant term is
/// dropped (normalization absorbs it).
pub fn synthesize_rbm(
    spec: &HierarchicalModelSpec,
    plan: &CoverPlan,
    omega: f64,
    tol: f64,
) -> Result<(RBMParams, SynthesisReport)> {
    let v = spec.v();
    if plan.v() != v {
        return Err(Error::VariableCountMismatch {
            left: plan.v(),
            right: v,
        });
    }
    if !(omega.is_finite() && omega >= OMEGA_MIN) {
        return Err(Error::OmegaBelowFloor {
            omega,
            floor: OMEGA_MIN,
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }

    let covered: BTreeSet<VarSet> = plan.covered_sets().collect();
    for (set, weight) in spec.interactions() {
        if set.len() >= 2 && weight != 0.0 && !covered.contains(&set) {
            return Err(Error::UncoveredInteraction { set });
        }
    }

    let mut residual = spec.to_poly();
    let mut units = Vec::with_capacity(plan.len());
    let mut omega_used = Vec::with_capacity(plan.len());
    for group in plan.groups() {
        let root = group.root();
        let targets: BTreeMap<usize, f64> = group
            .leaves()
            .iter()
            .map(|j| (j, residual.coeff(root.with(j))))
            .collect();
        let sum_abs: f64 = targets.values().map(|t| t.abs()).sum();
        let floor = omega_floor(sum_abs);
        let mut omega_unit = omega;
        let mut escalations = 0;
        while omega_unit < floor {
            if escalations == MAX_ESCALATIONS {
                return Err(Error::EscalationExhausted {
                    base_omega: omega,
                    reached: omega_unit,
                    floor,
                });
            }
            omega_unit *= ESCALATION_FACTOR;
            escalations += 1;
        }
        let star = StarTupleSpec::new(root, group.leaves(), targets)?;
        let unit = synthesize_star_tuple(&star, omega_unit, v)?;
        let actual = unit_coefficients(&unit, ActivationKind::Softplus);
        residual.sub_assign(&actual)?;
        units.push(unit);
        omega_used.push(omega_unit);
    }

    let mut visible_bias = Vec::with_capacity(v);
    for i in 0..v {
        let single = VarSet::singleton(i)?;
        visible_bias.push(residual.coeff(single));
        residual.set(single, 0.0)?;
    }
    residual.set(VarSet::EMPTY, 0.0)?;

    let mut per_degree_residual: BTreeMap<usize, f64> = BTreeMap::new();
    for (set, coeff) in residual.iter() {
        if set.len() >= 2 && coeff != 0.0 {
            let entry = per_degree_residual.entry(set.len()).or_insert(0.0);
            *entry = entry.max(coeff.abs());
        }
    }
    let residual_max = residual.max_abs_from_degree(2);
    if residual_max > tol {
        return Err(Error::ToleranceNotMet {
            residual_max,
            tol,
            suggested_omega: omega * 2.0,
        });
    }

    let params = RBMParams::new(v, visible_bias, units)?;
    let report = SynthesisReport {
        plan: plan.clone(),
        omega_used,
        residual_max,
        per_degree_residual,
    };
    Ok((params, report))
}

/// Number of hidden units the default cover plan spends on `spec`: the plan
/// over its induced complex with only biases on the visible side.
pub fn required_hidden_units(spec: &HierarchicalModelSpec) -> Result<usize> {
    let complex = spec.induced_complex();
    let visible = SimplicialComplex::singletons(spec.v())?;
    Ok(make_cover_plan(&complex, &visible)?.len())
}

/// Convenience: plan construction for a spec with bias-only visible side.
pub fn default_plan(spec: &HierarchicalModelSpec) -> Result<CoverPlan> {
    let complex = spec.induced_complex();
    let visible = SimplicialComplex::singletons(spec.v())?;
    make_cover_plan(&complex, &visible)
}
