//! Explicit parameter choices that make one soft-plus unit realize prescribed
//! polynomial coefficients.
//!
//! The star-tuple construction drives the whole synthesis pipeline: with
//! `w_i = ω` on a root set, `w_j` equal to the target coefficient on each leaf,
//! and `c = -(|root| - 1/2)·ω`, every state not containing the root lands deep
//! in the flat tail of the soft-plus while the root states sit on its linear
//! part, so the unit is nearly linear in the leaf variables. The covering-pair
//! constructions realize a `(K_B, K_B')` target for a single covering pair and
//! are exposed for experimentation.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::softplus::{edge_pair_feasible, softplus_inverse, top_coefficient, SoftplusUnit};
use crate::subsetpoly::VarSet;
use crate::Result;

/// Minimum accepted scale parameter.
pub const OMEGA_MIN: f64 = 40.0;

/// Scale floor for a group of targets: `max(40, 2·Σ|targets| + 20)`.
///
/// At this floor every suppressed pre-activation stays at or below
/// `-(ω - 2·Σ|targets|)/2 <= -10`, so off-group values sit in the flat tail of
/// the soft-plus and shrink exponentially as ω grows past the floor.
pub fn omega_floor(sum_abs_targets: f64) -> f64 {
    OMEGA_MIN.max(2.0 * sum_abs_targets + 20.0)
}

/// A star-tuple synthesis request: realize `K_{root ∪ {j}} = targets[j]` for
/// every leaf `j`, with everything else (except the root itself) near zero.
#[derive(Clone, Debug, PartialEq)]
pub struct StarTupleSpec {
    root: VarSet,
    leaves: VarSet,
    targets: BTreeMap<usize, f64>,
}

impl StarTupleSpec {
    pub fn new(
        root: VarSet,
        leaves: VarSet,
        targets: BTreeMap<usize, f64>,
    ) -> Result<StarTupleSpec> {
        if !root.is_disjoint_from(leaves) {
            return Err(Error::InvalidArgument(format!(
                "root {root} and leaves {leaves} must be disjoint"
            )));
        }
        let keyed: Vec<usize> = targets.keys().copied().collect();
        let expected: Vec<usize> = leaves.iter().collect();
        if keyed != expected {
            return Err(Error::InvalidArgument(format!(
                "targets must be keyed exactly by the leaves {leaves}"
            )));
        }
        if targets.values().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite {
                what: "star-tuple targets".into(),
            });
        }
        Ok(StarTupleSpec {
            root,
            leaves,
            targets,
        })
    }

    pub fn root(&self) -> VarSet {
        self.root
    }

    pub fn leaves(&self) -> VarSet {
        self.leaves
    }

    pub fn targets(&self) -> &BTreeMap<usize, f64> {
        &self.targets
    }

    pub fn sum_abs_targets(&self) -> f64 {
        self.targets.values().map(|t| t.abs()).sum()
    }
}

/// A covering-pair synthesis request: `B ⊋ B'` with nothing strictly between.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgePairSpec {
    b: VarSet,
    b_prime: VarSet,
    j_b: f64,
    j_bprime: f64,
}

impl EdgePairSpec {
    pub fn new(b: VarSet, b_prime: VarSet, j_b: f64, j_bprime: f64) -> Result<EdgePairSpec> {
        if !b_prime.is_subset_of(b) || b.difference(b_prime).len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "({b}, {b_prime}) is not a covering pair"
            )));
        }
        if !j_b.is_finite() || !j_bprime.is_finite() {
            return Err(Error::NonFinite {
                what: "covering-pair targets".into(),
            });
        }
        Ok(EdgePairSpec {
            b,
            b_prime,
            j_b,
            j_bprime,
        })
    }

    pub fn b(&self) -> VarSet {
        self.b
    }

    pub fn b_prime(&self) -> VarSet {
        self.b_prime
    }

    pub fn j_b(&self) -> f64 {
        self.j_b
    }

    pub fn j_bprime(&self) -> f64 {
        self.j_bprime
    }

    /// The single element of `B \ B'`.
    pub fn pivot(&self) -> usize {
        self.b
            .difference(self.b_prime)
            .min_index()
            .expect("nonempty difference")
    }
}

/// Builds the star-tuple unit: `w = ω` on the root, targets on the leaves,
/// zero elsewhere, `c = -(|root| - 1/2)·ω`.
///
/// Every target coefficient and every off-group coefficient (excluding the
/// root, which lands near `ω/2`) ends up within `2^v · exp(-ω/4)`.
pub fn synthesize_star_tuple(spec: &StarTupleSpec, omega: f64, v: usize) -> Result<SoftplusUnit> {
    let members = spec.root.union(spec.leaves);
    if !members.fits_within(v) {
        return Err(Error::IndexOutOfRange {
            index: members.max_index().unwrap_or(0),
            v,
        });
    }
    let floor = omega_floor(spec.sum_abs_targets());
    if omega < floor {
        return Err(Error::OmegaBelowFloor { omega, floor });
    }
    let mut w = vec![0.0; v];
    for i in spec.root.iter() {
        w[i] = omega;
    }
    for (&j, &target) in &spec.targets {
        w[j] = target;
    }
    let c = -(spec.root.len() as f64 - 0.5) * omega;
    SoftplusUnit::new(v, w, c)
}

/// Realizes a single leading coefficient `K_B = J_B` as a one-leaf star tuple
/// rooted at `B` minus its largest index; the root coefficient comes out near
/// `ω/2` and is left for lower-degree processing.
pub fn synthesize_leading(b: VarSet, j_b: f64, omega: f64, v: usize) -> Result<SoftplusUnit> {
    let pivot = b.max_index().ok_or(Error::EmptyTargetSet)?;
    let root = b.without(pivot);
    let leaves = VarSet::singleton(pivot)?;
    let spec = StarTupleSpec::new(root, leaves, BTreeMap::from([(pivot, j_b)]))?;
    synthesize_star_tuple(&spec, omega, v)
}

/// Realizes a `(K_B, K_B')` target for one covering pair.
///
/// The construction follows the size of `B' = B \ {m}`:
/// `|B'| = 0` maps two states directly through the soft-plus inverse;
/// `|B'| = 1` places the two distinguished states on prescribed values and
/// pushes the rest into the flat tail; `|B'| = 2` and `|B'| > 3` reduce to the
/// neighbouring case by adding a variable with a large weight and shifting the
/// bias; `|B'| = 3` sets `w = ω` on `B'`, chooses `c` so the top state hits
/// `J_B'`, and bisects `w_m` on the exact coefficient identity
/// `K_B(w_m) = K_B'(c + w_m) - K_B'(c)`.
pub fn synthesize_edge_pair(spec: &EdgePairSpec, omega: f64, v: usize) -> Result<SoftplusUnit> {
    if !spec.b.fits_within(v) {
        return Err(Error::IndexOutOfRange {
            index: spec.b.max_index().unwrap_or(0),
            v,
        });
    }
    if omega < OMEGA_MIN {
        return Err(Error::OmegaBelowFloor {
            omega,
            floor: OMEGA_MIN,
        });
    }
    let verdict = edge_pair_feasible(spec.b.len(), spec.j_b, spec.j_bprime)?;
    if !verdict.feasible {
        let constraint = match spec.b.len() {
            1 => "J_B' >= max(0, -J_B)".to_string(),
            _ => "J_B' >= max(0, -J_B) or J_B' <= min(0, -J_B)".to_string(),
        };
        return Err(Error::InfeasibleRegion {
            bsize: spec.b.len(),
            j_b: spec.j_b,
            j_bprime: spec.j_bprime,
            constraint,
        });
    }

    let b_prime: Vec<usize> = spec.b_prime.iter().collect();
    let pivot = spec.pivot();
    let assignment = realize_pair(&b_prime, pivot, spec.j_b, spec.j_bprime, omega)?;
    let mut w = vec![0.0; v];
    for (i, wi) in assignment.weights {
        w[i] = wi;
    }
    SoftplusUnit::new(v, w, assignment.c)
}

struct PairAssignment {
    weights: Vec<(usize, f64)>,
    c: f64,
}

fn realize_pair(
    b_prime: &[usize],
    pivot: usize,
    j_b: f64,
    j_bprime: f64,
    omega: f64,
) -> Result<PairAssignment> {
    // Targets this close to zero are floored: the soft-plus is strictly
    // positive, so exact zeros are only reachable in the limit.
    let tau = (-omega / 2.0).exp();
    match b_prime.len() {
        0 => {
            let c = softplus_inverse(j_bprime.max(tau));
            let s = (j_b + j_bprime).max(tau);
            Ok(PairAssignment {
                weights: vec![(pivot, softplus_inverse(s) - c)],
                c,
            })
        }
        1 => {
            let b1 = b_prime[0];
            if j_bprime > 0.0 || (j_bprime == 0.0 && j_b >= 0.0) {
                // Both distinguished states carry x_b1 = 1; everything else is
                // pushed far negative by c = -ω.
                let s_low = softplus_inverse(j_bprime.max(tau));
                let s_high = softplus_inverse((j_b + j_bprime).max(tau));
                Ok(PairAssignment {
                    weights: vec![(b1, s_low + omega), (pivot, s_high - s_low)],
                    c: -omega,
                })
            } else {
                // Mirror branch: the distinguished states carry x_b1 = 0 and
                // the realized pair flips sign.
                let s_low = softplus_inverse((-j_bprime).max(tau));
                let s_high = softplus_inverse((-j_bprime - j_b).max(tau));
                Ok(PairAssignment {
                    weights: vec![(b1, -omega), (pivot, s_high - s_low)],
                    c: s_low,
                })
            }
        }
        2 => {
            // Reduce to |B'| = 1 by adding the extra variable with a large
            // weight and compensating in the bias.
            let inner = realize_pair(&b_prime[1..], pivot, j_b, j_bprime, omega)?;
            Ok(lift(inner, b_prime[0], omega))
        }
        3 => {
            if j_bprime >= 0.0 {
                realize_triple(b_prime, pivot, j_b, j_bprime, omega)
            } else {
                // Flip one variable of B': substituting x_n -> 1 - x_n negates
                // every coefficient indexed by a set containing n, so realizing
                // (-J_B, -J_B') and then flipping hits (J_B, J_B').
                let inner = realize_triple(b_prime, pivot, -j_b, -j_bprime, omega)?;
                let n = b_prime[0];
                let mut c = inner.c;
                let weights = inner
                    .weights
                    .into_iter()
                    .map(|(i, wi)| {
                        if i == n {
                            c += wi;
                            (i, -wi)
                        } else {
                            (i, wi)
                        }
                    })
                    .collect();
                Ok(PairAssignment { weights, c })
            }
        }
        _ => {
            let lifted = *b_prime.last().expect("nonempty");
            let inner = realize_pair(&b_prime[..b_prime.len() - 1], pivot, j_b, j_bprime, omega)?;
            Ok(lift(inner, lifted, omega))
        }
    }
}

/// Adds variable `n` with a weight large enough to clear the inner unit's
/// entire positive dynamic range, compensating in the bias. States with
/// `x_n = 1` then reproduce the inner unit's values while states with
/// `x_n = 0` fall into the flat tail.
fn lift(inner: PairAssignment, n: usize, omega: f64) -> PairAssignment {
    let reach: f64 =
        inner.weights.iter().map(|(_, w)| w.max(0.0)).sum::<f64>() + inner.c.max(0.0);
    let w_n = omega + reach.max(0.0);
    let c = inner.c - w_n;
    let mut weights = inner.weights;
    weights.push((n, w_n));
    PairAssignment { weights, c }
}

/// The `|B'| = 3` construction with `J_B' >= 0`: equal weights `ω` on `B'`,
/// bias chosen so the all-ones state of `B'` hits `J_B'`, and `w_m` found by
/// scanning and bisecting the exact identity for `K_B`.
fn realize_triple(
    b_prime: &[usize],
    pivot: usize,
    j_b: f64,
    j_bprime: f64,
    omega: f64,
) -> Result<PairAssignment> {
    debug_assert!(j_bprime >= 0.0);
    let tau = (-omega / 2.0).exp();
    let w_eq = [omega, omega, omega];
    let c = softplus_inverse(j_bprime.max(tau)) - 3.0 * omega;
    let base = top_coefficient(&w_eq, c);
    let g = |u: f64| top_coefficient(&w_eq, c + u) - base - j_b;

    // Scan upward for a sign change; the coefficient rises to roughly ω/5
    // before plunging past -ω/4, so the target is bracketed along the way
    // whenever |J_B| is within the reachable range for this ω.
    let u_max = 6.0 * omega;
    let steps = 2400usize;
    let mut prev_u = 0.0f64;
    let mut prev_g = g(0.0);
    let mut bracket = None;
    if prev_g == 0.0 {
        bracket = Some((0.0, 0.0));
    } else {
        for k in 1..=steps {
            let u = u_max * k as f64 / steps as f64;
            let cur = g(u);
            if prev_g * cur <= 0.0 {
                bracket = Some((prev_u, u));
                break;
            }
            prev_u = u;
            prev_g = cur;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::BracketFailed { omega })?;
    let mut g_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_lo * g_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            g_lo = g_mid;
        }
    }
    let w_m = 0.5 * (lo + hi);
    let mut weights: Vec<(usize, f64)> = b_prime.iter().map(|&i| (i, omega)).collect();
    weights.push((pivot, w_m));
    Ok(PairAssignment { weights, c })
}
