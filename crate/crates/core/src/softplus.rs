//! Soft-plus (and rectified-linear) computational units, their multilinear
//! coefficients, covering-pair feasibility regions, and the one-variable root
//! criterion for hitting a single prescribed coefficient.

use nalgebra::DMatrix;

use crate::error::Error;
use crate::subsetpoly::{mobius_transform, FunctionTable, MultilinearPoly, VarSet};
use crate::Result;

/// Arguments above this threshold use the shifted branch `s + log1p(exp(-s))`;
/// both branches agree to double precision at the crossover.
const BRANCH_THRESHOLD: f64 = 30.0;

/// Numerically stable `log(1 + exp(s))`.
///
/// Monotone increasing, bounded below by `max(0, s)`, and free of overflow on
/// the whole real line.
pub fn softplus_value(s: f64) -> f64 {
    if s > BRANCH_THRESHOLD {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

/// `max(0, s)`, the piecewise-linear limit of the soft-plus shape.
pub fn rectified_value(s: f64) -> f64 {
    s.max(0.0)
}

/// Inverse of the soft-plus on its range `(0, ∞)`: `log(exp(y) - 1)`.
pub fn softplus_inverse(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    if y > BRANCH_THRESHOLD {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

/// Which non-linearity a unit applies to its integrated input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActivationKind {
    Softplus,
    Rectified,
}

impl ActivationKind {
    pub fn apply(self, s: f64) -> f64 {
        match self {
            ActivationKind::Softplus => softplus_value(s),
            ActivationKind::Rectified => rectified_value(s),
        }
    }
}

/// One hidden unit: coupling weights `w` (length `v`) and bias `c`.
///
/// The unit computes `x ↦ f(Σ_{i∈x} w_i + c)` on `{0,1}^v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftplusUnit {
    v: usize,
    w: Vec<f64>,
    c: f64,
}

impl SoftplusUnit {
    pub fn new(v: usize, w: Vec<f64>, c: f64) -> Result<SoftplusUnit> {
        if w.len() != v {
            return Err(Error::InvalidArgument(format!(
                "weight vector has length {}, expected v={v}",
                w.len()
            )));
        }
        if !c.is_finite() || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "unit parameters".into(),
            });
        }
        Ok(SoftplusUnit { v, w, c })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn bias(&self) -> f64 {
        self.c
    }

    /// The affine input `Σ_{i∈x} w_i + c` before the non-linearity.
    pub fn preactivation(&self, x: VarSet) -> f64 {
        debug_assert!(x.fits_within(self.v));
        x.iter().map(|i| self.w[i]).sum::<f64>() + self.c
    }
}

/// Value of one unit on one state.
pub fn unit_value(unit: &SoftplusUnit, x: VarSet, kind: ActivationKind) -> f64 {
    kind.apply(unit.preactivation(x))
}

/// Function table of a unit over all `2^v` states.
pub fn unit_table(unit: &SoftplusUnit, kind: ActivationKind) -> FunctionTable {
    let v = unit.v;
    let n = 1usize << v;
    // Incremental dot products: each state extends a previous one by one bit.
    let mut pre = vec![0.0f64; n];
    pre[0] = unit.c;
    for x in 1..n {
        let low = x & x.wrapping_neg();
        pre[x] = pre[x ^ low] + unit.w[low.trailing_zeros() as usize];
    }
    let values: Vec<f64> = pre.into_iter().map(|s| kind.apply(s)).collect();
    FunctionTable::from_values(v, values).expect("unit table is well-formed")
}

/// Multilinear coefficients of a unit, obtained by Möbius inversion of its
/// function table: `K_B = Σ_{C⊆B} (-1)^{|B\C|} f(Σ_{i∈C} w_i + c)`.
pub fn unit_coefficients(unit: &SoftplusUnit, kind: ActivationKind) -> MultilinearPoly {
    mobius_transform(&unit_table(unit, kind))
}

/// Alternating subset sum over an explicit weight slice:
/// `Σ_{C ⊆ {0..n}} (-1)^{n-|C|} f(Σ_{i∈C} w_i + c)`.
///
/// This is the coefficient of the full index set of a unit with these weights,
/// computed directly; used by the constructions and the root criterion where
/// building a whole table would be wasteful.
pub fn top_coefficient(w: &[f64], c: f64) -> f64 {
    let n = w.len();
    let mut sum = 0.0;
    for mask in 0u32..(1u32 << n) {
        let mut s = c;
        for (i, &wi) in w.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s += wi;
            }
        }
        let sign = if (n as u32 - mask.count_ones()).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        sum += sign * softplus_value(s);
    }
    sum
}

/// Which row/branch of the covering-pair coefficient region applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BindingCase {
    /// `|B| = 1`: the one-sided constraint `J_B' >= max(0, -J_B)`.
    BottomRow,
    /// `|B| in {2,3}` with `J_B' >= 0`: requires `J_B' >= -J_B`.
    UpperBranch,
    /// `|B| in {2,3}` with `J_B' <= 0`: requires `J_B' <= -J_B`.
    LowerBranch,
    /// `|B| >= 4`: every pair in the plane is attainable.
    Unconstrained,
}

/// Feasibility verdict for a prescribed covering-pair coefficient target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionVerdict {
    pub feasible: bool,
    pub binding_case: BindingCase,
}

/// Decides whether `(J_B, J_B')` is attainable (to arbitrary accuracy) by one
/// unit for a covering pair with `|B| = bsize`. Boundaries are closed.
pub fn edge_pair_feasible(bsize: usize, j_b: f64, j_bprime: f64) -> Result<RegionVerdict> {
    if bsize < 1 {
        return Err(Error::InvalidArgument(
            "covering pairs need |B| >= 1".into(),
        ));
    }
    let verdict = match bsize {
        1 => RegionVerdict {
            feasible: j_bprime >= 0.0 && j_bprime >= -j_b,
            binding_case: BindingCase::BottomRow,
        },
        2 | 3 => {
            // Sign of J_B' selects the branch; on the boundary J_B' = 0 the
            // feasible branch is picked by the sign of J_B.
            if j_bprime > 0.0 || (j_bprime == 0.0 && j_b >= 0.0) {
                RegionVerdict {
                    feasible: j_bprime >= -j_b,
                    binding_case: BindingCase::UpperBranch,
                }
            } else {
                RegionVerdict {
                    feasible: j_bprime <= -j_b,
                    binding_case: BindingCase::LowerBranch,
                }
            }
        }
        _ => RegionVerdict {
            feasible: true,
            binding_case: BindingCase::Unconstrained,
        },
    };
    Ok(verdict)
}

/// Coefficients (ascending degree) of the polynomial in `t = exp(w_m)` whose
/// positive roots are exactly the values of `w_m` with `K_B = J_B`, for fixed
/// `w_B'` and `c`.
///
/// With `r = K_B'(w_B', c) + J_B` the polynomial is
/// `Π_{|B'\C| even} (1 + t·e^{c+Σ_C w}) - e^r·Π_{|B'\C| odd} (1 + t·e^{c+Σ_C w})`,
/// of degree at most `2^{|B'|-1}`.
pub fn root_polynomial(w_bprime: &[f64], c: f64, j_b: f64) -> Result<Vec<f64>> {
    let n = w_bprime.len();
    if n > 20 {
        return Err(Error::InvalidArgument(format!(
            "root polynomial supports |B'| <= 20, got {n}"
        )));
    }
    for (i, &w) in w_bprime.iter().enumerate() {
        if !w.exp().is_finite() {
            return Err(Error::ExpOverflow {
                what: format!("exp(w[{i}])"),
            });
        }
    }
    let r = top_coefficient(w_bprime, c) + j_b;
    let r_exp = r.exp();
    if !r_exp.is_finite() {
        return Err(Error::ExpOverflow {
            what: "exp(K_B' + J_B)".into(),
        });
    }

    // Multiply out Π (1 + α_C t) for the even- and odd-codimension subsets.
    let mut even = vec![1.0f64];
    let mut odd = vec![1.0f64];
    for mask in 0u32..(1u32 << n) {
        let mut arg = c;
        for (i, &wi) in w_bprime.iter().enumerate() {
            if mask & (1 << i) != 0 {
                arg += wi;
            }
        }
        let alpha = arg.exp();
        if !alpha.is_finite() {
            return Err(Error::ExpOverflow {
                what: format!("exp(c + Σ_C w) for C mask {mask:#b}"),
            });
        }
        let target = if (n as u32 - mask.count_ones()).is_multiple_of(2) {
            &mut even
        } else {
            &mut odd
        };
        target.push(0.0);
        for k in (1..target.len()).rev() {
            let carry = alpha * target[k - 1];
            target[k] += carry;
        }
    }
    let len = even.len().max(odd.len());
    let mut coeffs = vec![0.0; len];
    for (k, &a) in even.iter().enumerate() {
        coeffs[k] += a;
    }
    for (k, &a) in odd.iter().enumerate() {
        coeffs[k] -= r_exp * a;
    }
    Ok(coeffs)
}

/// Positive real roots of a polynomial given by ascending coefficients.
///
/// Degree <= 16 goes through companion-matrix eigenvalues; above that a
/// log-spaced sign-change scan with bisection takes over. Returns ascending
/// roots. An identically zero polynomial yields `None` (every `t` is a root).
fn positive_real_roots(coeffs: &[f64]) -> Option<Vec<f64>> {
    let max_abs = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max_abs == 0.0 {
        return None;
    }
    let scaled: Vec<f64> = coeffs.iter().map(|c| c / max_abs).collect();
    // Strip roots at t = 0 (not positive) and negligible leading coefficients.
    let low = scaled.iter().position(|c| *c != 0.0).unwrap();
    let mut high = scaled.len();
    while high > low + 1 && scaled[high - 1].abs() <= 1e-13 {
        high -= 1;
    }
    let p = &scaled[low..high];
    let degree = p.len() - 1;
    if degree == 0 {
        return Some(Vec::new());
    }

    let mut roots: Vec<f64> = if degree == 1 {
        vec![-p[0] / p[1]]
    } else if degree <= 16 {
        let lead = p[degree];
        let companion = DMatrix::from_fn(degree, degree, |row, col| {
            if col == degree - 1 {
                -p[row] / lead
            } else if row == col + 1 {
                1.0
            } else {
                0.0
            }
        });
        companion
            .complex_eigenvalues()
            .iter()
            .filter(|e| e.im.abs() <= 1e-4 * (1.0 + e.re.abs()))
            .map(|e| e.re)
            .collect()
    } else {
        // Sign-change scan over t = exp(u), u on a uniform grid.
        let eval = |t: f64| -> f64 {
            let mut acc = 0.0;
            for &c in p.iter().rev() {
                acc = acc * t + c;
            }
            acc
        };
        let mut found = Vec::new();
        let steps = 4000;
        let (lo, hi) = (-60.0f64, 60.0f64);
        let mut prev_u = lo;
        let mut prev_val = eval(prev_u.exp());
        for k in 1..=steps {
            let u = lo + (hi - lo) * k as f64 / steps as f64;
            let val = eval(u.exp());
            if prev_val == 0.0 {
                found.push(prev_u.exp());
            } else if prev_val * val < 0.0 {
                let (mut a, mut b) = (prev_u, u);
                let mut fa = prev_val;
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    let fm = eval(mid.exp());
                    if fa * fm <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                found.push((0.5 * (a + b)).exp());
            }
            prev_u = u;
            prev_val = val;
        }
        found
    };

    roots.retain(|t| *t > 0.0 && t.is_finite());
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    Some(roots)
}

/// Finds `w_m` such that the coefficient of `B = B' ∪ {m}` equals `j_b`, with
/// `w_B'` and `c` held fixed; `None` when no positive root exists.
///
/// Candidate roots of [`root_polynomial`] are polished on the exact coefficient
/// identity `K_B(w_m) = K_B'(c + w_m) - K_B'(c)` and accepted only when the
/// reconstructed coefficient matches `j_b` to 1e-8.
pub fn solve_w_m(w_bprime: &[f64], c: f64, j_b: f64) -> Result<Option<f64>> {
    let coeffs = root_polynomial(w_bprime, c, j_b)?;
    let base = top_coefficient(w_bprime, c);
    let g = |u: f64| -> f64 { top_coefficient(w_bprime, c + u) - base - j_b };
    let g_prime = |u: f64| -> f64 {
        let n = w_bprime.len();
        let mut sum = 0.0;
        for mask in 0u32..(1u32 << n) {
            let mut s = c + u;
            for (i, &wi) in w_bprime.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s += wi;
                }
            }
            let sign = if (n as u32 - mask.count_ones()).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            // Derivative of the soft-plus is the logistic function.
            sum += sign / (1.0 + (-s).exp());
        }
        sum
    };

    let candidates: Vec<f64> = match positive_real_roots(&coeffs) {
        // Identically zero polynomial: every w_m satisfies the identity.
        None => vec![0.0],
        Some(roots) => roots.into_iter().map(f64::ln).collect(),
    };

    let tol = 1e-10 * (1.0 + j_b.abs());
    for u0 in candidates {
        if !u0.is_finite() {
            continue;
        }
        // Newton polish on the exact identity, with step clamping.
        let mut u = u0;
        for _ in 0..60 {
            let gu = g(u);
            if gu.abs() <= tol {
                break;
            }
            let d = g_prime(u);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let step = (gu / d).clamp(-2.0, 2.0);
            u -= step;
            if !u.is_finite() {
                break;
            }
        }
        if !u.is_finite() || g(u).abs() > tol {
            // Newton failed; fall back to a bracket search near the seed.
            match bisect_near(&g, u0) {
                Some(refined) => u = refined,
                None => continue,
            }
        }
        // Final acceptance on the fully reconstructed coefficient.
        let mut w_full = w_bprime.to_vec();
        w_full.push(u);
        let achieved = top_coefficient(&w_full, c);
        if (achieved - j_b).abs() <= 1e-8 {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

fn bisect_near(g: &dyn Fn(f64) -> f64, u0: f64) -> Option<f64> {
    let span = 4.0;
    let steps = 400;
    let mut prev_u = u0 - span;
    let mut prev_val = g(prev_u);
    for k in 1..=steps {
        let u = u0 - span + 2.0 * span * k as f64 / steps as f64;
        let val = g(u);
        if prev_val == 0.0 {
            return Some(prev_u);
        }
        if prev_val * val < 0.0 {
            let (mut a, mut b) = (prev_u, u);
            let mut fa = prev_val;
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let fm = g(mid);
                if fa * fm <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            return Some(0.5 * (a + b));
        }
        prev_u = u;
        prev_val = val;
    }
    None
}
