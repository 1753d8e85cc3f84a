//! Multilinear polynomials on the Boolean lattice `2^V` and the transforms
//! between coefficient form and function-value form.
//!
//! A function on `{0,1}^V` and a multilinear polynomial are two encodings of
//! the same object. The zeta transform turns coefficients into function values
//! (evaluate the polynomial on every state) and the Möbius transform inverts it
//! (alternating subset sums). Both run in `O(v * 2^v)` with the in-place
//! butterfly over the subset lattice; the naive `O(4^v)` loops live in the test
//! suite as independent oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::{Result, MAX_VARS};

/// A subset of the variable indices `{0, …, v-1}`, stored as a bitmask.
///
/// The ambient variable count is not part of the value; operations that need it
/// take `v` explicitly and check `fits_within`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VarSet(u32);

impl VarSet {
    /// The empty set.
    pub const EMPTY: VarSet = VarSet(0);

    /// Builds a set from explicit indices. Duplicates are fine.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<VarSet> {
        let mut bits = 0u32;
        for i in indices {
            if i >= MAX_VARS {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    v: MAX_VARS,
                });
            }
            bits |= 1 << i;
        }
        Ok(VarSet(bits))
    }

    /// Builds a set from a raw bitmask.
    pub fn from_bits(bits: u32) -> Result<VarSet> {
        if bits >> MAX_VARS != 0 {
            return Err(Error::IndexOutOfRange {
                index: 31 - bits.leading_zeros() as usize,
                v: MAX_VARS,
            });
        }
        Ok(VarSet(bits))
    }

    pub fn singleton(i: usize) -> Result<VarSet> {
        VarSet::from_indices([i])
    }

    /// The full set `{0, …, v-1}`.
    pub fn full(v: usize) -> Result<VarSet> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        Ok(VarSet(if v == 32 { u32::MAX } else { (1u32 << v) - 1 }))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Index of this set in a table of length `2^v`.
    pub fn as_index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> VarSet {
        debug_assert!(i < MAX_VARS);
        VarSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> VarSet {
        VarSet(self.0 & !(1u32 << i.min(31)))
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    /// Set difference `self \ other`.
    pub fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint_from(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    /// True if every member index is `< v`.
    pub fn fits_within(self, v: usize) -> bool {
        v >= 32 || self.0 >> v == 0
    }

    /// Member indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn min_index(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// All subsets of `self`, ascending as integers.
    pub fn subsets(self) -> impl Iterator<Item = VarSet> {
        let mask = self.0;
        let mut next: Option<u32> = Some(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                // Enumerates submasks in increasing order.
                Some(cur.wrapping_sub(mask) & mask)
            };
            Some(VarSet(cur))
        })
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A multilinear polynomial `x ↦ Σ_B coeffs[B] Π_{i∈B} x_i` on `{0,1}^v`.
///
/// Absent keys are coefficients that are exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPoly {
    v: usize,
    coeffs: BTreeMap<VarSet, f64>,
}

impl MultilinearPoly {
    pub fn new(v: usize) -> Result<MultilinearPoly> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        Ok(MultilinearPoly {
            v,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn from_coeffs<I: IntoIterator<Item = (VarSet, f64)>>(
        v: usize,
        coeffs: I,
    ) -> Result<MultilinearPoly> {
        let mut poly = MultilinearPoly::new(v)?;
        for (set, value) in coeffs {
            poly.add(set, value)?;
        }
        Ok(poly)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Adds `value` to the coefficient of `set` (repeated sets accumulate).
    pub fn add(&mut self, set: VarSet, value: f64) -> Result<()> {
        if !set.fits_within(self.v) {
            return Err(Error::IndexOutOfRange {
                index: set.max_index().unwrap_or(0),
                v: self.v,
            });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite {
                what: format!("coefficient of {set}"),
            });
        }
        *self.coeffs.entry(set).or_insert(0.0) += value;
        Ok(())
    }

    pub fn set(&mut self, set: VarSet, value: f64) -> Result<()> {
        if !set.fits_within(self.v) {
            return Err(Error::IndexOutOfRange {
                index: set.max_index().unwrap_or(0),
                v: self.v,
            });
        }
        self.coeffs.insert(set, value);
        Ok(())
    }

    /// The coefficient of `set`; zero when absent.
    pub fn coeff(&self, set: VarSet) -> f64 {
        self.coeffs.get(&set).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarSet, f64)> + '_ {
        self.coeffs.iter().map(|(&s, &c)| (s, c))
    }

    /// Removes entries that are exactly zero.
    pub fn prune_zeros(&mut self) {
        self.coeffs.retain(|_, c| *c != 0.0);
    }

    /// Subtracts `other` coefficient-wise.
    pub fn sub_assign(&mut self, other: &MultilinearPoly) -> Result<()> {
        if self.v != other.v {
            return Err(Error::VariableCountMismatch {
                left: self.v,
                right: other.v,
            });
        }
        for (set, value) in other.iter() {
            *self.coeffs.entry(set).or_insert(0.0) -= value;
        }
        Ok(())
    }

    /// Largest absolute coefficient over sets with `|B| >= min_size`.
    pub fn max_abs_from_degree(&self, min_size: usize) -> f64 {
        self.coeffs
            .iter()
            .filter(|(s, _)| s.len() >= min_size)
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    /// Evaluates the polynomial at one state by summing coefficients of the
    /// subsets of `x`'s support.
    pub fn eval(&self, x: VarSet) -> f64 {
        self.coeffs
            .iter()
            .filter(|(s, _)| s.is_subset_of(x))
            .map(|(_, c)| c)
            .sum()
    }
}

/// Function values on all of `{0,1}^v`, indexed by the state's bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionTable {
    v: usize,
    values: Vec<f64>,
}

impl FunctionTable {
    pub fn zeros(v: usize) -> Result<FunctionTable> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        Ok(FunctionTable {
            v,
            values: vec![0.0; 1 << v],
        })
    }

    pub fn from_values(v: usize, values: Vec<f64>) -> Result<FunctionTable> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        if values.len() != 1 << v {
            return Err(Error::BadTableLength {
                len: values.len(),
                v,
            });
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: format!("table entry {i}"),
            });
        }
        Ok(FunctionTable { v, values })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, x: VarSet) -> f64 {
        self.values[x.as_index()]
    }

    pub fn set_value(&mut self, x: VarSet, value: f64) {
        self.values[x.as_index()] = value;
    }

    /// States in ascending bitmask order.
    pub fn states(&self) -> impl Iterator<Item = VarSet> {
        (0..self.values.len() as u32).map(VarSet)
    }
}

/// Evaluates a polynomial on every state: `values[x] = Σ_{B ⊆ x} coeffs[B]`.
pub fn zeta_transform(poly: &MultilinearPoly) -> FunctionTable {
    let v = poly.v;
    let mut values = vec![0.0; 1 << v];
    for (set, coeff) in poly.iter() {
        values[set.as_index()] += coeff;
    }
    for i in 0..v {
        let bit = 1usize << i;
        for x in 0..values.len() {
            if x & bit != 0 {
                values[x] += values[x ^ bit];
            }
        }
    }
    FunctionTable { v, values }
}

/// Recovers coefficients from function values by alternating subset sums:
/// `coeffs[B] = Σ_{C ⊆ B} (-1)^{|B\C|} values[C]`. Exact inverse of
/// [`zeta_transform`].
pub fn mobius_transform(table: &FunctionTable) -> MultilinearPoly {
    let v = table.v;
    let mut values = table.values.clone();
    for i in 0..v {
        let bit = 1usize << i;
        for x in 0..values.len() {
            if x & bit != 0 {
                values[x] -= values[x ^ bit];
            }
        }
    }
    let coeffs = values
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0.0)
        .map(|(x, c)| (VarSet(x as u32), c))
        .collect();
    MultilinearPoly { v, coeffs }
}

/// A downward-closed family of subsets whose union is `{0, …, v-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    v: usize,
    sets: BTreeSet<VarSet>,
}

impl SimplicialComplex {
    /// Smallest downward-closed family containing `generators`, the empty set,
    /// and all singletons.
    pub fn downward_closure(v: usize, generators: &[VarSet]) -> Result<SimplicialComplex> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        let mut sets = BTreeSet::new();
        sets.insert(VarSet::EMPTY);
        for i in 0..v {
            sets.insert(VarSet::singleton(i)?);
        }
        for &g in generators {
            if !g.fits_within(v) {
                return Err(Error::IndexOutOfRange {
                    index: g.max_index().unwrap_or(0),
                    v,
                });
            }
            for s in g.subsets() {
                sets.insert(s);
            }
        }
        Ok(SimplicialComplex { v, sets })
    }

    /// The complex containing only the empty set and the singletons.
    pub fn singletons(v: usize) -> Result<SimplicialComplex> {
        SimplicialComplex::downward_closure(v, &[])
    }

    /// Validates an explicit family: downward closed and spanning all of `V`.
    pub fn from_sets<I: IntoIterator<Item = VarSet>>(v: usize, sets: I) -> Result<SimplicialComplex> {
        if v > MAX_VARS {
            return Err(Error::TooManyVariables { v, max: MAX_VARS });
        }
        let sets: BTreeSet<VarSet> = sets.into_iter().collect();
        let mut union = VarSet::EMPTY;
        for &s in &sets {
            if !s.fits_within(v) {
                return Err(Error::IndexOutOfRange {
                    index: s.max_index().unwrap_or(0),
                    v,
                });
            }
            union = union.union(s);
            for sub in s.subsets() {
                if !sets.contains(&sub) {
                    return Err(Error::InvalidArgument(format!(
                        "family is not downward closed: {s} is present but {sub} is not"
                    )));
                }
            }
        }
        if union != VarSet::full(v)? {
            return Err(Error::InvalidArgument(format!(
                "family does not span all {v} variables"
            )));
        }
        Ok(SimplicialComplex { v, sets })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn contains(&self, set: VarSet) -> bool {
        self.sets.contains(&set)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VarSet> + '_ {
        self.sets.iter().copied()
    }

    pub fn sets_of_size(&self, size: usize) -> impl Iterator<Item = VarSet> + '_ {
        self.sets.iter().copied().filter(move |s| s.len() == size)
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).max().unwrap_or(0)
    }
}

/// All `C(v, j)` subsets of size `j`, ascending as integers.
pub fn layer(v: usize, j: usize) -> Result<Vec<VarSet>> {
    if v > MAX_VARS {
        return Err(Error::TooManyVariables { v, max: MAX_VARS });
    }
    if j > v {
        return Err(Error::LayerOutOfRange { j, v });
    }
    if j == 0 {
        return Ok(vec![VarSet::EMPTY]);
    }
    // Gosper's hack walks same-popcount masks in increasing order.
    let mut out = Vec::new();
    let top = 1u32 << v;
    let mut x = (1u32 << j) - 1;
    while x < top {
        out.push(VarSet(x));
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((x ^ r) >> 2) / c) | r;
        if c == 0 {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: evaluate the polynomial state by state.
    fn naive_zeta(poly: &MultilinearPoly) -> Vec<f64> {
        (0..1u32 << poly.v())
            .map(|x| poly.eval(VarSet(x)))
            .collect()
    }

    /// Independent oracle: alternating subset sums with compensated (Kahan)
    /// summation to limit cancellation error.
    fn naive_mobius(table: &FunctionTable) -> Vec<f64> {
        let v = table.v();
        (0..1u32 << v)
            .map(|b| {
                let b = VarSet(b);
                let mut sum = 0.0f64;
                let mut comp = 0.0f64;
                for c in b.subsets() {
                    let sign = if (b.len() - c.len()).is_multiple_of(2) { 1.0 } else { -1.0 };
                    let y = sign * table.value(c) - comp;
                    let t = sum + y;
                    comp = (t - sum) - y;
                    sum = t;
                }
                sum
            })
            .collect()
    }

    fn set(indices: &[usize]) -> VarSet {
        VarSet::from_indices(indices.iter().copied()).unwrap()
    }

    #[test]
    fn varset_basics() {
        let s = set(&[0, 2, 3]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(2));
        assert!(!s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(s.to_string(), "{0,2,3}");
        assert_eq!(s.difference(set(&[2])), set(&[0, 3]));
        assert!(set(&[2]).is_subset_of(s));
        assert_eq!(s.max_index(), Some(3));
        assert_eq!(s.without(3), set(&[0, 2]));
    }

    #[test]
    fn varset_rejects_large_indices() {
        assert!(VarSet::from_indices([MAX_VARS]).is_err());
        assert!(VarSet::from_bits(1 << 30).is_err());
        assert!(MultilinearPoly::new(MAX_VARS + 1).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        let subsets: Vec<VarSet> = set(&[0, 2]).subsets().collect();
        assert_eq!(subsets, vec![VarSet::EMPTY, set(&[0]), set(&[2]), set(&[0, 2])]);
        assert_eq!(VarSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn zeta_constant_polynomial() {
        let poly = MultilinearPoly::from_coeffs(3, [(VarSet::EMPTY, 3.0)]).unwrap();
        let table = zeta_transform(&poly);
        assert!(table.values().iter().all(|&x| x == 3.0));
    }

    #[test]
    fn zeta_top_monomial_is_and_indicator() {
        let poly = MultilinearPoly::from_coeffs(2, [(set(&[0, 1]), 1.0)]).unwrap();
        let table = zeta_transform(&poly);
        assert_eq!(table.values(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn zeta_matches_per_state_oracle() {
        let mut poly = MultilinearPoly::new(3).unwrap();
        let coeffs = [0.7, -1.3, 2.1, 0.25, -0.8, 1.9, -2.4, 0.5];
        for (bits, &c) in coeffs.iter().enumerate() {
            poly.set(VarSet(bits as u32), c).unwrap();
        }
        let fast = zeta_transform(&poly);
        let naive = naive_zeta(&poly);
        for (a, b) in fast.values().iter().zip(&naive) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn mobius_constant_table() {
        let table = FunctionTable::from_values(3, vec![2.5; 8]).unwrap();
        let poly = mobius_transform(&table);
        assert_eq!(poly.coeff(VarSet::EMPTY), 2.5);
        assert_eq!(poly.iter().count(), 1);
    }

    #[test]
    fn mobius_delta_at_top() {
        let mut table = FunctionTable::zeros(2).unwrap();
        table.set_value(set(&[0, 1]), 1.0);
        let poly = mobius_transform(&table);
        assert_eq!(poly.coeff(set(&[0, 1])), 1.0);
        assert_eq!(poly.iter().count(), 1);
    }

    #[test]
    fn mobius_matches_kahan_oracle() {
        let v = 5;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 20.0 - 10.0
        };
        let values: Vec<f64> = (0..1 << v).map(|_| next()).collect();
        let table = FunctionTable::from_values(v, values).unwrap();
        let fast = mobius_transform(&table);
        let naive = naive_mobius(&table);
        for (x, &expected) in naive.iter().enumerate() {
            assert!(
                (fast.coeff(VarSet(x as u32)) - expected).abs() < 1e-10,
                "coefficient {x} disagrees with the alternating-sum oracle"
            );
        }
    }

    #[test]
    fn downward_closure_single_pair() {
        let complex = SimplicialComplex::downward_closure(3, &[set(&[0, 1])]).unwrap();
        let expected: Vec<VarSet> = vec![
            VarSet::EMPTY,
            set(&[0]),
            set(&[1]),
            set(&[0, 1]),
            set(&[2]),
        ];
        assert_eq!(complex.len(), 5);
        for s in expected {
            assert!(complex.contains(s));
        }
    }

    #[test]
    fn downward_closure_full_triple() {
        let complex = SimplicialComplex::downward_closure(3, &[set(&[0, 1, 2])]).unwrap();
        assert_eq!(complex.len(), 8);
    }

    #[test]
    fn downward_closure_two_pairs() {
        let complex = SimplicialComplex::downward_closure(4, &[set(&[0, 1]), set(&[2, 3])]).unwrap();
        // Empty set, four singletons, and the two generating pairs.
        assert_eq!(complex.len(), 7);
        assert!(complex.contains(set(&[0, 1])));
        assert!(complex.contains(set(&[2, 3])));
        assert!(!complex.contains(set(&[0, 2])));
    }

    #[test]
    fn downward_closure_rejects_out_of_range() {
        assert!(SimplicialComplex::downward_closure(3, &[set(&[3])]).is_err());
    }

    #[test]
    fn from_sets_validates_closure() {
        let err = SimplicialComplex::from_sets(
            2,
            [VarSet::EMPTY, set(&[0]), set(&[1]), set(&[0, 1])],
        );
        assert!(err.is_ok());
        let err = SimplicialComplex::from_sets(2, [set(&[0]), set(&[1]), set(&[0, 1])]);
        assert!(err.is_err(), "missing empty set must be rejected");
    }

    #[test]
    fn layer_examples() {
        assert_eq!(layer(3, 0).unwrap(), vec![VarSet::EMPTY]);
        assert_eq!(layer(4, 2).unwrap().len(), 6);
        let triples = layer(5, 3).unwrap();
        assert_eq!(triples.len(), 10);
        assert!(triples.iter().all(|s| s.len() == 3));
        // Ascending as integers.
        assert!(triples.windows(2).all(|w| w[0] < w[1]));
        assert!(layer(3, 4).is_err());
    }

    proptest! {
        /// zeta and Möbius invert each other.
        #[test]
        fn roundtrip_mobius_zeta(v in 1usize..=7, seed in any::<u64>()) {
            let mut state = seed | 1;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 * 20.0 - 10.0
            };
            let values: Vec<f64> = (0..1usize << v).map(|_| next()).collect();
            let table = FunctionTable::from_values(v, values.clone()).unwrap();
            let back = zeta_transform(&mobius_transform(&table));
            for (a, b) in back.values().iter().zip(&values) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        /// The Möbius transform is linear.
        #[test]
        fn mobius_is_linear(scale in -4.0f64..4.0, seed in any::<u64>()) {
            let v = 4;
            let mut state = seed | 1;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
            };
            let t1: Vec<f64> = (0..16).map(|_| next()).collect();
            let t2: Vec<f64> = (0..16).map(|_| next()).collect();
            let combined: Vec<f64> = t1.iter().zip(&t2).map(|(a, b)| scale * a + b).collect();
            let m1 = mobius_transform(&FunctionTable::from_values(v, t1).unwrap());
            let m2 = mobius_transform(&FunctionTable::from_values(v, t2).unwrap());
            let mc = mobius_transform(&FunctionTable::from_values(v, combined).unwrap());
            for bits in 0..16u32 {
                let s = VarSet(bits);
                prop_assert!((mc.coeff(s) - (scale * m1.coeff(s) + m2.coeff(s))).abs() < 1e-9);
            }
        }

        /// If the table only depends on coordinates in A, coefficients vanish
        /// outside 2^A.
        #[test]
        fn support_confinement(seed in any::<u64>()) {
            let v = 5;
            let support = set(&[0, 2, 4]);
            let mut state = seed | 1;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 * 6.0 - 3.0
            };
            let base: Vec<f64> = (0..8).map(|_| next()).collect();
            let values: Vec<f64> = (0..1u32 << v)
                .map(|x| {
                    let restricted = VarSet(x).intersection(support);
                    // Compress {0,2,4} membership into a 3-bit index.
                    let idx = (restricted.contains(0) as usize)
                        | (restricted.contains(2) as usize) << 1
                        | (restricted.contains(4) as usize) << 2;
                    base[idx]
                })
                .collect();
            let poly = mobius_transform(&FunctionTable::from_values(v, values).unwrap());
            for (s, c) in poly.iter() {
                if !s.is_subset_of(support) {
                    prop_assert!(c.abs() < 1e-10, "coefficient {s} = {c} outside the support");
                }
            }
        }
    }
}
