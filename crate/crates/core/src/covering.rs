//! Star-tuple covering numbers, covering-design bounds, constructive layer
//! covers, an exact branch-and-bound search for small instances, and the
//! hidden-unit bound tables built from them.
//!
//! `D(v, j)` is the smallest number of star tuples covering the layer of
//! j-subsets; a star tuple rooted at a (j-1)-set covers exactly its j-set
//! extensions, so `D(v, j) = C(v, v-j+1, v-j)` in covering-design notation.
//! Closed formulas exist for the extreme rows; everything else is bounded by
//! the Erdős–Spencer estimate and the simple bound `C(v-1, j-1)`, and can be
//! pinned down exactly for `v <= 9` by the branch-and-bound oracle.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::subsetpoly::{layer, SimplicialComplex, VarSet};
use crate::Result;

/// Default node budget for the exact search when callers do not supply one.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// How a bound value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    ExactFormula,
    ErdosSpencer,
    Simple,
    ExactSearch,
    MinCombine,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BoundMethod::ExactFormula => "exact-formula",
            BoundMethod::ErdosSpencer => "erdos-spencer",
            BoundMethod::Simple => "simple",
            BoundMethod::ExactSearch => "exact-search",
            BoundMethod::MinCombine => "min-combine",
        };
        f.write_str(name)
    }
}

/// A covering-number bound together with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub value: u64,
    pub method: BoundMethod,
}

/// Binomial coefficient as `u64`; exact for every argument used here (v <= 40).
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// The nested-ceiling formula for covering the layer of 3-sets:
/// `⌈v/(v-2) ⌈(v-1)/(v-3) ⌈…⌈4/2⌉…⌉⌉⌉`.
fn layer3_formula(v: usize) -> u64 {
    let mut acc: u64 = 2; // innermost term ⌈4/2⌉
    for n in 5..=v as u64 {
        acc = ceil_div(n * acc, n - 2);
    }
    acc
}

/// Best upper bound on `D(v, j)`, the minimal number of star tuples covering
/// the layer of j-subsets.
///
/// Exact-formula rows are used whenever one applies; otherwise the minimum of
/// the Erdős–Spencer bound and the simple bound `C(v-1, j-1)` is returned with
/// the `min-combine` tag.
pub fn covering_number_bound(v: usize, j: usize) -> Result<BoundValue> {
    if j < 1 || j > v {
        return Err(Error::LayerOutOfRange { j, v });
    }
    let mut exact: Option<u64> = None;
    let mut push = |candidate: u64| {
        exact = Some(exact.map_or(candidate, |e| e.min(candidate)));
    };
    if j == 1 || j == v {
        push(1);
    }
    if j == 2 && v >= 2 {
        push(v as u64 - 1);
    }
    if j == 3 && v >= 4 {
        push(layer3_formula(v));
    }
    if v >= 4 && j == v - 3 && v % 12 != 7 {
        let inner = ceil_div(v as u64 - 2, 2);
        let mid = ceil_div((v as u64 - 1) * inner, 3);
        push(ceil_div(v as u64 * mid, 4));
    }
    if v >= 3 && j == v - 2 {
        let inner = ceil_div(v as u64 - 1, 2);
        push(ceil_div(v as u64 * inner, 3));
    }
    if v >= 2 && j == v - 1 {
        push(ceil_div(v as u64, 2));
    }
    if let Some(value) = exact {
        return Ok(BoundValue {
            value,
            method: BoundMethod::ExactFormula,
        });
    }
    Ok(BoundValue {
        value: erdos_spencer_bound(v, j).min(simple_bound(v, j)),
        method: BoundMethod::MinCombine,
    })
}

/// `⌊ [C(v,r)/C(k,r)] · [1 + log C(k,r)] ⌋` with `k = v-j+1`, `r = v-j`,
/// so `C(k, r) = v-j+1`. Natural logarithm; floored because covering numbers
/// are integers.
pub fn erdos_spencer_bound(v: usize, j: usize) -> u64 {
    let r = v - j;
    let blocks_per_point = (v - j + 1) as f64;
    let ratio = binomial(v, r) as f64 / blocks_per_point;
    (ratio * (1.0 + blocks_per_point.ln())).floor() as u64
}

/// `D(v, j) <= C(v-1, j-1)`: roots avoiding one fixed point cover everything.
pub fn simple_bound(v: usize, j: usize) -> u64 {
    binomial(v - 1, j - 1)
}

/// Exact minimum number of k-subsets of a v-set covering every r-subset,
/// restricted to `r = k-1` (the only case the star-tuple reduction needs).
///
/// Branch and bound: branch on the extensions of the first uncovered r-set,
/// prune with `chosen + ⌈uncovered/k⌉`, seed with a greedy cover. Returns
/// `None` when the node budget runs out before optimality is proved.
pub fn exact_covering_number(
    v: usize,
    k: usize,
    r: usize,
    node_budget: u64,
) -> Result<Option<BoundValue>> {
    if v > 9 {
        return Err(Error::InvalidArgument(format!(
            "exact search is limited to v <= 9, got {v}"
        )));
    }
    if k < 1 || k > v || r + 1 != k {
        return Err(Error::InvalidArgument(format!(
            "exact search needs 1 <= k <= v and r = k-1, got (v={v}, k={k}, r={r})"
        )));
    }
    if node_budget == 0 {
        return Err(Error::InvalidArgument("node budget must be positive".into()));
    }
    if r == 0 {
        // Any single block contains the empty set.
        return Ok(Some(BoundValue {
            value: 1,
            method: BoundMethod::ExactSearch,
        }));
    }

    let rsets = layer(v, r)?;
    let mut rset_index = vec![usize::MAX; 1 << v];
    for (i, s) in rsets.iter().enumerate() {
        rset_index[s.as_index()] = i;
    }
    // Every r-set extends to exactly v-r candidate blocks.
    let extensions: Vec<Vec<u32>> = rsets
        .iter()
        .map(|s| {
            (0..v)
                .filter(|&e| !s.contains(e))
                .map(|e| s.with(e).bits())
                .collect()
        })
        .collect();
    let block_rsets = |block: u32| -> Vec<usize> {
        let mut out = Vec::with_capacity(k);
        let mut bits = block;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            out.push(rset_index[(block ^ low) as usize]);
            bits ^= low;
        }
        out
    };

    // Greedy upper bound.
    let all_blocks = layer(v, k)?;
    let mut covered = vec![false; rsets.len()];
    let mut uncovered = rsets.len();
    let mut greedy = 0u64;
    while uncovered > 0 {
        let mut best_block = None;
        let mut best_gain = 0usize;
        for b in &all_blocks {
            let gain = block_rsets(b.bits())
                .iter()
                .filter(|&&i| !covered[i])
                .count();
            if gain > best_gain {
                best_gain = gain;
                best_block = Some(b.bits());
            }
        }
        let chosen = best_block.expect("some block always covers a new r-set");
        for i in block_rsets(chosen) {
            if !covered[i] {
                covered[i] = true;
                uncovered -= 1;
            }
        }
        greedy += 1;
    }

    struct Search<'a> {
        k: u64,
        cover_count: Vec<u32>,
        uncovered: usize,
        extensions: &'a [Vec<u32>],
        block_rsets: &'a dyn Fn(u32) -> Vec<usize>,
        best: u64,
        nodes: u64,
        budget: u64,
        exhausted: bool,
    }

    impl Search<'_> {
        fn run(&mut self, chosen: u64) {
            if self.exhausted {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return;
            }
            if self.uncovered == 0 {
                self.best = self.best.min(chosen);
                return;
            }
            if chosen + (self.uncovered as u64).div_ceil(self.k) >= self.best {
                return;
            }
            let first = self
                .cover_count
                .iter()
                .position(|&c| c == 0)
                .expect("uncovered > 0");
            for bi in 0..self.extensions[first].len() {
                let block = self.extensions[first][bi];
                let touched = (self.block_rsets)(block);
                for &i in &touched {
                    if self.cover_count[i] == 0 {
                        self.uncovered -= 1;
                    }
                    self.cover_count[i] += 1;
                }
                self.run(chosen + 1);
                for &i in &touched {
                    self.cover_count[i] -= 1;
                    if self.cover_count[i] == 0 {
                        self.uncovered += 1;
                    }
                }
            }
        }
    }

    let mut search = Search {
        k: k as u64,
        cover_count: vec![0; rsets.len()],
        uncovered: rsets.len(),
        extensions: &extensions,
        block_rsets: &block_rsets,
        best: greedy,
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    search.run(0);
    if search.exhausted {
        return Ok(None);
    }
    Ok(Some(BoundValue {
        value: search.best,
        method: BoundMethod::ExactSearch,
    }))
}

/// A star tuple: the family `{root ∪ {j} : j ∈ leaves}` of sets covering a
/// common root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarTuple {
    root: VarSet,
    leaves: VarSet,
}

impl StarTuple {
    pub fn new(root: VarSet, leaves: VarSet) -> Result<StarTuple> {
        if !root.is_disjoint_from(leaves) {
            return Err(Error::InvalidArgument(format!(
                "star tuple root {root} and leaves {leaves} must be disjoint"
            )));
        }
        Ok(StarTuple { root, leaves })
    }

    pub fn root(&self) -> VarSet {
        self.root
    }

    pub fn leaves(&self) -> VarSet {
        self.leaves
    }

    /// Size of the covered sets.
    pub fn degree(&self) -> usize {
        self.root.len() + 1
    }

    pub fn covered_sets(&self) -> impl Iterator<Item = VarSet> + '_ {
        let root = self.root;
        self.leaves.iter().map(move |j| root.with(j))
    }
}

/// An ordered list of star-tuple groups, nonincreasing in degree, covering a
/// family of target sets; each target is covered by exactly one group.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverPlan {
    v: usize,
    groups: Vec<StarTuple>,
}

impl CoverPlan {
    pub fn new(v: usize, groups: Vec<StarTuple>) -> Result<CoverPlan> {
        let mut prev_degree = usize::MAX;
        for g in &groups {
            let members = g.root.union(g.leaves);
            if !members.fits_within(v) {
                return Err(Error::IndexOutOfRange {
                    index: members.max_index().unwrap_or(0),
                    v,
                });
            }
            if g.degree() > prev_degree {
                return Err(Error::InvalidArgument(
                    "cover plan groups must be ordered by nonincreasing degree".into(),
                ));
            }
            prev_degree = g.degree();
        }
        Ok(CoverPlan { v, groups })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn groups(&self) -> &[StarTuple] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// All sets covered by some group.
    pub fn covered_sets(&self) -> impl Iterator<Item = VarSet> + '_ {
        self.groups.iter().flat_map(|g| g.covered_sets())
    }
}

/// Chooses roots one level below the layer and assigns each covered set to the
/// smallest chosen root inside it, dropping roots left without assignments.
fn assign_leaves(targets: &[VarSet], roots: &[VarSet]) -> Vec<StarTuple> {
    let mut sorted_roots = roots.to_vec();
    sorted_roots.sort();
    let mut leaves: BTreeMap<VarSet, VarSet> = BTreeMap::new();
    for &t in targets {
        let root = sorted_roots
            .iter()
            .copied()
            .find(|r| r.is_subset_of(t))
            .expect("roots must cover every target");
        let leaf = t.difference(root).min_index().expect("root one level down");
        leaves.entry(root).or_insert(VarSet::EMPTY);
        let entry = leaves.get_mut(&root).unwrap();
        *entry = entry.with(leaf);
    }
    leaves
        .into_iter()
        .map(|(root, leaves)| StarTuple { root, leaves })
        .collect()
}

/// Greedy set cover of `targets` by (j-1)-subsets, deterministic tie-breaking
/// by smallest root.
fn greedy_roots(v: usize, j: usize, targets: &[VarSet]) -> Result<Vec<VarSet>> {
    let candidates = layer(v, j - 1)?;
    let mut remaining: Vec<VarSet> = targets.to_vec();
    let mut chosen = Vec::new();
    while !remaining.is_empty() {
        let mut best_root = None;
        let mut best_gain = 0usize;
        for &root in &candidates {
            let gain = remaining.iter().filter(|t| root.is_subset_of(**t)).count();
            if gain > best_gain {
                best_gain = gain;
                best_root = Some(root);
            }
        }
        let root = best_root.expect("every set has a subset one level down");
        remaining.retain(|t| !root.is_subset_of(*t));
        chosen.push(root);
    }
    Ok(chosen)
}

/// A concrete star-tuple cover of the layer of j-subsets: the best of the
/// special-case constructions, the fixed-point-avoiding construction behind
/// the simple bound, and greedy set cover.
pub fn greedy_layer_cover(v: usize, j: usize) -> Result<Vec<StarTuple>> {
    if j < 2 || j > v {
        return Err(Error::LayerOutOfRange { j, v });
    }
    let targets = layer(v, j)?;
    let mut candidates: Vec<Vec<VarSet>> = Vec::new();
    if j == 2 {
        candidates.push((0..v - 1).map(|i| VarSet::singleton(i).unwrap()).collect());
    }
    if j == v {
        candidates.push(vec![VarSet::full(v)?.without(v - 1)]);
    }
    if j + 1 == v {
        // Pair up the elements; the root omitting a pair covers the two
        // (v-1)-sets omitting either element of the pair.
        let full = VarSet::full(v)?;
        let mut roots = Vec::new();
        let mut i = 0;
        while i + 1 < v {
            roots.push(full.without(i).without(i + 1));
            i += 2;
        }
        if v % 2 == 1 {
            roots.push(full.without(v - 2).without(v - 1));
        }
        candidates.push(roots);
    }
    // Simple-bound construction: all (j-1)-subsets avoiding index 0.
    candidates.push(
        layer(v, j - 1)?
            .into_iter()
            .filter(|r| !r.contains(0))
            .collect(),
    );
    candidates.push(greedy_roots(v, j, &targets)?);

    let roots = candidates
        .into_iter()
        .min_by_key(|c| c.len())
        .expect("at least two candidates");
    Ok(assign_leaves(&targets, &roots))
}

/// Per-layer bound used by the aggregated tables: the closed-form/minimum
/// combination, optionally replaced by the exact search result when it
/// finishes within budget.
pub fn layer_bound(v: usize, j: usize, use_oracle: bool, node_budget: u64) -> Result<BoundValue> {
    let formula = covering_number_bound(v, j)?;
    if use_oracle && v <= 9 {
        if let Some(exact) = exact_covering_number(v, v - j + 1, v - j, node_budget)? {
            return Ok(exact);
        }
    }
    Ok(formula)
}

/// Hidden-unit upper bound `U(v, k) = Σ_{j=2}^k D(v, j)` for approximating
/// every k-interaction energy.
pub fn u_bound(v: usize, k: usize, use_oracle: bool) -> Result<u64> {
    if k < 1 || k > v {
        return Err(Error::LayerOutOfRange { j: k, v });
    }
    let mut total = 0u64;
    for j in 2..=k {
        total += layer_bound(v, j, use_oracle, DEFAULT_NODE_BUDGET)?.value;
    }
    Ok(total)
}

/// Hidden units needed when pairwise visible interactions are already present:
/// `Σ_{j=3}^k D(v, j)`.
pub fn pairwise_hidden_count(v: usize, k: usize) -> Result<u64> {
    if k < 2 || k > v {
        return Err(Error::LayerOutOfRange { j: k, v });
    }
    let mut total = 0u64;
    for j in 3..=k {
        total += covering_number_bound(v, j)?.value;
    }
    Ok(total)
}

/// Parameter-counting lower bound `⌈2^v/(v+1) - 1⌉` on the number of hidden
/// units of any universal approximator.
pub fn param_lower_bound(v: usize) -> u64 {
    debug_assert!((1..=63).contains(&v));
    (((1u128 << v) - 1) / (v as u128 + 1)) as u64
}

/// Builds the ordered star-tuple plan covering every interaction set of size
/// >= 2 in `complex` that is not already representable through
/// > `visible_complex`.
pub fn make_cover_plan(
    complex: &SimplicialComplex,
    visible_complex: &SimplicialComplex,
) -> Result<CoverPlan> {
    if complex.v() != visible_complex.v() {
        return Err(Error::VariableCountMismatch {
            left: complex.v(),
            right: visible_complex.v(),
        });
    }
    let v = complex.v();
    let mut groups = Vec::new();
    let max_size = complex.max_set_size();
    for j in (2..=max_size).rev() {
        let targets: Vec<VarSet> = complex
            .sets_of_size(j)
            .filter(|s| !visible_complex.contains(*s))
            .collect();
        if targets.is_empty() {
            continue;
        }
        let tuples = if targets.len() as u64 == binomial(v, j) {
            greedy_layer_cover(v, j)?
        } else {
            let roots = greedy_roots(v, j, &targets)?;
            assign_leaves(&targets, &roots)
        };
        groups.extend(tuples);
    }
    CoverPlan::new(v, groups)
}

/// One row of the bounds table.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsRow {
    pub v: usize,
    pub k: usize,
    pub u_bound: u64,
    pub method_summary: String,
    pub prev_bound: u64,
    pub param_lower_bound: u64,
}

pub const BOUNDS_CSV_HEADER: &str = "v,k,u_bound,method_summary,prev_bound,param_lower_bound";

impl BoundsRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.v, self.k, self.u_bound, self.method_summary, self.prev_bound, self.param_lower_bound
        )
    }
}

/// Full bounds table for `2 <= k <= v <= v_max`, one row per (v, k).
///
/// With `use_oracle`, cells with `v <= 9` are tightened by the exact search
/// where it completes within `node_budget`.
pub fn emit_tables(v_max: usize, use_oracle: bool, node_budget: u64) -> Result<Vec<BoundsRow>> {
    if !(2..=40).contains(&v_max) {
        return Err(Error::InvalidArgument(format!(
            "bounds tables cover 2 <= v_max <= 40, got {v_max}"
        )));
    }
    let mut rows = Vec::new();
    for v in 2..=v_max {
        // Per-layer bounds are shared by every k-cell of this v.
        let mut layer_bounds = Vec::new();
        for j in 2..=v {
            layer_bounds.push(layer_bound(v, j, use_oracle, node_budget)?);
        }
        let prev_bound = (1u64 << (v - 1)) - 1;
        let lower = param_lower_bound(v);
        for k in 2..=v {
            let mut total = 0u64;
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for bound in &layer_bounds[..k - 1] {
                total += bound.value;
                *counts.entry(bound.method.to_string()).or_insert(0) += 1;
            }
            let method_summary = counts
                .into_iter()
                .map(|(m, n)| format!("{m}:{n}"))
                .collect::<Vec<_>>()
                .join("+");
            rows.push(BoundsRow {
                v,
                k,
                u_bound: total,
                method_summary,
                prev_bound,
                param_lower_bound: lower,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(indices: &[usize]) -> VarSet {
        VarSet::from_indices(indices.iter().copied()).unwrap()
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(14, 7), 3432);
        assert_eq!(binomial(40, 20), 137846528820);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn exact_rows() {
        assert_eq!(covering_number_bound(5, 4).unwrap().value, 3);
        assert_eq!(
            covering_number_bound(5, 4).unwrap().method,
            BoundMethod::ExactFormula
        );
        for v in 1..=12 {
            assert_eq!(covering_number_bound(v, 1).unwrap().value, 1);
            assert_eq!(covering_number_bound(v, v).unwrap().value, 1);
        }
        // Nested-ceiling row for the 3-set layer.
        assert_eq!(covering_number_bound(6, 3).unwrap().value, 6);
        assert_eq!(covering_number_bound(7, 3).unwrap().value, 9);
        assert_eq!(covering_number_bound(9, 3).unwrap().value, 16);
        assert!(covering_number_bound(5, 0).is_err());
        assert!(covering_number_bound(5, 6).is_err());
    }

    #[test]
    fn bound_never_exceeds_simple() {
        for v in 2..=14 {
            for j in 1..=v {
                let bound = covering_number_bound(v, j).unwrap().value;
                assert!(
                    bound <= simple_bound(v, j),
                    "D({v},{j}) bound {bound} exceeds simple bound {}",
                    simple_bound(v, j)
                );
            }
        }
    }

    #[test]
    fn exact_search_small_cases() {
        // Three triples cover all six pairs of a 4-set; two cannot.
        let result = exact_covering_number(4, 3, 2, 1_000_000).unwrap().unwrap();
        assert_eq!(result.value, 3);
        assert_eq!(result.method, BoundMethod::ExactSearch);
        // The full set covers everything by itself.
        for v in 2..=7 {
            assert_eq!(
                exact_covering_number(v, v, v - 1, 1_000_000)
                    .unwrap()
                    .unwrap()
                    .value,
                1
            );
        }
        // Fano-plane instance.
        assert_eq!(
            exact_covering_number(7, 3, 2, 10_000_000)
                .unwrap()
                .unwrap()
                .value,
            7
        );
        assert!(exact_covering_number(10, 4, 3, 100).is_err());
        assert!(exact_covering_number(6, 4, 2, 100).is_err());
        assert!(exact_covering_number(6, 4, 3, 0).is_err());
    }

    #[test]
    fn exact_search_budget_exhaustion() {
        assert_eq!(exact_covering_number(7, 4, 3, 10).unwrap(), None);
    }

    #[test]
    fn exact_matches_formula_rows_small() {
        for v in 2..=7usize {
            for j in 1..=v {
                let formula = covering_number_bound(v, j).unwrap();
                if formula.method != BoundMethod::ExactFormula {
                    continue;
                }
                let exact = exact_covering_number(v, v - j + 1, v - j, 20_000_000)
                    .unwrap()
                    .expect("search should finish");
                assert_eq!(
                    exact.value, formula.value,
                    "exact C({v},{},{}) disagrees with formula D({v},{j})",
                    v - j + 1,
                    v - j
                );
            }
        }
    }

    #[test]
    fn oracle_consistency_bounds() {
        // Exact values never exceed any upper bound and respect the counting
        // lower bound.
        for v in 2..=7usize {
            for j in 1..=v {
                let Some(exact) = exact_covering_number(v, v - j + 1, v - j, 20_000_000).unwrap()
                else {
                    continue;
                };
                let upper = covering_number_bound(v, j).unwrap().value;
                assert!(exact.value <= upper);
                let counting = binomial(v, v - j).div_ceil((v - j + 1) as u64);
                assert!(exact.value >= counting);
            }
        }
    }

    #[test]
    fn layer_cover_examples() {
        let cover = greedy_layer_cover(4, 2).unwrap();
        let roots: Vec<VarSet> = cover.iter().map(|t| t.root()).collect();
        assert_eq!(roots, vec![set(&[0]), set(&[1]), set(&[2])]);

        let cover = greedy_layer_cover(3, 3).unwrap();
        assert_eq!(cover.len(), 1);
        assert_eq!(cover[0].root().len(), 2);

        let cover = greedy_layer_cover(6, 5).unwrap();
        assert!(cover.len() <= 3);
        assert!(greedy_layer_cover(4, 1).is_err());
    }

    #[test]
    fn layer_covers_are_valid_partitions() {
        for v in 2..=8usize {
            for j in 2..=v {
                let cover = greedy_layer_cover(v, j).unwrap();
                let mut covered = BTreeSet::new();
                for tuple in &cover {
                    assert_eq!(tuple.degree(), j);
                    for s in tuple.covered_sets() {
                        assert!(covered.insert(s), "set {s} covered twice");
                    }
                }
                let expected: BTreeSet<VarSet> = layer(v, j).unwrap().into_iter().collect();
                assert_eq!(covered, expected, "layer ({v},{j}) not exactly covered");
                // Cover size never exceeds the simple bound.
                assert!(cover.len() as u64 <= simple_bound(v, j));
            }
        }
    }

    #[test]
    fn u_bound_reference_values() {
        assert_eq!(u_bound(4, 4, false).unwrap(), 6);
        assert_eq!(u_bound(5, 5, false).unwrap(), 12);
        assert_eq!(u_bound(6, 6, false).unwrap(), 21);
        assert_eq!(u_bound(9, 3, false).unwrap(), 24);
        assert_eq!(u_bound(4, 1, false).unwrap(), 0);
        assert!(u_bound(4, 5, false).is_err());
    }

    #[test]
    fn u_bound_monotone_in_k() {
        for v in 2..=12 {
            let mut prev = 0;
            for k in 1..=v {
                let bound = u_bound(v, k, false).unwrap();
                assert!(bound >= prev);
                prev = bound;
            }
        }
    }

    #[test]
    fn pairwise_hidden_examples() {
        assert_eq!(pairwise_hidden_count(4, 4).unwrap(), 3);
        assert_eq!(pairwise_hidden_count(6, 2).unwrap(), 0);
        assert_eq!(pairwise_hidden_count(5, 5).unwrap(), 8);
        assert!(pairwise_hidden_count(4, 1).is_err());
    }

    #[test]
    fn param_lower_bound_reference_values() {
        assert_eq!(param_lower_bound(2), 1);
        assert_eq!(param_lower_bound(4), 3);
        assert_eq!(param_lower_bound(10), 93);
        assert_eq!(param_lower_bound(20), 49932);
        assert_eq!(param_lower_bound(30), 34636833);
        assert_eq!(param_lower_bound(40), 26817356775);
    }

    #[test]
    fn cover_plan_full_power_set_of_three() {
        let complex = SimplicialComplex::downward_closure(3, &[set(&[0, 1, 2])]).unwrap();
        let visible = SimplicialComplex::singletons(3).unwrap();
        let plan = make_cover_plan(&complex, &visible).unwrap();
        assert_eq!(plan.len(), 3);
        let degrees: Vec<usize> = plan.groups().iter().map(|g| g.degree()).collect();
        assert_eq!(degrees, vec![3, 2, 2]);
    }

    #[test]
    fn cover_plan_no_three_way() {
        let complex = SimplicialComplex::downward_closure(
            3,
            &[set(&[0, 1]), set(&[0, 2]), set(&[1, 2])],
        )
        .unwrap();
        let visible = SimplicialComplex::singletons(3).unwrap();
        let plan = make_cover_plan(&complex, &visible).unwrap();
        assert_eq!(plan.len(), 2);
    }

    #[test]
    fn cover_plan_full_power_set_of_four() {
        let complex = SimplicialComplex::downward_closure(4, &[set(&[0, 1, 2, 3])]).unwrap();
        let visible = SimplicialComplex::singletons(4).unwrap();
        let plan = make_cover_plan(&complex, &visible).unwrap();
        assert_eq!(plan.len(), 6);
        let degrees: Vec<usize> = plan.groups().iter().map(|g| g.degree()).collect();
        assert_eq!(degrees, vec![4, 3, 3, 2, 2, 2]);
    }

    #[test]
    fn cover_plan_skips_visible_interactions() {
        // With all pairs visible, only the higher layers need units.
        let complex = SimplicialComplex::downward_closure(4, &[set(&[0, 1, 2, 3])]).unwrap();
        let visible = SimplicialComplex::downward_closure(
            4,
            &[set(&[0, 1]), set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3]), set(&[2, 3])],
        )
        .unwrap();
        let plan = make_cover_plan(&complex, &visible).unwrap();
        assert_eq!(plan.len() as u64, pairwise_hidden_count(4, 4).unwrap());
    }

    #[test]
    fn cover_plans_cover_their_targets() {
        for v in 2..=10usize {
            let full = VarSet::full(v).unwrap();
            let complex = SimplicialComplex::downward_closure(v, &[full]).unwrap();
            let visible = SimplicialComplex::singletons(v).unwrap();
            let plan = make_cover_plan(&complex, &visible).unwrap();
            let covered: BTreeSet<VarSet> = plan.covered_sets().collect();
            let expected: BTreeSet<VarSet> =
                complex.iter().filter(|s| s.len() >= 2).collect();
            assert_eq!(covered, expected, "v={v} plan misses targets");
            // Degree-descending ordering, with covered sets appearing exactly
            // once, keeps already-finalized coefficients untouched: later
            // groups only write to their own covered sets and their roots,
            // and no later root equals an earlier covered set.
            let mut seen: BTreeSet<VarSet> = BTreeSet::new();
            for g in plan.groups() {
                assert!(!seen.contains(&g.root()));
                for s in g.covered_sets() {
                    seen.insert(s);
                }
            }
        }
    }

    #[test]
    fn bounds_table_rows() {
        let rows = emit_tables(6, false, 1000).unwrap();
        let row = rows.iter().find(|r| r.v == 4 && r.k == 4).unwrap();
        assert_eq!(
            (row.u_bound, row.prev_bound, row.param_lower_bound),
            (6, 7, 3)
        );
        let row = rows.iter().find(|r| r.v == 2 && r.k == 2).unwrap();
        assert_eq!(
            (row.u_bound, row.prev_bound, row.param_lower_bound),
            (1, 1, 1)
        );
        // Pairwise row grows linearly.
        for v in 2..=6 {
            let row = rows.iter().find(|r| r.v == v && r.k == 2).unwrap();
            assert_eq!(row.u_bound, v as u64 - 1);
        }
        assert!(emit_tables(41, false, 1000).is_err());
        assert!(emit_tables(1, false, 1000).is_err());
    }

    #[test]
    fn bounds_csv_shape() {
        let rows = emit_tables(3, false, 1000).unwrap();
        assert_eq!(BOUNDS_CSV_HEADER.split(',').count(), 6);
        for row in rows {
            let line = row.to_csv();
            assert_eq!(line.split(',').count(), 6, "unexpected comma in {line}");
        }
    }
}
