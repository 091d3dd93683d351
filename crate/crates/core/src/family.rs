//! Structural analysis of the set family: closure checks, the projected
//! delta patterns, properness, and per-pattern fiber decompositions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexset::IndexSet;
use crate::instance::{enumerate_masks, Inequality, Instance, Sense, DEFAULT_ENUM_GUARD};
use crate::rat::rat;

/// A realizable delta pattern: one element of the projection of the feasible
/// set onto the delta coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct DeltaPattern {
    bits: Vec<bool>,
}

impl DeltaPattern {
    pub fn new(bits: Vec<bool>) -> DeltaPattern {
        DeltaPattern { bits }
    }

    pub fn from_01(vals: &[u8]) -> Result<DeltaPattern> {
        let bits = vals
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::parse(format!("pattern entry {other} is not 0/1"))),
            })
            .collect::<Result<_>>()?;
        Ok(DeltaPattern { bits })
    }

    pub fn from_mask(mask: u64, m: usize) -> DeltaPattern {
        DeltaPattern {
            bits: (0..m).map(|i| mask & (1 << i) != 0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Indices `i` with `delta_i = 1`.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    /// Indices `i` with `delta_i = 0`.
    pub fn zeros(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (!b).then_some(i))
    }
}

impl Serialize for DeltaPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<u8> = self.bits.iter().map(|&b| b as u8).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeltaPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<u8> = Vec::deserialize(d)?;
        DeltaPattern::from_01(&v).map_err(serde::de::Error::custom)
    }
}

/// The fiber data of a pattern: fixed coordinates `J_0`, the minimal
/// zero-set indices `I*`, and their disjoint hitting blocks `J_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub pattern: DeltaPattern,
    /// 0-based indices of minimal sets among the zero-pattern members.
    pub i_star: Vec<usize>,
    /// Union of the one-pattern members; all fixed to zero on the fiber.
    pub j0: IndexSet,
    /// Block `J_i = S_i \ J_0` for each `i` in `i_star`, ascending by `i`.
    pub blocks: Vec<(usize, IndexSet)>,
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use std::collections::BTreeMap;
        #[derive(Serialize)]
        struct Out {
            pattern: Vec<u8>,
            i_star: Vec<usize>,
            j0: Vec<usize>,
            blocks: BTreeMap<usize, Vec<usize>>,
        }
        Out {
            pattern: self.pattern.bits().iter().map(|&b| b as u8).collect(),
            i_star: self.i_star.iter().map(|&i| i + 1).collect(),
            j0: self.j0.to_vec_1based(),
            blocks: self
                .blocks
                .iter()
                .map(|(i, b)| (i + 1, b.to_vec_1based()))
                .collect(),
        }
        .serialize(s)
    }
}

/// Outcome of the properness check.
#[derive(Clone, Debug, Serialize)]
pub struct ProperReport {
    pub is_proper: bool,
    /// Number of realizable delta patterns.
    pub delta_count: usize,
    pub closed_intersection: bool,
    /// Number of affinely independent patterns (rank of the homogenized
    /// pattern matrix).
    pub affine_rank: usize,
    /// Offending pair (1-based) when the intersection closure fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

/// Checks closure under nonempty intersection; the witness is the first
/// offending pair (0-based set indices).
pub fn is_closed_under_intersection(inst: &Instance) -> (bool, Option<(usize, usize)>) {
    let sets = inst.sets();
    for i in 0..sets.len() {
        for k in i + 1..sets.len() {
            let inter = sets[i].intersect(&sets[k]);
            if inter.is_empty() {
                continue;
            }
            if !sets.iter().any(|s| *s == inter) {
                return (false, Some((i, k)));
            }
        }
    }
    (true, None)
}

/// Checks closure under union; the witness is the first offending pair.
pub fn is_closed_under_union(inst: &Instance) -> (bool, Option<(usize, usize)>) {
    let sets = inst.sets();
    for i in 0..sets.len() {
        for k in i + 1..sets.len() {
            let un = sets[i].union(&sets[k]);
            if !sets.iter().any(|s| *s == un) {
                return (false, Some((i, k)));
            }
        }
    }
    (true, None)
}

/// All realizable delta patterns in canonical order.
///
/// Canonical order is ascending lexicographic over the bit tuple
/// `(delta_1, ..., delta_m)` with `0 < 1`; for a nested family this is the
/// staircase sequence starting from the all-zeros pattern.
pub fn compute_delta_set(inst: &Instance) -> Result<Vec<DeltaPattern>> {
    compute_delta_set_with_guard(inst, DEFAULT_ENUM_GUARD)
}

pub fn compute_delta_set_with_guard(inst: &Instance, guard: usize) -> Result<Vec<DeltaPattern>> {
    let masks = enumerate_masks(inst, guard)?;
    let mut seen: Vec<u64> = masks.iter().map(|&(_, d)| d).collect();
    seen.sort_unstable();
    seen.dedup();
    let mut patterns: Vec<DeltaPattern> = seen
        .into_iter()
        .map(|d| DeltaPattern::from_mask(d, inst.m()))
        .collect();
    patterns.sort();
    Ok(patterns)
}

/// Number of affinely independent vectors among the patterns: the rank of
/// the matrix with rows `[1, pattern]`, computed exactly.
pub fn pattern_affine_rank(patterns: &[DeltaPattern]) -> usize {
    let rows: Vec<Vec<i128>> = patterns
        .iter()
        .map(|p| {
            let mut row = Vec::with_capacity(p.len() + 1);
            row.push(1i128);
            row.extend(p.bits().iter().map(|&b| b as i128));
            row
        })
        .collect();
    crate::oracle::integer_matrix_rank(rows)
}

/// Properness check: exactly `m + 1` affinely independent patterns and
/// closure under nonempty intersection.
pub fn is_proper(inst: &Instance) -> Result<ProperReport> {
    is_proper_with_guard(inst, DEFAULT_ENUM_GUARD)
}

pub fn is_proper_with_guard(inst: &Instance, guard: usize) -> Result<ProperReport> {
    let (closed, witness) = is_closed_under_intersection(inst);
    let patterns = compute_delta_set_with_guard(inst, guard)?;
    let affine_rank = pattern_affine_rank(&patterns);
    let m = inst.m();
    let is_proper = closed && patterns.len() == m + 1 && affine_rank == m + 1;
    Ok(ProperReport {
        is_proper,
        delta_count: patterns.len(),
        closed_intersection: closed,
        affine_rank,
        witness: witness.map(|(i, k)| (i + 1, k + 1)),
    })
}

/// Realizability of a pattern, decided directly from the fiber structure
/// (no enumeration): every zero-pattern set keeps an unfixed member, the
/// minimal blocks fit under `u`, and the unfixed ground set can reach `l`.
fn pattern_is_realizable(inst: &Instance, d: &Decomposition) -> bool {
    for i in d.pattern.zeros() {
        if inst.set(i).is_subset_of(&d.j0) {
            return false;
        }
    }
    if d.i_star.len() > inst.u() {
        return false;
    }
    inst.n() - d.j0.card() >= inst.l()
}

/// Fiber decomposition of a realizable pattern for a family closed under
/// nonempty intersection.
pub fn decompose(inst: &Instance, pattern: &DeltaPattern) -> Result<Decomposition> {
    if pattern.len() != inst.m() {
        return Err(Error::domain(format!(
            "pattern length {} does not match m = {}",
            pattern.len(),
            inst.m()
        )));
    }
    let (closed, witness) = is_closed_under_intersection(inst);
    if !closed {
        let (i, k) = witness.unwrap();
        return Err(Error::domain(format!(
            "family is not closed under nonempty intersection (sets {} and {})",
            i + 1,
            k + 1
        )));
    }
    let mut j0 = IndexSet::new();
    for i in pattern.ones() {
        j0 = j0.union(inst.set(i));
    }
    let zero_indices: Vec<usize> = pattern.zeros().collect();
    // minimal elements (by inclusion) of the zero-pattern sets
    let mut i_star = Vec::new();
    'outer: for &i in &zero_indices {
        for &k in &zero_indices {
            if k != i && inst.set(k).is_subset_of(inst.set(i)) && inst.set(k) != inst.set(i) {
                continue 'outer;
            }
        }
        i_star.push(i);
    }
    let blocks: Vec<(usize, IndexSet)> = i_star
        .iter()
        .map(|&i| (i, inst.set(i).minus(&j0)))
        .collect();
    let d = Decomposition {
        pattern: pattern.clone(),
        i_star,
        j0,
        blocks,
    };
    if !pattern_is_realizable(inst, &d) {
        return Err(Error::domain(format!(
            "pattern {:?} is not realizable for this instance",
            pattern.bits().iter().map(|&b| b as u8).collect::<Vec<_>>()
        )));
    }
    // Lemma-level guarantee under the closure check; a violation here means
    // an internal bug rather than bad input.
    for (a, (_, ba)) in d.blocks.iter().enumerate() {
        if ba.is_empty() {
            return Err(Error::internal("empty fiber block"));
        }
        if !ba.is_disjoint_from(&d.j0) {
            return Err(Error::internal("fiber block meets the fixed set"));
        }
        for (_, bb) in d.blocks.iter().skip(a + 1) {
            if !ba.is_disjoint_from(bb) {
                return Err(Error::internal("fiber blocks overlap"));
            }
        }
    }
    Ok(d)
}

/// The exact hull of one fiber, over the z-coordinates only: fixings on
/// `J_0`, one covering row per minimal block, the cardinality window, and
/// the unit box.  The constraint matrix is totally unimodular, so the system
/// is integral.
pub fn fiber_hull_inequalities(inst: &Instance, pattern: &DeltaPattern) -> Result<Vec<Inequality>> {
    let d = decompose(inst, pattern)?;
    let mut rows = Vec::new();
    for j in d.j0.iter() {
        rows.push(Inequality::new(
            [(j, rat(1))],
            [],
            rat(0),
            Sense::Eq,
            format!("fiber-fix(j={})", j + 1),
        ));
    }
    for (i, block) in &d.blocks {
        rows.push(Inequality::new(
            block.iter().map(|j| (j, rat(1))),
            [],
            rat(1),
            Sense::Ge,
            format!("fiber-hit(i={})", i + 1),
        ));
    }
    let all = (0..inst.n()).map(|j| (j, rat(1)));
    rows.push(Inequality::new(
        all.clone(),
        [],
        rat(inst.l() as i64),
        Sense::Ge,
        "fiber-card-lo",
    ));
    rows.push(Inequality::new(
        all,
        [],
        rat(inst.u() as i64),
        Sense::Le,
        "fiber-card-up",
    ));
    for j in 0..inst.n() {
        rows.push(Inequality::new(
            [(j, rat(1))],
            [],
            rat(0),
            Sense::Ge,
            format!("fiber-z-lb(j={})", j + 1),
        ));
        rows.push(Inequality::new(
            [(j, rat(1))],
            [],
            rat(1),
            Sense::Le,
            format!("fiber-z-ub(j={})", j + 1),
        ));
    }
    Ok(rows)
}

/// Largest pairwise-incomparable subfamily, by brute force over subsets of
/// the family (the only known route; used to decide when the cardinality
/// window leaves the pattern set unrestricted).
pub fn max_antichain_size(inst: &Instance) -> Result<usize> {
    let m = inst.m();
    if m > 20 {
        return Err(Error::Guard { n: m, limit: 20 });
    }
    let sets = inst.sets();
    let mut best = 0usize;
    for mask in 1u32..(1u32 << m) {
        let idx: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let antichain = idx.iter().enumerate().all(|(a, &i)| {
            idx.iter()
                .skip(a + 1)
                .all(|&k| !sets[i].is_subset_of(&sets[k]) && !sets[k].is_subset_of(&sets[i]))
        });
        if antichain {
            best = best.max(idx.len());
        }
    }
    Ok(best)
}

/// Sufficient condition for the pattern set to equal its unconstrained
/// counterpart: `l` leaves the family union free and `u` covers the largest
/// antichain.
pub fn bounds_leave_delta_unrestricted(inst: &Instance) -> Result<bool> {
    let union = inst.family_union();
    Ok(inst.l() + union.card() <= inst.n() && inst.u() >= max_antichain_size(inst)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{enumerate_points, lift_point, Instance};

    fn inst_a() -> Instance {
        Instance::new(5, 1, 3, &[vec![1, 2], vec![1, 2, 3]]).unwrap()
    }

    fn inst_b() -> Instance {
        Instance::new(5, 0, 3, &[vec![1, 2], vec![3, 4], vec![1, 2, 3, 4]]).unwrap()
    }

    /// Intersecting incomparable pair closed up: {2}, {1,2}, {2,3}, {1,2,3}.
    fn inst_c() -> Instance {
        Instance::new(5, 1, 3, &[vec![2], vec![1, 2], vec![2, 3], vec![1, 2, 3]]).unwrap()
    }

    fn pat(bits: &[u8]) -> DeltaPattern {
        DeltaPattern::from_01(bits).unwrap()
    }

    #[test]
    fn closure_checks() {
        assert_eq!(is_closed_under_intersection(&inst_a()), (true, None));
        assert_eq!(is_closed_under_intersection(&inst_b()), (true, None));
        let bad = Instance::new(3, 0, 3, &[vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(is_closed_under_intersection(&bad), (false, Some((0, 1))));

        assert_eq!(is_closed_under_union(&inst_b()), (true, None));
        let two = Instance::new(3, 0, 3, &[vec![1], vec![2]]).unwrap();
        assert_eq!(is_closed_under_union(&two), (false, Some((0, 1))));
        assert_eq!(is_closed_under_union(&inst_c()), (true, None));
    }

    #[test]
    fn delta_sets_in_canonical_order() {
        let d = compute_delta_set(&inst_a()).unwrap();
        assert_eq!(d, vec![pat(&[0, 0]), pat(&[1, 0]), pat(&[1, 1])]);

        let d = compute_delta_set(&inst_b()).unwrap();
        assert_eq!(
            d,
            vec![
                pat(&[0, 0, 0]),
                pat(&[0, 1, 0]),
                pat(&[1, 0, 0]),
                pat(&[1, 1, 1])
            ]
        );

        let forced = Instance::new(2, 2, 2, &[vec![1]]).unwrap();
        assert_eq!(compute_delta_set(&forced).unwrap(), vec![pat(&[0])]);
    }

    #[test]
    fn nested_patterns_are_the_monotone_staircase() {
        // closed form for nested families with u >= 2, l <= n - |S_m|
        for (n, l, u, sets) in [
            (5usize, 1usize, 3usize, vec![vec![1, 2], vec![1, 2, 3]]),
            (6, 0, 2, vec![vec![2, 3], vec![2, 3, 5], vec![1, 2, 3, 5]]),
        ] {
            let inst = Instance::new(n, l, u, &sets).unwrap();
            let m = inst.m();
            let d = compute_delta_set(&inst).unwrap();
            assert_eq!(d.len(), m + 1);
            for (k, p) in d.iter().enumerate() {
                let expect: Vec<bool> = (0..m).map(|i| i < k).collect();
                assert_eq!(p.bits(), &expect[..], "pattern {k}");
            }
        }
    }

    #[test]
    fn properness_reports() {
        let r = is_proper(&inst_a()).unwrap();
        assert!(r.is_proper);
        assert_eq!(r.delta_count, 3);
        assert_eq!(r.affine_rank, 3);

        let r = is_proper(&inst_b()).unwrap();
        assert!(r.is_proper);
        assert_eq!(r.delta_count, 4);

        let r = is_proper(&inst_c()).unwrap();
        assert!(r.is_proper);
        assert_eq!(r.delta_count, 5);

        let bad = Instance::new(3, 0, 3, &[vec![1, 2], vec![2, 3]]).unwrap();
        let r = is_proper(&bad).unwrap();
        assert!(!r.is_proper);
        assert!(!r.closed_intersection);
        assert_eq!(r.witness, Some((1, 2)));
    }

    #[test]
    fn decompose_tables() {
        let a = inst_a();
        let d = decompose(&a, &pat(&[0, 0])).unwrap();
        assert!(d.j0.is_empty());
        assert_eq!(d.i_star, vec![0]);
        assert_eq!(d.blocks[0].1, *a.set(0));

        let d = decompose(&a, &pat(&[1, 0])).unwrap();
        assert_eq!(d.j0, *a.set(0));
        assert_eq!(d.i_star, vec![1]);
        assert_eq!(d.blocks[0].1.to_vec_1based(), vec![3]);

        let d = decompose(&a, &pat(&[1, 1])).unwrap();
        assert_eq!(d.j0, *a.set(1));
        assert!(d.i_star.is_empty());

        let b = inst_b();
        let d = decompose(&b, &pat(&[1, 0, 0])).unwrap();
        assert_eq!(d.j0.to_vec_1based(), vec![1, 2]);
        assert_eq!(d.i_star, vec![1]);
        assert_eq!(d.blocks[0].1.to_vec_1based(), vec![3, 4]);

        // two incomparable minimal sets
        let d = decompose(&b, &pat(&[0, 0, 0])).unwrap();
        assert_eq!(d.i_star, vec![0, 1]);
    }

    #[test]
    fn decompose_rejects_bad_inputs() {
        let a = inst_a();
        // (0,1) is not realizable: S_1 subset of S_2 forces monotone deltas
        assert!(decompose(&a, &pat(&[0, 1])).is_err());
        assert!(decompose(&a, &pat(&[0])).is_err());
        let bad = Instance::new(3, 0, 3, &[vec![1, 2], vec![2, 3]]).unwrap();
        let err = decompose(&bad, &pat(&[0, 0])).unwrap_err();
        assert!(err.to_string().contains("not closed"), "{err}");
    }

    #[test]
    fn realizability_matches_enumeration() {
        for inst in [inst_a(), inst_b(), inst_c()] {
            let real = compute_delta_set(&inst).unwrap();
            for mask in 0u64..(1 << inst.m()) {
                let p = DeltaPattern::from_mask(mask, inst.m());
                let in_delta = real.contains(&p);
                assert_eq!(
                    decompose(&inst, &p).is_ok(),
                    in_delta,
                    "pattern {mask:b} on {inst:?}"
                );
            }
        }
    }

    #[test]
    fn fiber_hull_examples() {
        let a = inst_a();
        let rows = fiber_hull_inequalities(&a, &pat(&[1, 0])).unwrap();
        let tags: Vec<&str> = rows.iter().map(|r| r.tag.as_str()).collect();
        assert!(tags.contains(&"fiber-fix(j=1)"));
        assert!(tags.contains(&"fiber-fix(j=2)"));
        assert!(tags.contains(&"fiber-hit(i=2)"));
        assert!(tags.contains(&"fiber-card-lo"));
        let hit = rows.iter().find(|r| r.tag == "fiber-hit(i=2)").unwrap();
        assert_eq!(hit.alpha.len(), 1);
        assert!(hit.alpha.contains_key(&2));
    }

    #[test]
    fn fiber_points_satisfy_their_hull() {
        for inst in [inst_a(), inst_b(), inst_c()] {
            for p in compute_delta_set(&inst).unwrap() {
                let rows = fiber_hull_inequalities(&inst, &p).unwrap();
                for point in enumerate_points(&inst).unwrap() {
                    let matches = point
                        .delta
                        .iter()
                        .zip(p.bits())
                        .all(|(v, &b)| (b && v == &rat(1)) || (!b && v == &rat(0)));
                    if !matches {
                        continue;
                    }
                    for row in &rows {
                        assert!(row.is_satisfied_by(&point), "{row:?} at {point:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn blocks_disjoint_for_all_patterns() {
        for inst in [inst_a(), inst_b(), inst_c()] {
            for p in compute_delta_set(&inst).unwrap() {
                let d = decompose(&inst, &p).unwrap();
                for (a, (_, ba)) in d.blocks.iter().enumerate() {
                    assert!(ba.is_disjoint_from(&d.j0));
                    for (_, bb) in d.blocks.iter().skip(a + 1) {
                        assert!(ba.is_disjoint_from(bb));
                    }
                }
            }
        }
    }

    #[test]
    fn antichain_condition() {
        // nested chain: antichain size 1
        assert_eq!(max_antichain_size(&inst_a()).unwrap(), 1);
        // disjoint pair plus union: the pair is an antichain
        assert_eq!(max_antichain_size(&inst_b()).unwrap(), 2);
        assert!(bounds_leave_delta_unrestricted(&inst_b()).unwrap());
        // l too large for the free part
        let tight = Instance::new(3, 1, 2, &[vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert!(!bounds_leave_delta_unrestricted(&tight).unwrap());
    }

    #[test]
    fn proper_via_union_closure_condition() {
        // closed under union + nonempty intersection + unrestricted pattern
        // set implies properness
        for inst in [inst_b(), inst_c()] {
            let (cu, _) = is_closed_under_union(&inst);
            let (ci, _) = is_closed_under_intersection(&inst);
            assert!(cu && ci);
            if bounds_leave_delta_unrestricted(&inst).unwrap() {
                assert!(is_proper(&inst).unwrap().is_proper);
            }
        }
    }

    #[test]
    fn lifted_points_project_to_patterns() {
        let a = inst_a();
        let u = crate::indexset::IndexSet::from_1based(&[3], 5).unwrap();
        let p = lift_point(&a, &u).unwrap();
        let bits: Vec<bool> = p.delta.iter().map(|v| v == &rat(1)).collect();
        let dp = DeltaPattern::new(bits);
        assert!(compute_delta_set(&a).unwrap().contains(&dp));
    }
}
