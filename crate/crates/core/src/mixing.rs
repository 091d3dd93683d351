//! Mixing-derived inequalities for nested families, facet predicates, and
//! the degenerate-regime hull descriptions.
//!
//! The two exponential families generated here are, for a nested chain
//! `S_1 c S_2 c ... c S_m` and any `S' ⊆ J`:
//!
//! * upper:  `sum_{j in S'} z_j + (u - |S'\S_p|) d_p
//!            + sum_{i>p} (|S'\S_{i-1}| - |S'\S_i|) d_i <= u`
//!            whenever `|S'\S_p| <= u - 1`;
//! * lower:  `sum_{j in S'} z_j >= (|S' u S_p| - n + l) d_p
//!            + sum_{i>p} (|S' u S_i| - |S' u S_{i-1}|) d_i`
//!            whenever `|S' u S_{p-1}| <= n - l < |S' u S_p|` (`S_0 = {}`).
//!
//! Together with the reduced formulation and the 2-link rows these give the
//! complete hull description in the non-degenerate nested regime.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indexset::IndexSet;
use crate::instance::{Inequality, Instance, Sense};
use crate::rat::{rat, Rat};
use num_traits::Zero;

/// A base system for type-I mixing: bounds `0 < b_1 < ... < b_k < 1` on the
/// rows `s + w_i >= b_i` with `s >= 0` continuous and `w` integer.
#[derive(Clone, Debug)]
pub struct MixingBaseSystem {
    b: Vec<Rat>,
}

impl MixingBaseSystem {
    pub fn new(b: Vec<Rat>) -> Result<MixingBaseSystem> {
        if b.is_empty() {
            return Err(Error::domain("mixing base system needs at least one bound"));
        }
        let one = rat(1);
        for (k, v) in b.iter().enumerate() {
            if *v <= Rat::zero() || *v >= one {
                return Err(Error::domain(format!(
                    "mixing bound b_{} = {} outside the open unit interval",
                    k + 1,
                    crate::rat::format_rat(v)
                )));
            }
            if k > 0 && b[k - 1] >= *v {
                return Err(Error::domain(format!(
                    "mixing bounds must be strictly increasing (b_{} >= b_{})",
                    k,
                    k + 1
                )));
            }
        }
        Ok(MixingBaseSystem { b })
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    pub fn bounds(&self) -> &[Rat] {
        &self.b
    }
}

/// Coefficients of the type-I mixing inequality
/// `s + b_1 w_1 + sum_{i=2}^k (b_i - b_{i-1}) w_i >= b_k`
/// as `(s_coeff = 1, w_coeffs, rhs)`.
pub fn type1_mixing(sys: &MixingBaseSystem) -> (Rat, Vec<Rat>, Rat) {
    let b = sys.bounds();
    let mut w = Vec::with_capacity(b.len());
    w.push(b[0].clone());
    for i in 1..b.len() {
        w.push(&b[i] - &b[i - 1]);
    }
    (rat(1), w, b.last().unwrap().clone())
}

fn require_nested(inst: &Instance, what: &str) -> Result<()> {
    if !inst.is_nested() {
        return Err(Error::domain(format!("{what} requires a nested family")));
    }
    Ok(())
}

/// Standing assumptions of the nested hull and facet analysis: `u >= 2`,
/// `l < u`, `l <= n - |S_m|`, and at least two members in the innermost
/// set.  Instances with `l = u` are rejected with a pointer to the
/// projection that removes one z-variable; the caller applies it.
pub fn require_nondegenerate_regime(inst: &Instance, what: &str) -> Result<()> {
    require_nested(inst, what)?;
    if inst.u() < 2 {
        return Err(Error::domain(format!(
            "{what} assumes u >= 2 (got u = {}); the degenerate hull applies instead",
            inst.u()
        )));
    }
    if inst.l() == inst.u() {
        return Err(Error::domain(format!(
            "{what} assumes l < u; with l = u one variable is determined by the rest, \
             so work in the projected space without z_n (substitute \
             z_n = u - sum of the other z_j) and re-run on the projected instance"
        )));
    }
    let sm = inst.set(inst.m() - 1).card();
    if inst.l() + sm > inst.n() {
        return Err(Error::domain(format!(
            "{what} assumes l <= n - |S_m| (got l = {}, n - |S_m| = {}); fix the forced-zero \
             deltas via the degenerate-regime reduction first",
            inst.l(),
            inst.n() as i64 - sm as i64
        )));
    }
    if inst.set(0).card() < 2 {
        return Err(Error::domain(format!(
            "{what} assumes the innermost set has at least two members (got |S_1| = {})",
            inst.set(0).card()
        )));
    }
    Ok(())
}

fn check_p(inst: &Instance, p: usize) -> Result<()> {
    if p == 0 || p > inst.m() {
        return Err(Error::domain(format!(
            "p = {p} outside the family range 1..={}",
            inst.m()
        )));
    }
    Ok(())
}

fn check_sprime(inst: &Instance, s_prime: &IndexSet) -> Result<()> {
    if let Some(j) = s_prime.iter().find(|&j| j >= inst.n()) {
        return Err(Error::domain(format!(
            "S' contains index {} beyond ground set size {}",
            j + 1,
            inst.n()
        )));
    }
    Ok(())
}

fn sprime_tag(s_prime: &IndexSet) -> String {
    format!("{s_prime}")
}

/// Upper mixing inequality for `(p, S')`; `p` is 1-based.
pub fn mixing_upper(inst: &Instance, p: usize, s_prime: &IndexSet) -> Result<Inequality> {
    require_nested(inst, "upper mixing")?;
    check_p(inst, p)?;
    check_sprime(inst, s_prime)?;
    let u = inst.u();
    let out_p = s_prime.minus(inst.set(p - 1)).card();
    if out_p + 1 > u {
        return Err(Error::domain(format!(
            "|S'\\S_p| = {out_p} exceeds u - 1 = {}",
            u as i64 - 1
        )));
    }
    let m = inst.m();
    let mut beta = vec![(p - 1, rat((u - out_p) as i64))];
    let mut prev = out_p;
    for i in p..m {
        let cur = s_prime.minus(inst.set(i)).card();
        beta.push((i, rat((prev - cur) as i64)));
        prev = cur;
    }
    Ok(Inequality::new(
        s_prime.iter().map(|j| (j, rat(1))),
        beta,
        rat(u as i64),
        Sense::Le,
        format!("mix-upper(p={p},S'={})", sprime_tag(s_prime)),
    ))
}

/// Lower mixing inequality for `(p, S')`, stated in `<=` form with the
/// z-terms negated; `p` is 1-based.
pub fn mixing_lower(inst: &Instance, p: usize, s_prime: &IndexSet) -> Result<Inequality> {
    require_nested(inst, "lower mixing")?;
    check_p(inst, p)?;
    check_sprime(inst, s_prime)?;
    let n = inst.n();
    let l = inst.l();
    let nl = n - l;
    let with_prev = if p >= 2 {
        s_prime.union(inst.set(p - 2)).card()
    } else {
        s_prime.card()
    };
    let with_p = s_prime.union(inst.set(p - 1)).card();
    if !(with_prev <= nl && nl < with_p) {
        return Err(Error::domain(format!(
            "need |S' u S_(p-1)| <= n - l < |S' u S_p|, got |S' u S_(p-1)| = {with_prev}, n - l = {nl}, |S' u S_p| = {with_p}"
        )));
    }
    let m = inst.m();
    let mut beta = vec![(p - 1, rat(with_p as i64 - nl as i64))];
    let mut prev = with_p;
    for i in p..m {
        let cur = s_prime.union(inst.set(i)).card();
        beta.push((i, rat(cur as i64 - prev as i64)));
        prev = cur;
    }
    Ok(Inequality::new(
        s_prime.iter().map(|j| (j, rat(-1))),
        beta,
        rat(0),
        Sense::Le,
        format!("mix-lower(p={p},S'={})", sprime_tag(s_prime)),
    ))
}

/// Facet classification outcome for a mixing inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FacetClass {
    /// Some necessary condition fails; the inequality cannot be a facet in
    /// canonical form.
    ViolatesNecessary,
    /// All necessary conditions and the sufficiency condition hold.
    FacetBySufficiency,
    /// `p = m` and `|S_m| = n - l`: facetness is decided by the special-case
    /// rule recorded in `sufficient_ok`.
    BoundaryCase,
    /// Necessary conditions hold but the sufficiency condition fails; the
    /// classification is left open.
    Undetermined,
}

/// Facet predicate evaluation for one `(p, S')` pair.
#[derive(Clone, Debug, Serialize)]
pub struct FacetVerdict {
    pub p: usize,
    pub s_prime: Vec<usize>,
    pub family: &'static str,
    /// Named necessary conditions with their outcomes.
    pub conditions: Vec<(String, bool)>,
    /// The sufficiency condition, when applicable; in the boundary case this
    /// carries the special-case facet decision.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sufficient_ok: Option<bool>,
    pub classification: FacetClass,
}

impl FacetVerdict {
    pub fn necessary_all_hold(&self) -> bool {
        self.conditions.iter().all(|(_, ok)| *ok)
    }
}

fn classify(
    p: usize,
    m: usize,
    boundary: bool,
    conditions: Vec<(String, bool)>,
    sufficient: Option<bool>,
    s_prime: &IndexSet,
    family: &'static str,
) -> FacetVerdict {
    let necessary_ok = conditions.iter().all(|(_, ok)| *ok);
    let classification = if !necessary_ok {
        FacetClass::ViolatesNecessary
    } else if boundary {
        FacetClass::BoundaryCase
    } else if p == m || sufficient == Some(true) {
        // with p = m the extra condition is vacuous
        FacetClass::FacetBySufficiency
    } else {
        FacetClass::Undetermined
    };
    FacetVerdict {
        p,
        s_prime: s_prime.to_vec_1based(),
        family,
        conditions,
        sufficient_ok: sufficient,
        classification,
    }
}

/// Facet conditions for the upper mixing inequality: containment of `S_p`,
/// the cardinality thresholds, and the step-intersection sufficiency
/// condition.  The boundary regime `p = m`, `|S_m| = n - l` is decided by
/// `S' = J`.
pub fn facet_check_upper(inst: &Instance, p: usize, s_prime: &IndexSet) -> Result<FacetVerdict> {
    require_nondegenerate_regime(inst, "facet analysis")?;
    // shares the generation precondition
    mixing_upper(inst, p, s_prime)?;
    let m = inst.m();
    let u = inst.u();
    let boundary = p == m && inst.set(m - 1).card() == inst.n() - inst.l();
    let mut conditions = Vec::new();
    conditions.push((
        "U1: S' contains S_p".to_string(),
        inst.set(p - 1).is_subset_of(s_prime),
    ));
    if p >= 2 {
        conditions.push((
            "U2: |S'\\S_(p-1)| >= u".to_string(),
            s_prime.minus(inst.set(p - 2)).card() >= u,
        ));
    }
    conditions.push(("U3: |S'| >= u + 1".to_string(), s_prime.card() >= u + 1));
    let sufficient = if boundary {
        Some(*s_prime == IndexSet::full(inst.n()))
    } else if p <= m - 1 {
        let step = inst.set(p).minus(inst.set(p - 1));
        Some(!s_prime.is_disjoint_from(&step))
    } else {
        None
    };
    Ok(classify(p, m, boundary, conditions, sufficient, s_prime, "upper"))
}

/// Facet conditions for the lower mixing inequality: disjointness from
/// `S_p`, the size threshold, and the step-non-containment sufficiency
/// condition.  The boundary regime is decided by `S' = {j}` outside `S_m`.
pub fn facet_check_lower(inst: &Instance, p: usize, s_prime: &IndexSet) -> Result<FacetVerdict> {
    require_nondegenerate_regime(inst, "facet analysis")?;
    mixing_lower(inst, p, s_prime)?;
    let m = inst.m();
    let boundary = p == m && inst.set(m - 1).card() == inst.n() - inst.l();
    let conditions = vec![
        (
            "L1: S' disjoint from S_p".to_string(),
            s_prime.is_disjoint_from(inst.set(p - 1)),
        ),
        (
            "L2: |S'| <= n - l - 1".to_string(),
            s_prime.card() + 1 <= inst.n() - inst.l(),
        ),
    ];
    let sufficient = if boundary {
        Some(s_prime.card() == 1 && s_prime.is_disjoint_from(inst.set(m - 1)))
    } else if p <= m - 1 {
        let step = inst.set(p).minus(inst.set(p - 1));
        Some(!step.is_subset_of(s_prime))
    } else {
        None
    };
    Ok(classify(p, m, boundary, conditions, sufficient, s_prime, "lower"))
}

/// Hull description in a degenerate regime, or the reduction directive that
/// removes forced-zero delta variables.
#[derive(Clone, Debug)]
pub enum DegenerateHull {
    /// Explicit hull rows (equations and inequalities).
    Hull(Vec<Inequality>),
    /// Fix `delta_i = 0` for the listed indices (0-based) and re-run the
    /// analysis on the remaining subfamily; the caller applies this.
    Reduce {
        fix_delta_zero: Vec<usize>,
        keep: Vec<usize>,
    },
}

/// Exact hull for the degenerate nested regimes: `u = 0` pins every
/// variable, `u = 1` makes each delta affine, and `l > n - |S_m|` forces the
/// largest deltas to zero (returned as a reduction directive).
pub fn degenerate_hull(inst: &Instance) -> Result<DegenerateHull> {
    require_nested(inst, "degenerate hull")?;
    let (n, m, l, u) = (inst.n(), inst.m(), inst.l(), inst.u());
    if u == 0 {
        let mut rows = Vec::new();
        for j in 0..n {
            rows.push(Inequality::new(
                [(j, rat(1))],
                [],
                rat(0),
                Sense::Eq,
                format!("deg-z-fix(j={})", j + 1),
            ));
        }
        for i in 0..m {
            rows.push(Inequality::new(
                [],
                [(i, rat(1))],
                rat(1),
                Sense::Eq,
                format!("deg-delta-fix(i={})", i + 1),
            ));
        }
        return Ok(DegenerateHull::Hull(rows));
    }
    if u == 1 {
        let mut rows = Vec::new();
        for (i, s) in inst.sets().iter().enumerate() {
            rows.push(Inequality::new(
                s.iter().map(|j| (j, rat(1))),
                [(i, rat(1))],
                rat(1),
                Sense::Eq,
                format!("deg-affine(i={})", i + 1),
            ));
        }
        let all = || (0..n).map(|j| (j, rat(1)));
        rows.push(Inequality::new(all(), [], rat(1), Sense::Le, "deg-card-up"));
        if l >= 1 {
            rows.push(Inequality::new(
                all(),
                [],
                rat(l as i64),
                Sense::Ge,
                "deg-card-lo",
            ));
        }
        for j in 0..n {
            rows.push(Inequality::new(
                [(j, rat(1))],
                [],
                rat(0),
                Sense::Ge,
                format!("deg-z-lb(j={})", j + 1),
            ));
            rows.push(Inequality::new(
                [(j, rat(1))],
                [],
                rat(1),
                Sense::Le,
                format!("deg-z-ub(j={})", j + 1),
            ));
        }
        return Ok(DegenerateHull::Hull(rows));
    }
    if l + inst.set(m - 1).card() > n {
        let (fix, keep): (Vec<usize>, Vec<usize>) =
            (0..m).partition(|&i| inst.set(i).card() > n - l);
        return Ok(DegenerateHull::Reduce {
            fix_delta_zero: fix,
            keep,
        });
    }
    Err(Error::domain(format!(
        "not a degenerate regime: u = {u} >= 2 and l = {l} <= n - |S_m| = {}",
        n - inst.set(m - 1).card()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn inst_a() -> Instance {
        Instance::new(5, 1, 3, &[vec![1, 2], vec![1, 2, 3]]).unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::from_1based(v, 64).unwrap()
    }

    #[test]
    fn type1_examples() {
        let sys = MixingBaseSystem::new(vec![ratio(1, 2)]).unwrap();
        let (s, w, rhs) = type1_mixing(&sys);
        assert_eq!(s, rat(1));
        assert_eq!(w, vec![ratio(1, 2)]);
        assert_eq!(rhs, ratio(1, 2));

        let sys = MixingBaseSystem::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap();
        let (_, w, rhs) = type1_mixing(&sys);
        assert_eq!(w, vec![ratio(1, 4), ratio(1, 2)]);
        assert_eq!(rhs, ratio(3, 4));

        assert!(MixingBaseSystem::new(vec![ratio(1, 3), ratio(1, 3)]).is_err());
        assert!(MixingBaseSystem::new(vec![rat(1)]).is_err());
        assert!(MixingBaseSystem::new(vec![rat(0)]).is_err());
    }

    #[test]
    fn upper_examples() {
        let a = inst_a();
        let q = mixing_upper(&a, 1, &set(&[1, 2, 4, 5])).unwrap();
        assert_eq!(q.alpha.len(), 4);
        assert_eq!(q.beta.get(&0), Some(&rat(1)));
        assert_eq!(q.beta.get(&1), None); // zero coefficient dropped
        assert_eq!(q.gamma, rat(3));

        let q = mixing_upper(&a, 2, &set(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(q.alpha.len(), 5);
        assert_eq!(q.beta.get(&1), Some(&rat(1)));
        assert_eq!(q.beta.get(&0), None);

        let err = mixing_upper(&a, 1, &set(&[3, 4, 5])).unwrap_err();
        assert!(err.to_string().contains("exceeds u - 1"), "{err}");
    }

    #[test]
    fn lower_examples() {
        let a = inst_a();
        let q = mixing_lower(&a, 2, &set(&[4, 5])).unwrap();
        assert_eq!(q.alpha.get(&3), Some(&rat(-1)));
        assert_eq!(q.alpha.get(&4), Some(&rat(-1)));
        assert_eq!(q.beta.get(&1), Some(&rat(1)));
        assert_eq!(q.gamma, rat(0));

        assert!(mixing_lower(&a, 2, &set(&[4])).is_err());

        let q = mixing_lower(&a, 1, &set(&[3, 4, 5])).unwrap();
        assert_eq!(q.beta.get(&0), Some(&rat(1)));
        assert_eq!(q.beta.get(&1), None);
    }

    #[test]
    fn facet_upper_examples() {
        let a = inst_a();
        let v = facet_check_upper(&a, 1, &set(&[1, 2, 4, 5])).unwrap();
        assert!(v.necessary_all_hold());
        assert_eq!(v.sufficient_ok, Some(false));
        assert_eq!(v.classification, FacetClass::Undetermined);

        let v = facet_check_upper(&a, 1, &set(&[1, 2, 3, 5])).unwrap();
        assert_eq!(v.classification, FacetClass::FacetBySufficiency);

        let v = facet_check_upper(&a, 1, &set(&[1, 4, 5])).unwrap();
        assert_eq!(v.classification, FacetClass::ViolatesNecessary);
        assert!(!v.conditions[0].1); // U1 fails
    }

    #[test]
    fn facet_lower_examples() {
        let a = inst_a();
        let v = facet_check_lower(&a, 2, &set(&[4, 5])).unwrap();
        assert_eq!(v.classification, FacetClass::FacetBySufficiency);

        let v = facet_check_lower(&a, 2, &set(&[3, 4, 5])).unwrap();
        assert_eq!(v.classification, FacetClass::ViolatesNecessary);

        let v = facet_check_lower(&a, 1, &set(&[3, 4, 5])).unwrap();
        assert!(v.necessary_all_hold());
        assert_eq!(v.sufficient_ok, Some(false));
        assert_eq!(v.classification, FacetClass::Undetermined);
    }

    #[test]
    fn boundary_case_detection() {
        // |S_m| = n - l with p = m
        let inst = Instance::new(4, 1, 2, &[vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(inst.set(1).card(), inst.n() - inst.l());
        let v = facet_check_upper(&inst, 2, &set(&[1, 2, 3, 4])).unwrap();
        assert_eq!(v.classification, FacetClass::BoundaryCase);
        assert_eq!(v.sufficient_ok, Some(true)); // S' = J
        let v = facet_check_upper(&inst, 2, &set(&[1, 2, 3])).unwrap();
        assert_eq!(v.classification, FacetClass::BoundaryCase);
        assert_eq!(v.sufficient_ok, Some(false));
    }

    #[test]
    fn degenerate_examples() {
        let u1 = Instance::new(3, 0, 1, &[vec![1, 2]]).unwrap();
        match degenerate_hull(&u1).unwrap() {
            DegenerateHull::Hull(rows) => {
                let aff = rows.iter().find(|r| r.tag == "deg-affine(i=1)").unwrap();
                assert_eq!(aff.sense, Sense::Eq);
                assert_eq!(aff.alpha.len(), 2);
                assert_eq!(aff.beta.get(&0), Some(&rat(1)));
                assert!(rows.iter().any(|r| r.tag == "deg-card-up"));
            }
            other => panic!("expected hull, got {other:?}"),
        }

        let not_deg = Instance::new(3, 1, 2, &[vec![1, 2, 3]]).unwrap();
        assert!(degenerate_hull(&not_deg).is_err());

        let reduce = Instance::new(3, 1, 2, &[vec![1], vec![1, 2, 3]]).unwrap();
        match degenerate_hull(&reduce).unwrap() {
            DegenerateHull::Reduce {
                fix_delta_zero,
                keep,
            } => {
                assert_eq!(fix_delta_zero, vec![1]);
                assert_eq!(keep, vec![0]);
            }
            other => panic!("expected reduction, got {other:?}"),
        }

        let u0 = Instance::new(2, 0, 0, &[vec![1]]).unwrap();
        match degenerate_hull(&u0).unwrap() {
            DegenerateHull::Hull(rows) => {
                assert_eq!(rows.len(), 3);
                assert!(rows.iter().all(|r| r.sense == Sense::Eq));
            }
            other => panic!("expected single-point hull, got {other:?}"),
        }
    }

    #[test]
    fn u1_hull_rows_hold_on_the_feasible_set() {
        let u1 = Instance::new(3, 0, 1, &[vec![1, 2]]).unwrap();
        let rows = match degenerate_hull(&u1).unwrap() {
            DegenerateHull::Hull(rows) => rows,
            _ => unreachable!(),
        };
        for p in crate::instance::enumerate_points(&u1).unwrap() {
            for r in &rows {
                assert!(r.is_satisfied_by(&p), "{r:?} at {p:?}");
            }
        }
    }

    #[test]
    fn derivation_consistency_with_type1_mixing() {
        // Rebuild the upper inequality from telescoped unit-interval bounds
        // b_i = (u - |S'\S_i|) / M over i = p..m (distinct values only) and
        // compare coefficient-by-coefficient after clearing M.
        let insts = [
            inst_a(),
            Instance::new(6, 0, 3, &[vec![1, 3], vec![1, 2, 3, 5]]).unwrap(),
        ];
        for inst in &insts {
            let n = inst.n() as i64;
            let m_big = rat(n + 1);
            let u = inst.u() as i64;
            for p in 1..=inst.m() {
                for mask in 0u64..(1 << inst.n()) {
                    let sp = IndexSet::from_mask(mask);
                    let Ok(target) = mixing_upper(inst, p, &sp) else {
                        continue;
                    };
                    // distinct bounds with the first delta index attaining each
                    let mut bounds = Vec::new();
                    let mut owners = Vec::new();
                    for i in p..=inst.m() {
                        let b = rat(u - sp.minus(inst.set(i - 1)).card() as i64) / &m_big;
                        if bounds.last() != Some(&b) {
                            bounds.push(b);
                            owners.push(i - 1);
                        }
                    }
                    let sys = MixingBaseSystem::new(bounds.clone()).unwrap();
                    let (_, w, rhs) = type1_mixing(&sys);
                    // substitute s = (u - sum_{S'} z)/M and w_k = 1 - d_{owner},
                    // clear M, and compare with the generated inequality:
                    // sum z + M*sum w_k d_k <= u - M*(sum w_k - rhs)
                    let mut beta = std::collections::BTreeMap::new();
                    for (k, i) in owners.iter().enumerate() {
                        beta.insert(*i, &w[k] * &m_big);
                    }
                    let wsum = crate::rat::rat_sum(w.iter());
                    let gamma = rat(u) + (&wsum - &rhs) * &m_big;
                    assert_eq!(gamma, target.gamma, "gamma for p={p}, S'={sp}");
                    for i in 0..inst.m() {
                        let got = beta.get(&i).cloned().unwrap_or_else(Rat::zero);
                        let want = target.beta.get(&i).cloned().unwrap_or_else(Rat::zero);
                        assert_eq!(got, want, "beta_{} for p={p}, S'={sp}", i + 1);
                    }
                }
            }
        }
    }
}
