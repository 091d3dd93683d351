//! Exact polynomial-time separation for the two mixing families on nested
//! instances, plus a most-violated dispatcher over all inequality classes.
//!
//! For a fixed `p` the upper family maximizes a linear score over subsets
//! with at most `u - 1` picks outside `S_p`; the per-element scores are
//!
//! ```text
//! pi_j = z_j                    j in S_p
//!        z_j + d_i - d_p        j in S_i \ S_{i-1},  i > p
//!        z_j - d_p              j outside S_m
//! ```
//!
//! and a greedy scan over positive scores is exact.  The lower family uses
//! the mirrored scores `sigma_j` with a forced quota of picks outside `S_p`
//! and a capacity on picks outside `S_{p-1}`; the same greedy argument
//! applies (a totally unimodular LP gives an independent cross-check).

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indexset::IndexSet;
use crate::instance::{Inequality, Instance, Point};
use crate::linearization::reduced_formulation;
use crate::mixing::{mixing_lower, mixing_upper};
use crate::rat::{rat, Rat};

/// Which inequality class produced a separating cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutFamily {
    Linearization,
    TwoLink,
    MixUpper,
    MixLower,
}

/// Outcome of a separation call.  When `found`, the returned inequality is
/// violated by the query point by exactly `violation > 0`.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationResult {
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequality: Option<Inequality>,
    /// Most favorable violation over the searched family; positive iff a
    /// cut exists, otherwise the (nonpositive) best margin.
    #[serde(with = "crate::rat::serde_rat")]
    pub violation: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<CutFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_prime: Option<Vec<usize>>,
}

impl SeparationResult {
    fn none() -> SeparationResult {
        SeparationResult {
            found: false,
            inequality: None,
            violation: Rat::zero(),
            family: None,
            p: None,
            s_prime: None,
        }
    }
}

fn check_point(inst: &Instance, point: &Point) -> Result<()> {
    if point.z.len() != inst.n() || point.delta.len() != inst.m() {
        return Err(Error::domain(format!(
            "point dimensions ({}, {}) do not match instance ({}, {})",
            point.z.len(),
            point.delta.len(),
            inst.n(),
            inst.m()
        )));
    }
    if !point.in_unit_box() {
        return Err(Error::domain(
            "separation requires all point entries in [0, 1]".to_string(),
        ));
    }
    Ok(())
}

fn require_nested(inst: &Instance) -> Result<()> {
    if !inst.is_nested() {
        return Err(Error::domain("separation requires a nested family"));
    }
    Ok(())
}

/// The band index of each ground element for a nested chain: `Some(i)` for
/// the first set containing it, `None` outside the outermost set.
fn band_of(inst: &Instance) -> Vec<Option<usize>> {
    (0..inst.n())
        .map(|j| (0..inst.m()).find(|&i| inst.set(i).contains(j)))
        .collect()
}

/// Per-element scores for the upper family at a fixed `p` (1-based).
fn upper_scores(inst: &Instance, point: &Point, p: usize, band: &[Option<usize>]) -> Vec<Rat> {
    let dp = &point.delta[p - 1];
    (0..inst.n())
        .map(|j| match band[j] {
            Some(i) if i <= p - 1 => point.z[j].clone(),
            Some(i) => &point.z[j] + &point.delta[i] - dp,
            None => &point.z[j] - dp,
        })
        .collect()
}

/// Per-element scores for the lower family at a fixed `p` (1-based).
fn lower_scores(inst: &Instance, point: &Point, p: usize, band: &[Option<usize>]) -> Vec<Rat> {
    let dp = &point.delta[p - 1];
    (0..inst.n())
        .map(|j| match band[j] {
            Some(i) if i <= p - 1 => -point.z[j].clone(),
            Some(i) => dp - &point.delta[i] - &point.z[j],
            None => dp - &point.z[j],
        })
        .collect()
}

/// Selection window for the lower family at a fixed `p`: the minimum number
/// of picks outside `S_p` and the maximum number outside `S_{p-1}`, or
/// `None` when no subset meets the precondition at this `p`.
fn lower_window(inst: &Instance, p: usize) -> Option<(usize, usize)> {
    let nl = inst.n() - inst.l();
    let size_p = inst.set(p - 1).card();
    let size_prev = if p >= 2 { inst.set(p - 2).card() } else { 0 };
    if size_prev > nl {
        return None;
    }
    let forced = (nl + 1).saturating_sub(size_p);
    let capacity = nl - size_prev;
    let available = inst.n() - size_p;
    if forced > capacity || forced > available {
        return None;
    }
    Some((forced, capacity))
}

/// Most violated upper mixing inequality, exact over all `(p, S')`.
pub fn separate_upper(inst: &Instance, point: &Point) -> Result<SeparationResult> {
    require_nested(inst)?;
    check_point(inst, point)?;
    let band = band_of(inst);
    let u = inst.u();
    let mut best: Option<(Rat, usize, IndexSet)> = None;
    for p in 1..=inst.m() {
        let scores = upper_scores(inst, point, p, &band);
        let sp = inst.set(p - 1);
        let mut chosen = IndexSet::new();
        let mut lhs = rat(u as i64) * &point.delta[p - 1];
        // members of S_p with positive score are free
        for j in sp.iter() {
            if scores[j].is_positive() {
                chosen.insert(j);
                lhs += &scores[j];
            }
        }
        // up to u - 1 largest positive scores outside S_p, lowest index on ties
        let mut outside: Vec<usize> = (0..inst.n())
            .filter(|&j| !sp.contains(j) && scores[j].is_positive())
            .collect();
        outside.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
        for &j in outside.iter().take(u.saturating_sub(1)) {
            chosen.insert(j);
            lhs += &scores[j];
        }
        let violation = lhs - rat(u as i64);
        let better = match &best {
            None => true,
            Some((bv, _, _)) => violation > *bv,
        };
        if better {
            best = Some((violation, p, chosen));
        }
    }
    let Some((violation, p, s_prime)) = best else {
        return Ok(SeparationResult::none());
    };
    let found = violation.is_positive();
    let inequality = if found {
        Some(mixing_upper(inst, p, &s_prime)?)
    } else {
        None
    };
    Ok(SeparationResult {
        found,
        inequality,
        violation,
        family: found.then_some(CutFamily::MixUpper),
        p: found.then_some(p),
        s_prime: found.then(|| s_prime.to_vec_1based()),
    })
}

/// Most violated lower mixing inequality, exact over all `(p, S')`.
pub fn separate_lower(inst: &Instance, point: &Point) -> Result<SeparationResult> {
    require_nested(inst)?;
    check_point(inst, point)?;
    let band = band_of(inst);
    let n = inst.n();
    let l = inst.l();
    let nl = n - l;
    let mut best: Option<(Rat, usize, IndexSet)> = None;
    for p in 1..=inst.m() {
        let Some((forced, capacity)) = lower_window(inst, p) else {
            continue; // no feasible S' at this p (l = 0, typically)
        };
        let mut outside: Vec<usize> = (0..n).filter(|&j| !inst.set(p - 1).contains(j)).collect();
        let scores = lower_scores(inst, point, p, &band);
        outside.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
        let mut chosen = IndexSet::new();
        let mut score_sum = Rat::zero();
        for (k, &j) in outside.iter().enumerate() {
            let quota_left = k < forced;
            if quota_left || (k < capacity && scores[j].is_positive()) {
                chosen.insert(j);
                score_sum += &scores[j];
            } else {
                break;
            }
        }
        // constant part: (|S_p| - n + l) d_p + sum_{i>p} |S_i \ S_{i-1}| d_i
        let size_p = inst.set(p - 1).card();
        let mut violation = rat(size_p as i64 - nl as i64) * &point.delta[p - 1];
        for i in p..inst.m() {
            let step = inst.set(i).minus(inst.set(i - 1)).card();
            violation += rat(step as i64) * &point.delta[i];
        }
        violation += score_sum;
        let better = match &best {
            None => true,
            Some((bv, _, _)) => violation > *bv,
        };
        if better {
            best = Some((violation, p, chosen));
        }
    }
    let Some((violation, p, s_prime)) = best else {
        return Ok(SeparationResult::none());
    };
    let found = violation.is_positive();
    let inequality = if found {
        Some(mixing_lower(inst, p, &s_prime)?)
    } else {
        None
    };
    Ok(SeparationResult {
        found,
        inequality,
        violation,
        family: found.then_some(CutFamily::MixLower),
        p: found.then_some(p),
        s_prime: found.then(|| s_prime.to_vec_1based()),
    })
}

/// Lower separation for one fixed `p` through the totally unimodular LP of
/// the alternative route; used as an exact cross-check of the greedy.
pub fn lower_best_via_lp(inst: &Instance, point: &Point, p: usize) -> Result<Option<Rat>> {
    use crate::extform::{LpModel, RowSense};
    use crate::ratlp::{solve_lp, LpStatus, ObjSense};

    require_nested(inst)?;
    check_point(inst, point)?;
    let n = inst.n();
    let nl = n - inst.l();
    let size_p = inst.set(p - 1).card();
    let Some((forced, capacity)) = lower_window(inst, p) else {
        return Ok(None);
    };
    let band = band_of(inst);
    let scores = lower_scores(inst, point, p, &band);
    let mut model = LpModel::new();
    for j in 0..n {
        model.add_var(format!("x{}", j + 1), Some(rat(0)), Some(rat(1)));
    }
    model.add_row(
        "cap",
        (0..n).filter(|&j| {
            if p >= 2 {
                !inst.set(p - 2).contains(j)
            } else {
                true
            }
        }),
        rat(1),
        RowSense::Le,
        rat(capacity as i64),
    );
    model.add_row(
        "quota",
        (0..n).filter(|&j| !inst.set(p - 1).contains(j)),
        rat(1),
        RowSense::Ge,
        rat(forced as i64),
    );
    let obj: Vec<(usize, Rat)> = scores.iter().cloned().enumerate().collect();
    let res = solve_lp(&model, &obj, ObjSense::Max)?;
    if res.status != LpStatus::Optimal {
        return Ok(None);
    }
    let mut violation = rat(size_p as i64 - nl as i64) * &point.delta[p - 1];
    for i in p..inst.m() {
        let step = inst.set(i).minus(inst.set(i - 1)).card();
        violation += rat(step as i64) * &point.delta[i];
    }
    Ok(Some(violation + res.value))
}

/// Most violated inequality over the finite rows (reduced formulation with
/// the 2-link rows) and both mixing families.  Ties go to the earlier
/// family; within the mixing families to the smaller `p`, then the smaller
/// subset in bit-pattern order.
pub fn separate_all(inst: &Instance, point: &Point) -> Result<SeparationResult> {
    require_nested(inst)?;
    check_point(inst, point)?;
    let mut best = SeparationResult::none();
    for row in reduced_formulation(inst)? {
        let slack = row.slack(point);
        if slack.is_negative() {
            let violation = -slack;
            if violation > best.violation {
                let family = if row.tag.starts_with("2-link") {
                    CutFamily::TwoLink
                } else {
                    CutFamily::Linearization
                };
                best = SeparationResult {
                    found: true,
                    inequality: Some(row),
                    violation,
                    family: Some(family),
                    p: None,
                    s_prime: None,
                };
            }
        }
    }
    for sub in [separate_upper(inst, point)?, separate_lower(inst, point)?] {
        if sub.found && sub.violation > best.violation {
            best = sub;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::lift_point;
    use crate::rat::ratio;

    fn inst_a() -> Instance {
        Instance::new(5, 1, 3, &[vec![1, 2], vec![1, 2, 3]]).unwrap()
    }

    fn point(z: &[Rat], d: &[Rat]) -> Point {
        Point {
            z: z.to_vec(),
            delta: d.to_vec(),
        }
    }

    #[test]
    fn integral_feasible_points_are_never_cut() {
        let a = inst_a();
        for u in [vec![1, 4], vec![3], vec![4, 5], vec![1, 2, 3]] {
            let p = lift_point(&a, &IndexSet::from_1based(&u, 5).unwrap()).unwrap();
            assert!(!separate_upper(&a, &p).unwrap().found);
            assert!(!separate_lower(&a, &p).unwrap().found);
            assert!(!separate_all(&a, &p).unwrap().found);
        }
    }

    #[test]
    fn upper_worked_example() {
        let a = inst_a();
        let p = point(
            &[ratio(1, 2), ratio(1, 2), rat(0), rat(1), rat(1)],
            &[ratio(1, 2), rat(0)],
        );
        let r = separate_upper(&a, &p).unwrap();
        assert!(r.found);
        assert_eq!(r.violation, ratio(1, 2));
        assert_eq!(r.p, Some(1));
        assert_eq!(r.s_prime.as_deref(), Some(&[1, 2, 4, 5][..]));
        let ineq = r.inequality.unwrap();
        assert_eq!(ineq.slack(&p), -ratio(1, 2));
    }

    #[test]
    fn upper_negative_scores_stay_silent() {
        let a = inst_a();
        let p = point(&[rat(0), rat(0), rat(0), rat(1), rat(1)], &[rat(1), rat(0)]);
        let r = separate_upper(&a, &p).unwrap();
        assert!(!r.found, "violation {:?}", r.violation);
    }

    #[test]
    fn lower_worked_example() {
        let a = inst_a();
        let p = point(
            &[rat(0), rat(0), rat(0), ratio(1, 4), ratio(1, 4)],
            &[rat(1), rat(1)],
        );
        let r = separate_lower(&a, &p).unwrap();
        assert!(r.found);
        assert_eq!(r.violation, ratio(1, 2));
        assert_eq!(r.p, Some(2));
        assert_eq!(r.s_prime.as_deref(), Some(&[4, 5][..]));
        let ineq = r.inequality.unwrap();
        assert_eq!(ineq.slack(&p), -ratio(1, 2));
    }

    #[test]
    fn lower_feasible_fractional_point() {
        let a = inst_a();
        let p = point(&[rat(0), rat(0), rat(1), rat(1), rat(1)], &[rat(1), rat(0)]);
        assert!(!separate_lower(&a, &p).unwrap().found);
    }

    #[test]
    fn dispatcher_prefers_most_violated() {
        let a = inst_a();
        // violates z_1 + d_1 <= 1 by 1/2 and nothing else by more
        let p = point(
            &[rat(1), rat(0), rat(0), rat(0), rat(0)],
            &[ratio(1, 2), rat(0)],
        );
        let r = separate_all(&a, &p).unwrap();
        assert!(r.found);
        assert_eq!(r.family, Some(CutFamily::Linearization));
        assert_eq!(r.inequality.as_ref().unwrap().tag, "prod-ub(i=1,j=1)");
        assert_eq!(r.violation, ratio(1, 2));

        // the lower-mixing worked example routes to the mixing family
        let p = point(
            &[rat(0), rat(0), rat(0), ratio(1, 4), ratio(1, 4)],
            &[rat(1), rat(1)],
        );
        let r = separate_all(&a, &p).unwrap();
        assert_eq!(r.family, Some(CutFamily::MixLower));
        assert_eq!(r.violation, ratio(1, 2));
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = inst_a();
        let bad = point(&[rat(-1), rat(0), rat(0), rat(0), rat(0)], &[rat(0), rat(0)]);
        assert!(separate_all(&a, &bad).is_err());
        let not_nested = Instance::new(4, 0, 2, &[vec![1], vec![2]]).unwrap();
        let p = point(&[rat(0), rat(0), rat(0), rat(0)], &[rat(0), rat(0)]);
        assert!(separate_all(&not_nested, &p).is_err());
        let wrong_dims = point(&[rat(0), rat(0), rat(0)], &[rat(0), rat(0)]);
        assert!(separate_upper(&a, &wrong_dims).is_err());
    }

    #[test]
    fn greedy_matches_lp_route_for_lower() {
        let a = inst_a();
        let pts = [
            point(
                &[rat(0), rat(0), rat(0), ratio(1, 4), ratio(1, 4)],
                &[rat(1), rat(1)],
            ),
            point(
                &[ratio(1, 3), ratio(2, 3), rat(0), ratio(1, 5), rat(1)],
                &[ratio(1, 2), ratio(1, 3)],
            ),
        ];
        for p in &pts {
            for fixed_p in 1..=a.m() {
                if let Some(lp_best) = lower_best_via_lp(&a, p, fixed_p).unwrap() {
                    // greedy, restricted to the same p
                    let band = band_of(&a);
                    let scores = lower_scores(&a, p, fixed_p, &band);
                    let nl = a.n() - a.l();
                    let size_p = a.set(fixed_p - 1).card();
                    let (forced, capacity) = lower_window(&a, fixed_p).unwrap();
                    let mut outside: Vec<usize> = (0..a.n())
                        .filter(|&j| !a.set(fixed_p - 1).contains(j))
                        .collect();
                    outside.sort_by(|&x, &y| scores[y].cmp(&scores[x]).then(x.cmp(&y)));
                    let mut sum = rat(size_p as i64 - nl as i64) * &p.delta[fixed_p - 1];
                    for i in fixed_p..a.m() {
                        let step = a.set(i).minus(a.set(i - 1)).card();
                        sum += rat(step as i64) * &p.delta[i];
                    }
                    for (k, &j) in outside.iter().enumerate() {
                        if k < forced || (k < capacity && scores[j].is_positive()) {
                            sum += &scores[j];
                        } else {
                            break;
                        }
                    }
                    assert_eq!(sum, lp_best, "p = {fixed_p}");
                }
            }
        }
    }
}
