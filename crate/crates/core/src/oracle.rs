//! Brute-force ground truth: validity by enumeration, exhaustive
//! separation maxima, exact affine ranks, enumerated optima, and the
//! end-to-end completeness check that pits the cutting-plane driver
//! against enumeration.

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indexset::IndexSet;
use crate::instance::{
    enumerate_masks, point_of_masks, Inequality, Instance, Objective, Point, DEFAULT_ENUM_GUARD,
};
use crate::mixing::{mixing_lower, mixing_upper, require_nondegenerate_regime};
use crate::rat::{rat, Rat};
use crate::ratlp::cutting_plane_maximize;
use crate::separation::{CutFamily, SeparationResult};

/// Guard for the exhaustive separation baselines (`2^n * m` candidates).
pub const SEPARATION_GUARD: usize = 10;

/// Rank of an integer matrix by fraction-free elimination.  Entries stay
/// bounded by minors of the input, far inside `i128` for 0/1 data at this
/// scale.
pub fn integer_matrix_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0usize;
    let mut prev = 1i128;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = rows[rank][col]
                    .checked_mul(rows[r][c])
                    .and_then(|x| rows[r][col].checked_mul(rows[rank][c]).map(|y| x - y))
                    .expect("rank elimination overflow");
                rows[r][c] = num / prev;
            }
            rows[r][col] = 0;
        }
        prev = rows[rank][col];
        rank += 1;
    }
    rank
}

/// The enumerated feasible set with mask views for fast exact evaluation.
pub struct Enumerated {
    pub points: Vec<Point>,
    pub z_masks: Vec<u64>,
    pub d_masks: Vec<u64>,
}

impl Enumerated {
    pub fn build(inst: &Instance) -> Result<Enumerated> {
        Self::build_with_guard(inst, DEFAULT_ENUM_GUARD)
    }

    pub fn build_with_guard(inst: &Instance, guard: usize) -> Result<Enumerated> {
        let masks = enumerate_masks(inst, guard)?;
        let points = masks
            .iter()
            .map(|&(zm, dm)| point_of_masks(inst, zm, dm))
            .collect();
        Ok(Enumerated {
            points,
            z_masks: masks.iter().map(|&(z, _)| z).collect(),
            d_masks: masks.iter().map(|&(_, d)| d).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the first enumerated point violating the inequality.
    pub fn first_violation(&self, ineq: &Inequality) -> Option<usize> {
        if let Some(iv) = ineq.integer_view() {
            return (0..self.len()).find(|&k| {
                let s = iv.slack_at_masks(self.z_masks[k], self.d_masks[k]);
                match iv.sense {
                    crate::instance::Sense::Eq => s != 0,
                    _ => s < 0,
                }
            });
        }
        self.points.iter().position(|p| !ineq.is_satisfied_by(p))
    }

    /// Indices of the points lying on the inequality's hyperplane.
    pub fn tight_indices(&self, ineq: &Inequality) -> Vec<usize> {
        if let Some(iv) = ineq.integer_view() {
            return (0..self.len())
                .filter(|&k| iv.slack_at_masks(self.z_masks[k], self.d_masks[k]) == 0)
                .collect();
        }
        (0..self.len())
            .filter(|&k| ineq.is_tight_at(&self.points[k]))
            .collect()
    }

    /// Affine rank (count of affinely independent points) of a subset.
    fn homogeneous_rank(&self, inst: &Instance, idx: &[usize]) -> usize {
        let rows: Vec<Vec<i128>> = idx
            .iter()
            .map(|&k| {
                let mut row = Vec::with_capacity(inst.n() + inst.m() + 1);
                row.push(1i128);
                for j in 0..inst.n() {
                    row.push(((self.z_masks[k] >> j) & 1) as i128);
                }
                for i in 0..inst.m() {
                    row.push(((self.d_masks[k] >> i) & 1) as i128);
                }
                row
            })
            .collect();
        integer_matrix_rank(rows)
    }
}

/// Validity of an inequality over the whole enumerated set; the witness is
/// the first violating point in enumeration order.
pub fn brute_validity(inst: &Instance, ineq: &Inequality) -> Result<(bool, Option<Point>)> {
    brute_validity_with_guard(inst, ineq, DEFAULT_ENUM_GUARD)
}

pub fn brute_validity_with_guard(
    inst: &Instance,
    ineq: &Inequality,
    guard: usize,
) -> Result<(bool, Option<Point>)> {
    let en = Enumerated::build_with_guard(inst, guard)?;
    match en.first_violation(ineq) {
        Some(k) => Ok((false, Some(en.points[k].clone()))),
        None => Ok((true, None)),
    }
}

fn check_box_point(inst: &Instance, point: &Point) -> Result<()> {
    if point.z.len() != inst.n() || point.delta.len() != inst.m() {
        return Err(Error::domain("point dimensions do not match instance"));
    }
    if !point.in_unit_box() {
        return Err(Error::domain("point entries must lie in [0, 1]"));
    }
    Ok(())
}

fn separation_guard(inst: &Instance) -> Result<()> {
    if inst.n() > SEPARATION_GUARD {
        return Err(Error::Guard {
            n: inst.n(),
            limit: SEPARATION_GUARD,
        });
    }
    Ok(())
}

fn best_to_result(
    inst: &Instance,
    best: Option<(Rat, usize, u64)>,
    family: CutFamily,
) -> Result<SeparationResult> {
    let Some((violation, p, mask)) = best else {
        return Ok(SeparationResult {
            found: false,
            inequality: None,
            violation: Rat::zero(),
            family: None,
            p: None,
            s_prime: None,
        });
    };
    let s_prime = IndexSet::from_mask(mask);
    let found = violation.is_positive();
    let inequality = if found {
        Some(match family {
            CutFamily::MixUpper => mixing_upper(inst, p, &s_prime)?,
            CutFamily::MixLower => mixing_lower(inst, p, &s_prime)?,
            _ => unreachable!(),
        })
    } else {
        None
    };
    Ok(SeparationResult {
        found,
        inequality,
        violation,
        family: found.then_some(family),
        p: found.then_some(p),
        s_prime: found.then(|| s_prime.to_vec_1based()),
    })
}

/// Exhaustive most-violated upper mixing inequality over every `(p, S')`
/// meeting the precondition; the baseline the greedy separator must match.
pub fn brute_separation_upper(inst: &Instance, point: &Point) -> Result<SeparationResult> {
    if !inst.is_nested() {
        return Err(Error::domain("separation requires a nested family"));
    }
    check_box_point(inst, point)?;
    separation_guard(inst)?;
    let n = inst.n();
    let u = inst.u();
    // partial sums of z over subsets, built by lowest-bit recursion
    let mut zsum: Vec<Rat> = vec![Rat::zero(); 1 << n];
    for mask in 1u64..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        zsum[mask as usize] = &zsum[(mask & (mask - 1)) as usize] + &point.z[low];
    }
    let set_masks: Vec<u64> = inst
        .sets()
        .iter()
        .map(|s| s.as_mask().expect("guarded n fits a mask"))
        .collect();
    let mut best: Option<(Rat, usize, u64)> = None;
    for p in 1..=inst.m() {
        for mask in 0u64..(1 << n) {
            let out_p = (mask & !set_masks[p - 1]).count_ones() as usize;
            if out_p + 1 > u {
                continue;
            }
            // lhs = sum z(S') + (u - |S'\S_p|) d_p + telescoping deltas
            let mut lhs = &zsum[mask as usize]
                + rat((u - out_p) as i64) * &point.delta[p - 1];
            let mut prev = out_p;
            for i in p..inst.m() {
                let cur = (mask & !set_masks[i]).count_ones() as usize;
                if prev != cur {
                    lhs += rat((prev - cur) as i64) * &point.delta[i];
                }
                prev = cur;
            }
            let violation = lhs - rat(u as i64);
            let better = match &best {
                None => true,
                Some((bv, bp, bm)) => {
                    violation > *bv || (violation == *bv && (p, mask) < (*bp, *bm))
                }
            };
            if better {
                best = Some((violation, p, mask));
            }
        }
    }
    best_to_result(inst, best, CutFamily::MixUpper)
}

/// Exhaustive most-violated lower mixing inequality over every `(p, S')`
/// meeting the precondition.
pub fn brute_separation_lower(inst: &Instance, point: &Point) -> Result<SeparationResult> {
    if !inst.is_nested() {
        return Err(Error::domain("separation requires a nested family"));
    }
    check_box_point(inst, point)?;
    separation_guard(inst)?;
    let n = inst.n();
    let nl = n - inst.l();
    let mut zsum: Vec<Rat> = vec![Rat::zero(); 1 << n];
    for mask in 1u64..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        zsum[mask as usize] = &zsum[(mask & (mask - 1)) as usize] + &point.z[low];
    }
    let set_masks: Vec<u64> = inst
        .sets()
        .iter()
        .map(|s| s.as_mask().expect("guarded n fits a mask"))
        .collect();
    let mut best: Option<(Rat, usize, u64)> = None;
    for p in 1..=inst.m() {
        let prev_mask = if p >= 2 { set_masks[p - 2] } else { 0 };
        for mask in 0u64..(1 << n) {
            let with_prev = (mask | prev_mask).count_ones() as usize;
            let with_p = (mask | set_masks[p - 1]).count_ones() as usize;
            if !(with_prev <= nl && nl < with_p) {
                continue;
            }
            // violation = rhs - lhs of the >=-form inequality
            let mut violation =
                rat(with_p as i64 - nl as i64) * &point.delta[p - 1] - &zsum[mask as usize];
            let mut prev = with_p;
            for i in p..inst.m() {
                let cur = (mask | set_masks[i]).count_ones() as usize;
                if cur != prev {
                    violation += rat((cur - prev) as i64) * &point.delta[i];
                }
                prev = cur;
            }
            let better = match &best {
                None => true,
                Some((bv, bp, bm)) => {
                    violation > *bv || (violation == *bv && (p, mask) < (*bp, *bm))
                }
            };
            if better {
                best = Some((violation, p, mask));
            }
        }
    }
    best_to_result(inst, best, CutFamily::MixLower)
}

/// Affine dimension of the enumerated feasible set (rank of differences).
/// Empty sets report -1.
pub fn dimension(inst: &Instance) -> Result<i64> {
    dimension_with_guard(inst, DEFAULT_ENUM_GUARD)
}

pub fn dimension_with_guard(inst: &Instance, guard: usize) -> Result<i64> {
    let en = Enumerated::build_with_guard(inst, guard)?;
    let all: Vec<usize> = (0..en.len()).collect();
    Ok(en.homogeneous_rank(inst, &all) as i64 - 1)
}

/// Affine dimension of the tight-point set of a valid inequality
/// (rank of differences; -1 when no point is tight).  A facet has
/// `facet_rank = dimension - 1`.
pub fn facet_rank(inst: &Instance, ineq: &Inequality) -> Result<i64> {
    facet_rank_with_guard(inst, ineq, DEFAULT_ENUM_GUARD)
}

pub fn facet_rank_with_guard(inst: &Instance, ineq: &Inequality, guard: usize) -> Result<i64> {
    let en = Enumerated::build_with_guard(inst, guard)?;
    if let Some(k) = en.first_violation(ineq) {
        return Err(Error::domain(format!(
            "inequality is not valid (violated at {:?})",
            en.points[k]
        )));
    }
    let tight = en.tight_indices(ineq);
    Ok(en.homogeneous_rank(inst, &tight) as i64 - 1)
}

/// Exact maximum of a linear objective over the enumerated set, with the
/// first argmax in enumeration order.
pub fn ip_maximize(inst: &Instance, objective: &Objective) -> Result<(Rat, Point)> {
    ip_maximize_with_guard(inst, objective, DEFAULT_ENUM_GUARD)
}

pub fn ip_maximize_with_guard(
    inst: &Instance,
    objective: &Objective,
    guard: usize,
) -> Result<(Rat, Point)> {
    objective.check_dims(inst)?;
    let en = Enumerated::build_with_guard(inst, guard)?;
    if en.is_empty() {
        return Err(Error::domain("feasible set is empty"));
    }
    let mut best: Option<(Rat, usize)> = None;
    for (k, p) in en.points.iter().enumerate() {
        let v = objective.value_at(p);
        match &best {
            Some((bv, _)) if v <= *bv => {}
            _ => best = Some((v, k)),
        }
    }
    let (value, k) = best.unwrap();
    Ok((value, en.points[k].clone()))
}

/// One completeness discrepancy: the relaxation value disagreed with the
/// enumerated optimum.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub trial: usize,
    pub objective: Objective,
    pub lp_value: String,
    pub ip_value: String,
    pub cuts: Vec<String>,
}

/// Report of the completeness check.
#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    pub trials: usize,
    pub seed: u64,
    pub cut_total: usize,
    pub lp_solve_total: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// Runs seeded random integer objectives through the cutting-plane driver
/// and compares each final value with the enumerated optimum, exactly.
/// Refuses instances outside the non-degenerate nested regime by naming
/// the failed assumption.
pub fn completeness_check(inst: &Instance, trials: usize, seed: u64) -> Result<CompletenessReport> {
    completeness_check_with_guard(inst, trials, seed, DEFAULT_ENUM_GUARD)
}

pub fn completeness_check_with_guard(
    inst: &Instance,
    trials: usize,
    seed: u64,
    guard: usize,
) -> Result<CompletenessReport> {
    require_nondegenerate_regime(inst, "the completeness check")?;
    if inst.n() > guard {
        return Err(Error::Guard {
            n: inst.n(),
            limit: guard,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CompletenessReport {
        trials,
        seed,
        cut_total: 0,
        lp_solve_total: 0,
        discrepancies: Vec::new(),
    };
    for trial in 0..trials {
        let objective = Objective {
            z: (0..inst.n()).map(|_| rat(rng.random_range(-5..=5))).collect(),
            delta: (0..inst.m()).map(|_| rat(rng.random_range(-5..=5))).collect(),
        };
        let out = cutting_plane_maximize(inst, &objective)?;
        let (ip_value, _) = ip_maximize_with_guard(inst, &objective, guard)?;
        report.cut_total += out.cuts.len();
        report.lp_solve_total += out.lp_solves;
        if out.value != ip_value {
            report.discrepancies.push(Discrepancy {
                trial,
                objective,
                lp_value: crate::rat::format_rat(&out.value),
                ip_value: crate::rat::format_rat(&ip_value),
                cuts: out.cuts.iter().map(|c| c.tag.clone()).collect(),
            });
        }
    }
    Ok(report)
}
