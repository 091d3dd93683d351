//! Inequality generators for the standard linearization, the 2-link rows,
//! and the reduced formulation used in the nested case.

use crate::error::{Error, Result};
use crate::instance::{Inequality, Instance, Sense};
use crate::rat::rat;

fn require_nested(inst: &Instance, what: &str) -> Result<()> {
    if !inst.is_nested() {
        return Err(Error::domain(format!(
            "{what} requires a nested family (strict chain in the given order)"
        )));
    }
    Ok(())
}

/// Cardinality window rows `l <= sum z_j` and `sum z_j <= u`.
fn cardinality_rows(inst: &Instance) -> [Inequality; 2] {
    let all = || (0..inst.n()).map(|j| (j, rat(1)));
    [
        Inequality::new(all(), [], rat(inst.l() as i64), Sense::Ge, "card-lo"),
        Inequality::new(all(), [], rat(inst.u() as i64), Sense::Le, "card-up"),
    ]
}

/// The standard linearization: cardinality window, `z_j + delta_i <= 1` for
/// members, covering rows `delta_i + sum_{j in S_i} z_j >= 1`, delta
/// nonnegativity, and the unit box on z.
///
/// Emission order: cardinality rows, the member rows sorted by `(i, j)`,
/// then the remaining families in display order.  Row count is
/// `2 + sum |S_i| + 2m + 2n`.
pub fn standard_linearization(inst: &Instance) -> Vec<Inequality> {
    let mut rows = Vec::new();
    rows.extend(cardinality_rows(inst));
    for (i, s) in inst.sets().iter().enumerate() {
        for j in s.iter() {
            rows.push(Inequality::new(
                [(j, rat(1))],
                [(i, rat(1))],
                rat(1),
                Sense::Le,
                format!("prod-ub(i={},j={})", i + 1, j + 1),
            ));
        }
    }
    for (i, s) in inst.sets().iter().enumerate() {
        rows.push(Inequality::new(
            s.iter().map(|j| (j, rat(1))),
            [(i, rat(1))],
            rat(1),
            Sense::Ge,
            format!("prod-lb(i={})", i + 1),
        ));
    }
    for i in 0..inst.m() {
        rows.push(Inequality::new(
            [],
            [(i, rat(1))],
            rat(0),
            Sense::Ge,
            format!("delta-lb(i={})", i + 1),
        ));
    }
    for j in 0..inst.n() {
        rows.push(Inequality::new(
            [(j, rat(1))],
            [],
            rat(0),
            Sense::Ge,
            format!("z-lb(j={})", j + 1),
        ));
        rows.push(Inequality::new(
            [(j, rat(1))],
            [],
            rat(1),
            Sense::Le,
            format!("z-ub(j={})", j + 1),
        ));
    }
    rows
}

/// The 2-link rows for a nested family: `delta_{i+1} - delta_i <= 0` and
/// `delta_i - delta_{i+1} - sum_{j in S_{i+1} \ S_i} z_j <= 0` for each
/// consecutive pair.
pub fn two_link(inst: &Instance) -> Result<Vec<Inequality>> {
    require_nested(inst, "2-link generation")?;
    let mut rows = Vec::new();
    for i in 0..inst.m().saturating_sub(1) {
        rows.push(Inequality::new(
            [],
            [(i, rat(-1)), (i + 1, rat(1))],
            rat(0),
            Sense::Le,
            format!("2-link-mono(i={})", i + 1),
        ));
    }
    for i in 0..inst.m().saturating_sub(1) {
        let step = inst.set(i + 1).minus(inst.set(i));
        rows.push(Inequality::new(
            step.iter().map(|j| (j, rat(-1))),
            [(i, rat(1)), (i + 1, rat(-1))],
            rat(0),
            Sense::Le,
            format!("2-link-diff(i={})", i + 1),
        ));
    }
    Ok(rows)
}

/// The reduced formulation for a nested family: the subset of the standard
/// linearization that stays irredundant next to the 2-link rows, with the
/// 2-link rows appended.
///
/// Rows: cardinality window; `z_j + delta_i <= 1` on members; the single
/// covering row for the innermost set; `-delta_m <= 0`; `-z_j <= 0` for all
/// `j`; `z_j <= 1` only outside the outermost set; then the 2-link rows.
pub fn reduced_formulation(inst: &Instance) -> Result<Vec<Inequality>> {
    require_nested(inst, "reduced formulation")?;
    let m = inst.m();
    let mut rows = Vec::new();
    rows.extend(cardinality_rows(inst));
    for (i, s) in inst.sets().iter().enumerate() {
        for j in s.iter() {
            rows.push(Inequality::new(
                [(j, rat(1))],
                [(i, rat(1))],
                rat(1),
                Sense::Le,
                format!("prod-ub(i={},j={})", i + 1, j + 1),
            ));
        }
    }
    rows.push(Inequality::new(
        inst.set(0).iter().map(|j| (j, rat(1))),
        [(0, rat(1))],
        rat(1),
        Sense::Ge,
        "prod-lb(i=1)",
    ));
    rows.push(Inequality::new(
        [],
        [(m - 1, rat(1))],
        rat(0),
        Sense::Ge,
        format!("delta-lb(i={m})"),
    ));
    for j in 0..inst.n() {
        rows.push(Inequality::new(
            [(j, rat(1))],
            [],
            rat(0),
            Sense::Ge,
            format!("z-lb(j={})", j + 1),
        ));
    }
    for j in 0..inst.n() {
        if !inst.set(m - 1).contains(j) {
            rows.push(Inequality::new(
                [(j, rat(1))],
                [],
                rat(1),
                Sense::Le,
                format!("z-ub(j={})", j + 1),
            ));
        }
    }
    rows.extend(two_link(inst)?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{enumerate_points, Instance, Point};
    use crate::rat::Rat;
    use num_traits::{One, Zero};

    fn inst_a() -> Instance {
        Instance::new(5, 1, 3, &[vec![1, 2], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn standard_rows_and_count() {
        let rows = standard_linearization(&inst_a());
        assert_eq!(rows.len(), 21); // 2 + 5 + 2 + 2 + 10

        let r = rows.iter().find(|r| r.tag == "prod-ub(i=2,j=3)").unwrap();
        assert_eq!(r.alpha.get(&2), Some(&rat(1)));
        assert_eq!(r.beta.get(&1), Some(&rat(1)));
        assert_eq!(r.gamma, rat(1));
        assert_eq!(r.sense, Sense::Le);

        let r = rows.iter().find(|r| r.tag == "prod-lb(i=1)").unwrap();
        assert_eq!(r.alpha.len(), 2);
        assert!(r.alpha.contains_key(&0) && r.alpha.contains_key(&1));
        assert_eq!(r.sense, Sense::Ge);
    }

    #[test]
    fn two_link_rows() {
        let rows = two_link(&inst_a()).unwrap();
        assert_eq!(rows.len(), 2);
        // delta_2 - delta_1 <= 0
        assert_eq!(rows[0].beta.get(&0), Some(&rat(-1)));
        assert_eq!(rows[0].beta.get(&1), Some(&rat(1)));
        // delta_1 - delta_2 - z_3 <= 0
        assert_eq!(rows[1].beta.get(&0), Some(&rat(1)));
        assert_eq!(rows[1].beta.get(&1), Some(&rat(-1)));
        assert_eq!(rows[1].alpha.get(&2), Some(&rat(-1)));

        let single = Instance::new(4, 0, 2, &[vec![1, 2]]).unwrap();
        assert!(two_link(&single).unwrap().is_empty());

        let not_nested = Instance::new(4, 0, 2, &[vec![1], vec![2]]).unwrap();
        assert!(two_link(&not_nested).is_err());
    }

    #[test]
    fn reduced_rows() {
        let rows = reduced_formulation(&inst_a()).unwrap();
        let tags: Vec<&str> = rows.iter().map(|r| r.tag.as_str()).collect();
        assert!(tags.contains(&"prod-lb(i=1)"));
        assert!(!tags.contains(&"prod-lb(i=2)"));
        assert!(tags.contains(&"z-ub(j=4)"));
        assert!(tags.contains(&"z-ub(j=5)"));
        assert!(!tags.contains(&"z-ub(j=1)"));
        assert!(tags.contains(&"delta-lb(i=2)"));
        assert!(!tags.contains(&"delta-lb(i=1)"));
        // 2-link rows come last
        assert!(tags[tags.len() - 2].starts_with("2-link"));
    }

    #[test]
    fn all_rows_valid_on_enumerated_points() {
        for inst in [
            inst_a(),
            Instance::new(6, 0, 4, &[vec![2, 3], vec![1, 2, 3, 5]]).unwrap(),
        ] {
            let points = enumerate_points(&inst).unwrap();
            let mut rows = standard_linearization(&inst);
            rows.extend(reduced_formulation(&inst).unwrap());
            for row in &rows {
                for p in &points {
                    assert!(row.is_satisfied_by(p), "{row:?} violated at {p:?}");
                }
            }
        }
    }

    #[test]
    fn reduced_binary_solutions_equal_feasible_set() {
        let inst = inst_a();
        let rows = reduced_formulation(&inst).unwrap();
        let n = inst.n();
        let m = inst.m();
        let mut solutions = Vec::new();
        for mask in 0u32..(1 << (n + m)) {
            let p = Point {
                z: (0..n)
                    .map(|j| {
                        if mask & (1 << j) != 0 {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect(),
                delta: (0..m)
                    .map(|i| {
                        if mask & (1 << (n + i)) != 0 {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect(),
            };
            if rows.iter().all(|r| r.is_satisfied_by(&p)) {
                solutions.push(p);
            }
        }
        let mut expect = enumerate_points(&inst).unwrap();
        let key = |p: &Point| {
            (
                p.z.iter().map(|v| v.is_one() as u64).collect::<Vec<_>>(),
                p.delta
                    .iter()
                    .map(|v| v.is_one() as u64)
                    .collect::<Vec<_>>(),
            )
        };
        solutions.sort_by_key(key);
        expect.sort_by_key(key);
        assert_eq!(solutions, expect);
    }
}
