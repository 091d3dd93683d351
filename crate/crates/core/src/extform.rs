//! Linear-programming models: the disjunctive extended formulation built
//! from the per-pattern fiber hulls, and LP-format text emission.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{compute_delta_set, decompose, is_proper};
use crate::instance::{Instance, Point};
use crate::rat::{self, rat, Rat};

pub use crate::instance::Sense as RowSense;

/// A named variable with optional rational bounds.
#[derive(Clone, Debug)]
pub struct VarDef {
    pub name: String,
    pub lo: Option<Rat>,
    pub hi: Option<Rat>,
}

/// A sparse constraint row over model variables.
#[derive(Clone, Debug)]
pub struct LpRow {
    pub name: String,
    pub terms: BTreeMap<usize, Rat>,
    pub sense: RowSense,
    pub rhs: Rat,
}

/// Objective direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjSense {
    Max,
    Min,
}

/// A rational constraint system with named variables and an optional
/// built-in objective.
#[derive(Clone, Debug, Default)]
pub struct LpModel {
    pub vars: Vec<VarDef>,
    pub rows: Vec<LpRow>,
    pub objective: Option<(Vec<(usize, Rat)>, ObjSense)>,
}

impl LpModel {
    pub fn new() -> LpModel {
        LpModel::default()
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lo: Option<Rat>,
        hi: Option<Rat>,
    ) -> usize {
        self.vars.push(VarDef {
            name: name.into(),
            lo,
            hi,
        });
        self.vars.len() - 1
    }

    /// Adds a row whose listed variables all share one coefficient.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        vars: impl IntoIterator<Item = usize>,
        coeff: Rat,
        sense: RowSense,
        rhs: Rat,
    ) {
        let terms = vars.into_iter().map(|v| (v, coeff.clone())).collect();
        self.push_row(name, terms, sense, rhs);
    }

    /// Adds a row from explicit `(variable, coefficient)` terms.
    pub fn add_row_terms(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (usize, Rat)>,
        sense: RowSense,
        rhs: Rat,
    ) {
        let map = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.push_row(name, map, sense, rhs);
    }

    fn push_row(
        &mut self,
        name: impl Into<String>,
        terms: BTreeMap<usize, Rat>,
        sense: RowSense,
        rhs: Rat,
    ) {
        let row = LpRow {
            name: name.into(),
            terms,
            sense,
            rhs,
        };
        for &v in row.terms.keys() {
            assert!(v < self.vars.len(), "row references undeclared variable");
        }
        self.rows.push(row);
    }

    /// Row satisfaction for a full assignment, exact.
    pub fn row_holds(&self, row: &LpRow, x: &[Rat]) -> bool {
        let mut lhs = Rat::zero();
        for (&v, c) in &row.terms {
            lhs += c * &x[v];
        }
        match row.sense {
            RowSense::Le => lhs <= row.rhs,
            RowSense::Ge => lhs >= row.rhs,
            RowSense::Eq => lhs == row.rhs,
        }
    }

    /// Checks an assignment against every row and bound.
    pub fn is_feasible(&self, x: &[Rat]) -> bool {
        if x.len() != self.vars.len() {
            return false;
        }
        for (v, def) in self.vars.iter().enumerate() {
            if let Some(lo) = &def.lo {
                if &x[v] < lo {
                    return false;
                }
            }
            if let Some(hi) = &def.hi {
                if &x[v] > hi {
                    return false;
                }
            }
        }
        self.rows.iter().all(|r| self.row_holds(r, x))
    }
}

/// Variable layout of the extended formulation: the original `z` and
/// `delta` variables, one multiplier per pattern, and one z-copy block per
/// pattern.
#[derive(Clone, Debug)]
pub struct ExtendedFormulation {
    pub model: LpModel,
    /// Column of `z_j`.
    pub z_col: Vec<usize>,
    /// Column of `delta_i`.
    pub delta_col: Vec<usize>,
    /// Column of the multiplier of pattern block `k`.
    pub lambda_col: Vec<usize>,
    /// Column of copy `j` in pattern block `k` (`copy_col[k][j]`).
    pub copy_col: Vec<Vec<usize>>,
    /// The patterns, in canonical order, as 0/1 masks over `m` bits.
    pub patterns: Vec<Vec<bool>>,
}

/// Builds the disjunctive extended formulation over the fiber hulls: one
/// scaled fiber block per realizable pattern plus linking rows.  Requires a
/// proper family, so the number of blocks is `m + 1`.
///
/// Variables, in order: `z_1..z_n` (free), `d_1..d_m` (free),
/// `lam0..lam{m}` (nonnegative), then per block `k` the copies
/// `x{k}_1..x{k}_n` (nonnegative).  Total `(m + 1)(n + 1) + n + m`.
pub fn build_extended_formulation(inst: &Instance) -> Result<ExtendedFormulation> {
    let report = is_proper(inst)?;
    if !report.is_proper {
        return Err(Error::domain(format!(
            "extended formulation requires a proper family \
             (delta_count = {}, affine_rank = {}, closed_intersection = {})",
            report.delta_count, report.affine_rank, report.closed_intersection
        )));
    }
    let patterns = compute_delta_set(inst)?;
    let (n, m) = (inst.n(), inst.m());
    let mut model = LpModel::new();
    let z_col: Vec<usize> = (0..n)
        .map(|j| model.add_var(format!("z{}", j + 1), None, None))
        .collect();
    let delta_col: Vec<usize> = (0..m)
        .map(|i| model.add_var(format!("d{}", i + 1), None, None))
        .collect();
    let lambda_col: Vec<usize> = (0..patterns.len())
        .map(|k| model.add_var(format!("lam{k}"), Some(rat(0)), None))
        .collect();
    let copy_col: Vec<Vec<usize>> = (0..patterns.len())
        .map(|k| {
            (0..n)
                .map(|j| model.add_var(format!("x{}_{}", k, j + 1), Some(rat(0)), None))
                .collect()
        })
        .collect();

    for (k, pattern) in patterns.iter().enumerate() {
        let d = decompose(inst, pattern)?;
        let lam = lambda_col[k];
        for j in d.j0.iter() {
            model.add_row(
                format!("blk{}-fix(j={})", k, j + 1),
                [copy_col[k][j]],
                rat(1),
                RowSense::Eq,
                rat(0),
            );
        }
        for (i, block) in &d.blocks {
            let mut terms: Vec<(usize, Rat)> =
                block.iter().map(|j| (copy_col[k][j], rat(1))).collect();
            terms.push((lam, rat(-1)));
            model.add_row_terms(
                format!("blk{}-hit(i={})", k, i + 1),
                terms,
                RowSense::Ge,
                rat(0),
            );
        }
        let card = |scale: i64| {
            let mut terms: Vec<(usize, Rat)> =
                (0..n).map(|j| (copy_col[k][j], rat(1))).collect();
            terms.push((lam, rat(-scale)));
            terms
        };
        model.add_row_terms(
            format!("blk{k}-card-lo"),
            card(inst.l() as i64),
            RowSense::Ge,
            rat(0),
        );
        model.add_row_terms(
            format!("blk{k}-card-up"),
            card(inst.u() as i64),
            RowSense::Le,
            rat(0),
        );
        for j in 0..n {
            model.add_row_terms(
                format!("blk{}-ub(j={})", k, j + 1),
                [(copy_col[k][j], rat(1)), (lam, rat(-1))],
                RowSense::Le,
                rat(0),
            );
        }
    }
    for j in 0..n {
        let mut terms: Vec<(usize, Rat)> = vec![(z_col[j], rat(1))];
        terms.extend((0..patterns.len()).map(|k| (copy_col[k][j], rat(-1))));
        model.add_row_terms(format!("link-z(j={})", j + 1), terms, RowSense::Eq, rat(0));
    }
    for i in 0..m {
        let mut terms: Vec<(usize, Rat)> = vec![(delta_col[i], rat(1))];
        terms.extend(
            patterns
                .iter()
                .enumerate()
                .filter(|(_, p)| p.get(i))
                .map(|(k, _)| (lambda_col[k], rat(-1))),
        );
        model.add_row_terms(format!("link-d(i={})", i + 1), terms, RowSense::Eq, rat(0));
    }
    model.add_row(
        "convexity",
        lambda_col.iter().copied(),
        rat(1),
        RowSense::Eq,
        rat(1),
    );

    Ok(ExtendedFormulation {
        model,
        z_col,
        delta_col,
        lambda_col,
        copy_col,
        patterns: patterns.iter().map(|p| p.bits().to_vec()).collect(),
    })
}

impl ExtendedFormulation {
    /// The canonical lift of a feasible binary point: its own pattern block
    /// carries the whole weight.
    pub fn lift_assignment(&self, inst: &Instance, point: &Point) -> Result<Vec<Rat>> {
        let bits: Vec<bool> = point.delta.iter().map(|v| v.is_one()).collect();
        let k = self
            .patterns
            .iter()
            .position(|p| *p == bits)
            .ok_or_else(|| Error::domain("point pattern is not realizable".to_string()))?;
        let mut x = vec![Rat::zero(); self.model.vars.len()];
        for j in 0..inst.n() {
            x[self.z_col[j]] = point.z[j].clone();
            x[self.copy_col[k][j]] = point.z[j].clone();
        }
        for i in 0..inst.m() {
            x[self.delta_col[i]] = point.delta[i].clone();
        }
        x[self.lambda_col[k]] = Rat::one();
        Ok(x)
    }

    /// Objective over `(z, delta)` expressed on model columns.
    pub fn objective_terms(&self, objective: &crate::instance::Objective) -> Vec<(usize, Rat)> {
        let mut terms = Vec::new();
        for (j, c) in objective.z.iter().enumerate() {
            if !c.is_zero() {
                terms.push((self.z_col[j], c.clone()));
            }
        }
        for (i, c) in objective.delta.iter().enumerate() {
            if !c.is_zero() {
                terms.push((self.delta_col[i], c.clone()));
            }
        }
        terms
    }
}

/// Decimal rendering when the denominator has only factors 2 and 5.
fn decimal_str(r: &Rat) -> Option<String> {
    use num_bigint::BigInt;
    let mut den = r.denom().clone();
    let mut pow10 = 0u32;
    for f in [2u32, 5u32] {
        let fb = BigInt::from(f);
        while (&den % &fb).is_zero() {
            den /= &fb;
            pow10 += 1;
        }
    }
    if den != BigInt::from(1) {
        return None;
    }
    if r.denom().is_one() {
        return Some(r.numer().to_string());
    }
    // scale to 10^k and place the decimal point
    let mut scaled = r.clone();
    let ten = rat(10);
    let mut k = 0u32;
    while !scaled.denom().is_one() {
        scaled *= &ten;
        k += 1;
        if k > pow10 * 2 + 4 {
            return None; // unreachable; defensive cap
        }
    }
    let digits = scaled.numer().magnitude().to_string();
    let neg = scaled.numer().is_negative();
    let k = k as usize;
    let whole_len = digits.len().saturating_sub(k);
    let (whole, frac) = if digits.len() > k {
        (digits[..whole_len].to_string(), digits[whole_len..].to_string())
    } else {
        ("0".to_string(), format!("{digits:0>k$}"))
    };
    let frac = frac.trim_end_matches('0');
    let body = if frac.is_empty() {
        whole
    } else {
        format!("{whole}.{frac}")
    };
    Some(if neg { format!("-{body}") } else { body })
}

fn lcm_of_denoms<'a>(vals: impl Iterator<Item = &'a Rat>) -> num_bigint::BigInt {
    use num_integer::Integer;
    let mut acc = num_bigint::BigInt::from(1);
    for v in vals {
        acc = acc.lcm(v.denom());
    }
    acc
}

fn fmt_terms(vars: &[VarDef], terms: &BTreeMap<usize, Rat>, render: impl Fn(&Rat) -> String) -> String {
    let mut out = String::new();
    for (idx, (&v, c)) in terms.iter().enumerate() {
        let mag = c.abs();
        let sign = if c.is_negative() {
            if idx == 0 {
                "- "
            } else {
                " - "
            }
        } else if idx == 0 {
            ""
        } else {
            " + "
        };
        out.push_str(sign);
        if !mag.is_one() {
            out.push_str(&render(&mag));
            out.push(' ');
        }
        out.push_str(&vars[v].name);
    }
    if terms.is_empty() {
        out.push('0');
    }
    out
}

/// Emits CPLEX-LP-format text with deterministic ordering.  Rows whose
/// rationals have finite decimal forms are printed as decimals; other rows
/// are scaled to integers.  Single-variable unit-coefficient rows fold into
/// the bounds section.  Objective coefficients must have finite decimal
/// forms (integer objectives in practice).
pub fn emit_lp(model: &LpModel, objective: &[(usize, Rat)], sense: ObjSense) -> Result<String> {
    use std::fmt::Write;

    for (v, _) in objective {
        if *v >= model.vars.len() {
            return Err(Error::domain(format!(
                "objective references undeclared variable column {v}"
            )));
        }
    }
    let mut out = String::new();
    out.push_str(match sense {
        ObjSense::Max => "Maximize\n",
        ObjSense::Min => "Minimize\n",
    });
    let obj_terms: BTreeMap<usize, Rat> = objective
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .cloned()
        .collect();
    for c in obj_terms.values() {
        if decimal_str(c).is_none() {
            return Err(Error::domain(format!(
                "objective coefficient {} has no finite decimal form; rescale the objective",
                rat::format_rat(c)
            )));
        }
    }
    writeln!(
        out,
        " obj: {}",
        fmt_terms(&model.vars, &obj_terms, |r| decimal_str(r).unwrap())
    )
    .unwrap();

    // fold unit singleton rows into bounds
    let mut lo: Vec<Option<Rat>> = model.vars.iter().map(|v| v.lo.clone()).collect();
    let mut hi: Vec<Option<Rat>> = model.vars.iter().map(|v| v.hi.clone()).collect();
    let mut printed_rows: Vec<&LpRow> = Vec::new();
    for row in &model.rows {
        let fold = if row.terms.len() == 1 {
            let (&v, c) = row.terms.iter().next().unwrap();
            if c.is_one() && decimal_str(&row.rhs).is_some() {
                Some((v, row.rhs.clone(), row.sense))
            } else {
                None
            }
        } else {
            None
        };
        match fold {
            Some((v, b, RowSense::Le)) => {
                if hi[v].as_ref().map_or(true, |cur| b < *cur) {
                    hi[v] = Some(b);
                }
            }
            Some((v, b, RowSense::Ge)) => {
                if lo[v].as_ref().map_or(true, |cur| b > *cur) {
                    lo[v] = Some(b);
                }
            }
            Some((v, b, RowSense::Eq)) => {
                lo[v] = Some(b.clone());
                hi[v] = Some(b);
            }
            None => printed_rows.push(row),
        }
    }

    out.push_str("Subject To\n");
    for (ridx, row) in printed_rows.iter().enumerate() {
        let name = if row.name.is_empty() {
            format!("c{}", ridx + 1)
        } else {
            row.name.clone()
        };
        let all_decimal = row
            .terms
            .values()
            .chain(std::iter::once(&row.rhs))
            .all(|r| decimal_str(r).is_some());
        let (terms, rhs): (BTreeMap<usize, Rat>, Rat) = if all_decimal {
            (row.terms.clone(), row.rhs.clone())
        } else {
            let scale = Rat::from_integer(lcm_of_denoms(
                row.terms.values().chain(std::iter::once(&row.rhs)),
            ));
            (
                row.terms
                    .iter()
                    .map(|(&v, c)| (v, c * &scale))
                    .collect(),
                &row.rhs * &scale,
            )
        };
        let op = match row.sense {
            RowSense::Le => "<=",
            RowSense::Ge => ">=",
            RowSense::Eq => "=",
        };
        writeln!(
            out,
            " {}: {} {} {}",
            name,
            fmt_terms(&model.vars, &terms, |r| decimal_str(r).unwrap()),
            op,
            decimal_str(&rhs).unwrap()
        )
        .unwrap();
    }

    out.push_str("Bounds\n");
    for (v, def) in model.vars.iter().enumerate() {
        let render = |r: &Rat| decimal_str(r).unwrap_or_else(|| rat::format_rat(r));
        match (&lo[v], &hi[v]) {
            (None, None) => writeln!(out, " {} free", def.name).unwrap(),
            (Some(a), None) => {
                if !a.is_zero() {
                    writeln!(out, " {} >= {}", def.name, render(a)).unwrap();
                }
            }
            (None, Some(b)) => writeln!(out, " -inf <= {} <= {}", def.name, render(b)).unwrap(),
            (Some(a), Some(b)) if a == b => {
                writeln!(out, " {} = {}", def.name, render(a)).unwrap()
            }
            (Some(a), Some(b)) => {
                writeln!(out, " {} <= {} <= {}", render(a), def.name, render(b)).unwrap()
            }
        }
    }
    out.push_str("End\n");
    Ok(out)
}
