//! Exact rational linear programming: a two-phase primal simplex with
//! Bland's anti-cycling rule over an integer-pivoting tableau, an
//! independent certificate checker, and the cutting-plane driver used by
//! the verification suites.
//!
//! The tableau keeps integer entries with one running denominator (the last
//! pivot element), so pivots cost two multiplications, one subtraction, and
//! one exact division per cell and entries stay bounded by minors of the
//! input data.  All comparisons reduce to integer sign tests and
//! cross-multiplications.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::extform::{LpModel, LpRow, RowSense};
use crate::instance::{Inequality, Instance, Objective, Point, Sense};
use crate::linearization::reduced_formulation;
use crate::rat::{rat, Rat};
use crate::separation::{separate_all, SeparationResult};

pub use crate::extform::ObjSense;

/// Solve status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// An exact solve outcome.  For `Optimal` the primal assignment is in model
/// space and `basis` lists the basic standard-form columns (row order),
/// which is enough to re-verify optimality independently.
#[derive(Clone, Debug)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: Rat,
    pub primal: Vec<Rat>,
    pub basis: Vec<usize>,
}

/// Where a standard-form column comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
enum ColOrigin {
    /// `x_v = lo_v + y`.
    Shifted { var: usize, lo: Rat },
    /// `x_v = hi_v - y`.
    NegShifted { var: usize, hi: Rat },
    /// Positive part of a free variable.
    Pos(usize),
    /// Negative part of a free variable.
    Neg(usize),
    /// Slack (`+1`) or surplus (`-1`) of a row.
    Slack { row: usize, sign: i8 },
}

/// Deterministic standard form `min c y, A y = b, y >= 0` with integer
/// data; shared by the solver and the certificate checker.
struct StandardForm {
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    c: Vec<BigInt>,
    cols: Vec<ColOrigin>,
    /// Objective constant from bound shifting (model scale).
    obj_const: Rat,
    /// The integer objective vector equals `c_scale` times the model
    /// objective on standard columns.
    c_scale: BigInt,
    /// Model-space objective direction already folded in: the standard form
    /// always minimizes.
    negate_value: bool,
    nrows: usize,
    /// Columns ineligible for entering (artificials after phase one).
    infeasible_bounds: bool,
}

fn rat_bigint(value: &Rat, scale: &BigInt) -> BigInt {
    // value * scale must be integral for callers below
    let scaled = value * Rat::from_integer(scale.clone());
    debug_assert!(scaled.denom().is_one());
    scaled.numer().clone()
}

fn build_standard_form(
    model: &LpModel,
    objective: &[(usize, Rat)],
    sense: ObjSense,
) -> Result<StandardForm> {
    let nvars = model.vars.len();
    for &(v, _) in objective {
        if v >= nvars {
            return Err(Error::domain(format!(
                "objective references undeclared variable column {v}"
            )));
        }
    }

    // presolve: fold unit-interval singleton rows into variable bounds
    let mut lo: Vec<Option<Rat>> = model.vars.iter().map(|v| v.lo.clone()).collect();
    let mut hi: Vec<Option<Rat>> = model.vars.iter().map(|v| v.hi.clone()).collect();
    let mut kept_rows: Vec<&LpRow> = Vec::new();
    for row in &model.rows {
        if row.terms.len() == 1 {
            let (&v, coeff) = row.terms.iter().next().unwrap();
            let bound = &row.rhs / coeff;
            let sense = if coeff.is_positive() {
                row.sense
            } else {
                match row.sense {
                    RowSense::Le => RowSense::Ge,
                    RowSense::Ge => RowSense::Le,
                    RowSense::Eq => RowSense::Eq,
                }
            };
            let tighten_lo = |lo: &mut Option<Rat>, b: &Rat| {
                if lo.as_ref().map_or(true, |cur| b > cur) {
                    *lo = Some(b.clone());
                }
            };
            let tighten_hi = |hi: &mut Option<Rat>, b: &Rat| {
                if hi.as_ref().map_or(true, |cur| b < cur) {
                    *hi = Some(b.clone());
                }
            };
            match sense {
                RowSense::Le => tighten_hi(&mut hi[v], &bound),
                RowSense::Ge => tighten_lo(&mut lo[v], &bound),
                RowSense::Eq => {
                    tighten_lo(&mut lo[v], &bound);
                    tighten_hi(&mut hi[v], &bound);
                }
            }
        } else {
            kept_rows.push(row);
        }
    }
    let mut infeasible_bounds = false;
    for v in 0..nvars {
        if let (Some(a), Some(b)) = (&lo[v], &hi[v]) {
            if a > b {
                infeasible_bounds = true;
            }
        }
    }

    // column layout per variable, in variable order
    let mut cols: Vec<ColOrigin> = Vec::new();
    let mut var_cols: Vec<Vec<usize>> = vec![Vec::new(); nvars];
    let mut upper_rows: Vec<(usize, Rat)> = Vec::new(); // (column, span)
    for v in 0..nvars {
        match (&lo[v], &hi[v]) {
            (Some(a), Some(b)) => {
                let col = cols.len();
                cols.push(ColOrigin::Shifted {
                    var: v,
                    lo: a.clone(),
                });
                var_cols[v].push(col);
                let span = b - a;
                upper_rows.push((col, span));
            }
            (Some(a), None) => {
                let col = cols.len();
                cols.push(ColOrigin::Shifted {
                    var: v,
                    lo: a.clone(),
                });
                var_cols[v].push(col);
            }
            (None, Some(b)) => {
                let col = cols.len();
                cols.push(ColOrigin::NegShifted {
                    var: v,
                    hi: b.clone(),
                });
                var_cols[v].push(col);
            }
            (None, None) => {
                let col = cols.len();
                cols.push(ColOrigin::Pos(v));
                cols.push(ColOrigin::Neg(v));
                var_cols[v].push(col);
                var_cols[v].push(col + 1);
            }
        }
    }
    let nstruct = cols.len();

    // substitute columns into rows; collect rational rows first
    struct RatRow {
        coeffs: Vec<(usize, Rat)>,
        sense: RowSense,
        rhs: Rat,
    }
    let mut rat_rows: Vec<RatRow> = Vec::new();
    for row in kept_rows {
        let mut coeffs: Vec<(usize, Rat)> = Vec::new();
        let mut rhs = row.rhs.clone();
        for (&v, c) in &row.terms {
            for &col in &var_cols[v] {
                match &cols[col] {
                    ColOrigin::Shifted { lo, .. } => {
                        coeffs.push((col, c.clone()));
                        rhs -= c * lo;
                    }
                    ColOrigin::NegShifted { hi, .. } => {
                        coeffs.push((col, -c.clone()));
                        rhs -= c * hi;
                    }
                    ColOrigin::Pos(_) => coeffs.push((col, c.clone())),
                    ColOrigin::Neg(_) => coeffs.push((col, -c.clone())),
                    _ => unreachable!(),
                }
            }
        }
        rat_rows.push(RatRow {
            coeffs,
            sense: row.sense,
            rhs,
        });
    }
    for (col, span) in upper_rows {
        rat_rows.push(RatRow {
            coeffs: vec![(col, rat(1))],
            sense: RowSense::Le,
            rhs: span,
        });
    }

    // integer objective over standard columns
    let mut c_rat = vec![Rat::zero(); nstruct];
    let mut obj_const = Rat::zero();
    let negate_value = sense == ObjSense::Max;
    for &(v, ref coeff) in objective {
        // standard form minimizes
        let c = if negate_value { -coeff.clone() } else { coeff.clone() };
        for &col in &var_cols[v] {
            match &cols[col] {
                ColOrigin::Shifted { lo, .. } => {
                    c_rat[col] += &c;
                    obj_const += &c * lo;
                }
                ColOrigin::NegShifted { hi, .. } => {
                    c_rat[col] -= &c;
                    obj_const += &c * hi;
                }
                ColOrigin::Pos(_) => c_rat[col] += &c,
                ColOrigin::Neg(_) => c_rat[col] -= &c,
                _ => unreachable!(),
            }
        }
    }
    let mut c_scale = BigInt::one();
    for c in &c_rat {
        c_scale = c_scale.lcm(c.denom());
    }
    let c: Vec<BigInt> = c_rat.iter().map(|v| rat_bigint(v, &c_scale)).collect();

    // clear each row to integers, normalize rhs >= 0, and append slack
    let nrows = rat_rows.len();
    let total_cols = nstruct + nrows; // at most one slack per row
    let mut a = vec![vec![BigInt::zero(); total_cols]; nrows];
    let mut b = vec![BigInt::zero(); nrows];
    let mut cols_full = cols;
    for _ in 0..nrows {
        cols_full.push(ColOrigin::Slack { row: usize::MAX, sign: 0 });
    }
    for (r, row) in rat_rows.iter().enumerate() {
        let mut scale = BigInt::one();
        for (_, c) in &row.coeffs {
            scale = scale.lcm(c.denom());
        }
        scale = scale.lcm(row.rhs.denom());
        let mut rhs_i = rat_bigint(&row.rhs, &scale);
        let mut sense = row.sense;
        let flip = rhs_i.is_negative();
        if flip {
            sense = match sense {
                RowSense::Le => RowSense::Ge,
                RowSense::Ge => RowSense::Le,
                RowSense::Eq => RowSense::Eq,
            };
            rhs_i = -rhs_i;
        }
        for (col, cf) in &row.coeffs {
            let mut v = rat_bigint(cf, &scale);
            if flip {
                v = -v;
            }
            a[r][*col] += v; // split columns may repeat a slot; accumulate
        }
        let slack_col = nstruct + r;
        let sign = match sense {
            RowSense::Le => 1i8,
            RowSense::Ge => -1i8,
            RowSense::Eq => 0i8,
        };
        if sign != 0 {
            a[r][slack_col] = BigInt::from(sign);
        }
        cols_full[slack_col] = ColOrigin::Slack { row: r, sign };
        b[r] = rhs_i;
    }

    Ok(StandardForm {
        a,
        b,
        c: {
            let mut full = c;
            full.resize(total_cols, BigInt::zero());
            full
        },
        cols: cols_full,
        obj_const,
        c_scale,
        negate_value,
        nrows,
        infeasible_bounds,
    })
}

/// Integer-pivoting simplex tableau with two carried cost rows.
struct Tableau {
    /// rows 0..nrows are constraints, row nrows is the phase-two cost row,
    /// row nrows+1 the phase-one cost row; the last column is the rhs.
    t: Vec<Vec<BigInt>>,
    q: BigInt,
    basis: Vec<usize>,
    nrows: usize,
    ncols: usize,
    first_artificial: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.ncols
    }

    fn pivot(&mut self, r: usize, c: usize) {
        debug_assert!(self.t[r][c].is_positive());
        let piv_row = self.t[r].clone();
        let piv = piv_row[c].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_zero() {
                // still rescale to the new shared denominator
                for cell in row.iter_mut() {
                    if !cell.is_zero() {
                        let num = &piv * &*cell;
                        debug_assert!((&num % &self.q).is_zero());
                        *cell = num / &self.q;
                    }
                }
            } else {
                for (j, cell) in row.iter_mut().enumerate() {
                    let num = &piv * &*cell - &factor * &piv_row[j];
                    debug_assert!((&num % &self.q).is_zero());
                    *cell = num / &self.q;
                }
            }
        }
        self.q = piv;
        self.basis[r] = c;
    }

    /// Bland entering rule on the given cost row over eligible columns.
    fn entering(&self, cost_row: usize, allow_artificial: bool) -> Option<usize> {
        (0..self.ncols).find(|&j| {
            (allow_artificial || j < self.first_artificial)
                && self.t[cost_row][j].is_negative()
                && !self.basis.contains(&j)
        })
    }

    /// Min-ratio leaving row for column `c`; ties to the smallest basic
    /// column index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let rhs = self.rhs_col();
        let mut best: Option<usize> = None;
        for i in 0..self.nrows {
            if !self.t[i][c].is_positive() {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(bi) => {
                    // compare b_i / a_ic with b_bi / a_bic by cross product
                    let lhs = &self.t[i][rhs] * &self.t[bi][c];
                    let rhs_v = &self.t[bi][rhs] * &self.t[i][c];
                    if lhs < rhs_v || (lhs == rhs_v && self.basis[i] < self.basis[bi]) {
                        best = Some(i);
                    }
                }
            }
        }
        best
    }

    fn run(&mut self, cost_row: usize, allow_artificial: bool) -> LpStatus {
        loop {
            let Some(c) = self.entering(cost_row, allow_artificial) else {
                return LpStatus::Optimal;
            };
            let Some(r) = self.leaving(c) else {
                return LpStatus::Unbounded;
            };
            self.pivot(r, c);
        }
    }
}

/// Exact two-phase primal simplex.  Returns the optimum with a re-checkable
/// basis, or the infeasible/unbounded status.
pub fn solve_lp(model: &LpModel, objective: &[(usize, Rat)], sense: ObjSense) -> Result<LpResult> {
    let sf = build_standard_form(model, objective, sense)?;
    if sf.infeasible_bounds {
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            value: Rat::zero(),
            primal: Vec::new(),
            basis: Vec::new(),
        });
    }
    let nrows = sf.nrows;
    let base_cols = sf.cols.len();
    let ncols = base_cols + nrows; // one artificial per row (often unused)
    let mut t = vec![vec![BigInt::zero(); ncols + 1]; nrows + 2];
    for r in 0..nrows {
        for j in 0..base_cols {
            t[r][j] = sf.a[r][j].clone();
        }
        t[r][base_cols + r] = BigInt::one();
        t[r][ncols] = sf.b[r].clone();
    }
    let cost2 = nrows;
    let cost1 = nrows + 1;
    for j in 0..base_cols {
        t[cost2][j] = sf.c[j].clone();
    }
    // initial basis: the row's own slack when it enters positively,
    // otherwise the artificial
    let mut basis = Vec::with_capacity(nrows);
    for r in 0..nrows {
        let slack_col = base_cols - nrows + r;
        let usable = matches!(&sf.cols[slack_col], ColOrigin::Slack { sign: 1, .. });
        basis.push(if usable { slack_col } else { base_cols + r });
    }
    // phase-one costs: one per artificial, priced out over the initial basis
    for r in 0..nrows {
        t[cost1][base_cols + r] = BigInt::one();
    }
    for r in 0..nrows {
        if basis[r] >= base_cols {
            let row = t[r].clone();
            for (j, cell) in t[cost1].iter_mut().enumerate() {
                *cell -= &row[j];
            }
        }
    }
    let mut tab = Tableau {
        t,
        q: BigInt::one(),
        basis,
        nrows,
        ncols,
        first_artificial: base_cols,
    };

    // phase one (bounded below by zero, so only Optimal can come back)
    let status = tab.run(cost1, false);
    if status != LpStatus::Optimal {
        return Err(Error::internal("phase one reported unbounded"));
    }
    let rhs = tab.rhs_col();
    if !tab.t[cost1][rhs].is_zero() {
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            value: Rat::zero(),
            primal: Vec::new(),
            basis: Vec::new(),
        });
    }
    // drive stuck artificials out where a positive pivot exists
    for r in 0..nrows {
        if tab.basis[r] >= base_cols {
            debug_assert!(tab.t[r][rhs].is_zero());
            if let Some(c) = (0..base_cols)
                .find(|&c| tab.t[r][c].is_positive() && !tab.basis.contains(&c))
            {
                tab.pivot(r, c);
            } else if (0..base_cols).any(|c| !tab.t[r][c].is_zero()) {
                // all-nonpositive degenerate row: the remaining columns are
                // forced to zero; unseen in well-posed inputs
                return Err(Error::internal(
                    "phase-one cleanup left a mixed-sign degenerate row",
                ));
            }
        }
    }

    // phase two
    let status = tab.run(cost2, false);
    if status == LpStatus::Unbounded {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            value: Rat::zero(),
            primal: Vec::new(),
            basis: Vec::new(),
        });
    }

    // extract primal in model space
    let q = Rat::from_integer(tab.q.clone());
    let mut std_val = vec![Rat::zero(); base_cols];
    for r in 0..nrows {
        if tab.basis[r] < base_cols {
            std_val[tab.basis[r]] = Rat::from_integer(tab.t[r][rhs].clone()) / &q;
        }
    }
    let mut primal = vec![Rat::zero(); model.vars.len()];
    for (col, origin) in sf.cols.iter().enumerate() {
        match origin {
            ColOrigin::Shifted { var, lo } => primal[*var] = lo + &std_val[col],
            ColOrigin::NegShifted { var, hi } => primal[*var] = hi - &std_val[col],
            ColOrigin::Pos(var) => primal[*var] += &std_val[col],
            ColOrigin::Neg(var) => primal[*var] -= &std_val[col],
            _ => {}
        }
    }
    let obj_std = -Rat::from_integer(tab.t[cost2][rhs].clone())
        / (&q * Rat::from_integer(sf.c_scale.clone()));
    let mut value = obj_std + &sf.obj_const;
    if sf.negate_value {
        value = -value;
    }
    Ok(LpResult {
        status: LpStatus::Optimal,
        value,
        primal,
        basis: tab.basis,
    })
}

/// Independent optimality check for a returned basis: rebuilds the standard
/// form, solves the basis system by Gaussian elimination (no pivoting code
/// shared with the simplex), and checks primal feasibility, the objective
/// value, and the sign of every reduced cost.
pub fn verify_certificate(
    model: &LpModel,
    objective: &[(usize, Rat)],
    sense: ObjSense,
    result: &LpResult,
) -> Result<()> {
    if result.status != LpStatus::Optimal {
        return Err(Error::domain("only optimal results carry certificates"));
    }
    let sf = build_standard_form(model, objective, sense)?;
    let nrows = sf.nrows;
    let base_cols = sf.cols.len();
    if result.basis.len() != nrows {
        return Err(Error::domain("basis size does not match row count"));
    }
    let col_vec = |j: usize| -> Vec<Rat> {
        (0..nrows)
            .map(|r| {
                if j < base_cols {
                    Rat::from_integer(sf.a[r][j].clone())
                } else {
                    // canonical artificial for row j - base_cols
                    if r == j - base_cols {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                }
            })
            .collect()
    };
    // x_B = B^{-1} b
    let bmat: Vec<Vec<Rat>> = result.basis.iter().map(|&j| col_vec(j)).collect();
    let bvec: Vec<Rat> = sf.b.iter().map(|v| Rat::from_integer(v.clone())).collect();
    let xb = gaussian_solve_columns(&bmat, &bvec)
        .ok_or_else(|| Error::domain("certificate basis is singular"))?;
    for v in &xb {
        if v.is_negative() {
            return Err(Error::domain("certificate basis is primal infeasible"));
        }
    }
    // artificial columns must sit at zero
    for (k, &j) in result.basis.iter().enumerate() {
        if j >= base_cols && !xb[k].is_zero() {
            return Err(Error::domain("artificial column active in certificate"));
        }
    }
    // y^T B = c_B  =>  reduced costs c_j - y^T A_j >= 0 for every real column
    let cost_of = |j: usize| -> Rat {
        if j < base_cols {
            Rat::from_integer(sf.c[j].clone())
        } else {
            Rat::zero()
        }
    };
    let cb: Vec<Rat> = result.basis.iter().map(|&j| cost_of(j)).collect();
    let bt: Vec<Vec<Rat>> = (0..nrows)
        .map(|r| (0..nrows).map(|k| bmat[k][r].clone()).collect())
        .collect();
    let y = gaussian_solve_columns(&bt, &cb)
        .ok_or_else(|| Error::domain("certificate basis is singular"))?;
    for j in 0..base_cols {
        let aj = col_vec(j);
        let mut reduced = cost_of(j);
        for r in 0..nrows {
            reduced -= &y[r] * &aj[r];
        }
        if reduced.is_negative() {
            return Err(Error::domain(format!(
                "negative reduced cost at standard column {j}"
            )));
        }
    }
    // objective value from the basic solution matches the reported value
    let mut obj = Rat::zero();
    for (k, _) in result.basis.iter().enumerate() {
        obj += &cb[k] * &xb[k];
    }
    let mut value = obj / Rat::from_integer(sf.c_scale.clone()) + &sf.obj_const;
    if sf.negate_value {
        value = -value;
    }
    if value != result.value {
        return Err(Error::domain(format!(
            "certificate value mismatch: basis gives {}, result says {}",
            crate::rat::format_rat(&value),
            crate::rat::format_rat(&result.value)
        )));
    }
    // and the reported primal satisfies the model itself
    if !model.is_feasible(&result.primal) {
        return Err(Error::domain("reported primal violates the model"));
    }
    Ok(())
}

/// Solves `M x = rhs` where `M` is given by columns; `None` when singular.
pub(crate) fn gaussian_solve_columns(columns: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rhs.len();
    if columns.len() != n {
        return None;
    }
    // dense row-major augmented matrix
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> = (0..n).map(|c| columns[c][r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let sub = &f * &m[col][j];
                    m[r][j] = &m[r][j] - sub;
                }
            }
        }
    }
    Some((0..n).map(|r| m[r][n].clone()).collect())
}

/// Converts generated inequalities into LP rows over the `(z, delta)`
/// variable layout (`z_j` at column `j`, `delta_i` at column `n + i`).
pub fn model_from_inequalities(inst: &Instance, rows: &[Inequality]) -> LpModel {
    let mut model = LpModel::new();
    for j in 0..inst.n() {
        model.add_var(format!("z{}", j + 1), None, None);
    }
    for i in 0..inst.m() {
        model.add_var(format!("d{}", i + 1), None, None);
    }
    for row in rows {
        append_inequality(inst, &mut model, row);
    }
    model
}

fn append_inequality(inst: &Instance, model: &mut LpModel, row: &Inequality) {
    let sense = match row.sense {
        Sense::Le => RowSense::Le,
        Sense::Ge => RowSense::Ge,
        Sense::Eq => RowSense::Eq,
    };
    let terms = row
        .alpha
        .iter()
        .map(|(&j, c)| (j, c.clone()))
        .chain(row.beta.iter().map(|(&i, c)| (inst.n() + i, c.clone())));
    model.add_row_terms(row.tag.clone(), terms, sense, row.gamma.clone());
}

/// One round of the cutting-plane log.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CutLogEntry {
    pub tag: String,
    #[serde(with = "crate::rat::serde_rat")]
    pub violation: Rat,
}

/// Outcome of the cutting-plane maximization.
#[derive(Clone, Debug)]
pub struct CuttingPlaneOutcome {
    pub value: Rat,
    pub point: Point,
    pub cuts: Vec<CutLogEntry>,
    pub lp_solves: usize,
}

/// Maximizes a linear objective over the nested-instance hull by repeated
/// exact LP solves, adding the most violated inequality from the finite
/// rows and both mixing families until none is violated.  Terminates
/// because every added cut strictly separates the current optimum and all
/// families are finite.
pub fn cutting_plane_maximize(inst: &Instance, objective: &Objective) -> Result<CuttingPlaneOutcome> {
    objective.check_dims(inst)?;
    let base = reduced_formulation(inst)?;
    let mut model = model_from_inequalities(inst, &base);
    let obj: Vec<(usize, Rat)> = objective
        .z
        .iter()
        .enumerate()
        .map(|(j, c)| (j, c.clone()))
        .chain(
            objective
                .delta
                .iter()
                .enumerate()
                .map(|(i, c)| (inst.n() + i, c.clone())),
        )
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let mut cuts = Vec::new();
    let mut lp_solves = 0usize;
    loop {
        let res = solve_lp(&model, &obj, ObjSense::Max)?;
        lp_solves += 1;
        if res.status != LpStatus::Optimal {
            return Err(Error::internal(format!(
                "cutting-plane relaxation reported {:?}",
                res.status
            )));
        }
        let point = Point {
            z: res.primal[..inst.n()].to_vec(),
            delta: res.primal[inst.n()..].to_vec(),
        };
        let sep: SeparationResult = separate_all(inst, &point)?;
        if !sep.found {
            return Ok(CuttingPlaneOutcome {
                value: res.value,
                point,
                cuts,
                lp_solves,
            });
        }
        let cut = sep.inequality.expect("found separation carries a cut");
        cuts.push(CutLogEntry {
            tag: cut.tag.clone(),
            violation: sep.violation.clone(),
        });
        append_inequality(inst, &mut model, &cut);
        if lp_solves > 10_000 {
            return Err(Error::internal("cutting-plane loop failed to terminate"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn solve_and_verify(
        model: &LpModel,
        obj: &[(usize, Rat)],
        sense: ObjSense,
    ) -> LpResult {
        let res = solve_lp(model, obj, sense).unwrap();
        if res.status == LpStatus::Optimal {
            verify_certificate(model, obj, sense, &res).unwrap();
        }
        res
    }

    #[test]
    fn single_variable_box() {
        let mut model = LpModel::new();
        let x = model.add_var("x", None, None);
        model.add_row("ub", [x], rat(1), RowSense::Le, rat(1));
        let res = solve_and_verify(&model, &[(x, rat(1))], ObjSense::Max);
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.value, rat(1));
        assert_eq!(res.primal[x], rat(1));
    }

    #[test]
    fn fractional_budget() {
        let mut model = LpModel::new();
        let x = model.add_var("x", Some(rat(0)), Some(rat(1)));
        let y = model.add_var("y", Some(rat(0)), Some(rat(1)));
        model.add_row("budget", [x, y], rat(1), RowSense::Le, ratio(3, 2));
        let res = solve_and_verify(&model, &[(x, rat(1)), (y, rat(1))], ObjSense::Max);
        assert_eq!(res.value, ratio(3, 2));
    }

    #[test]
    fn infeasible_pair() {
        let mut model = LpModel::new();
        let x = model.add_var("x", None, None);
        model.add_row("ge", [x], rat(1), RowSense::Ge, rat(2));
        model.add_row("le", [x], rat(1), RowSense::Le, rat(1));
        let res = solve_lp(&model, &[(x, rat(1))], ObjSense::Max).unwrap();
        assert_eq!(res.status, LpStatus::Infeasible);
        // the same pair through multi-term rows (no presolve folding)
        let mut model = LpModel::new();
        let x = model.add_var("x", None, None);
        let y = model.add_var("y", Some(rat(0)), None);
        model.add_row_terms("ge", [(x, rat(1)), (y, rat(1))], RowSense::Ge, rat(2));
        model.add_row_terms("le", [(x, rat(1)), (y, rat(1))], RowSense::Le, rat(1));
        let res = solve_lp(&model, &[(x, rat(1))], ObjSense::Max).unwrap();
        assert_eq!(res.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut model = LpModel::new();
        let x = model.add_var("x", Some(rat(0)), None);
        let y = model.add_var("y", Some(rat(0)), None);
        model.add_row_terms("tie", [(x, rat(1)), (y, rat(-1))], RowSense::Le, rat(0));
        let res = solve_lp(&model, &[(x, rat(1))], ObjSense::Max).unwrap();
        assert_eq!(res.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_rows_and_negatives() {
        // min x - y subject to x + y = 2, x - y >= -1, free vars
        let mut model = LpModel::new();
        let x = model.add_var("x", None, None);
        let y = model.add_var("y", None, None);
        model.add_row_terms("sum", [(x, rat(1)), (y, rat(1))], RowSense::Eq, rat(2));
        model.add_row_terms("diff", [(x, rat(1)), (y, rat(-1))], RowSense::Ge, rat(-1));
        let res = solve_and_verify(&model, &[(x, rat(1)), (y, rat(-1))], ObjSense::Min);
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.value, rat(-1));
        assert_eq!(res.primal[x], ratio(1, 2));
        assert_eq!(res.primal[y], ratio(3, 2));
    }

    #[test]
    fn degenerate_ties_terminate() {
        // heavily degenerate: many rows tight at the origin
        let mut model = LpModel::new();
        let x = model.add_var("x", Some(rat(0)), None);
        let y = model.add_var("y", Some(rat(0)), None);
        let z = model.add_var("z", Some(rat(0)), None);
        model.add_row_terms("r1", [(x, rat(1)), (y, rat(-1))], RowSense::Le, rat(0));
        model.add_row_terms("r2", [(y, rat(1)), (z, rat(-1))], RowSense::Le, rat(0));
        model.add_row_terms("r3", [(z, rat(1)), (x, rat(-1))], RowSense::Le, rat(0));
        model.add_row("cap", [x, y, z], rat(1), RowSense::Le, rat(3));
        let res = solve_and_verify(
            &model,
            &[(x, rat(1)), (y, rat(1)), (z, rat(1))],
            ObjSense::Max,
        );
        assert_eq!(res.value, rat(3));
    }

    #[test]
    fn rational_data_cleared_exactly() {
        // max (1/3)x + (1/7)y st (2/5)x + y <= 7/3, x <= 4, y >= 1/9
        let mut model = LpModel::new();
        let x = model.add_var("x", Some(rat(0)), Some(rat(4)));
        let y = model.add_var("y", Some(ratio(1, 9)), None);
        model.add_row_terms("mix", [(x, ratio(2, 5)), (y, rat(1))], RowSense::Le, ratio(7, 3));
        let res = solve_and_verify(
            &model,
            &[(x, ratio(1, 3)), (y, ratio(1, 7))],
            ObjSense::Max,
        );
        assert_eq!(res.status, LpStatus::Optimal);
        // optimum: x = 4, y = 7/3 - 8/5 = 11/15
        assert_eq!(res.primal[x], rat(4));
        assert_eq!(res.primal[y], ratio(11, 15));
        assert_eq!(res.value, ratio(4, 3) + ratio(11, 105));
    }

    #[test]
    fn cutting_plane_examples() {
        let inst = Instance::new(5, 1, 3, &[vec![1, 2], vec![1, 2, 3]]).unwrap();
        let ones = Objective {
            z: vec![rat(1); 5],
            delta: vec![rat(0); 2],
        };
        let out = cutting_plane_maximize(&inst, &ones).unwrap();
        assert_eq!(out.value, rat(3));

        let deltas = Objective {
            z: vec![rat(0); 5],
            delta: vec![rat(1); 2],
        };
        let out = cutting_plane_maximize(&inst, &deltas).unwrap();
        assert_eq!(out.value, rat(2));

        let neg = Objective {
            z: vec![rat(-1); 5],
            delta: vec![rat(0); 2],
        };
        let out = cutting_plane_maximize(&inst, &neg).unwrap();
        assert_eq!(out.value, rat(-1));
    }
}
