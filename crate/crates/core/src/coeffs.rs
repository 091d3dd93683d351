//! Inequality completion from a z-side coefficient vector: per-fiber greedy
//! maxima, the pattern-matrix solve, and sign/order pattern predicates.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{compute_delta_set, decompose, is_proper, DeltaPattern};
use crate::instance::{Inequality, Instance, Sense};
use crate::rat::{rat, Rat};

/// Per-pattern maxima of `alpha^T z` over the fibers, indexed by the
/// canonical pattern order.
#[derive(Clone, Debug)]
pub struct NuVector {
    pub patterns: Vec<DeltaPattern>,
    pub values: Vec<Rat>,
}

fn require_proper(inst: &Instance, what: &str) -> Result<()> {
    let report = is_proper(inst)?;
    if !report.is_proper {
        return Err(Error::domain(format!(
            "{what} requires a proper family (delta_count = {}, affine_rank = {}, \
             closed_intersection = {})",
            report.delta_count, report.affine_rank, report.closed_intersection
        )));
    }
    Ok(())
}

fn check_alpha(inst: &Instance, alpha: &[Rat]) -> Result<()> {
    if alpha.len() != inst.n() {
        return Err(Error::domain(format!(
            "alpha length {} does not match n = {}",
            alpha.len(),
            inst.n()
        )));
    }
    Ok(())
}

/// Maximum of `alpha^T z` over one fiber, by the exchange-argument greedy:
/// take the best member of each minimal block, then pad with the largest
/// remaining coefficients — at least `max(l - |I*|, 0)` of them regardless
/// of sign, and more only while they are positive and the budget `u - |I*|`
/// allows.  Ties break to the lowest index.
pub fn fiber_max(inst: &Instance, pattern: &DeltaPattern, alpha: &[Rat]) -> Result<Rat> {
    check_alpha(inst, alpha)?;
    let d = decompose(inst, pattern)?;
    let mut value = Rat::zero();
    let mut chosen = vec![false; inst.n()];
    for (_, block) in &d.blocks {
        let best = block
            .iter()
            .max_by(|&a, &b| alpha[a].cmp(&alpha[b]).then(b.cmp(&a)))
            .expect("fiber blocks are nonempty");
        chosen[best] = true;
        value += &alpha[best];
    }
    let picked = d.blocks.len();
    let mut pool: Vec<usize> = (0..inst.n())
        .filter(|&j| !d.j0.contains(j) && !chosen[j])
        .collect();
    pool.sort_by(|&a, &b| alpha[b].cmp(&alpha[a]).then(a.cmp(&b)));
    let forced = inst.l().saturating_sub(picked);
    let budget = inst.u() - picked;
    for (k, &j) in pool.iter().enumerate() {
        if k < forced || (k < budget && alpha[j].is_positive()) {
            value += &alpha[j];
        } else {
            break;
        }
    }
    Ok(value)
}

/// The per-pattern maxima for every realizable pattern, canonical order.
/// Requires a proper family so the vector has `m + 1` entries.
pub fn nu(inst: &Instance, alpha: &[Rat]) -> Result<NuVector> {
    require_proper(inst, "the per-pattern maxima vector")?;
    check_alpha(inst, alpha)?;
    let patterns = compute_delta_set(inst)?;
    let values = patterns
        .iter()
        .map(|p| fiber_max(inst, p, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(NuVector { patterns, values })
}

/// Completes `alpha` into the valid inequality
/// `alpha^T z + beta^T delta <= gamma` that is tight on every fiber, by
/// solving the pattern system: row `k` reads
/// `gamma - beta^T pattern_k = nu_k`.
pub fn complete_inequality(inst: &Instance, alpha: &[Rat]) -> Result<Inequality> {
    let nu = nu(inst, alpha)?;
    let m = inst.m();
    // columns of the (m+1) x (m+1) system [1 | -pattern] (gamma; beta)
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    columns.push(vec![rat(1); nu.patterns.len()]);
    for i in 0..m {
        columns.push(
            nu.patterns
                .iter()
                .map(|p| if p.get(i) { rat(-1) } else { rat(0) })
                .collect(),
        );
    }
    let solution = crate::ratlp::gaussian_solve_columns(&columns, &nu.values)
        .ok_or_else(|| Error::internal("pattern matrix is singular for a proper family"))?;
    let gamma = solution[0].clone();
    let beta = solution[1..].iter().cloned().enumerate();
    Ok(Inequality::new(
        alpha
            .iter()
            .enumerate()
            .map(|(j, c)| (j, c.clone()))
            .filter(|(_, c)| !c.is_zero()),
        beta,
        gamma,
        Sense::Le,
        "completion",
    ))
}

/// Whether `alpha_prime` follows the sign-and-order pattern of `alpha`:
/// zero coefficients stay zero, signs are preserved, and the weak order of
/// coefficients is preserved (equal entries must stay equal; a strictly
/// larger entry may not become strictly smaller).
pub fn follows_pattern(alpha_prime: &[Rat], alpha: &[Rat]) -> bool {
    if alpha_prime.len() != alpha.len() {
        return false;
    }
    for (a, ap) in alpha.iter().zip(alpha_prime) {
        if !a.is_negative() && ap.is_negative() {
            return false;
        }
        if !a.is_positive() && ap.is_positive() {
            return false;
        }
    }
    let n = alpha.len();
    for j1 in 0..n {
        for j2 in 0..n {
            if alpha[j1] >= alpha[j2] && alpha_prime[j1] < alpha_prime[j2] {
                return false;
            }
        }
    }
    true
}
