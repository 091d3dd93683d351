//! Sequentially lifted valid inequalities for general (not necessarily
//! nested) families.  The caller picks the lifting order; a greedy order
//! heuristic is provided but nothing prescribes it.

use crate::error::{Error, Result};
use crate::indexset::IndexSet;
use crate::instance::{Inequality, Instance, Sense};
use crate::rat::rat;

fn check_order(inst: &Instance, order: &[usize]) -> Result<()> {
    if order.is_empty() {
        return Err(Error::domain("lifting order must name at least one set"));
    }
    for &i in order {
        if i == 0 || i > inst.m() {
            return Err(Error::domain(format!(
                "lifting order entry {i} outside the family range 1..={}",
                inst.m()
            )));
        }
    }
    for (a, &i) in order.iter().enumerate() {
        if order.iter().skip(a + 1).any(|&k| k == i) {
            return Err(Error::domain(format!("duplicate index {i} in lifting order")));
        }
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

fn order_tag(order: &[usize]) -> String {
    let parts: Vec<String> = order.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Upper lifted inequality for a lifting order `S_[1], ..., S_[t]`
/// (1-based family indices) and a subset `S'`:
///
/// ```text
/// sum_{j in S'} z_j + (u - |S'\S_[1]|) d_[1]
///   + sum_{i=2}^t |S' n S_[i] \ union of earlier| d_[i]  <=  u
/// ```
///
/// valid provided `|S' \ (S_[1] n S_[i])| <= u` for every `i >= 2`.
pub fn lifted_upper(inst: &Instance, order: &[usize], s_prime: &IndexSet) -> Result<Inequality> {
    check_order(inst, order)?;
    check_sprime(inst, s_prime)?;
    let u = inst.u() as i64;
    let first = inst.set(order[0] - 1);
    for (k, &i) in order.iter().enumerate().skip(1) {
        let escaped = s_prime.minus(&first.intersect(inst.set(i - 1))).card() as i64;
        if escaped > u {
            return Err(Error::domain(format!(
                "|S'\\(S_[1] n S_[{}])| = {escaped} exceeds u = {u} (order position {})",
                k + 1,
                k + 1
            )));
        }
    }
    let mut beta = vec![(order[0] - 1, rat(u - s_prime.minus(first).card() as i64))];
    let mut prefix = first.clone();
    for &i in order.iter().skip(1) {
        let gain = s_prime.intersect(inst.set(i - 1)).minus(&prefix).card();
        beta.push((i - 1, rat(gain as i64)));
        prefix = prefix.union(inst.set(i - 1));
    }
    Ok(Inequality::new(
        s_prime.iter().map(|j| (j, rat(1))),
        beta,
        rat(u),
        Sense::Le,
        format!("lift-upper(order={},S'={s_prime})", order_tag(order)),
    ))
}

/// Lower lifted inequality for a lifting order and subset, in `<=` form:
///
/// ```text
/// -sum_{j in S'} z_j + (|S' u S_[1]| - n + l) d_[1]
///   + sum_{i=2}^t |S_[i] \ union of earlier \ S'| d_[i]  <=  0
/// ```
///
/// valid provided `|S' u (S_[1] n S_[i])| >= n - l` for every `i >= 2`.
pub fn lifted_lower(inst: &Instance, order: &[usize], s_prime: &IndexSet) -> Result<Inequality> {
    check_order(inst, order)?;
    check_sprime(inst, s_prime)?;
    let nl = (inst.n() - inst.l()) as i64;
    let first = inst.set(order[0] - 1);
    for (k, &i) in order.iter().enumerate().skip(1) {
        let covered = s_prime.union(&first.intersect(inst.set(i - 1))).card() as i64;
        if covered < nl {
            return Err(Error::domain(format!(
                "|S' u (S_[1] n S_[{}])| = {covered} is below n - l = {nl} (order position {})",
                k + 1,
                k + 1
            )));
        }
    }
    let mut beta = vec![(order[0] - 1, rat(s_prime.union(first).card() as i64 - nl))];
    let mut prefix = first.clone();
    for &i in order.iter().skip(1) {
        let gain = inst.set(i - 1).minus(&prefix).minus(s_prime).card();
        beta.push((i - 1, rat(gain as i64)));
        prefix = prefix.union(inst.set(i - 1));
    }
    Ok(Inequality::new(
        s_prime.iter().map(|j| (j, rat(-1))),
        beta,
        rat(0),
        Sense::Le,
        format!("lift-lower(order={},S'={s_prime})", order_tag(order)),
    ))
}

/// Greedy order heuristic: starting from a chosen first set, repeatedly
/// append the set with the largest next lifted coefficient.  Heuristic
/// only; nothing prescribes an order and the caller may supply any.
pub fn suggest_order_upper(inst: &Instance, first: usize, s_prime: &IndexSet) -> Result<Vec<usize>> {
    check_order(inst, &[first])?;
    check_sprime(inst, s_prime)?;
    let mut order = vec![first];
    let mut prefix = inst.set(first - 1).clone();
    let mut remaining: Vec<usize> = (1..=inst.m()).filter(|&i| i != first).collect();
    while !remaining.is_empty() {
        let (pos, best) = remaining
            .iter()
            .enumerate()
            .max_by_key(|&(_, &i)| {
                (
                    s_prime.intersect(inst.set(i - 1)).minus(&prefix).card(),
                    std::cmp::Reverse(i),
                )
            })
            .map(|(pos, &i)| (pos, i))
            .unwrap();
        if s_prime.intersect(inst.set(best - 1)).minus(&prefix).card() == 0 {
            break; // remaining coefficients are all zero
        }
        remaining.remove(pos);
        prefix = prefix.union(inst.set(best - 1));
        order.push(best);
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::enumerate_points;
    use crate::mixing::{mixing_lower, mixing_upper};

    fn inst_a() -> Instance {
        Instance::new(5, 1, 3, &[vec![1, 2], vec![1, 2, 3]]).unwrap()
    }

    fn inst_b() -> Instance {
        Instance::new(5, 0, 3, &[vec![1, 2], vec![3, 4], vec![1, 2, 3, 4]]).unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::from_1based(v, 64).unwrap()
    }

    #[test]
    fn upper_examples() {
        let b = inst_b();
        let q = lifted_upper(&b, &[1, 2], &set(&[1, 2, 3])).unwrap();
        assert_eq!(q.alpha.len(), 3);
        assert_eq!(q.beta.get(&0), Some(&rat(2)));
        assert_eq!(q.beta.get(&1), Some(&rat(1)));
        assert_eq!(q.gamma, rat(3));

        // S_1 and S_2 are disjoint, so S'\(S_1 n S_2) = S' is too large
        let err = lifted_upper(&b, &[1, 2], &set(&[1, 2, 3, 4, 5])).unwrap_err();
        assert!(err.to_string().contains("exceeds u"), "{err}");

        assert!(lifted_upper(&b, &[1, 1], &set(&[1])).is_err());
        assert!(lifted_upper(&b, &[4], &set(&[1])).is_err());
    }

    #[test]
    fn lower_examples() {
        // inst_b with l = 3: n - l = 2
        let b = Instance::new(5, 3, 4, &[vec![1, 2], vec![3, 4], vec![1, 2, 3, 4]]).unwrap();
        let q = lifted_lower(&b, &[1, 3], &set(&[5])).unwrap();
        assert_eq!(q.alpha.get(&4), Some(&rat(-1)));
        assert_eq!(q.beta.get(&0), Some(&rat(1))); // |S' u S_1| - (n-l) = 3 - 2
        assert_eq!(q.beta.get(&2), Some(&rat(2))); // |S_3 \ S_1 \ S'| = 2
        assert_eq!(q.gamma, rat(0));

        let b0 = inst_b();
        let err = lifted_lower(&b0, &[1, 2], &set(&[5])).unwrap_err();
        assert!(err.to_string().contains("below n - l"), "{err}");
    }

    #[test]
    fn nested_orders_reproduce_mixing_coefficients() {
        let a = inst_a();
        for p in 1..=a.m() {
            let order: Vec<usize> = (p..=a.m()).collect();
            for mask in 0u64..(1 << a.n()) {
                let sp = IndexSet::from_mask(mask);
                if let Ok(mix) = mixing_upper(&a, p, &sp) {
                    let lift = lifted_upper(&a, &order, &sp).unwrap();
                    assert_eq!(lift.alpha, mix.alpha, "upper p={p} S'={sp}");
                    assert_eq!(lift.beta, mix.beta, "upper p={p} S'={sp}");
                    assert_eq!(lift.gamma, mix.gamma, "upper p={p} S'={sp}");
                }
                if let Ok(mix) = mixing_lower(&a, p, &sp) {
                    let lift = lifted_lower(&a, &order, &sp).unwrap();
                    assert_eq!(lift.alpha, mix.alpha, "lower p={p} S'={sp}");
                    assert_eq!(lift.beta, mix.beta, "lower p={p} S'={sp}");
                    assert_eq!(lift.gamma, mix.gamma, "lower p={p} S'={sp}");
                }
            }
        }
        // the spec'd single cases
        let lift = lifted_upper(&a, &[1, 2], &set(&[1, 2, 4, 5])).unwrap();
        let mix = mixing_upper(&a, 1, &set(&[1, 2, 4, 5])).unwrap();
        assert_eq!((lift.alpha, lift.beta, lift.gamma), (mix.alpha, mix.beta, mix.gamma));
        let lift = lifted_lower(&a, &[1, 2], &set(&[3, 4, 5])).unwrap();
        let mix = mixing_lower(&a, 1, &set(&[3, 4, 5])).unwrap();
        assert_eq!((lift.alpha, lift.beta, lift.gamma), (mix.alpha, mix.beta, mix.gamma));
    }

    #[test]
    fn generated_inequalities_are_valid_and_prefixes_too() {
        let b = inst_b();
        let points = enumerate_points(&b).unwrap();
        let orders: [&[usize]; 4] = [&[1, 2], &[1, 2, 3], &[3, 1], &[2, 3, 1]];
        for order in orders {
            for mask in 0u64..(1 << b.n()) {
                let sp = IndexSet::from_mask(mask);
                for t in 1..=order.len() {
                    let prefix = &order[..t];
                    if let Ok(q) = lifted_upper(&b, prefix, &sp) {
                        for p in &points {
                            assert!(q.is_satisfied_by(p), "{q:?} at {p:?}");
                        }
                    }
                    if let Ok(q) = lifted_lower(&b, prefix, &sp) {
                        for p in &points {
                            assert!(q.is_satisfied_by(p), "{q:?} at {p:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_heuristic_is_well_formed() {
        let b = inst_b();
        let order = suggest_order_upper(&b, 1, &set(&[1, 2, 3])).unwrap();
        assert_eq!(order[0], 1);
        let q = lifted_upper(&b, &order, &set(&[1, 2, 3]));
        assert!(q.is_ok());
    }
}
