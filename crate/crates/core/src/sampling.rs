//! Seeded random generators for the verification suites: nested and
//! general instances, integer objectives, box points, and hull points.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, Objective, Point};
use crate::rat::{rat, ratio, Rat};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nested instance in the non-degenerate regime: strict chain,
/// `|S_1| >= 2`, `u >= 2`, `l < u`, `l <= n - |S_m|`.
pub fn nested_instance(rng: &mut ChaCha8Rng, n_max: usize, m_max: usize) -> Instance {
    loop {
        let n = rng.random_range(4..=n_max.max(4));
        let m = rng.random_range(1..=m_max.max(1));
        if n < m + 2 {
            continue;
        }
        // distinct sizes 2 <= k_1 < ... < k_m <= n - 1
        let mut sizes: Vec<usize> = (2..n).collect();
        sizes.shuffle(rng);
        if sizes.len() < m {
            continue;
        }
        sizes.truncate(m);
        sizes.sort_unstable();
        let mut ground: Vec<usize> = (1..=n).collect();
        ground.shuffle(rng);
        let sets: Vec<Vec<usize>> = sizes.iter().map(|&k| ground[..k].to_vec()).collect();
        let l = rng.random_range(0..=n - sizes[m - 1]);
        let u = rng.random_range((l + 1).max(2)..=n);
        if let Ok(inst) = Instance::new(n, l, u, &sets) {
            debug_assert!(inst.is_nested());
            return inst;
        }
    }
}

/// A random family that is not totally ordered by inclusion, with arbitrary
/// feasible bounds.
pub fn general_instance(rng: &mut ChaCha8Rng, n_max: usize, m_max: usize) -> Instance {
    loop {
        let n = rng.random_range(4..=n_max.max(4));
        let m = rng.random_range(2..=m_max.max(2));
        let mut masks: Vec<u64> = Vec::new();
        let mut tries = 0;
        while masks.len() < m && tries < 200 {
            tries += 1;
            let mask = rng.random_range(1..(1u64 << n));
            if !masks.contains(&mask) {
                masks.push(mask);
            }
        }
        if masks.len() < m {
            continue;
        }
        let chain = {
            let mut sorted = masks.clone();
            sorted.sort_by_key(|mm| mm.count_ones());
            sorted.windows(2).all(|w| w[0] & !w[1] == 0)
        };
        if chain {
            continue;
        }
        let l = rng.random_range(0..=n - 1);
        let u = rng.random_range(l..=n);
        let sets: Vec<Vec<usize>> = masks
            .iter()
            .map(|&mask| (0..n).filter(|j| mask & (1 << j) != 0).map(|j| j + 1).collect())
            .collect();
        if let Ok(inst) = Instance::new(n, l, u, &sets) {
            return inst;
        }
    }
}

/// Integer objective with entries in `[lo, hi]`.
pub fn integer_objective(rng: &mut ChaCha8Rng, inst: &Instance, lo: i64, hi: i64) -> Objective {
    Objective {
        z: (0..inst.n()).map(|_| rat(rng.random_range(lo..=hi))).collect(),
        delta: (0..inst.m()).map(|_| rat(rng.random_range(lo..=hi))).collect(),
    }
}

/// A point with rational entries in `[0, 1]` (denominators up to 6).
pub fn box_point(rng: &mut ChaCha8Rng, inst: &Instance) -> Point {
    let coord = |rng: &mut ChaCha8Rng| {
        let den = rng.random_range(1..=6i64);
        let num = rng.random_range(0..=den);
        ratio(num, den)
    };
    Point {
        z: (0..inst.n()).map(|_| coord(rng)).collect(),
        delta: (0..inst.m()).map(|_| coord(rng)).collect(),
    }
}

/// A random rational convex combination of up to four feasible points.
pub fn hull_point(rng: &mut ChaCha8Rng, points: &[Point]) -> Point {
    let k = rng.random_range(1..=4usize.min(points.len()));
    let picks: Vec<&Point> = (0..k)
        .map(|_| &points[rng.random_range(0..points.len())])
        .collect();
    let weights: Vec<Rat> = (0..k).map(|_| rat(rng.random_range(1..=5))).collect();
    let total: Rat = crate::rat::rat_sum(weights.iter());
    let n = picks[0].z.len();
    let m = picks[0].delta.len();
    let mut z = vec![Rat::zero(); n];
    let mut delta = vec![Rat::zero(); m];
    for (pt, w) in picks.iter().zip(&weights) {
        let lam = w / &total;
        for j in 0..n {
            z[j] += &lam * &pt.z[j];
        }
        for i in 0..m {
            delta[i] += &lam * &pt.delta[i];
        }
    }
    Point { z, delta }
}
