//! Nonnegative weights on dyadic intervals satisfying the Carleson packing
//! condition `Σ_{J ⊆ I} λ_J ≤ |I|`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{DyadicStepFunction, MAX_LEVEL};
use crate::error::{domain, Error, Result};
use crate::fmath::powf;

/// Absolute tolerance of the packing and total-mass checks.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Damping of the generator: a node takes at most this fraction of its budget.
pub const DAMPING: f64 = 0.5;

/// The dyadic interval `[index 2^{-level}, (index+1) 2^{-level})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub level: u32,
    pub index: usize,
}

impl Node {
    pub const ROOT: Node = Node { level: 0, index: 0 };

    pub fn measure(&self) -> f64 {
        1.0 / (1usize << self.level) as f64
    }
}

/// Weights `λ_I` on all dyadic nodes down to `max_level`, with total `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CarlesonWeights {
    k: f64,
    // levels[j][i] = λ at Node { level: j, index: i }
    levels: Vec<Vec<f64>>,
}

impl CarlesonWeights {
    /// Validates nonnegativity, packing at every node and `Σ λ = k`.
    pub fn new(k: f64, levels: Vec<Vec<f64>>) -> Result<Self> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(domain("Carleson total", k, "0 < k <= 1"));
        }
        if levels.is_empty() || levels.len() as u32 > MAX_LEVEL + 1 {
            return Err(Error::InvalidWeights("between 1 and MAX_LEVEL + 1 levels required"));
        }
        for (j, row) in levels.iter().enumerate() {
            if row.len() != 1usize << j {
                return Err(Error::InvalidWeights("level j must hold 2^j weights"));
            }
            if row.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
                return Err(Error::InvalidWeights("weights must be finite and nonnegative"));
            }
        }
        let w = CarlesonWeights { k, levels };
        let sums = w.subtree_sums();
        for (j, row) in sums.iter().enumerate() {
            let mu = 1.0 / (1usize << j) as f64;
            if row.iter().any(|s| *s > mu + WEIGHT_TOL) {
                return Err(Error::InvalidWeights("packing condition violated"));
            }
        }
        if (sums[0][0] - k).abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights("total weight differs from k"));
        }
        Ok(w)
    }

    /// `λ_X = k` and all other weights zero.
    pub fn root_only(max_level: u32, k: f64) -> Result<Self> {
        let mut levels: Vec<Vec<f64>> = (0..=max_level).map(|j| alloc::vec![0.0; 1usize << j]).collect();
        levels[0][0] = k;
        Self::new(k, levels)
    }

    /// Weights given as `(node, λ)` pairs; unspecified nodes are zero.
    pub fn from_entries(max_level: u32, k: f64, entries: &[(Node, f64)]) -> Result<Self> {
        if max_level > MAX_LEVEL {
            return Err(Error::Parameter("dyadic level above MAX_LEVEL"));
        }
        let mut levels: Vec<Vec<f64>> = (0..=max_level).map(|j| alloc::vec![0.0; 1usize << j]).collect();
        for (node, lambda) in entries {
            if node.level > max_level || node.index >= 1usize << node.level {
                return Err(Error::InvalidWeights("node outside the tree"));
            }
            levels[node.level as usize][node.index] += lambda;
        }
        Self::new(k, levels)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn weight(&self, node: Node) -> f64 {
        self.levels
            .get(node.level as usize)
            .and_then(|row| row.get(node.index))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.levels.iter().flatten().sum()
    }

    /// Nonzero weights in level-major order.
    pub fn entries(&self) -> impl Iterator<Item = (Node, f64)> + '_ {
        self.levels.iter().enumerate().flat_map(|(j, row)| {
            row.iter().enumerate().filter(|(_, w)| **w > 0.0).map(move |(i, w)| {
                (
                    Node {
                        level: j as u32,
                        index: i,
                    },
                    *w,
                )
            })
        })
    }

    /// `Σ_{J ⊆ I} λ_J` for every node `I`.
    pub fn subtree_sums(&self) -> Vec<Vec<f64>> {
        let mut sums = self.levels.clone();
        for j in (0..sums.len() - 1).rev() {
            let (upper, lower) = sums.split_at_mut(j + 1);
            for (i, s) in upper[j].iter_mut().enumerate() {
                *s += lower[0][2 * i] + lower[0][2 * i + 1];
            }
        }
        sums
    }
}

/// `Σ_I λ_I (Av_I φ)^p`. The function is refined if it is coarser than the
/// weights.
pub fn carleson_sum(phi: &DyadicStepFunction, weights: &CarlesonWeights, p: f64) -> Result<f64> {
    let phi = if phi.level() < weights.max_level() {
        phi.refine(weights.max_level())?
    } else {
        phi.clone()
    };
    let pyramid = phi.average_pyramid();
    let mut total = 0.0;
    for (j, row) in weights.levels.iter().enumerate() {
        for (i, lambda) in row.iter().enumerate() {
            if *lambda > 0.0 {
                total += lambda * powf(pyramid[j][i], p);
            }
        }
    }
    Ok(total)
}

/// A seeded random admissible family with total `k`.
///
/// Top-down, each node takes a uniform fraction of `DAMPING` times its
/// budget, and its children split the remainder. The family is then
/// rescaled down if it overshoots `k`, or topped up at the deepest nodes with
/// room left along their ancestor path. `λ_X = k` is the fallback.
pub fn random_admissible_weights(max_level: u32, k: f64, seed: u64) -> Result<CarlesonWeights> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(domain("Carleson total", k, "0 < k <= 1"));
    }
    if max_level > MAX_LEVEL {
        return Err(Error::Parameter("dyadic level above MAX_LEVEL"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = max_level as usize + 1;
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(depth);
    let mut caps = alloc::vec![1.0];
    for j in 0..depth {
        let mut row = Vec::with_capacity(caps.len());
        let mut next = Vec::with_capacity(2 * caps.len());
        for cap in &caps {
            let lambda = rng.random::<f64>() * DAMPING * cap;
            row.push(lambda);
            if j + 1 < depth {
                let child = 0.5 * (cap - lambda);
                next.push(child);
                next.push(child);
            }
        }
        levels.push(row);
        caps = next;
    }

    let total: f64 = levels.iter().flatten().sum();
    if total > k {
        let s = k / total;
        levels.iter_mut().flatten().for_each(|w| *w *= s);
    } else if total < k {
        top_up(&mut levels, k - total);
    }
    let total: f64 = levels.iter().flatten().sum();
    // absorb the rounding of the running sums at the root
    levels[0][0] = (levels[0][0] + (k - total)).max(0.0);
    CarlesonWeights::new(k, levels).or_else(|_| CarlesonWeights::root_only(max_level, k))
}

fn top_up(levels: &mut [Vec<f64>], mut deficit: f64) {
    let mut sums = CarlesonWeights {
        k: 1.0,
        levels: levels.to_vec(),
    }
    .subtree_sums();
    for j in (0..levels.len()).rev() {
        for i in 0..levels[j].len() {
            if deficit <= 0.0 {
                return;
            }
            let mut room = f64::INFINITY;
            for up in 0..=j {
                let idx = i >> (j - up);
                let mu = 1.0 / (1usize << up) as f64;
                room = room.min(mu - sums[up][idx]);
            }
            let add = deficit.min(room.max(0.0));
            if add > 0.0 {
                levels[j][i] += add;
                for up in 0..=j {
                    sums[up][i >> (j - up)] += add;
                }
                deficit -= add;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn packing_oracle(w: &CarlesonWeights) -> bool {
        // direct sum over descendants, node by node
        let max = w.max_level();
        for j in 0..=max {
            for i in 0..1usize << j {
                let mut s = 0.0;
                for jj in j..=max {
                    let span = 1usize << (jj - j);
                    for ii in i * span..(i + 1) * span {
                        s += w.weight(Node { level: jj, index: ii });
                    }
                }
                if s > (Node { level: j, index: i }).measure() + WEIGHT_TOL {
                    return false;
                }
            }
        }
        (w.total() - w.k()).abs() <= WEIGHT_TOL
    }

    #[test]
    fn root_weight_examples() {
        let phi = DyadicStepFunction::new(2, vec![1.0, 3.0, 0.0, 2.0]).unwrap();
        let w = CarlesonWeights::root_only(2, 0.7).unwrap();
        let s = carleson_sum(&phi, &w, 3.0).unwrap();
        assert!((s - 0.7 * 1.5f64.powi(3)).abs() < 1e-14);
        let c = DyadicStepFunction::constant(3, 2.0).unwrap();
        let w = random_admissible_weights(3, 0.4, 9).unwrap();
        assert!((carleson_sum(&c, &w, 2.0).unwrap() - 0.4 * 4.0).abs() < 1e-12);
        let w = random_admissible_weights(5, 1.0, 1).unwrap();
        assert!(packing_oracle(&w));
        let w = random_admissible_weights(0, 0.3, 5).unwrap();
        assert_eq!(w.weight(Node::ROOT), 0.3);
    }

    #[test]
    fn left_half_example() {
        let phi = DyadicStepFunction::new(1, vec![2.0, 0.0]).unwrap();
        let w = CarlesonWeights::from_entries(1, 0.5, &[(Node { level: 1, index: 0 }, 0.5)]).unwrap();
        assert_eq!(carleson_sum(&phi, &w, 2.0).unwrap(), 2.0);
    }

    #[test]
    fn invalid_families_rejected() {
        let bad = CarlesonWeights::from_entries(1, 0.6, &[(Node { level: 1, index: 0 }, 0.6)]);
        assert!(matches!(bad, Err(Error::InvalidWeights(_))));
        let bad = CarlesonWeights::from_entries(1, 0.5, &[(Node::ROOT, 0.4)]);
        assert!(matches!(bad, Err(Error::InvalidWeights(_))));
        assert!(CarlesonWeights::new(0.5, vec![vec![0.5], vec![0.0]]).is_err());
        assert!(CarlesonWeights::new(0.5, vec![vec![-0.1], vec![0.3, 0.3]]).is_err());
        assert!(random_admissible_weights(3, 0.0, 1).is_err());
    }

    #[test]
    fn level_eight_family_is_admissible() {
        let w = random_admissible_weights(8, 0.5, 42).unwrap();
        assert!(packing_oracle(&w));
        // mass is spread over several depths
        assert!(w.entries().filter(|(n, _)| n.level >= 4).count() > 10);
        assert_eq!(w, random_admissible_weights(8, 0.5, 42).unwrap());
    }

    proptest! {
        #[test]
        fn generator_always_admissible(level in 0u32..9, k in 0.001f64..=1.0, seed in any::<u64>()) {
            let w = random_admissible_weights(level, k, seed).unwrap();
            prop_assert!(packing_oracle(&w));
        }
    }
}
