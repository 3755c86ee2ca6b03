//! Step functions on the dyadic cells of `[0, 1)`, the exact dyadic maximal
//! operator, and unions of cells.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::extremizer::ExtremizerProfile;
use crate::fmath::powf;
use crate::stepfn::{rearrange_decreasing, StepFunction};

/// Largest supported level (`2^24` cells).
pub const MAX_LEVEL: u32 = 24;

fn check_level(level: u32) -> Result<usize> {
    if level > MAX_LEVEL {
        return Err(Error::Parameter("dyadic level above MAX_LEVEL"));
    }
    Ok(1usize << level)
}

/// A function constant on each cell `[j 2^{-m}, (j+1) 2^{-m})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicStepFunction {
    level: u32,
    values: Vec<f64>,
}

impl DyadicStepFunction {
    pub fn new(level: u32, values: Vec<f64>) -> Result<Self> {
        let n = check_level(level)?;
        if values.len() != n {
            return Err(Error::Malformed("need exactly 2^level cell values"));
        }
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Malformed("values must be finite and nonnegative"));
        }
        Ok(DyadicStepFunction { level, values })
    }

    pub fn constant(level: u32, c: f64) -> Result<Self> {
        let n = check_level(level)?;
        Self::new(level, alloc::vec![c; n])
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn cell_width(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    /// The same function on the finer level `level`.
    pub fn refine(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::Parameter("cannot refine to a coarser level"));
        }
        check_level(level)?;
        let rep = 1usize << (level - self.level);
        let mut values = Vec::with_capacity(self.values.len() * rep);
        for v in &self.values {
            values.extend(core::iter::repeat_n(*v, rep));
        }
        Ok(DyadicStepFunction { level, values })
    }

    /// `∫ φ`.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_width()
    }

    /// `∫ φ^p`.
    pub fn lp_moment(&self, p: f64) -> f64 {
        self.values.iter().map(|v| powf(*v, p)).sum::<f64>() * self.cell_width()
    }

    /// Averages over all dyadic intervals: entry `j` holds the `2^j`
    /// averages of level `j`.
    pub fn average_pyramid(&self) -> Vec<Vec<f64>> {
        let mut levels = Vec::with_capacity(self.level as usize + 1);
        levels.push(self.values.clone());
        for _ in 0..self.level {
            let finer = levels.last().unwrap();
            let coarser: Vec<f64> = finer.chunks_exact(2).map(|c| 0.5 * (c[0] + c[1])).collect();
            levels.push(coarser);
        }
        levels.reverse();
        levels
    }

    /// `M_𝒯φ`: on each cell, the largest average over the dyadic intervals
    /// containing it.
    pub fn maximal_operator(&self) -> DyadicStepFunction {
        let pyramid = self.average_pyramid();
        let mut running = pyramid[0].clone();
        for avgs in pyramid.iter().skip(1) {
            running = avgs
                .iter()
                .enumerate()
                .map(|(i, a)| a.max(running[i / 2]))
                .collect();
        }
        DyadicStepFunction {
            level: self.level,
            values: running,
        }
    }

    /// The non-increasing rearrangement as a step function on `(0, 1]`.
    pub fn rearrangement(&self) -> StepFunction {
        let sf = StepFunction::uniform(self.values.clone()).expect("valid cell values");
        rearrange_decreasing(&sf)
    }

    /// `∫_K φ^p` for a union of cells `K`; the coarser operand is refined.
    pub fn integral_over(&self, set: &DyadicSet, p: f64) -> Result<f64> {
        let level = self.level.max(set.level);
        let phi = self.refine(level)?;
        let set = set.refine(level)?;
        let w = phi.cell_width();
        Ok(phi
            .values
            .iter()
            .zip(set.mask.iter())
            .filter(|(_, m)| **m)
            .map(|(v, _)| powf(*v, p))
            .sum::<f64>()
            * w)
    }

    /// Cell averages of the extremal profile `g_k` at the given level.
    pub fn discretize(profile: &ExtremizerProfile, level: u32) -> Result<Self> {
        let n = check_level(level)?;
        let w = 1.0 / n as f64;
        let values = (0..n)
            .map(|j| profile.cell_average(j as f64 * w, (j + 1) as f64 * w))
            .collect::<Result<Vec<f64>>>()?;
        Self::new(level, values)
    }
}

/// See [`DyadicStepFunction::discretize`].
pub fn discretize_extremizer(profile: &ExtremizerProfile, level: u32) -> Result<DyadicStepFunction> {
    DyadicStepFunction::discretize(profile, level)
}

/// `(1/λ) ∫_{Mφ > λ} φ − |{Mφ > λ}|`; nonnegative by the weak type (1,1)
/// inequality.
pub fn weak_type_check(phi: &DyadicStepFunction, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain("weak type level", lambda, "lambda > 0"));
    }
    let m = phi.maximal_operator();
    let w = phi.cell_width();
    let mut mass = 0.0;
    let mut measure = 0.0;
    for (v, mv) in phi.values.iter().zip(m.values.iter()) {
        if *mv > lambda {
            mass += v * w;
            measure += w;
        }
    }
    Ok(mass / lambda - measure)
}

/// A nonempty union of level-`m` dyadic cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicSet {
    level: u32,
    mask: Vec<bool>,
}

impl DyadicSet {
    pub fn new(level: u32, mask: Vec<bool>) -> Result<Self> {
        let n = check_level(level)?;
        if mask.len() != n {
            return Err(Error::Malformed("need exactly 2^level mask entries"));
        }
        if !mask.iter().any(|m| *m) {
            return Err(Error::Malformed("dyadic set must be nonempty"));
        }
        Ok(DyadicSet { level, mask })
    }

    pub fn full(level: u32) -> Result<Self> {
        let n = check_level(level)?;
        Self::new(level, alloc::vec![true; n])
    }

    /// The first `count` cells, i.e. `[0, count 2^{-m})`.
    pub fn prefix(level: u32, count: usize) -> Result<Self> {
        let n = check_level(level)?;
        if count == 0 || count > n {
            return Err(Error::Parameter("prefix cell count must be in 1..=2^level"));
        }
        Self::new(level, (0..n).map(|i| i < count).collect())
    }

    /// The prefix set whose measure is nearest to `k`, with its measure.
    pub fn prefix_with_measure(level: u32, k: f64) -> Result<(Self, f64)> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(domain("set measure", k, "0 < k <= 1"));
        }
        let n = check_level(level)?;
        let count = (libm::round(k * n as f64) as usize).clamp(1, n);
        let set = Self::prefix(level, count)?;
        let m = set.measure();
        Ok((set, m))
    }

    /// `{φ > λ}`, or `None` when empty.
    pub fn superlevel(phi: &DyadicStepFunction, lambda: f64) -> Option<Self> {
        let mask: Vec<bool> = phi.values.iter().map(|v| *v > lambda).collect();
        Self::new(phi.level, mask).ok()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 / self.mask.len() as f64
    }

    pub fn refine(&self, level: u32) -> Result<Self> {
        if level < self.level {
            return Err(Error::Parameter("cannot refine to a coarser level"));
        }
        check_level(level)?;
        let rep = 1usize << (level - self.level);
        let mut mask = Vec::with_capacity(self.mask.len() * rep);
        for m in &self.mask {
            mask.extend(core::iter::repeat_n(*m, rep));
        }
        Ok(DyadicSet {
            level,
            mask,
        })
    }

    /// Hex encoding: each digit covers four consecutive cells, the most
    /// significant bit being the lowest-indexed cell. Levels 0 and 1 are
    /// padded with zero bits.
    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let mut out = String::with_capacity(self.mask.len().div_ceil(4));
        for chunk in self.mask.chunks(4) {
            let mut d = 0usize;
            for (i, m) in chunk.iter().enumerate() {
                if *m {
                    d |= 8 >> i;
                }
            }
            out.push(DIGITS[d] as char);
        }
        out
    }

    pub fn from_hex(level: u32, hex: &str) -> Result<Self> {
        let n = check_level(level)?;
        if hex.len() != n.div_ceil(4) {
            return Err(Error::Malformed("hex mask has the wrong length"));
        }
        let mut mask = Vec::with_capacity(n);
        for ch in hex.chars() {
            let d = ch.to_digit(16).ok_or(Error::Malformed("invalid hex digit"))?;
            for i in 0..4 {
                mask.push(d & (8 >> i) != 0);
            }
        }
        if mask[n..].iter().any(|m| *m) {
            return Err(Error::Malformed("padding bits must be zero"));
        }
        mask.truncate(n);
        Self::new(level, mask)
    }
}
