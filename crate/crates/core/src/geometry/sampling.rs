//! Deterministic low-discrepancy sample points.
//!
//! Points are a Halton sequence in bases 2, 3, 5, 7 with a seeded
//! Cranley-Patterson shift, mapped into the domain box. Candidates too close
//! to an excluded locus, or where the coframe is singular or undefined, are
//! skipped.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Chart, Coframe};
use crate::expr::eval_f64;

const BASES: [u8; 4] = [2, 3, 5, 7];
const MAX_TRIES_PER_POINT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { count: 64, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("only {found} of {wanted} sample points are admissible after {tried} candidates")]
pub struct SampleError {
    pub found: usize,
    pub wanted: usize,
    pub tried: usize,
}

/// `count` admissible points; `accept` is an extra caller-side filter.
pub fn sample_points(
    chart: &Chart,
    coframe: &Coframe,
    sampling: &Sampling,
    accept: impl Fn(&[f64; 4]) -> bool,
) -> Result<Vec<[f64; 4]>, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let shift: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
    let mut out = Vec::with_capacity(sampling.count);
    let limit = sampling.count.max(1) * MAX_TRIES_PER_POINT;
    let mut index = 0usize;
    while out.len() < sampling.count {
        index += 1;
        if index > limit {
            return Err(SampleError { found: out.len(), wanted: sampling.count, tried: limit });
        }
        let x: [f64; 4] = std::array::from_fn(|i| {
            let u = (halton::number(BASES[i], index) + shift[i]).fract();
            let [lo, hi] = chart.domain[i];
            lo + u * (hi - lo)
        });
        let clear = chart
            .excluded
            .iter()
            .all(|e| eval_f64(e, &x, &coframe.params).is_ok_and(|v| v.abs() >= chart.margin));
        if clear && coframe.at(x).is_ok() && accept(&x) {
            out.push(x);
        }
    }
    Ok(out)
}
