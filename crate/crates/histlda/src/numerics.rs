//! Special functions and seeded random sampling used by every other module.
//!
//! All randomness in this crate flows through [`Rng`], a thin wrapper around
//! the ChaCha8 stream cipher, so a fixed seed reproduces the same draw
//! sequence on every platform.

use std::f64::consts::PI;

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Deterministic random generator (ChaCha8 keyed by a 64-bit seed).
///
/// Cross-thread use is by [`Rng::child`] streams, never by sharing one state:
/// children reuse the master key on distinct ChaCha stream counters, which
/// makes them mutually independent and reproducible from
/// `(master seed, stream index)` alone.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        // The master generator runs on stream 0; children start at stream 1.
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent child stream `index` of this generator's master seed.
    pub fn child(&self, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(index.wrapping_add(1));
        Self {
            seed: self.seed,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on the half-open interval `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.inner.random_range(lo..hi)
    }

    /// Next raw 64-bit draw (inherent, so callers need no trait import).
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}

// Lanczos approximation with g = 607/128, 15 coefficients (Godfrey's set).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_188_6e-5,
    4.652_362_892_704_857_5e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

/// Natural log of the gamma function, for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_raw(x))
}

/// Unchecked `ln_gamma` for call sites that guarantee x > 0.
pub(crate) fn ln_gamma_raw(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Reflection keeps the Lanczos series on its accurate range.
        PI.ln() - (PI * x).sin().ln() - lanczos_ln_gamma(1.0 - x)
    } else {
        lanczos_ln_gamma(x)
    }
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let mut series = LANCZOS_COEFFS[0];
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (x + k as f64 - 1.0);
    }
    let t = x + LANCZOS_G - 0.5;
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + series.ln()
}

/// Digamma function (derivative of `ln_gamma`), for x > 0.
///
/// Small arguments are lifted with the recurrence psi(x+1) = psi(x) + 1/x
/// until the asymptotic series applies.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(digamma_raw(x))
}

pub(crate) fn digamma_raw(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    // Bernoulli tail of the asymptotic expansion, truncated at 1/y^14.
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + y.ln() - 0.5 * inv - tail
}

/// log(sum(exp(values))) with the max-shift guard.
///
/// Returns negative infinity for an empty slice or when every entry is
/// negative infinity.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Draws an index with probability proportional to `exp(log_weights[i])`.
///
/// Computed with a max shift so the weights may be arbitrarily far from zero.
/// Entries of negative infinity are legal and never drawn; NaN or positive
/// infinity entries are rejected.
pub fn sample_categorical_log(log_weights: &[f64], rng: &mut Rng) -> Result<usize> {
    if log_weights.is_empty() {
        return Err(Error::argument("sample_categorical_log: empty weights"));
    }
    if log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
        return Err(Error::argument(
            "sample_categorical_log: NaN or +inf log-weight",
        ));
    }
    let m = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Err(Error::argument(
            "sample_categorical_log: all weights are zero",
        ));
    }
    let total: f64 = log_weights.iter().map(|w| (w - m).exp()).sum();
    let u = rng.uniform(0.0, total);
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in log_weights.iter().enumerate() {
        let p = (w - m).exp();
        if p > 0.0 {
            last_positive = i;
        }
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    Ok(last_positive)
}

/// Draws an index with probability proportional to `weights[i]` (linear space).
pub(crate) fn sample_categorical(weights: &[f64], rng: &mut Rng) -> Result<usize> {
    if weights.is_empty() {
        return Err(Error::argument("sample_categorical: empty weights"));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::argument(
            "sample_categorical: negative or non-finite weight",
        ));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::argument("sample_categorical: all weights are zero"));
    }
    let u = rng.uniform(0.0, total);
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_positive = i;
        }
        acc += w;
        if u < acc && w > 0.0 {
            return Ok(i);
        }
    }
    Ok(last_positive)
}

/// One draw from a symmetric Dirichlet with the given concentration.
pub(crate) fn sample_symmetric_dirichlet(
    dim: usize,
    concentration: f64,
    rng: &mut Rng,
) -> Vec<f64> {
    use rand_distr::{Distribution, Gamma};
    debug_assert!(dim >= 1 && concentration > 0.0);
    if dim == 1 {
        return vec![1.0];
    }
    let gamma = Gamma::new(concentration, 1.0).expect("valid gamma shape");
    loop {
        let draws: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && total.is_finite() {
            return draws.into_iter().map(|g| g / total).collect();
        }
    }
}
