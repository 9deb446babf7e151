//! Piecewise-constant densities on a half-open range: discretization,
//! evaluation, and sampling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{sample_categorical, Rng};

/// Tolerance for "these masses/weights sum to one".
pub(crate) const MASS_SUM_TOL: f64 = 1e-12;

/// The half-open interval `[t0, t1)` every observation must fall in.
///
/// The range is a model constant: values exactly equal to `t1` are rejected
/// everywhere rather than clamped into the last bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    t0: f64,
    t1: f64,
}

impl Range {
    pub fn new(t0: f64, t1: f64) -> Result<Self> {
        if !t0.is_finite() || !t1.is_finite() || !(t0 < t1) {
            return Err(Error::argument(format!(
                "range requires finite t0 < t1, got [{t0}, {t1})"
            )));
        }
        Ok(Self { t0, t1 })
    }

    pub fn lower(&self) -> f64 {
        self.t0
    }

    pub fn upper(&self) -> f64 {
        self.t1
    }

    pub fn width(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 && t < self.t1
    }

    /// 1-based index of the equal-width bin containing `t`, out of
    /// `bin_count` bins: `1 + floor(W (t - t0) / (t1 - t0))`.
    pub fn bin_index(&self, t: f64, bin_count: usize) -> Result<usize> {
        if bin_count == 0 {
            return Err(Error::argument("bin_index: bin_count must be >= 1"));
        }
        if !self.contains(t) {
            return Err(Error::domain(format!(
                "value {t} outside half-open range [{}, {})",
                self.t0, self.t1
            )));
        }
        Ok(self.bin_offset_unchecked(t, bin_count) + 1)
    }

    /// 0-based bin offset for `t` already known to lie in the range.
    ///
    /// Rounding can push the raw floor to `bin_count` for values one ulp
    /// below `t1`; those are clamped back into the last bin, which is valid
    /// exactly because `t < t1` is guaranteed by the caller.
    #[inline]
    pub(crate) fn bin_offset_unchecked(&self, t: f64, bin_count: usize) -> usize {
        debug_assert!(self.contains(t));
        let raw = (bin_count as f64 * (t - self.t0) / (self.t1 - self.t0)) as usize;
        raw.min(bin_count - 1)
    }

    /// Lower boundary of the 0-based bin `offset` out of `bin_count`.
    pub(crate) fn bin_lower(&self, offset: usize, bin_count: usize) -> f64 {
        self.t0 + self.width() * offset as f64 / bin_count as f64
    }
}

/// 1-based bin index of `t` under `bin_count` equal-width bins on `range`.
pub fn bin_index(t: f64, bin_count: usize, range: Range) -> Result<usize> {
    range.bin_index(t, bin_count)
}

/// One basis: a regular histogram with `W` bins of probability mass each.
///
/// The density at `t` is `mass[w(t)] * W / (t1 - t0)`; masses are
/// nonnegative and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    range: Range,
    masses: Vec<f64>,
}

impl Histogram {
    pub fn new(range: Range, masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::argument("histogram needs at least one bin"));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::argument(
                "histogram masses must be finite and nonnegative",
            ));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_SUM_TOL {
            return Err(Error::argument(format!(
                "histogram masses sum to {total}, expected 1"
            )));
        }
        Ok(Self { range, masses })
    }

    /// The uniform density: one bin of mass one.
    pub fn uniform(range: Range) -> Self {
        Self {
            range,
            masses: vec![1.0],
        }
    }

    pub fn range(&self) -> Range {
        self.range
    }

    pub fn bin_count(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Density at `t`; errors for `t` outside the half-open range.
    pub fn density(&self, t: f64) -> Result<f64> {
        if !self.range.contains(t) {
            return Err(Error::domain(format!(
                "value {t} outside half-open range [{}, {})",
                self.range.t0, self.range.t1
            )));
        }
        Ok(self.density_unchecked(t))
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, t: f64) -> f64 {
        let w = self.masses.len();
        let offset = self.range.bin_offset_unchecked(t, w);
        self.masses[offset] * w as f64 / self.range.width()
    }

    /// Two-step draw: a bin index from the masses, then a uniform value on
    /// that bin. The rejection loop guards the rare rounding case where the
    /// uniform draw would re-discretize into a neighbouring bin.
    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let w = self.masses.len();
        let offset = sample_categorical(&self.masses, rng).expect("valid masses");
        let lo = self.range.bin_lower(offset, w);
        let hi = if offset + 1 == w {
            self.range.t1
        } else {
            self.range.bin_lower(offset + 1, w)
        };
        loop {
            let t = rng.uniform(lo, hi);
            if self.range.bin_offset_unchecked(t, w) == offset {
                return t;
            }
        }
    }

    /// Trapezoid integral of the density over the range, with every bin
    /// boundary inserted as a node and one-sided limits taken at each node,
    /// so the step discontinuities contribute no quadrature error.
    pub fn integral_trapezoid(&self, grid_points: usize) -> f64 {
        let knots = interior_boundaries(self.range, self.masses.len());
        trapezoid_grid(
            |t| self.density_unchecked(t),
            self.range,
            grid_points,
            &knots,
        )
    }
}

/// A convex combination of basis histograms sharing one range.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDensity {
    bases: Vec<Histogram>,
    weights: Vec<f64>,
}

impl MixtureDensity {
    pub fn new(bases: Vec<Histogram>, weights: Vec<f64>) -> Result<Self> {
        if bases.is_empty() || bases.len() != weights.len() {
            return Err(Error::argument(format!(
                "mixture needs matching nonempty bases/weights, got {} and {}",
                bases.len(),
                weights.len()
            )));
        }
        let range = bases[0].range();
        if bases.iter().any(|b| b.range() != range) {
            return Err(Error::argument("mixture bases must share one range"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::argument(
                "mixture weights must be finite and nonnegative",
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_SUM_TOL {
            return Err(Error::argument(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { bases, weights })
    }

    pub fn range(&self) -> Range {
        self.bases[0].range()
    }

    pub fn bases(&self) -> &[Histogram] {
        &self.bases
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted sum of the basis densities at `t`.
    pub fn density(&self, t: f64) -> Result<f64> {
        if !self.range().contains(t) {
            return Err(Error::domain(format!(
                "value {t} outside half-open range [{}, {})",
                self.range().t0,
                self.range().t1
            )));
        }
        Ok(self.density_unchecked(t))
    }

    #[inline]
    pub(crate) fn density_unchecked(&self, t: f64) -> f64 {
        self.bases
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| w * b.density_unchecked(t))
            .sum()
    }

    /// Boundary-aware trapezoid integral over the range; see
    /// [`Histogram::integral_trapezoid`].
    pub fn integral_trapezoid(&self, grid_points: usize) -> f64 {
        let mut knots = Vec::new();
        for b in &self.bases {
            knots.extend(interior_boundaries(self.range(), b.bin_count()));
        }
        trapezoid_grid(
            |t| self.density_unchecked(t),
            self.range(),
            grid_points,
            &knots,
        )
    }
}

/// Evaluates the mixture density at `t` (errors outside the range).
pub fn mixture_density(m: &MixtureDensity, t: f64) -> Result<f64> {
    m.density(t)
}

/// Interior bin boundaries snapped to the exact points where
/// `bin_offset_unchecked` switches bins, which can sit an ulp away from the
/// analytic boundary. Snapping keeps every quadrature segment inside one
/// bin, so knot-refined integration of step densities is exact.
fn interior_boundaries(range: Range, bin_count: usize) -> Vec<f64> {
    (1..bin_count)
        .map(|l| {
            let mut t = range.bin_lower(l, bin_count);
            while t > range.lower() {
                let prev = t.next_down();
                if range.bin_offset_unchecked(prev, bin_count) >= l {
                    t = prev;
                } else {
                    break;
                }
            }
            while range.contains(t) && range.bin_offset_unchecked(t, bin_count) < l {
                t = t.next_up();
            }
            t
        })
        .collect()
}

/// Trapezoid rule on a uniform grid of `grid_points` nodes over `range`,
/// merged with the extra `knots`. Each segment is evaluated with one-sided
/// limits (the right endpoint via the next representable value below it),
/// which makes the rule exact on half-open step functions while remaining
/// the ordinary trapezoid rule for continuous integrands.
pub(crate) fn trapezoid_grid<F: FnMut(f64) -> f64>(
    mut f: F,
    range: Range,
    grid_points: usize,
    knots: &[f64],
) -> f64 {
    assert!(grid_points >= 2, "trapezoid needs at least 2 grid points");
    let (t0, t1) = (range.lower(), range.upper());
    let step = range.width() / (grid_points - 1) as f64;
    let mut nodes: Vec<f64> = (0..grid_points).map(|i| t0 + step * i as f64).collect();
    nodes.extend(knots.iter().copied().filter(|&x| x > t0 && x < t1));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let last = nodes.len() - 1;
    nodes[0] = t0;
    nodes[last] = t1;

    let mut total = 0.0;
    for pair in nodes.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let fa = f(a);
        let fb = f(b.next_down().max(a));
        total += (b - a) * 0.5 * (fa + fb);
    }
    total
}
