//! Synthetic data generation and evaluation: a trimodal per-unit truth,
//! the integrated-squared-error metric, and the method comparison harness.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use statrs::distribution::ContinuousCDF;

use crate::baselines::{br_histogram, knuth_histogram};
use crate::error::{Error, Result};
use crate::gibbs::{fit, FitConfig};
use crate::histogram::{trapezoid_grid, Histogram, Range};
use crate::model::Collection;
use crate::numerics::{sample_categorical, sample_symmetric_dirichlet, Rng};

/// Grid used for the integrated squared error unless a caller overrides it.
pub const DEFAULT_ISE_GRID_POINTS: usize = 2001;

/// Data sizes per unit swept by the default comparison.
pub const DEFAULT_M_VALUES: [usize; 6] = [50, 100, 150, 200, 250, 300];

pub const DEFAULT_REPLICATES: usize = 3;

// The three fixed truth components each unit mixes.
const NORMAL_MEAN: f64 = 1.0;
const NORMAL_SD: f64 = 0.1;
const EXP_RATE: f64 = 2.0;
const UNIFORM_LO: f64 = 1.0;
const UNIFORM_HI: f64 = 1.5;

/// Protocol for one synthetic collection: `units` units, `per_unit`
/// observations each, unit weights over the three fixed components drawn
/// from a flat Dirichlet by default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub range: Range,
    pub units: usize,
    pub per_unit: usize,
    pub dirichlet_concentration: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            range: Range::new(0.0, 2.0).expect("default range"),
            units: 100,
            per_unit: 100,
            dirichlet_concentration: 1.0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.units == 0 || self.per_unit == 0 {
            return Err(Error::argument(
                "synthetic data needs units >= 1 and per_unit >= 1",
            ));
        }
        if !(self.dirichlet_concentration > 0.0) {
            return Err(Error::argument(
                "dirichlet_concentration must be positive",
            ));
        }
        Ok(())
    }
}

/// One unit's true density: its component weights applied to the three
/// fixed components, each truncated to the range and renormalized by its
/// mass there. That convention matches the rejection-resampling generator
/// exactly, so the metric measures estimation error alone.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueDensity {
    range: Range,
    weights: [f64; 3],
    masses_in_range: [f64; 3],
}

impl TrueDensity {
    pub fn new(weights: [f64; 3], range: Range) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::argument(
                "component weights must be finite and nonnegative",
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::argument(format!(
                "component weights sum to {total}, expected 1"
            )));
        }
        let masses_in_range = component_masses(range)?;
        for (c, (&w, &z)) in weights.iter().zip(&masses_in_range).enumerate() {
            if w > 0.0 && z <= 0.0 {
                return Err(Error::argument(format!(
                    "component {c} has zero mass inside [{}, {})",
                    range.lower(),
                    range.upper()
                )));
            }
        }
        Ok(Self {
            range,
            weights,
            masses_in_range,
        })
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        if !self.range.contains(t) {
            return Err(Error::domain(format!(
                "value {t} outside half-open range [{}, {})",
                self.range.lower(),
                self.range.upper()
            )));
        }
        Ok(self.density_unchecked(t))
    }

    pub(crate) fn density_unchecked(&self, t: f64) -> f64 {
        let mut total = 0.0;
        for c in 0..3 {
            if self.weights[c] > 0.0 {
                total += self.weights[c] * component_pdf(c, t) / self.masses_in_range[c];
            }
        }
        total
    }
}

/// Truncated-mixture truth at one point; see [`TrueDensity`].
pub fn true_density(weights: [f64; 3], t: f64, range: Range) -> Result<f64> {
    TrueDensity::new(weights, range)?.density(t)
}

fn component_pdf(component: usize, t: f64) -> f64 {
    match component {
        0 => {
            let z = (t - NORMAL_MEAN) / NORMAL_SD;
            (-0.5 * z * z).exp() / (NORMAL_SD * (2.0 * std::f64::consts::PI).sqrt())
        }
        1 => {
            if t >= 0.0 {
                EXP_RATE * (-EXP_RATE * t).exp()
            } else {
                0.0
            }
        }
        _ => {
            if (UNIFORM_LO..UNIFORM_HI).contains(&t) {
                1.0 / (UNIFORM_HI - UNIFORM_LO)
            } else {
                0.0
            }
        }
    }
}

fn component_masses(range: Range) -> Result<[f64; 3]> {
    let normal = statrs::distribution::Normal::new(NORMAL_MEAN, NORMAL_SD)
        .map_err(|e| Error::numeric(format!("normal component: {e}")))?;
    let z_normal = normal.cdf(range.upper()) - normal.cdf(range.lower());
    let exp_cdf = |t: f64| {
        if t <= 0.0 {
            0.0
        } else {
            1.0 - (-EXP_RATE * t).exp()
        }
    };
    let z_exp = exp_cdf(range.upper()) - exp_cdf(range.lower());
    let overlap = range.upper().min(UNIFORM_HI) - range.lower().max(UNIFORM_LO);
    let z_uniform = overlap.max(0.0) / (UNIFORM_HI - UNIFORM_LO);
    Ok([z_normal, z_exp, z_uniform])
}

fn draw_component(weights: &[f64], rng: &mut Rng) -> usize {
    sample_categorical(weights, rng).expect("valid component weights")
}

/// Draws from one component, rejection-resampling the same component until
/// the value lands inside the range.
fn draw_from_component(component: usize, range: Range, rng: &mut Rng) -> f64 {
    use rand_distr::Distribution;
    let normal = rand_distr::Normal::new(NORMAL_MEAN, NORMAL_SD).expect("valid normal");
    let exponential = rand_distr::Exp::new(EXP_RATE).expect("valid exponential");
    loop {
        let t: f64 = match component {
            0 => normal.sample(rng),
            1 => exponential.sample(rng),
            _ => rng.uniform(UNIFORM_LO, UNIFORM_HI),
        };
        if range.contains(t) {
            return t;
        }
    }
}

/// Generates one collection plus the per-unit component weights that
/// produced it (needed later to score estimates against the truth).
pub fn generate_collection(
    spec: &SyntheticSpec,
    rng: &mut Rng,
) -> Result<(Collection, Vec<[f64; 3]>)> {
    spec.validate()?;
    // Fail early if a component cannot land inside the range at all.
    let masses = component_masses(spec.range)?;
    if masses.iter().any(|&z| z <= 0.0) {
        return Err(Error::argument(format!(
            "a truth component has zero mass inside [{}, {})",
            spec.range.lower(),
            spec.range.upper()
        )));
    }
    let mut observations = Vec::with_capacity(spec.units * spec.per_unit);
    let mut unit_weights = Vec::with_capacity(spec.units);
    for u in 0..spec.units {
        let w = sample_symmetric_dirichlet(3, spec.dirichlet_concentration, rng);
        let weights = [w[0], w[1], w[2]];
        for _ in 0..spec.per_unit {
            let component = draw_component(&weights, rng);
            let t = draw_from_component(component, spec.range, rng);
            debug_assert!(spec.range.contains(t));
            observations.push((u, t));
        }
        unit_weights.push(weights);
    }
    let collection = Collection::new(spec.range, spec.units, observations)?;
    Ok((collection, unit_weights))
}

/// Trapezoid-rule integrated squared error between two densities on a
/// uniform grid of `grid_points` samples.
pub fn ise<F, G>(estimated: F, truth: G, range: Range, grid_points: usize) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    trapezoid_grid(
        |t| {
            let d = estimated(t) - truth(t);
            d * d
        },
        range,
        grid_points,
        &[],
    )
}

/// Exact integrated squared error between two histograms on one range,
/// summed over the piecewise-constant segments. Cross-check for the
/// trapezoid route.
pub fn ise_histograms_exact(a: &Histogram, b: &Histogram) -> Result<f64> {
    if a.range() != b.range() {
        return Err(Error::argument(
            "exact ISE needs histograms on the same range",
        ));
    }
    let range = a.range();
    let mut cuts: Vec<f64> = vec![range.lower(), range.upper()];
    for h in [a, b] {
        let w = h.bin_count();
        cuts.extend((1..w).map(|l| range.lower() + range.width() * l as f64 / w as f64));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let d = a.density(mid)? - b.density(mid)?;
        total += (hi - lo) * d * d;
    }
    Ok(total)
}

/// Which estimator a benchmark cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    HistLda,
    Knuth,
    Br,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::HistLda, Method::Knuth, Method::Br];

    pub fn name(&self) -> &'static str {
        match self {
            Method::HistLda => "histlda",
            Method::Knuth => "knuth",
            Method::Br => "br",
        }
    }

    pub fn parse(name: &str) -> Option<Method> {
        match name {
            "histlda" => Some(Method::HistLda),
            "knuth" => Some(Method::Knuth),
            "br" => Some(Method::Br),
            _ => None,
        }
    }
}

/// One replicate of one method at one data size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateOutcome {
    pub replicate: usize,
    /// Unit-averaged integrated squared error; absent when the fit failed.
    pub ise: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    /// Wall-clock time; populated only when timings are requested, so the
    /// default report stays byte-reproducible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

/// Replicate outcomes of one method at one data size, with their summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCell {
    pub method: Method,
    pub m: usize,
    pub mean_ise: Option<f64>,
    /// Sample standard deviation over successful replicates.
    pub std_ise: Option<f64>,
    pub replicates: Vec<ReplicateOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub schema: u32,
    pub range: Range,
    pub units: usize,
    pub m_values: Vec<usize>,
    pub replicates: usize,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub fit: FitConfig,
    pub ise_grid_points: usize,
    pub cells: Vec<BenchmarkCell>,
}

impl BenchmarkReport {
    /// Mean ISE of one cell, if any replicate of it succeeded.
    pub fn mean_ise(&self, method: Method, m: usize) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.m == m)
            .and_then(|c| c.mean_ise)
    }

    /// Copy of the report with all wall-clock values cleared.
    pub fn without_timings(&self) -> Self {
        let mut report = self.clone();
        for cell in &mut report.cells {
            for r in &mut cell.replicates {
                r.runtime_ms = None;
            }
        }
        report
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Flat per-replicate table: `method,m,replicate,ise,runtime_ms`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("method,m,replicate,ise,runtime_ms\n");
        for cell in &self.cells {
            for r in &cell.replicates {
                let ise = r.ise.map(|v| v.to_string()).unwrap_or_default();
                let ms = r.runtime_ms.map(|v| v.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    cell.method.name(),
                    cell.m,
                    r.replicate,
                    ise,
                    ms
                ));
            }
        }
        out
    }
}

/// Runs the full comparison: for every data size and replicate, generate a
/// fresh collection, fit the mixture model on the pooled collection, fit
/// the single-unit baselines on each unit's own values, and average the
/// per-unit integrated squared errors. A failed fit marks its replicate and
/// never aborts the sweep.
///
/// Every replicate draws from its own child stream of the master seed, so
/// the report does not depend on execution order.
pub fn run_benchmark(
    spec: &SyntheticSpec,
    methods: &[Method],
    m_values: &[usize],
    replicates: usize,
    fit_cfg: &FitConfig,
) -> Result<BenchmarkReport> {
    spec.validate()?;
    fit_cfg.validate()?;
    if methods.is_empty() || m_values.is_empty() || replicates == 0 {
        return Err(Error::argument(
            "benchmark needs methods, m values, and replicates >= 1",
        ));
    }
    let master = Rng::from_seed(spec.seed);
    let mut outcomes: Vec<Vec<Vec<ReplicateOutcome>>> =
        vec![vec![Vec::new(); m_values.len()]; methods.len()];

    for (mi, &m) in m_values.iter().enumerate() {
        for rep in 0..replicates {
            let cell_index = (mi * replicates + rep) as u64;
            let mut rng = master.child(cell_index);
            let cell_spec = SyntheticSpec {
                per_unit: m,
                ..spec.clone()
            };
            let (collection, unit_weights) = generate_collection(&cell_spec, &mut rng)?;
            let fit_seed = rng.next_u64();
            let truths: Vec<TrueDensity> = unit_weights
                .iter()
                .map(|&w| TrueDensity::new(w, spec.range))
                .collect::<Result<_>>()?;

            for (method_idx, &method) in methods.iter().enumerate() {
                let started = Instant::now();
                let result = run_method(method, &collection, &truths, fit_cfg, fit_seed);
                let runtime_ms = started.elapsed().as_millis() as u64;
                let outcome = match result {
                    Ok(ise) => ReplicateOutcome {
                        replicate: rep,
                        ise: Some(ise),
                        error: None,
                        runtime_ms: Some(runtime_ms),
                    },
                    Err(e) => ReplicateOutcome {
                        replicate: rep,
                        ise: None,
                        error: Some(e.to_string()),
                        runtime_ms: Some(runtime_ms),
                    },
                };
                outcomes[method_idx][mi].push(outcome);
            }
        }
    }

    let mut cells = Vec::with_capacity(methods.len() * m_values.len());
    for (method_idx, &method) in methods.iter().enumerate() {
        for (mi, &m) in m_values.iter().enumerate() {
            let replicate_outcomes = std::mem::take(&mut outcomes[method_idx][mi]);
            let values: Vec<f64> = replicate_outcomes.iter().filter_map(|r| r.ise).collect();
            let (mean, std) = summarize(&values);
            cells.push(BenchmarkCell {
                method,
                m,
                mean_ise: mean,
                std_ise: std,
                replicates: replicate_outcomes,
            });
        }
    }

    Ok(BenchmarkReport {
        schema: 1,
        range: spec.range,
        units: spec.units,
        m_values: m_values.to_vec(),
        replicates,
        methods: methods.to_vec(),
        seed: spec.seed,
        fit: fit_cfg.clone(),
        ise_grid_points: DEFAULT_ISE_GRID_POINTS,
        cells,
    })
}

fn run_method(
    method: Method,
    collection: &Collection,
    truths: &[TrueDensity],
    fit_cfg: &FitConfig,
    fit_seed: u64,
) -> Result<f64> {
    let range = collection.range();
    let units = collection.unit_count();
    match method {
        Method::HistLda => {
            let cfg = FitConfig {
                seed: fit_seed,
                ..fit_cfg.clone()
            };
            let result = fit(collection, &cfg)?;
            let mut total = 0.0;
            for (u, truth) in truths.iter().enumerate() {
                let density = result.unit_density(u)?;
                total += ise(
                    |t| density.density_unchecked(t),
                    |t| truth.density_unchecked(t),
                    range,
                    DEFAULT_ISE_GRID_POINTS,
                );
            }
            Ok(total / units as f64)
        }
        Method::Knuth | Method::Br => {
            // The baselines see only each unit's own observations.
            let mut per_unit: Vec<Vec<f64>> = vec![Vec::new(); units];
            for (&u, &t) in collection.units().iter().zip(collection.values()) {
                per_unit[u].push(t);
            }
            let mut total = 0.0;
            for (u, truth) in truths.iter().enumerate() {
                let h = match method {
                    Method::Knuth => knuth_histogram(&per_unit[u], range, fit_cfg.w_max)?,
                    _ => br_histogram(&per_unit[u], range, fit_cfg.w_max)?,
                };
                total += ise(
                    |t| h.density_unchecked(t),
                    |t| truth.density_unchecked(t),
                    range,
                    DEFAULT_ISE_GRID_POINTS,
                );
            }
            Ok(total / units as f64)
        }
    }
}

fn summarize(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (Some(mean), Some(std))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range02() -> Range {
        Range::new(0.0, 2.0).unwrap()
    }

    #[test]
    fn true_density_examples() {
        let r = range02();
        // Pure uniform component.
        assert!((true_density([0.0, 0.0, 1.0], 1.2, r).unwrap() - 2.0).abs() <= 1e-12);
        assert_eq!(true_density([0.0, 0.0, 1.0], 0.5, r).unwrap(), 0.0);
        // Pure truncated exponential at the origin: rate / (1 - e^{-4}).
        let want = 2.0373147207275481;
        assert!((true_density([0.0, 1.0, 0.0], 0.0, r).unwrap() - want).abs() <= 1e-12);
        // Out-of-range point.
        assert!(true_density([0.3, 0.3, 0.4], 2.0, r).is_err());
    }

    #[test]
    fn true_density_integrates_to_one() {
        let mut rng = Rng::from_seed(3);
        for _ in 0..5 {
            let w = sample_symmetric_dirichlet(3, 1.0, &mut rng);
            let truth = TrueDensity::new([w[0], w[1], w[2]], range02()).unwrap();
            // The uniform component's edges are quadrature knots; elsewhere
            // the truth is smooth, so a fine trapezoid settles well below
            // the tolerance.
            let integral = trapezoid_grid(
                |t| truth.density_unchecked(t),
                range02(),
                1_000_001,
                &[UNIFORM_LO, UNIFORM_HI],
            );
            assert!((integral - 1.0).abs() <= 1e-9, "integral = {integral}");
        }
    }

    #[test]
    fn generated_collection_has_expected_shape() {
        let spec = SyntheticSpec {
            units: 7,
            per_unit: 40,
            seed: 5,
            ..SyntheticSpec::default()
        };
        let mut rng = Rng::from_seed(spec.seed);
        let (c, weights) = generate_collection(&spec, &mut rng).unwrap();
        assert_eq!(c.len(), 7 * 40);
        assert_eq!(weights.len(), 7);
        assert!(c.unit_sizes().iter().all(|&n| n == 40));
        for w in &weights {
            let total: f64 = w.iter().sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }
        assert!(c.values().iter().all(|&t| spec.range.contains(t)));
    }

    #[test]
    fn forced_uniform_component_stays_on_its_support() {
        let mut rng = Rng::from_seed(11);
        for _ in 0..5000 {
            let t = draw_from_component(2, range02(), &mut rng);
            assert!((UNIFORM_LO..UNIFORM_HI).contains(&t));
        }
    }

    #[test]
    fn component_draw_frequencies_match_weights() {
        // Chi-square at m = 1e4, significance 0.01 (2 degrees of freedom).
        let weights = [0.2, 0.5, 0.3];
        let mut rng = Rng::from_seed(13);
        let n = 10_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[draw_component(&weights, &mut rng)] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .zip(&weights)
            .map(|(&c, &w)| {
                let e = w * n as f64;
                let d = c as f64 - e;
                d * d / e
            })
            .sum();
        assert!(chi2 <= 9.21, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn ise_of_identical_functions_is_zero() {
        let f = |t: f64| 0.25 * t + 0.1;
        assert_eq!(ise(f, f, range02(), 2001), 0.0);
    }

    #[test]
    fn ise_constant_versus_half_uniform() {
        // 0.5 everywhere against Uniform[0, 1): (0.5-1)^2 + (0.5-0)^2 over
        // unit-length pieces.
        let got = ise(
            |_| 0.5,
            |t| if t < 1.0 { 1.0 } else { 0.0 },
            range02(),
            2001,
        );
        assert!((got - 0.5).abs() <= 1e-12, "ise = {got}");
    }

    #[test]
    fn trapezoid_ise_agrees_with_exact_piecewise_integration() {
        let a = Histogram::new(range02(), vec![1.0, 0.0]).unwrap();
        let b = Histogram::new(range02(), vec![0.0, 1.0]).unwrap();
        let exact = ise_histograms_exact(&a, &b).unwrap();
        assert!((exact - 2.0).abs() <= 1e-12, "exact = {exact}");
        let approx = ise(
            |t| a.density_unchecked(t),
            |t| b.density_unchecked(t),
            range02(),
            2001,
        );
        assert!((approx - exact).abs() <= 1e-3, "approx = {approx}");

        let c = Histogram::new(range02(), vec![0.1, 0.4, 0.2, 0.3]).unwrap();
        let d = Histogram::new(range02(), vec![0.5, 0.2, 0.3]).unwrap();
        let exact = ise_histograms_exact(&c, &d).unwrap();
        let approx = ise(
            |t| c.density_unchecked(t),
            |t| d.density_unchecked(t),
            range02(),
            2001,
        );
        assert!((approx - exact).abs() <= 1e-3, "{approx} vs {exact}");
    }

    fn tiny_fit_cfg() -> FitConfig {
        FitConfig {
            k_bases: 2,
            w_max: 10,
            burn_in_sweeps: 15,
            posterior_samples: 5,
            ..FitConfig::default()
        }
    }

    #[test]
    fn benchmark_report_covers_all_cells() {
        let spec = SyntheticSpec {
            units: 4,
            per_unit: 10,
            seed: 17,
            ..SyntheticSpec::default()
        };
        let report = run_benchmark(
            &spec,
            &Method::ALL,
            &[10, 20],
            2,
            &tiny_fit_cfg(),
        )
        .unwrap();
        assert_eq!(report.cells.len(), 6);
        for cell in &report.cells {
            assert_eq!(cell.replicates.len(), 2);
            assert!(cell.mean_ise.is_some());
            assert!(cell.mean_ise.unwrap() >= 0.0);
            assert!(cell.std_ise.unwrap() >= 0.0);
        }
    }

    #[test]
    fn benchmark_without_mixture_method_runs_only_baselines() {
        let spec = SyntheticSpec {
            units: 3,
            per_unit: 8,
            seed: 19,
            ..SyntheticSpec::default()
        };
        let report = run_benchmark(
            &spec,
            &[Method::Knuth, Method::Br],
            &[8],
            1,
            &tiny_fit_cfg(),
        )
        .unwrap();
        assert_eq!(report.cells.len(), 2);
        assert!(report
            .cells
            .iter()
            .all(|c| c.method != Method::HistLda));
    }

    #[test]
    fn benchmark_report_is_deterministic() {
        let spec = SyntheticSpec {
            units: 3,
            per_unit: 12,
            seed: 23,
            ..SyntheticSpec::default()
        };
        let a = run_benchmark(&spec, &Method::ALL, &[6, 12], 2, &tiny_fit_cfg())
            .unwrap()
            .without_timings();
        let b = run_benchmark(&spec, &Method::ALL, &[6, 12], 2, &tiny_fit_cfg())
            .unwrap()
            .without_timings();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert_eq!(a.to_csv_string(), b.to_csv_string());
        // Timing columns exist in the schema but stay empty by default.
        assert!(a.to_csv_string().lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.name()), Some(m));
        }
        assert_eq!(Method::parse("gmm"), None);
    }
}
