//! The fitting engine: collapsed Gibbs sweeps over basis assignments and
//! per-basis bin counts, empirical-Bayes concentration updates, and
//! posterior-mean recovery of the weights and masses.

use crate::error::{Error, Result};
use crate::histogram::{Histogram, MixtureDensity, Range};
use crate::model::{log_joint, Collection, GibbsState};
use crate::numerics::{
    digamma_raw, ln_gamma_raw, sample_categorical, sample_categorical_log,
    sample_symmetric_dirichlet, Rng,
};

/// Sampler configuration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FitConfig {
    /// Number of basis histograms shared by all units.
    pub k_bases: usize,
    /// Largest bin count the prior considers for any basis.
    pub w_max: usize,
    /// Full Gibbs sweeps before the estimation phase.
    pub burn_in_sweeps: usize,
    /// Assignment-only sweeps averaged into the posterior-mean estimates.
    pub posterior_samples: usize,
    /// Initial (and, with `hyper_update` off, final) concentration over
    /// per-unit weights.
    pub alpha0: f64,
    /// Initial concentration over per-basis masses.
    pub beta0: f64,
    /// Re-estimate the concentrations after every sweep.
    pub hyper_update: bool,
    /// Relative-change stopping tolerance of the fixed-point iteration.
    pub fixed_point_tol: f64,
    pub fixed_point_max_iters: usize,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            k_bases: 3,
            w_max: 200,
            burn_in_sweeps: 500,
            posterior_samples: 100,
            alpha0: 0.5,
            beta0: 0.5,
            hyper_update: true,
            fixed_point_tol: 1e-6,
            fixed_point_max_iters: 1000,
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_bases == 0 || self.w_max == 0 || self.posterior_samples == 0 {
            return Err(Error::argument(
                "k_bases, w_max, and posterior_samples must all be >= 1",
            ));
        }
        if !(self.alpha0 > 0.0) || !(self.beta0 > 0.0) {
            return Err(Error::argument(
                "alpha0 and beta0 must be positive",
            ));
        }
        if !(self.fixed_point_tol > 0.0) || self.fixed_point_max_iters == 0 {
            return Err(Error::argument(
                "fixed-point tolerance and iteration budget must be positive",
            ));
        }
        Ok(())
    }
}

/// Point estimates recovered from the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Per-unit mixture weights over the bases (`[unit][basis]`, rows sum
    /// to one).
    pub unit_weights: Vec<Vec<f64>>,
    /// Fitted basis histograms (bin count and masses per basis).
    pub bases: Vec<Histogram>,
    pub alpha: f64,
    pub beta: f64,
    /// Joint log-probability after every sweep (burn-in, then estimation).
    pub log_joint_trace: Vec<f64>,
    /// Bin counts after every sweep.
    pub bin_count_trace: Vec<Vec<usize>>,
}

impl FitResult {
    /// The fitted density of one unit: its weights over the shared bases.
    pub fn unit_density(&self, unit: usize) -> Result<MixtureDensity> {
        let weights = self
            .unit_weights
            .get(unit)
            .ok_or_else(|| {
                Error::argument(format!(
                    "unit {unit} out of range ({} units)",
                    self.unit_weights.len()
                ))
            })?
            .clone();
        MixtureDensity::new(self.bases.clone(), weights)
    }
}

/// Log weight of assigning observation `j` to each basis, given counts that
/// currently exclude `j`:
///
/// ```text
/// ln(alpha + n_ku) + ln(beta + n_kl) - ln(W_k beta + n_k) + ln W_k
/// ```
pub fn assignment_log_weights(j: usize, state: &GibbsState, c: &Collection, out: &mut [f64]) {
    debug_assert_eq!(out.len(), state.basis_count());
    let u = c.units()[j];
    let t = c.values()[j];
    let range = c.range();
    for (k, slot) in out.iter_mut().enumerate() {
        let w = state.bin_counts[k];
        let l = range.bin_offset_unchecked(t, w);
        *slot = (state.alpha + state.stats.n_ku[k][u] as f64).ln()
            + (state.beta + state.stats.n_kl[k][l] as f64).ln()
            - (w as f64 * state.beta + state.stats.n_k[k] as f64).ln()
            + (w as f64).ln();
    }
}

/// Draws a basis for observation `j`. The state's counts must currently
/// exclude observation `j` (the decrement step of the sweep).
pub fn sample_assignment(
    j: usize,
    state: &GibbsState,
    c: &Collection,
    rng: &mut Rng,
) -> usize {
    let mut weights = vec![0.0; state.basis_count()];
    assignment_log_weights(j, state, c, &mut weights);
    sample_categorical_log(&weights, rng).expect("assignment weights are finite and positive")
}

/// Log score of every candidate bin count `W` in `[1, w_max]` for the given
/// values, up to one W-independent constant:
///
/// ```text
/// sum_l [lnG(beta + n_l) - lnG(beta)] + lnG(W beta) - lnG(W beta + n) + n ln W
/// ```
///
/// Each candidate rebins the values from scratch (counts at one width are
/// not derivable from another); a lazily filled table caches `lnG(beta + c)`
/// over the repeated small counts.
pub fn bin_count_log_scores(values: &[f64], range: Range, beta: f64, w_max: usize) -> Vec<f64> {
    let n = values.len();
    let lg_beta = ln_gamma_raw(beta);
    let mut lg_cache = vec![f64::NAN; n + 1];
    let mut counts = vec![0usize; w_max];
    let mut scores = Vec::with_capacity(w_max);
    for w in 1..=w_max {
        counts[..w].fill(0);
        for &t in values {
            counts[range.bin_offset_unchecked(t, w)] += 1;
        }
        let mut score = 0.0;
        for &count in &counts[..w] {
            if count > 0 {
                let cached = lg_cache[count];
                let lg = if cached.is_nan() {
                    let v = ln_gamma_raw(beta + count as f64);
                    lg_cache[count] = v;
                    v
                } else {
                    cached
                };
                score += lg - lg_beta;
            }
        }
        let wb = w as f64 * beta;
        score += ln_gamma_raw(wb) - ln_gamma_raw(wb + n as f64);
        score += n as f64 * (w as f64).ln();
        scores.push(score);
    }
    scores
}

/// Draws a new bin count for basis `k` and rebins its counts accordingly.
/// Returns the drawn bin count.
pub fn sample_bin_count(
    k: usize,
    state: &mut GibbsState,
    c: &Collection,
    rng: &mut Rng,
) -> usize {
    let values: Vec<f64> = state
        .assignments
        .iter()
        .zip(c.values())
        .filter(|(z, _)| **z == k)
        .map(|(_, t)| *t)
        .collect();
    resample_bin_count(k, &values, state, c.range(), rng)
}

fn resample_bin_count(
    k: usize,
    values: &[f64],
    state: &mut GibbsState,
    range: Range,
    rng: &mut Rng,
) -> usize {
    let scores = bin_count_log_scores(values, range, state.beta, state.w_max);
    let w = sample_categorical_log(&scores, rng).expect("bin-count scores are finite") + 1;
    state.bin_counts[k] = w;
    let counts = &mut state.stats.n_kl[k];
    counts.clear();
    counts.resize(w, 0);
    for &t in values {
        counts[range.bin_offset_unchecked(t, w)] += 1;
    }
    w
}

/// One run of the two fixed-point maps for the Dirichlet concentrations,
/// iterated until the relative change drops below `cfg.fixed_point_tol`.
/// The converged values are clamped to `[1e-6, 1e6]` and written back into
/// the state; returns `(alpha, beta)`.
pub fn update_hyperparameters(state: &mut GibbsState, cfg: &FitConfig) -> Result<(f64, f64)> {
    let alpha = converge_alpha(state, cfg)?;
    let beta = converge_beta(state, cfg)?;
    state.alpha = alpha;
    state.beta = beta;
    Ok((alpha, beta))
}

const CONCENTRATION_MIN: f64 = 1e-6;
const CONCENTRATION_MAX: f64 = 1e6;

fn converge_alpha(state: &GibbsState, cfg: &FitConfig) -> Result<f64> {
    let k_count = state.basis_count();
    let k_f = k_count as f64;
    let stats = &state.stats;
    let mut alpha = state.alpha;
    for _ in 0..cfg.fixed_point_max_iters {
        // Grouped per unit so the K = 1 case cancels term by term.
        let mut num = 0.0;
        let mut den = 0.0;
        for (u, &n_u) in stats.n_u.iter().enumerate() {
            let mut unit_num = -k_f * digamma_raw(alpha);
            for row in &stats.n_ku {
                unit_num += digamma_raw(alpha + row[u] as f64);
            }
            num += unit_num;
            den += k_f * (digamma_raw(k_f * alpha + n_u as f64) - digamma_raw(k_f * alpha));
        }
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::numeric(format!(
                "alpha fixed point produced non-finite terms at alpha = {alpha}"
            )));
        }
        if num <= 0.0 || den <= 0.0 {
            break; // no data information; keep the current value
        }
        let next = (alpha * num / den).clamp(CONCENTRATION_MIN, CONCENTRATION_MAX);
        let rel = (next - alpha).abs() / alpha;
        alpha = next;
        if rel < cfg.fixed_point_tol {
            break;
        }
    }
    Ok(alpha)
}

fn converge_beta(state: &GibbsState, cfg: &FitConfig) -> Result<f64> {
    let stats = &state.stats;
    let mut beta = state.beta;
    for _ in 0..cfg.fixed_point_max_iters {
        // Grouped per basis so the all-W = 1 case cancels term by term.
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, &w) in state.bin_counts.iter().enumerate() {
            let w_f = w as f64;
            let mut basis_num = -w_f * digamma_raw(beta);
            for &n_kl in &stats.n_kl[k] {
                basis_num += digamma_raw(beta + n_kl as f64);
            }
            num += basis_num;
            den += w_f
                * (digamma_raw(w_f * beta + stats.n_k[k] as f64) - digamma_raw(w_f * beta));
        }
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::numeric(format!(
                "beta fixed point produced non-finite terms at beta = {beta}"
            )));
        }
        if num <= 0.0 || den <= 0.0 {
            break;
        }
        let next = (beta * num / den).clamp(CONCENTRATION_MIN, CONCENTRATION_MAX);
        let rel = (next - beta).abs() / beta;
        beta = next;
        if rel < cfg.fixed_point_tol {
            break;
        }
    }
    Ok(beta)
}

/// One full sweep: resample every bin count, then every assignment with the
/// decrement-sample-increment discipline, then (optionally) the
/// concentrations. Returns the joint log-probability of the updated state.
pub fn sweep(
    state: &mut GibbsState,
    c: &Collection,
    cfg: &FitConfig,
    rng: &mut Rng,
) -> Result<f64> {
    sweep_bin_counts(state, c, rng);
    sweep_assignments(state, c, rng);
    if cfg.hyper_update {
        update_hyperparameters(state, cfg)?;
    }
    Ok(log_joint(state, c))
}

fn sweep_bin_counts(state: &mut GibbsState, c: &Collection, rng: &mut Rng) {
    // One pass groups the values by their current basis.
    let k_count = state.basis_count();
    let mut grouped: Vec<Vec<f64>> = vec![Vec::new(); k_count];
    for (&k, &t) in state.assignments.iter().zip(c.values()) {
        grouped[k].push(t);
    }
    for (k, values) in grouped.iter().enumerate() {
        resample_bin_count(k, values, state, c.range(), rng);
    }
}

fn sweep_assignments(state: &mut GibbsState, c: &Collection, rng: &mut Rng) {
    let range = c.range();
    let mut weights = vec![0.0; state.basis_count()];
    for j in 0..c.len() {
        let t = c.values()[j];
        let u = c.units()[j];
        let old = state.assignments[j];
        let old_l = range.bin_offset_unchecked(t, state.bin_counts[old]);
        state.stats.n_ku[old][u] -= 1;
        state.stats.n_kl[old][old_l] -= 1;
        state.stats.n_k[old] -= 1;

        assignment_log_weights(j, state, c, &mut weights);
        let new = sample_categorical_log(&weights, rng)
            .expect("assignment weights are finite and positive");

        let new_l = range.bin_offset_unchecked(t, state.bin_counts[new]);
        state.assignments[j] = new;
        state.stats.n_ku[new][u] += 1;
        state.stats.n_kl[new][new_l] += 1;
        state.stats.n_k[new] += 1;
    }
}

/// Fits the model: burn-in sweeps with concentration updates, then
/// assignment-only sweeps whose posterior predictive means are averaged
/// into the weight and mass estimates.
pub fn fit(c: &Collection, cfg: &FitConfig) -> Result<FitResult> {
    cfg.validate()?;
    if c.is_empty() {
        return Err(Error::argument("fit: empty collection"));
    }
    let mut rng = Rng::from_seed(cfg.seed);
    let k_count = cfg.k_bases;

    // Initial assignments: one categorical distribution drawn from the
    // symmetric Dirichlet, then independent draws per observation.
    let init_weights = sample_symmetric_dirichlet(k_count, cfg.alpha0, &mut rng);
    let assignments: Vec<usize> = (0..c.len())
        .map(|_| sample_categorical(&init_weights, &mut rng).expect("valid init weights"))
        .collect();
    let mut state = GibbsState::new(
        assignments,
        vec![1; k_count],
        cfg.w_max,
        cfg.alpha0,
        cfg.beta0,
        c,
    )?;

    let total_sweeps = cfg.burn_in_sweeps + cfg.posterior_samples;
    let mut log_joint_trace = Vec::with_capacity(total_sweeps);
    let mut bin_count_trace = Vec::with_capacity(total_sweeps);
    for s in 0..cfg.burn_in_sweeps {
        let lj = sweep(&mut state, c, cfg, &mut rng)
            .map_err(|e| Error::numeric(format!("sweep {s}: {e}")))?;
        log_joint_trace.push(lj);
        bin_count_trace.push(state.bin_counts.clone());
    }

    // Estimation phase: bin counts and concentrations stay frozen at their
    // last values; only the assignments move.
    let u_count = c.unit_count();
    let mut weight_acc = vec![vec![0.0; k_count]; u_count];
    let mut mass_acc: Vec<Vec<f64>> = state.bin_counts.iter().map(|&w| vec![0.0; w]).collect();
    let k_f = k_count as f64;
    for _ in 0..cfg.posterior_samples {
        sweep_assignments(&mut state, c, &mut rng);
        log_joint_trace.push(log_joint(&state, c));
        bin_count_trace.push(state.bin_counts.clone());
        for (u, row) in weight_acc.iter_mut().enumerate() {
            let denom = k_f * state.alpha + state.stats.n_u[u] as f64;
            for (k, slot) in row.iter_mut().enumerate() {
                *slot += (state.alpha + state.stats.n_ku[k][u] as f64) / denom;
            }
        }
        for (k, row) in mass_acc.iter_mut().enumerate() {
            let denom = state.bin_counts[k] as f64 * state.beta + state.stats.n_k[k] as f64;
            for (l, slot) in row.iter_mut().enumerate() {
                *slot += (state.beta + state.stats.n_kl[k][l] as f64) / denom;
            }
        }
    }

    let np = cfg.posterior_samples as f64;
    let unit_weights: Vec<Vec<f64>> = weight_acc
        .into_iter()
        .map(|row| row.into_iter().map(|v| v / np).collect())
        .collect();
    let bases: Vec<Histogram> = mass_acc
        .into_iter()
        .map(|row| {
            Histogram::new(c.range(), row.into_iter().map(|v| v / np).collect())
        })
        .collect::<Result<_>>()?;

    Ok(FitResult {
        unit_weights,
        bases,
        alpha: state.alpha,
        beta: state.beta,
        log_joint_trace,
        bin_count_trace,
    })
}
