//! The data container, sufficient statistics, and the exact joint
//! log-probability that defines the posterior the sampler targets.

use crate::error::{Error, Result};
use crate::histogram::Range;
use crate::numerics::ln_gamma_raw;

/// An immutable collection of observations: `unit_count` units, each owning
/// some of the values. Duplicate values and empty units are both allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Collection {
    range: Range,
    unit_count: usize,
    values: Vec<f64>,
    units: Vec<usize>,
    unit_sizes: Vec<usize>,
}

impl Collection {
    /// Builds a collection from `(unit, value)` pairs. Every value must lie
    /// in the half-open range and every unit index must be `< unit_count`.
    pub fn new(
        range: Range,
        unit_count: usize,
        observations: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        if unit_count == 0 {
            return Err(Error::argument("collection needs at least one unit"));
        }
        let mut values = Vec::new();
        let mut units = Vec::new();
        let mut unit_sizes = vec![0usize; unit_count];
        for (j, (u, t)) in observations.into_iter().enumerate() {
            if u >= unit_count {
                return Err(Error::argument(format!(
                    "observation {j}: unit {u} out of range (unit_count = {unit_count})"
                )));
            }
            if !range.contains(t) {
                return Err(Error::domain(format!(
                    "observation {j}: value {t} outside half-open range [{}, {})",
                    range.lower(),
                    range.upper()
                )));
            }
            values.push(t);
            units.push(u);
            unit_sizes[u] += 1;
        }
        Ok(Self {
            range,
            unit_count,
            values,
            units,
            unit_sizes,
        })
    }

    pub fn range(&self) -> Range {
        self.range
    }

    pub fn unit_count(&self) -> usize {
        self.unit_count
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn unit_sizes(&self) -> &[usize] {
        &self.unit_sizes
    }

    /// The values belonging to one unit, in observation order.
    pub fn unit_values(&self, unit: usize) -> Vec<f64> {
        self.units
            .iter()
            .zip(&self.values)
            .filter(|(u, _)| **u == unit)
            .map(|(_, t)| *t)
            .collect()
    }
}

/// Count tables that fully determine the collapsed conditionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffStats {
    /// `n_ku[k][u]`: observations of unit `u` assigned to basis `k`.
    pub n_ku: Vec<Vec<usize>>,
    /// `n_kl[k][l]`: basis-`k` observations falling in its bin `l`
    /// (0-based, row length = bin count of basis `k`).
    pub n_kl: Vec<Vec<usize>>,
    /// `n_k[k]`: total observations assigned to basis `k`.
    pub n_k: Vec<usize>,
    /// `n_u[u]`: total observations of unit `u`.
    pub n_u: Vec<usize>,
}

/// Rebuilds all count tables from scratch for the given assignments and
/// per-basis bin counts.
pub fn recount(assignments: &[usize], bin_counts: &[usize], c: &Collection) -> Result<SuffStats> {
    let k_count = bin_counts.len();
    if k_count == 0 {
        return Err(Error::argument("recount: need at least one basis"));
    }
    if assignments.len() != c.len() {
        return Err(Error::argument(format!(
            "recount: {} assignments for {} observations",
            assignments.len(),
            c.len()
        )));
    }
    if bin_counts.contains(&0) {
        return Err(Error::argument("recount: bin counts must be >= 1"));
    }
    let mut stats = SuffStats {
        n_ku: vec![vec![0; c.unit_count()]; k_count],
        n_kl: bin_counts.iter().map(|&w| vec![0; w]).collect(),
        n_k: vec![0; k_count],
        n_u: c.unit_sizes().to_vec(),
    };
    let range = c.range();
    for (j, (&k, (&t, &u))) in assignments
        .iter()
        .zip(c.values().iter().zip(c.units()))
        .enumerate()
    {
        if k >= k_count {
            return Err(Error::argument(format!(
                "recount: assignment {j} names basis {k} (k_count = {k_count})"
            )));
        }
        let l = range.bin_offset_unchecked(t, bin_counts[k]);
        stats.n_ku[k][u] += 1;
        stats.n_kl[k][l] += 1;
        stats.n_k[k] += 1;
    }
    Ok(stats)
}

/// The mutable state of one collapsed Gibbs chain.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsState {
    /// Basis assignment of each observation (0-based).
    pub assignments: Vec<usize>,
    /// Current bin count of each basis, each in `[1, w_max]`.
    pub bin_counts: Vec<usize>,
    /// Largest bin count the prior considers.
    pub w_max: usize,
    /// Symmetric Dirichlet concentration over per-unit weights.
    pub alpha: f64,
    /// Symmetric Dirichlet concentration over per-basis masses.
    pub beta: f64,
    pub stats: SuffStats,
}

impl GibbsState {
    pub fn new(
        assignments: Vec<usize>,
        bin_counts: Vec<usize>,
        w_max: usize,
        alpha: f64,
        beta: f64,
        c: &Collection,
    ) -> Result<Self> {
        if w_max == 0 || bin_counts.iter().any(|&w| w > w_max) {
            return Err(Error::argument(format!(
                "bin counts must fit in [1, w_max], got {bin_counts:?} with w_max {w_max}"
            )));
        }
        if !(alpha > 0.0) || !(beta > 0.0) {
            return Err(Error::argument(format!(
                "concentrations must be positive, got alpha = {alpha}, beta = {beta}"
            )));
        }
        let stats = recount(&assignments, &bin_counts, c)?;
        Ok(Self {
            assignments,
            bin_counts,
            w_max,
            alpha,
            beta,
            stats,
        })
    }

    pub fn basis_count(&self) -> usize {
        self.bin_counts.len()
    }

    /// True when the stored count tables equal a recount from scratch.
    pub fn counts_consistent(&self, c: &Collection) -> bool {
        recount(&self.assignments, &self.bin_counts, c)
            .map(|fresh| fresh == self.stats)
            .unwrap_or(false)
    }
}

/// Exact log of the joint probability of the data, assignments, and bin
/// counts given the two concentrations (all Dirichlet weight and mass
/// vectors integrated out analytically):
///
/// ```text
/// -K ln Wmax
/// + sum_u [ sum_k (lnG(a + n_ku) - lnG(a)) + lnG(Ka) - lnG(Ka + n_u) ]
/// + sum_k [ sum_l (lnG(b + n_kl) - lnG(b)) + lnG(W_k b) - lnG(W_k b + n_k)
///           + n_k ln(W_k / width) ]
/// ```
///
/// Everything is computed with `ln_gamma`; per-unit and per-basis terms are
/// summed in sorted order so relabeling the bases cannot shift rounding.
pub fn log_joint(state: &GibbsState, c: &Collection) -> f64 {
    let k_count = state.basis_count();
    let alpha = state.alpha;
    let beta = state.beta;
    let k_f = k_count as f64;
    let lg_alpha = ln_gamma_raw(alpha);
    let lg_k_alpha = ln_gamma_raw(k_f * alpha);
    let lg_beta = ln_gamma_raw(beta);

    let mut lp = -k_f * (state.w_max as f64).ln();

    let mut unit_terms = Vec::with_capacity(c.unit_count());
    let mut inner = Vec::with_capacity(k_count);
    for u in 0..c.unit_count() {
        inner.clear();
        for k in 0..k_count {
            inner.push(ln_gamma_raw(alpha + state.stats.n_ku[k][u] as f64) - lg_alpha);
        }
        let mut term = sum_sorted(&mut inner);
        term += lg_k_alpha - ln_gamma_raw(k_f * alpha + state.stats.n_u[u] as f64);
        unit_terms.push(term);
    }
    lp += sum_sorted(&mut unit_terms);

    let width = c.range().width();
    let mut basis_terms = Vec::with_capacity(k_count);
    for k in 0..k_count {
        let w = state.bin_counts[k] as f64;
        let n_k = state.stats.n_k[k] as f64;
        let mut term = 0.0;
        for &n_kl in &state.stats.n_kl[k] {
            term += ln_gamma_raw(beta + n_kl as f64) - lg_beta;
        }
        term += ln_gamma_raw(w * beta) - ln_gamma_raw(w * beta + n_k);
        term += n_k * (w / width).ln();
        basis_terms.push(term);
    }
    lp += sum_sorted(&mut basis_terms);

    lp
}

fn sum_sorted(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn range02() -> Range {
        Range::new(0.0, 2.0).unwrap()
    }

    fn small_collection() -> Collection {
        Collection::new(
            range02(),
            2,
            vec![(0, 0.3), (0, 1.7), (1, 0.9), (1, 1.1)],
        )
        .unwrap()
    }

    #[test]
    fn collection_validates_input() {
        let r = range02();
        assert!(Collection::new(r, 0, vec![]).is_err());
        assert!(Collection::new(r, 1, vec![(1, 0.5)]).is_err());
        assert!(Collection::new(r, 1, vec![(0, 2.0)]).is_err());
        assert!(Collection::new(r, 1, vec![(0, -0.1)]).is_err());
        // Duplicates and empty units are fine.
        let c = Collection::new(r, 3, vec![(0, 0.5), (0, 0.5)]).unwrap();
        assert_eq!(c.unit_sizes(), &[2, 0, 0]);
    }

    #[test]
    fn recount_empty_collection_is_all_zero() {
        let c = Collection::new(range02(), 2, vec![]).unwrap();
        let stats = recount(&[], &[1, 2], &c).unwrap();
        assert_eq!(stats.n_k, vec![0, 0]);
        assert_eq!(stats.n_u, vec![0, 0]);
        assert_eq!(stats.n_ku, vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(stats.n_kl, vec![vec![0], vec![0, 0]]);
    }

    #[test]
    fn recount_single_cell() {
        let c = small_collection();
        let stats = recount(&[0, 0, 0, 0], &[1], &c).unwrap();
        assert_eq!(stats.n_k, vec![4]);
        assert_eq!(stats.n_kl, vec![vec![4]]);
        assert_eq!(stats.n_ku, vec![vec![2, 2]]);
        assert_eq!(stats.n_u, vec![2, 2]);
    }

    #[test]
    fn recount_matches_naive_double_loop() {
        let mut rng = Rng::from_seed(17);
        let r = range02();
        let k_count = 3;
        let bin_counts = vec![4, 1, 7];
        let obs: Vec<(usize, f64)> = (0..50)
            .map(|_| {
                (
                    (rng.next_u64() % 5) as usize,
                    rng.uniform(0.0, 2.0),
                )
            })
            .collect();
        let c = Collection::new(r, 5, obs).unwrap();
        let z: Vec<usize> = (0..50).map(|_| (rng.next_u64() % 3) as usize).collect();
        let stats = recount(&z, &bin_counts, &c).unwrap();

        // Independent naive counter.
        for (k, &w) in bin_counts.iter().enumerate() {
            for u in 0..5 {
                let want = (0..50)
                    .filter(|&j| z[j] == k && c.units()[j] == u)
                    .count();
                assert_eq!(stats.n_ku[k][u], want);
            }
            for l in 1..=w {
                let want = (0..50)
                    .filter(|&j| z[j] == k && r.bin_index(c.values()[j], w).unwrap() == l)
                    .count();
                assert_eq!(stats.n_kl[k][l - 1], want);
            }
            let want: usize = (0..50).filter(|&j| z[j] == k).count();
            assert_eq!(stats.n_k[k], want);
        }
        // Marginal identities.
        for k in 0..k_count {
            assert_eq!(stats.n_ku[k].iter().sum::<usize>(), stats.n_k[k]);
            assert_eq!(stats.n_kl[k].iter().sum::<usize>(), stats.n_k[k]);
        }
        assert_eq!(stats.n_k.iter().sum::<usize>(), 50);
    }

    #[test]
    fn recount_rejects_bad_indices() {
        let c = small_collection();
        assert!(recount(&[0, 0, 0, 5], &[1, 1], &c).is_err());
        assert!(recount(&[0, 0, 0], &[1], &c).is_err());
        assert!(recount(&[0, 0, 0, 0], &[0], &c).is_err());
    }

    #[test]
    fn log_joint_of_empty_data() {
        for (k_count, w_max) in [(1usize, 5usize), (3, 7), (4, 200)] {
            let c = Collection::new(range02(), 2, vec![]).unwrap();
            let state = GibbsState::new(
                vec![],
                vec![1; k_count],
                w_max,
                0.5,
                0.5,
                &c,
            )
            .unwrap();
            let want = -(k_count as f64) * (w_max as f64).ln();
            assert_eq!(log_joint(&state, &c), want);
        }
    }

    #[test]
    fn log_joint_single_observation() {
        // One observation, one basis with one bin on [0, 2): all Dirichlet
        // ratios cancel and only the uniform density term survives.
        let c = Collection::new(range02(), 1, vec![(0, 0.42)]).unwrap();
        let state = GibbsState::new(vec![0], vec![1], 7, 0.5, 0.5, &c).unwrap();
        let want = -(7.0_f64).ln() + 0.5_f64.ln();
        assert!((log_joint(&state, &c) - want).abs() <= 1e-14);
    }

    /// Joint probability of the same configuration computed by the
    /// sequential predictive (urn) rule, with no gamma functions at all:
    /// process observations one at a time, multiplying the predictive
    /// probability of the assignment and of the discretized value.
    fn urn_joint_probability(
        z: &[usize],
        bin_counts: &[usize],
        w_max: usize,
        alpha: f64,
        beta: f64,
        c: &Collection,
    ) -> f64 {
        let k_count = bin_counts.len();
        let mut p = (w_max as f64).powi(-(k_count as i32));
        let mut n_ku = vec![vec![0usize; c.unit_count()]; k_count];
        let mut n_u = vec![0usize; c.unit_count()];
        let mut n_kl: Vec<Vec<usize>> = bin_counts.iter().map(|&w| vec![0; w]).collect();
        let mut n_k = vec![0usize; k_count];
        for (j, &k) in z.iter().enumerate() {
            let u = c.units()[j];
            let t = c.values()[j];
            let w = bin_counts[k];
            let l = c.range().bin_offset_unchecked(t, w);
            p *= (alpha + n_ku[k][u] as f64) / (k_count as f64 * alpha + n_u[u] as f64);
            p *= (beta + n_kl[k][l] as f64) / (w as f64 * beta + n_k[k] as f64);
            p *= w as f64 / c.range().width();
            n_ku[k][u] += 1;
            n_u[u] += 1;
            n_kl[k][l] += 1;
            n_k[k] += 1;
        }
        p
    }

    #[test]
    fn log_joint_matches_urn_oracle_on_random_instances() {
        let mut rng = Rng::from_seed(4);
        for trial in 0..30 {
            let k_count = 1 + (rng.next_u64() % 3) as usize;
            let w_max = 4;
            let obs: Vec<(usize, f64)> = (0..6)
                .map(|_| ((rng.next_u64() % 3) as usize, rng.uniform(0.0, 2.0)))
                .collect();
            let c = Collection::new(range02(), 3, obs).unwrap();
            let z: Vec<usize> = (0..6)
                .map(|_| (rng.next_u64() % k_count as u64) as usize)
                .collect();
            let bin_counts: Vec<usize> = (0..k_count)
                .map(|_| 1 + (rng.next_u64() % w_max as u64) as usize)
                .collect();
            let alpha = rng.uniform(0.1, 3.0);
            let beta = rng.uniform(0.1, 3.0);
            let state =
                GibbsState::new(z.clone(), bin_counts.clone(), w_max, alpha, beta, &c).unwrap();
            let got = log_joint(&state, &c);
            let want = urn_joint_probability(&z, &bin_counts, w_max, alpha, beta, &c).ln();
            assert!(
                (got - want).abs() <= 1e-10,
                "trial {trial}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn exp_log_joint_sums_to_total_probability_over_all_configurations() {
        // Tiny instance: every (z, W) configuration enumerated, the summed
        // joint from log_joint must match the urn-rule total.
        let c = small_collection();
        let _k_count = 2;
        let w_max = 3;
        let (alpha, beta) = (0.5, 0.5);
        let mut total_lj = 0.0;
        let mut total_urn = 0.0;
        let mut configs = 0;
        for z_code in 0..(1 << 4) {
            let z: Vec<usize> = (0..4).map(|j| (z_code >> j) & 1).collect();
            for w0 in 1..=w_max {
                for w1 in 1..=w_max {
                    let bin_counts = vec![w0, w1];
                    let state = GibbsState::new(
                        z.clone(),
                        bin_counts.clone(),
                        w_max,
                        alpha,
                        beta,
                        &c,
                    )
                    .unwrap();
                    total_lj += log_joint(&state, &c).exp();
                    total_urn +=
                        urn_joint_probability(&z, &bin_counts, w_max, alpha, beta, &c);
                    configs += 1;
                }
            }
        }
        assert_eq!(configs, 144);
        assert!(
            (total_lj - total_urn).abs() <= 1e-12 * total_urn,
            "lj total {total_lj}, urn total {total_urn}"
        );
    }

    #[test]
    fn log_joint_is_exchangeable_over_observation_order() {
        let mut rng = Rng::from_seed(6);
        let obs: Vec<(usize, f64)> = (0..20)
            .map(|_| ((rng.next_u64() % 4) as usize, rng.uniform(0.0, 2.0)))
            .collect();
        let z: Vec<usize> = (0..20).map(|_| (rng.next_u64() % 2) as usize).collect();
        let bin_counts = vec![3, 5];

        let c1 = Collection::new(range02(), 4, obs.clone()).unwrap();
        let s1 = GibbsState::new(z.clone(), bin_counts.clone(), 8, 0.7, 0.4, &c1).unwrap();

        // Reverse the observation order together with the assignments.
        let obs_rev: Vec<_> = obs.into_iter().rev().collect();
        let z_rev: Vec<_> = z.into_iter().rev().collect();
        let c2 = Collection::new(range02(), 4, obs_rev).unwrap();
        let s2 = GibbsState::new(z_rev, bin_counts, 8, 0.7, 0.4, &c2).unwrap();

        assert_eq!(log_joint(&s1, &c1), log_joint(&s2, &c2));
    }

    #[test]
    fn log_joint_is_invariant_under_basis_relabeling() {
        let mut rng = Rng::from_seed(13);
        let obs: Vec<(usize, f64)> = (0..25)
            .map(|_| ((rng.next_u64() % 3) as usize, rng.uniform(0.0, 2.0)))
            .collect();
        let z: Vec<usize> = (0..25).map(|_| (rng.next_u64() % 4) as usize).collect();
        let bin_counts = vec![2, 7, 1, 4];
        let c = Collection::new(range02(), 3, obs).unwrap();
        let s1 = GibbsState::new(z.clone(), bin_counts.clone(), 9, 0.5, 1.3, &c).unwrap();

        // Cyclic relabeling k -> k + 1 (mod 4).
        let perm = [1usize, 2, 3, 0];
        let z2: Vec<usize> = z.iter().map(|&k| perm[k]).collect();
        let mut bins2 = vec![0; 4];
        for k in 0..4 {
            bins2[perm[k]] = bin_counts[k];
        }
        let s2 = GibbsState::new(z2, bins2, 9, 0.5, 1.3, &c).unwrap();

        assert_eq!(log_joint(&s1, &c), log_joint(&s2, &c));
    }

    #[test]
    fn counts_consistency_checker_detects_drift() {
        let c = small_collection();
        let mut state = GibbsState::new(vec![0, 1, 0, 1], vec![2, 1], 3, 0.5, 0.5, &c).unwrap();
        assert!(state.counts_consistent(&c));
        state.stats.n_k[0] += 1;
        assert!(!state.counts_consistent(&c));
    }
}
