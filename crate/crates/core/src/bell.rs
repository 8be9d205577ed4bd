//! CHSH statistics for polarization-entangled photon pairs.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};

/// Seed used by the CLI and the acceptance runs unless overridden.
pub const DEFAULT_SEED: u64 = 42;
/// Pairs handled by one random stream in the simulator.
pub const BATCH_SIZE: u64 = 1 << 16;
/// Largest photon number [`required_photons`] will report.
pub const PHOTON_CAP: f64 = 1e15;

/// Analyzer angles of the two observers for one CHSH term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingPair {
    pub alpha: f64,
    pub beta: f64,
}

/// The four CHSH terms in the order (a₀b₀, a₀b₁, a₁b₀, a₁b₁), combined as
/// S = |E₁ − E₂ + E₃ + E₄|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings(pub [SettingPair; 4]);

impl ChshSettings {
    pub fn from_angles(a0: f64, a1: f64, b0: f64, b1: f64) -> Self {
        Self([
            SettingPair { alpha: a0, beta: b0 },
            SettingPair { alpha: a0, beta: b1 },
            SettingPair { alpha: a1, beta: b0 },
            SettingPair { alpha: a1, beta: b1 },
        ])
    }

    /// a ∈ {0, π/4}, b ∈ {π/8, 3π/8}: maximal violation for the singlet.
    pub fn optimal() -> Self {
        Self::from_angles(0.0, PI / 4.0, PI / 8.0, 3.0 * PI / 8.0)
    }
}

impl Default for ChshSettings {
    fn default() -> Self {
        Self::optimal()
    }
}

/// Singlet correlation with visibility `v`, E = −v cos 2(α − β).
pub fn singlet_correlation(v: f64, s: &SettingPair) -> f64 {
    -v * (2.0 * (s.alpha - s.beta)).cos()
}

/// Outcome counts [N₊₊, N₊₋, N₋₊, N₋₋] for each of the four settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoincidenceCounts(pub [[u64; 4]; 4]);

impl CoincidenceCounts {
    pub fn total(&self, setting: usize) -> u64 {
        self.0[setting].iter().sum()
    }

    pub fn grand_total(&self) -> u64 {
        (0..4).map(|i| self.total(i)).sum()
    }

    /// E = (N₊₊ + N₋₋ − N₊₋ − N₋₊)/N for one setting.
    pub fn correlation(&self, setting: usize) -> Result<f64> {
        let [pp, pm, mp, mm] = self.0[setting];
        let n = self.total(setting);
        if n == 0 {
            return domain(format!("no coincidences recorded for setting {setting}"));
        }
        Ok(((pp + mm) as f64 - (pm + mp) as f64) / n as f64)
    }

    /// Writes one row per setting: setting, alpha, beta, n_pp, n_pm, n_mp, n_mm.
    pub fn write_csv<W: Write>(&self, settings: &ChshSettings, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["setting", "alpha", "beta", "n_pp", "n_pm", "n_mp", "n_mm"]).map_err(io_err)?;
        for (i, (s, c)) in settings.0.iter().zip(self.0.iter()).enumerate() {
            let mut row = vec![i.to_string(), format!("{:.16e}", s.alpha), format!("{:.16e}", s.beta)];
            row.extend(c.iter().map(|n| n.to_string()));
            w.write_record(&row).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::Config(e.to_string()))
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Config(format!("csv output failed: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshResult {
    pub s_value: f64,
    pub sigma: f64,
    /// (S − 2)/σ, one-sided.
    pub n_sigma_violation: f64,
    pub correlations: [f64; 4],
}

/// CHSH value from counts with Poisson error propagation. Each count has
/// variance equal to itself, so Var E = (1 − E²)/N per setting.
pub fn chsh_estimate(counts: &CoincidenceCounts) -> Result<ChshResult> {
    let mut e = [0.0; 4];
    let mut var = 0.0;
    for (i, ei) in e.iter_mut().enumerate() {
        *ei = counts.correlation(i)?;
        var += (1.0 - *ei * *ei) / counts.total(i) as f64;
    }
    let s = (e[0] - e[1] + e[2] + e[3]).abs();
    let sigma = var.sqrt();
    if !(sigma > 0.0) {
        return domain("all correlations are ±1; the Poisson error vanishes");
    }
    Ok(ChshResult {
        s_value: s,
        sigma,
        n_sigma_violation: (s - 2.0) / sigma,
        correlations: e,
    })
}

/// Expected (fractional) counts for `n_per_setting` pairs per setting.
pub fn analytic_counts(v: f64, settings: &ChshSettings, n_per_setting: f64) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (row, s) in out.iter_mut().zip(settings.0.iter()) {
        *row = outcome_probabilities(singlet_correlation(v, s)).map(|p| p * n_per_setting);
    }
    out
}

/// CHSH value of exactly known correlations.
pub fn chsh_from_correlations(e: &[f64; 4]) -> f64 {
    (e[0] - e[1] + e[2] + e[3]).abs()
}

/// [P₊₊, P₊₋, P₋₊, P₋₋] with uniform marginals and correlation `e`.
fn outcome_probabilities(e: f64) -> [f64; 4] {
    let same = (1.0 + e) / 4.0;
    let diff = (1.0 - e) / 4.0;
    [same, diff, diff, same]
}

/// Smallest N with N > 36(1 − V²/2)/(√2 V − 1)², the number of detected
/// pairs for a 3σ violation at visibility V.
pub fn required_photons(v: f64) -> Result<u64> {
    if !(v > FRAC_1_SQRT_2) || v > 1.0 {
        return domain(format!("visibility {v} must lie in (1/√2, 1]"));
    }
    let x = 36.0 * (1.0 - v * v / 2.0) / (SQRT_2 * v - 1.0).powi(2);
    if !(x < PHOTON_CAP) {
        return Err(Error::Numeric(format!(
            "required photon number {x:e} exceeds the cap of {PHOTON_CAP:e}"
        )));
    }
    Ok(x.floor() as u64 + 1)
}

/// Writes the N(V) curve on `points` evenly spaced visibilities in
/// [v_min, v_max], columns V, N.
pub fn write_required_photons_csv<W: Write>(v_min: f64, v_max: f64, points: usize, out: W) -> Result<()> {
    if points < 2 || !(v_min < v_max) {
        return domain("curve needs at least two points and v_min < v_max");
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["V", "N"]).map_err(io_err)?;
    for i in 0..points {
        let v = v_min + (v_max - v_min) * i as f64 / (points - 1) as f64;
        let n = required_photons(v)?;
        w.write_record([format!("{v:.16e}"), n.to_string()]).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Config(e.to_string()))
}

/// Samples `n_pairs` detected pairs, assigned round-robin to the four
/// settings (pair i uses setting i mod 4). Pairs are cut into batches of
/// [`BATCH_SIZE`], each drawn from its own ChaCha stream keyed by `seed`
/// and the batch index, so the counts depend only on the seed and inputs.
/// `workers` bounds the thread pool (0 = rayon default).
pub fn simulate_coincidences(
    v: f64,
    n_pairs: u64,
    settings: &ChshSettings,
    seed: u64,
    workers: usize,
) -> Result<CoincidenceCounts> {
    if !(0.0..=1.0).contains(&v) {
        return domain(format!("visibility {v} must lie in [0, 1]"));
    }
    if n_pairs == 0 {
        return domain("at least one pair is required");
    }
    let cdfs: Vec<[f64; 3]> = settings
        .0
        .iter()
        .map(|s| {
            let p = outcome_probabilities(singlet_correlation(v, s));
            [p[0], p[0] + p[1], p[0] + p[1] + p[2]]
        })
        .collect();
    let batches = n_pairs.div_ceil(BATCH_SIZE);
    let run = || {
        (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(b);
                let start = b * BATCH_SIZE;
                let end = (start + BATCH_SIZE).min(n_pairs);
                let mut c = [[0u64; 4]; 4];
                for i in start..end {
                    let s = (i % 4) as usize;
                    let u: f64 = rng.random();
                    let k = cdfs[s].iter().take_while(|&&edge| u >= edge).count();
                    c[s][k] += 1;
                }
                c
            })
            .reduce(
                || [[0u64; 4]; 4],
                |mut a, b| {
                    for (ra, rb) in a.iter_mut().zip(b.iter()) {
                        for (x, y) in ra.iter_mut().zip(rb.iter()) {
                            *x += y;
                        }
                    }
                    a
                },
            )
    };
    let counts = if workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?
            .install(run)
    };
    Ok(CoincidenceCounts(counts))
}

/// Seed for trial `t` of a repeated experiment.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Fraction of `trials` simulated experiments with `n_pairs` pairs that
/// reach a one-sided violation of at least `threshold` σ.
pub fn violation_rate(
    v: f64,
    n_pairs: u64,
    settings: &ChshSettings,
    trials: u64,
    threshold: f64,
    seed: u64,
    workers: usize,
) -> Result<f64> {
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let mut hits = 0u64;
    for t in 0..trials {
        let counts = simulate_coincidences(v, n_pairs, settings, trial_seed(seed, t), workers)?;
        match chsh_estimate(&counts) {
            Ok(r) if r.n_sigma_violation >= threshold => hits += 1,
            Ok(_) => {}
            // all correlations ±1, so σ = 0: any S above 2 is an infinite-σ violation
            Err(_) => {
                let e: Vec<f64> = (0..4).map(|i| counts.correlation(i)).collect::<Result<_>>()?;
                if chsh_from_correlations(&[e[0], e[1], e[2], e[3]]) > 2.0 {
                    hits += 1;
                }
            }
        }
    }
    Ok(hits as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Rounds expected counts at a large scale so ratios stay exact enough.
    fn rounded(v: f64, n: f64) -> CoincidenceCounts {
        let a = analytic_counts(v, &ChshSettings::optimal(), n);
        CoincidenceCounts(a.map(|row| row.map(|x| x.round() as u64)))
    }

    #[test]
    fn tsirelson_from_exact_correlations() {
        let s = ChshSettings::optimal();
        let e = s.0.map(|p| singlet_correlation(1.0, &p));
        assert!((chsh_from_correlations(&e) - 2.0 * SQRT_2).abs() < 1e-10);
        let e9 = s.0.map(|p| singlet_correlation(0.9, &p));
        assert!((chsh_from_correlations(&e9) - 2.546).abs() < 1e-3);
    }

    #[test]
    fn estimate_from_counts() {
        let r = chsh_estimate(&rounded(1.0, 1e12)).unwrap();
        assert!((r.s_value - 2.0 * SQRT_2).abs() < 1e-10, "{}", r.s_value);
        let r = chsh_estimate(&rounded(0.9, 1e12)).unwrap();
        assert!((r.s_value - 0.9 * 2.0 * SQRT_2).abs() < 1e-10);
        let flat = CoincidenceCounts([[25; 4]; 4]);
        let r = chsh_estimate(&flat).unwrap();
        assert_eq!(r.s_value, 0.0);
        assert_relative_eq!(r.sigma, (4.0f64 / 100.0).sqrt());
        let mut empty = flat;
        empty.0[2] = [0; 4];
        assert!(chsh_estimate(&empty).is_err());
    }

    #[test]
    fn poisson_error_matches_direct_propagation() {
        let c = CoincidenceCounts([[40, 10, 12, 38], [9, 41, 37, 13], [39, 11, 10, 40], [42, 8, 12, 38]]);
        let r = chsh_estimate(&c).unwrap();
        // ∂E/∂N_k = (±1·N − (A − B))/N², Var = Σ (∂E/∂N_k)² N_k
        let mut var = 0.0;
        for row in c.0 {
            let n: f64 = row.iter().map(|&x| x as f64).sum();
            let diff = (row[0] + row[3]) as f64 - (row[1] + row[2]) as f64;
            for (k, &nk) in row.iter().enumerate() {
                let sign = if k == 0 || k == 3 { 1.0 } else { -1.0 };
                let d = (sign * n - diff) / (n * n);
                var += d * d * nk as f64;
            }
        }
        assert_relative_eq!(r.sigma, var.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn required_photon_values() {
        assert_eq!(required_photons(1.0).unwrap(), 105);
        assert_eq!(required_photons(0.9).unwrap(), 288);
        assert!(required_photons(FRAC_1_SQRT_2).is_err());
        assert!(required_photons(0.5).is_err());
        assert!(required_photons(1.1).is_err());
        assert!(matches!(required_photons(FRAC_1_SQRT_2 + 1e-9), Err(Error::Numeric(_))));
        assert!(required_photons(0.72).unwrap() > 10_000);
    }

    #[test]
    fn curve_csv() {
        let mut buf = Vec::new();
        write_required_photons_csv(0.8, 1.0, 3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "V,N");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].ends_with(",105"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn counts_csv() {
        let mut buf = Vec::new();
        CoincidenceCounts([[1, 2, 3, 4]; 4]).write_csv(&ChshSettings::optimal(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("setting,alpha,beta,n_pp,n_pm,n_mp,n_mm\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn simulator_statistics() {
        let s = ChshSettings::optimal();
        let n = 1_000_000;
        let r = chsh_estimate(&simulate_coincidences(1.0, n, &s, DEFAULT_SEED, 0).unwrap()).unwrap();
        assert!((r.s_value - 2.0 * SQRT_2).abs() < 5.0 * r.sigma);
        let r0 = chsh_estimate(&simulate_coincidences(0.0, n, &s, DEFAULT_SEED, 0).unwrap()).unwrap();
        assert!(r0.s_value < 4.0 / (n as f64).sqrt());
        let c = simulate_coincidences(0.5, 10, &s, 1, 0).unwrap();
        assert_eq!(c.grand_total(), 10);
        assert_eq!((c.total(0), c.total(1), c.total(2), c.total(3)), (3, 3, 2, 2));
        assert!(simulate_coincidences(1.5, 10, &s, 1, 0).is_err());
        assert!(simulate_coincidences(0.5, 0, &s, 1, 0).is_err());
    }

    #[test]
    fn simulator_is_deterministic_across_workers() {
        let s = ChshSettings::optimal();
        let n = 5 * BATCH_SIZE + 123;
        let a = simulate_coincidences(0.9, n, &s, 7, 1).unwrap();
        let b = simulate_coincidences(0.9, n, &s, 7, 4).unwrap();
        let c = simulate_coincidences(0.9, n, &s, 7, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_ne!(a, simulate_coincidences(0.9, n, &s, 8, 4).unwrap());
    }

    proptest! {
        #[test]
        fn required_photons_decreasing(a in 0.7072f64..1.0, b in 0.7072f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-6);
            prop_assert!(required_photons(hi).unwrap() <= required_photons(lo).unwrap());
        }

        #[test]
        fn estimates_are_bounded(v in 0.0f64..0.95, n in 400u64..5000, seed in any::<u64>()) {
            let c = simulate_coincidences(v, n, &ChshSettings::optimal(), seed, 0).unwrap();
            if let Ok(r) = chsh_estimate(&c) {
                prop_assert!(r.correlations.iter().all(|e| e.abs() <= 1.0));
                prop_assert!(r.s_value <= 4.0);
                prop_assert!(r.s_value <= 2.0 * SQRT_2 + 5.0 * r.sigma);
            }
        }
    }
}
