//! Accuracy-versus-noise sweeps over the synthetic models.
//!
//! The ground truth is always `X -> Y`; a trial succeeds when RESIT returns
//! exactly that (undecided verdicts count as failures). Each
//! (model, i-factor) cell gets its own seed derived from the base seed, and
//! repetition `r` of the cell uses stream `r` of that seed. All estimators in
//! a cell score the same samples, and any cell can be recomputed alone.

pub mod config;
mod output;
mod plot;
mod summary;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::regression::Transform;
use crate::resit::{decide_direction, Direction, DirectionVerdict, EstimatorKind, ScoreEstimator, SplitConfig};
use crate::synth::{generate_pair, splitmix64, Distribution, IFactor, ModelSpec, SamplePair, Seed, Structure};

pub use config::{ConfigFile, Profile};
pub use output::{emit_csv, emit_diagnostics, write_csv, write_diagnostics, CSV_HEADER};
pub use plot::{emit_plots, plot_file_name, render_svg};
pub use summary::{render_tables, summarize_ranges, RangeBound, RangeSummary};

/// One of the 18 (structure, cause, noise) combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelKey {
    pub structure: Structure,
    pub x_dist: Distribution,
    pub noise_dist: Distribution,
}

impl ModelKey {
    pub const fn new(structure: Structure, x_dist: Distribution, noise_dist: Distribution) -> Self {
        ModelKey {
            structure,
            x_dist,
            noise_dist,
        }
    }

    /// All 18 models: linear before cubic, then cause, then noise, each in
    /// the order normal, uniform, Laplace.
    pub fn all() -> Vec<ModelKey> {
        Structure::ALL
            .into_iter()
            .flat_map(|s| {
                Distribution::ALL
                    .into_iter()
                    .flat_map(move |x| Distribution::ALL.into_iter().map(move |n| ModelKey::new(s, x, n)))
            })
            .collect()
    }

    pub fn spec(&self, i_factor: IFactor, n_samples: usize) -> Result<ModelSpec> {
        ModelSpec::new(self.structure, self.x_dist, self.noise_dist, i_factor, n_samples)
    }

    /// Short label such as `N+U` or `N^3+U`.
    pub fn label(&self) -> String {
        let cube = match self.structure {
            Structure::Linear => "",
            Structure::Cubic => "^3",
        };
        format!("{}{cube}+{}", self.x_dist.symbol(), self.noise_dist.symbol())
    }
}

impl fmt::Display for ModelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}+{}", self.structure, self.x_dist.symbol(), self.noise_dist.symbol())
    }
}

impl FromStr for ModelKey {
    type Err = Error;

    /// Parses `linear:N+U` / `cubic:L+L`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("model {s:?} is not of the form <linear|cubic>:<N|U|L>+<N|U|L>"));
        let (structure, dists) = s.trim().split_once(':').ok_or_else(bad)?;
        let (x, n) = dists.split_once('+').ok_or_else(bad)?;
        Ok(ModelKey::new(structure.parse()?, x.parse()?, n.parse()?))
    }
}

/// How the cubic mechanism is made linear for the regressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicFit {
    /// Replace the cause by its cube and run linear RESIT on `(x³, y)`:
    /// both regressions and both scores see the cubed cause.
    CubedCause,
    /// Keep the raw cause in the scores; regress `y` on `x³` and `x` on
    /// `backward(y)`.
    Regressors { backward: Transform },
}

impl CubicFit {
    pub fn name(self) -> &'static str {
        match self {
            CubicFit::CubedCause => "cubed-cause",
            CubicFit::Regressors { backward: Transform::SignedCubeRoot } => "cbrt",
            CubicFit::Regressors { backward: Transform::Identity } => "identity",
            CubicFit::Regressors { backward: Transform::Cube } => "cube",
        }
    }
}

impl fmt::Display for CubicFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CubicFit {
    type Err = Error;

    /// `cubed-cause`, or the backward regressor transform (`cbrt`,
    /// `identity`, `cube`).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cubed-cause" | "cubed_cause" => Ok(CubicFit::CubedCause),
            other => Ok(CubicFit::Regressors {
                backward: other.parse()?,
            }),
        }
    }
}

/// Regression settings shared by every trial of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOptions {
    pub cubic: CubicFit,
    pub split: SplitConfig,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions {
            cubic: CubicFit::CubedCause,
            split: SplitConfig::default(),
        }
    }
}

impl TrialOptions {
    /// (forward, backward) regressor transforms for a structure, applied
    /// after [`TrialOptions::prepare`].
    pub fn transforms(&self, structure: Structure) -> (Transform, Transform) {
        match (structure, self.cubic) {
            (Structure::Linear, _) | (Structure::Cubic, CubicFit::CubedCause) => {
                (Transform::Identity, Transform::Identity)
            }
            (Structure::Cubic, CubicFit::Regressors { backward }) => (Transform::Cube, backward),
        }
    }

    /// The pair RESIT actually sees: the generated one, or `(x³, y)` for
    /// cubic models under [`CubicFit::CubedCause`].
    pub fn prepare(&self, structure: Structure, pair: SamplePair) -> Result<SamplePair> {
        match (structure, self.cubic) {
            (Structure::Cubic, CubicFit::CubedCause) => {
                let (x, y) = pair.into_parts();
                SamplePair::new(x.into_iter().map(|v| v * v * v).collect(), y)
            }
            _ => Ok(pair),
        }
    }

    /// Runs RESIT on a generated pair of the given structure.
    pub fn decide(&self, structure: Structure, pair: SamplePair, estimator: ScoreEstimator) -> Result<DirectionVerdict> {
        let pair = self.prepare(structure, pair)?;
        let (fwd, bwd) = self.transforms(structure);
        decide_direction(&pair, fwd, bwd, estimator, self.split)
    }
}

pub fn run_trial(spec: &ModelSpec, estimator: ScoreEstimator, seed: Seed) -> Result<DirectionVerdict> {
    run_trial_with(spec, estimator, seed, &TrialOptions::default())
}

pub fn run_trial_with(
    spec: &ModelSpec,
    estimator: ScoreEstimator,
    seed: Seed,
    options: &TrialOptions,
) -> Result<DirectionVerdict> {
    let pair = generate_pair(spec, seed)?;
    options.decide(spec.structure, pair, estimator)
}

/// Seed of a (model, i-factor) cell; repetition `r` uses `trial_index = r`.
pub fn cell_seed(base_seed: u64, model: ModelKey, i: IFactor) -> Seed {
    let code = ((model.structure as u64) << 48)
        | ((model.x_dist as u64) << 40)
        | ((model.noise_dist as u64) << 32)
        | u64::from(i.hundredths());
    let mut state = base_seed;
    let mixed = splitmix64(&mut state);
    let mut state = mixed ^ code;
    Seed::new(splitmix64(&mut state), 0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub models: Vec<ModelKey>,
    pub i_values: Vec<IFactor>,
    pub estimators: Vec<EstimatorKind>,
    pub repetitions: u64,
    pub n_samples: usize,
    pub base_seed: u64,
    pub workers: usize,
    pub options: TrialOptions,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::Config(format!("{what} list is empty")));
        if self.models.is_empty() {
            return empty("model");
        }
        if self.i_values.is_empty() {
            return empty("i-factor");
        }
        if self.estimators.is_empty() {
            return empty("estimator");
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        if self.n_samples < ModelSpec::MIN_SAMPLES {
            return Err(Error::Config(format!("samples must be at least {}", ModelSpec::MIN_SAMPLES)));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.models.len() * self.i_values.len() * self.estimators.len()
    }

    pub fn trial_count(&self) -> u64 {
        (self.models.len() * self.i_values.len()) as u64 * self.repetitions
    }
}

/// Outcome counts of one (model, estimator, i-factor) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRecord {
    pub model: ModelKey,
    pub estimator: EstimatorKind,
    pub i: IFactor,
    pub n_samples: usize,
    /// Completed repetitions (excludes errored ones).
    pub repetitions: u64,
    pub successes: u64,
    pub errors: u64,
    pub base_seed: u64,
    pub first_error: Option<String>,
}

impl AccuracyRecord {
    /// `successes / repetitions`; 0 when no repetition completed.
    pub fn accuracy(&self) -> f64 {
        if self.repetitions == 0 {
            0.0
        } else {
            self.successes as f64 / self.repetitions as f64
        }
    }

    fn sort_key(&self) -> (ModelKey, EstimatorKind, IFactor) {
        (self.model, self.estimator, self.i)
    }
}

/// Pairs of matching cells (same model, estimator, i) from two sweeps with
/// different seeds whose accuracies differ by more than `z` standard errors
/// of a difference of two binomial proportions (pooled estimate). Cells
/// present in only one sweep are ignored.
pub fn seed_disagreements<'a>(
    a: &'a [AccuracyRecord],
    b: &'a [AccuracyRecord],
    z: f64,
) -> Vec<(&'a AccuracyRecord, &'a AccuracyRecord)> {
    let index: std::collections::HashMap<_, _> = b.iter().map(|r| (r.sort_key(), r)).collect();
    a.iter()
        .filter_map(|ra| index.get(&ra.sort_key()).map(|rb| (ra, *rb)))
        .filter(|(ra, rb)| {
            if ra.repetitions == 0 || rb.repetitions == 0 {
                return false;
            }
            let (na, nb) = (ra.repetitions as f64, rb.repetitions as f64);
            let p = (ra.successes + rb.successes) as f64 / (na + nb);
            let se = (p * (1.0 - p) * (1.0 / na + 1.0 / nb)).sqrt();
            (ra.accuracy() - rb.accuracy()).abs() > z * se + 1e-12
        })
        .collect()
}

#[derive(Debug, Clone)]
enum Outcome {
    Hit,
    Miss,
    Failed(String),
}

fn evaluate_unit(config: &SweepConfig, model: ModelKey, i: IFactor, rep: u64) -> Vec<Outcome> {
    let seed = Seed::new(cell_seed(config.base_seed, model, i).base, rep);
    let failed = |what: &str, e: Error| {
        Outcome::Failed(
            Error::Trial {
                cell: format!("{model} i={i} {what}"),
                repetition: rep,
                source: Box::new(e),
            }
            .to_string(),
        )
    };
    let opts = &config.options;
    let pair = match model
        .spec(i, config.n_samples)
        .and_then(|s| generate_pair(&s, seed))
        .and_then(|p| opts.prepare(model.structure, p))
    {
        Ok(p) => p,
        Err(e) => return vec![failed("sampling", e); config.estimators.len()],
    };
    let (fwd, bwd) = opts.transforms(model.structure);
    config
        .estimators
        .iter()
        .map(|kind| match decide_direction(&pair, fwd, bwd, kind.estimator(), opts.split) {
            Ok(v) if v.direction == Direction::XtoY => Outcome::Hit,
            Ok(_) => Outcome::Miss,
            Err(e) => failed(kind.name(), e),
        })
        .collect()
}

/// Evaluates every (model, i-factor, estimator, repetition) combination.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<AccuracyRecord>> {
    run_sweep_with_progress(config, |_, _| {})
}

/// As [`run_sweep`], calling `progress(done, total)` as (model, i, repetition)
/// units finish. Calls may arrive from any worker thread.
pub fn run_sweep_with_progress<F>(config: &SweepConfig, progress: F) -> Result<Vec<AccuracyRecord>>
where
    F: Fn(usize, usize) + Sync,
{
    config.validate()?;
    let units: Vec<(usize, usize, u64)> = (0..config.models.len())
        .flat_map(|m| (0..config.i_values.len()).flat_map(move |i| (0..config.repetitions).map(move |r| (m, i, r))))
        .collect();
    let total = units.len();
    let done = AtomicUsize::new(0);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Vec<Outcome>> = pool.install(|| {
        units
            .par_iter()
            .map(|&(m, i, r)| {
                let out = evaluate_unit(config, config.models[m], config.i_values[i], r);
                progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
                out
            })
            .collect()
    });

    // Aggregation walks units in their canonical order, independent of scheduling.
    let n_est = config.estimators.len();
    let mut records: Vec<AccuracyRecord> = Vec::with_capacity(config.cell_count());
    for (m, &model) in config.models.iter().enumerate() {
        for (ii, &i) in config.i_values.iter().enumerate() {
            for (e, &estimator) in config.estimators.iter().enumerate() {
                let mut rec = AccuracyRecord {
                    model,
                    estimator,
                    i,
                    n_samples: config.n_samples,
                    repetitions: 0,
                    successes: 0,
                    errors: 0,
                    base_seed: config.base_seed,
                    first_error: None,
                };
                let start = (m * config.i_values.len() + ii) * config.repetitions as usize;
                for unit in &outcomes[start..start + config.repetitions as usize] {
                    debug_assert_eq!(unit.len(), n_est);
                    match &unit[e] {
                        Outcome::Hit => {
                            rec.repetitions += 1;
                            rec.successes += 1;
                        }
                        Outcome::Miss => rec.repetitions += 1,
                        Outcome::Failed(msg) => {
                            rec.errors += 1;
                            rec.first_error.get_or_insert_with(|| msg.clone());
                        }
                    }
                }
                records.push(rec);
            }
        }
    }
    records.sort_by_key(AccuracyRecord::sort_key);
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> SweepConfig {
        SweepConfig {
            models: vec!["linear:U+U".parse().unwrap(), "cubic:N+L".parse().unwrap()],
            i_values: vec![IFactor::from_hundredths(20), IFactor::from_hundredths(200)],
            estimators: vec![EstimatorKind::DistCorr, EstimatorKind::ShSpacingV],
            repetitions: 5,
            n_samples: 200,
            base_seed: 17,
            workers: 1,
            options: TrialOptions::default(),
        }
    }

    #[test]
    fn model_inventory() {
        let all = ModelKey::all();
        assert_eq!(all.len(), 18);
        assert_eq!(all[1].label(), "N+U");
        assert_eq!(all[9].label(), "N^3+N");
        for m in &all {
            assert_eq!(m.to_string().parse::<ModelKey>().unwrap(), *m);
        }
        assert!("linear:N*U".parse::<ModelKey>().is_err());
        assert!("quadratic:N+U".parse::<ModelKey>().is_err());
    }

    #[test]
    fn cubic_fit_modes() {
        assert_eq!("cubed-cause".parse::<CubicFit>().unwrap(), CubicFit::CubedCause);
        for m in ["cbrt", "identity", "cube"] {
            assert_eq!(m.parse::<CubicFit>().unwrap().name(), m);
        }
        assert!("square".parse::<CubicFit>().is_err());

        let spec = "cubic:U+N".parse::<ModelKey>().unwrap().spec(IFactor::from_hundredths(50), 100).unwrap();
        let pair = generate_pair(&spec, Seed::new(1, 0)).unwrap();
        let cubed = TrialOptions::default().prepare(Structure::Cubic, pair.clone()).unwrap();
        assert_eq!(cubed.y(), pair.y());
        assert!(cubed.x().iter().zip(pair.x()).all(|(c, x)| *c == x * x * x));
        let raw = TrialOptions {
            cubic: CubicFit::Regressors { backward: Transform::SignedCubeRoot },
            ..TrialOptions::default()
        };
        assert_eq!(raw.prepare(Structure::Cubic, pair.clone()).unwrap(), pair);
        assert_eq!(raw.transforms(Structure::Cubic), (Transform::Cube, Transform::SignedCubeRoot));
        assert_eq!(
            TrialOptions::default().prepare(Structure::Linear, pair.clone()).unwrap(),
            pair
        );
    }

    #[test]
    fn single_cell_sweep() {
        let mut c = tiny_config();
        c.models.truncate(1);
        c.i_values.truncate(1);
        c.estimators.truncate(1);
        c.repetitions = 1;
        let r = run_sweep(&c).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].repetitions + r[0].errors, 1);
    }

    #[test]
    fn records_are_sorted_and_bounded() {
        let r = run_sweep(&tiny_config()).unwrap();
        assert_eq!(r.len(), 8);
        assert!(r.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
        for rec in &r {
            assert!(rec.successes <= rec.repetitions);
            assert!((0.0..=1.0).contains(&rec.accuracy()));
        }
    }

    #[test]
    fn cell_matches_isolated_trials() {
        let c = tiny_config();
        let records = run_sweep(&c).unwrap();
        let rec = records
            .iter()
            .find(|r| r.model == c.models[1] && r.i == c.i_values[1] && r.estimator == EstimatorKind::ShSpacingV)
            .unwrap();
        let spec = c.models[1].spec(c.i_values[1], c.n_samples).unwrap();
        let seed = cell_seed(c.base_seed, c.models[1], c.i_values[1]);
        let hits = (0..c.repetitions)
            .filter(|&r| {
                run_trial(&spec, EstimatorKind::ShSpacingV.estimator(), Seed::new(seed.base, r))
                    .unwrap()
                    .direction
                    == Direction::XtoY
            })
            .count() as u64;
        assert_eq!(rec.successes, hits);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut c = tiny_config();
        let one = run_sweep(&c).unwrap();
        c.workers = 3;
        assert_eq!(run_sweep(&c).unwrap(), one);
    }

    #[test]
    fn seed_comparison_flags_only_large_gaps() {
        let base = run_sweep(&tiny_config()).unwrap();
        assert!(seed_disagreements(&base, &base, 3.0).is_empty());
        let mut high = base.clone();
        let mut low = base.clone();
        for (h, l) in high.iter_mut().zip(&mut low) {
            h.successes = h.repetitions;
            l.successes = 0;
        }
        assert_eq!(seed_disagreements(&high, &low, 3.0).len(), base.len());
    }

    #[test]
    fn empty_lists_rejected() {
        let mut c = tiny_config();
        c.estimators.clear();
        assert!(run_sweep(&c).is_err());
        let mut c = tiny_config();
        c.repetitions = 0;
        assert!(run_sweep(&c).is_err());
    }

    #[test]
    fn cell_seeds_differ_across_cells() {
        let models = ModelKey::all();
        let mut seen = std::collections::HashSet::new();
        for m in &models {
            for i in crate::synth::i_grid() {
                assert!(seen.insert(cell_seed(1, *m, i).base));
            }
        }
    }
}
