//! Per-experiment configuration, read from flat TOML files.
//!
//! Every key is optional and falls back to the documented default. Unknown
//! keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    WaveAdversarial,
    WaveRegularized,
    PerconvRecon,
    RateStudy,
    BoundsAudit,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::WaveAdversarial,
        Experiment::WaveRegularized,
        Experiment::PerconvRecon,
        Experiment::RateStudy,
        Experiment::BoundsAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::WaveAdversarial => "wave-adversarial",
            Experiment::WaveRegularized => "wave-regularized",
            Experiment::PerconvRecon => "perconv-recon",
            Experiment::RateStudy => "rate-study",
            Experiment::BoundsAudit => "bounds-audit",
        }
    }
}

/// Steepening transition profiles f_n and their end states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveAdversarialConfig {
    pub seed: u64,
    pub out_dir: String,
    /// First and last family index (inclusive).
    pub n_min: u32,
    pub n_max: u32,
    /// End time of the propagation.
    pub time: f64,
    pub r_max: f64,
    pub points: usize,
    /// Weight of f_n added to the clean pulse in the perturbed states.
    pub perturbation_amplitude: f64,
    /// Radius of the clean bump pulse.
    pub pulse_radius: f64,
    /// CFL number of the finite-difference cross-check.
    pub fd_cfl: f64,
    /// Allowed relative sup-norm gap between the exact and FD end states.
    pub fd_tolerance: f64,
}

impl Default for WaveAdversarialConfig {
    fn default() -> Self {
        WaveAdversarialConfig {
            seed: 0,
            out_dir: "out/wave-adversarial".into(),
            n_min: 1,
            n_max: 4,
            time: 1.0,
            r_max: 3.0,
            points: 4096,
            perturbation_amplitude: 0.01,
            pulse_radius: 1.5,
            fd_cfl: 0.5,
            fd_tolerance: 0.01,
        }
    }
}

/// Clean, perturbed and filtered propagation of one perturbed pulse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveRegularizedConfig {
    pub seed: u64,
    pub out_dir: String,
    /// Mollifier scale of k_α.
    pub alpha: f64,
    /// Window scale of h_β.
    pub beta: f64,
    pub perturbation_index: u32,
    pub perturbation_amplitude: f64,
    pub pulse_radius: f64,
    pub time: f64,
    pub r_max: f64,
    pub points: usize,
    /// Rows of the filter table.
    pub filter_points: usize,
}

impl Default for WaveRegularizedConfig {
    fn default() -> Self {
        WaveRegularizedConfig {
            seed: 0,
            out_dir: "out/wave-regularized".into(),
            alpha: 0.1,
            beta: 0.1,
            perturbation_index: 5,
            perturbation_amplitude: 0.01,
            pulse_radius: 1.5,
            time: 1.0,
            r_max: 4.0,
            points: 4001,
            filter_points: 401,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalName {
    SmoothOscillatory,
    PiecewiseLinear,
    PiecewiseConstant,
}

impl SignalName {
    pub fn kind(self) -> linfreg_core::perconv::TestSignalKind {
        use linfreg_core::perconv::TestSignalKind;
        match self {
            SignalName::SmoothOscillatory => TestSignalKind::smooth_oscillatory(),
            SignalName::PiecewiseLinear => TestSignalKind::piecewise_linear(),
            SignalName::PiecewiseConstant => TestSignalKind::piecewise_constant(),
        }
    }
}

/// Deconvolution of the test signals with the singular periodic kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerconvReconConfig {
    pub seed: u64,
    pub out_dir: String,
    /// Kernel exponent: k̂[n] = (|n|+1)^{−ρ}.
    pub rho: f64,
    /// Fourier truncation N of signals, data and operator.
    pub truncation: usize,
    /// ‖r‖ / ‖y‖ of the adversarial perturbation.
    pub perturbation_relative: f64,
    /// Relative L² error levels on clean data that fix α.
    pub targets: Vec<f64>,
    pub signals: Vec<SignalName>,
    /// η of the weight schedule c_n ≥ C σ_n^{1−η/2}.
    pub eta: f64,
    pub weight_floor: f64,
    pub weight_constant: f64,
    /// Samples per reconstruction in the CSV output.
    pub sample_points: usize,
}

impl Default for PerconvReconConfig {
    fn default() -> Self {
        PerconvReconConfig {
            seed: 0,
            out_dir: "out/perconv-recon".into(),
            rho: 1.0 / 3.0,
            truncation: 32768,
            perturbation_relative: 0.005,
            targets: vec![0.16, 0.08, 0.04],
            signals: vec![
                SignalName::SmoothOscillatory,
                SignalName::PiecewiseLinear,
                SignalName::PiecewiseConstant,
            ],
            eta: 4.0,
            weight_floor: 1.0,
            weight_constant: 1.0,
            sample_points: 1024,
        }
    }
}

/// α sweeps on source-set data and the noisy α = √δ variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateStudyConfig {
    pub seed: u64,
    pub out_dir: String,
    pub rho: f64,
    pub truncation: usize,
    /// Weights c_n = σ_n^{−β}.
    pub beta: f64,
    pub etas: Vec<f64>,
    /// α = 2^{−k} for k in alpha_k_min..=alpha_k_max.
    pub alpha_k_min: u32,
    pub alpha_k_max: u32,
    /// δ log-spaced over [10^min, 10^max].
    pub delta_log10_min: f64,
    pub delta_log10_max: f64,
    pub delta_points: usize,
}

impl Default for RateStudyConfig {
    fn default() -> Self {
        RateStudyConfig {
            seed: 0,
            out_dir: "out/rate-study".into(),
            rho: 1.0 / 3.0,
            truncation: 512,
            beta: 1.0,
            etas: vec![1.0, 2.0, 4.0],
            alpha_k_min: 4,
            alpha_k_max: 14,
            delta_log10_min: -6.0,
            delta_log10_max: -2.0,
            delta_points: 9,
        }
    }
}

/// Randomized checks of every operator bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsAuditConfig {
    pub seed: u64,
    pub out_dir: String,
    /// Random SVD problems for the Tikhonov and domination checks.
    pub problems: usize,
    pub problem_size: usize,
    pub alphas: Vec<f64>,
    /// Random unit probes of the L∞ operator bound.
    pub probes: usize,
    pub probe_truncation: usize,
    pub probe_alphas: Vec<f64>,
    pub envelope_etas: Vec<f64>,
    pub envelope_alphas: Vec<f64>,
    /// Random radial fields for the preconditioned multiplier bounds.
    pub wave_fields: usize,
    /// Swap two singular values before validation (negative test).
    pub tamper_sigma_order: bool,
}

impl Default for BoundsAuditConfig {
    fn default() -> Self {
        BoundsAuditConfig {
            seed: 0,
            out_dir: "out/bounds-audit".into(),
            problems: 100,
            problem_size: 200,
            alphas: vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0],
            probes: 200,
            probe_truncation: 256,
            probe_alphas: vec![1e-3, 1e-2, 1e-1],
            envelope_etas: vec![1.0, 2.0, 3.0, 3.9],
            envelope_alphas: vec![1e-3, 1e-2, 1e-1],
            wave_fields: 20,
            tamper_sigma_order: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    WaveAdversarial(WaveAdversarialConfig),
    WaveRegularized(WaveRegularizedConfig),
    PerconvRecon(PerconvReconConfig),
    RateStudy(RateStudyConfig),
    BoundsAudit(BoundsAuditConfig),
}

macro_rules! each {
    ($self:expr, $c:ident => $body:expr) => {
        match $self {
            ExperimentConfig::WaveAdversarial($c) => $body,
            ExperimentConfig::WaveRegularized($c) => $body,
            ExperimentConfig::PerconvRecon($c) => $body,
            ExperimentConfig::RateStudy($c) => $body,
            ExperimentConfig::BoundsAudit($c) => $body,
        }
    };
}

impl ExperimentConfig {
    pub fn default_for(experiment: Experiment) -> Self {
        match experiment {
            Experiment::WaveAdversarial => ExperimentConfig::WaveAdversarial(Default::default()),
            Experiment::WaveRegularized => ExperimentConfig::WaveRegularized(Default::default()),
            Experiment::PerconvRecon => ExperimentConfig::PerconvRecon(Default::default()),
            Experiment::RateStudy => ExperimentConfig::RateStudy(Default::default()),
            Experiment::BoundsAudit => ExperimentConfig::BoundsAudit(Default::default()),
        }
    }

    /// Parses and validates a config for `experiment`.
    pub fn from_toml(experiment: Experiment, text: &str) -> Result<Self> {
        let config = match experiment {
            Experiment::WaveAdversarial => ExperimentConfig::WaveAdversarial(toml::from_str(text)?),
            Experiment::WaveRegularized => ExperimentConfig::WaveRegularized(toml::from_str(text)?),
            Experiment::PerconvRecon => ExperimentConfig::PerconvRecon(toml::from_str(text)?),
            Experiment::RateStudy => ExperimentConfig::RateStudy(toml::from_str(text)?),
            Experiment::BoundsAudit => ExperimentConfig::BoundsAudit(toml::from_str(text)?),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(each!(self, c => toml::to_string(c))?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        each!(self, c => serde_json::to_value(c)).expect("config fields are plain data")
    }

    pub fn experiment(&self) -> Experiment {
        match self {
            ExperimentConfig::WaveAdversarial(_) => Experiment::WaveAdversarial,
            ExperimentConfig::WaveRegularized(_) => Experiment::WaveRegularized,
            ExperimentConfig::PerconvRecon(_) => Experiment::PerconvRecon,
            ExperimentConfig::RateStudy(_) => Experiment::RateStudy,
            ExperimentConfig::BoundsAudit(_) => Experiment::BoundsAudit,
        }
    }

    pub fn seed(&self) -> u64 {
        each!(self, c => c.seed)
    }

    pub fn set_seed(&mut self, seed: u64) {
        each!(self, c => c.seed = seed)
    }

    pub fn out_dir(&self) -> &str {
        each!(self, c => &c.out_dir)
    }

    pub fn set_out_dir(&mut self, dir: impl Into<String>) {
        let dir = dir.into();
        each!(self, c => c.out_dir = dir)
    }

    pub fn validate(&self) -> Result<()> {
        if self.out_dir().is_empty() {
            return Err(invalid("out_dir must not be empty"));
        }
        match self {
            ExperimentConfig::WaveAdversarial(c) => c.validate(),
            ExperimentConfig::WaveRegularized(c) => c.validate(),
            ExperimentConfig::PerconvRecon(c) => c.validate(),
            ExperimentConfig::RateStudy(c) => c.validate(),
            ExperimentConfig::BoundsAudit(c) => c.validate(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

fn require(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(msg))
    }
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

fn nonempty_positive(values: &[f64], name: &str) -> Result<()> {
    require(!values.is_empty(), &format!("{name} must not be empty"))?;
    require(values.iter().all(|&v| positive(v)), &format!("{name} must be positive and finite"))
}

impl WaveAdversarialConfig {
    fn validate(&self) -> Result<()> {
        require(self.n_min >= 1, "n_min must be at least 1")?;
        require(self.n_min <= self.n_max, "n range n_min..=n_max is empty")?;
        require(self.n_max <= 30, "n_max above 30 is below f64 resolution")?;
        require(positive(self.time), "time must be positive")?;
        require(positive(self.r_max), "r_max must be positive")?;
        require(self.points >= 2, "points must be at least 2")?;
        require(self.perturbation_amplitude.is_finite(), "perturbation_amplitude must be finite")?;
        require(positive(self.pulse_radius), "pulse_radius must be positive")?;
        require(self.fd_cfl > 0.0 && self.fd_cfl <= linfreg_core::wave3d::MAX_CFL, "fd_cfl must lie in (0, 0.9]")?;
        require(positive(self.fd_tolerance), "fd_tolerance must be positive")
    }
}

impl WaveRegularizedConfig {
    fn validate(&self) -> Result<()> {
        require(positive(self.alpha) && positive(self.beta), "alpha and beta must be positive")?;
        require(self.perturbation_index >= 1, "perturbation_index must be at least 1")?;
        require(self.perturbation_index <= 30, "perturbation_index above 30 is below f64 resolution")?;
        require(self.perturbation_amplitude.is_finite(), "perturbation_amplitude must be finite")?;
        require(positive(self.pulse_radius), "pulse_radius must be positive")?;
        require(positive(self.time), "time must be positive")?;
        require(positive(self.r_max), "r_max must be positive")?;
        require(self.points >= 2, "points must be at least 2")?;
        require(self.filter_points >= 2, "filter_points must be at least 2")
    }
}

impl PerconvReconConfig {
    fn validate(&self) -> Result<()> {
        require(self.rho > 0.0 && self.rho < 0.5, "rho must lie in (0, 1/2)")?;
        require(
            self.truncation >= linfreg_core::perconv::MIN_TEST_BANDWIDTH,
            "truncation must be at least 64",
        )?;
        require(positive(self.perturbation_relative), "perturbation_relative must be positive")?;
        nonempty_positive(&self.targets, "targets")?;
        require(!self.signals.is_empty(), "signals must not be empty")?;
        require(
            self.signals.iter().enumerate().all(|(i, s)| !self.signals[..i].contains(s)),
            "signals must be distinct",
        )?;
        require(positive(self.eta), "eta must be positive")?;
        require(positive(self.weight_floor), "weight_floor must be positive")?;
        require(positive(self.weight_constant), "weight_constant must be positive")?;
        require(self.sample_points >= 2, "sample_points must be at least 2")
    }
}

impl RateStudyConfig {
    pub fn alphas(&self) -> Vec<f64> {
        (self.alpha_k_min..=self.alpha_k_max).map(|k| 2f64.powi(-(k as i32))).collect()
    }

    pub fn deltas(&self) -> Vec<f64> {
        let n = self.delta_points;
        let step = if n > 1 { (self.delta_log10_max - self.delta_log10_min) / (n - 1) as f64 } else { 0.0 };
        (0..n).map(|i| 10f64.powf(self.delta_log10_min + step * i as f64)).collect()
    }

    fn validate(&self) -> Result<()> {
        require(self.rho > 0.0 && self.rho < 0.5, "rho must lie in (0, 1/2)")?;
        require(self.truncation >= 1, "truncation must be at least 1")?;
        require(positive(self.beta), "beta must be positive")?;
        nonempty_positive(&self.etas, "etas")?;
        require(
            self.alpha_k_max >= self.alpha_k_min && self.alpha_k_max - self.alpha_k_min + 1 >= 5,
            "the alpha sweep needs at least 5 points",
        )?;
        require(self.alpha_k_max <= 1000, "alpha_k_max must be at most 1000")?;
        require(self.delta_points >= 5, "the delta sweep needs at least 5 points")?;
        require(
            self.delta_log10_min < self.delta_log10_max && self.delta_log10_max <= 0.0,
            "delta range must be increasing and at most 1",
        )
    }
}

impl BoundsAuditConfig {
    fn validate(&self) -> Result<()> {
        require(self.problems >= 1 && self.problem_size >= 1, "problems and problem_size must be positive")?;
        nonempty_positive(&self.alphas, "alphas")?;
        require(self.probes >= 1, "probes must be positive")?;
        require(self.probe_truncation >= 1, "probe_truncation must be positive")?;
        nonempty_positive(&self.probe_alphas, "probe_alphas")?;
        nonempty_positive(&self.envelope_etas, "envelope_etas")?;
        require(self.envelope_etas.iter().all(|&e| e < 4.0), "envelope_etas must lie below 4")?;
        nonempty_positive(&self.envelope_alphas, "envelope_alphas")?;
        require(self.wave_fields >= 1, "wave_fields must be positive")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_and_validate() {
        for e in Experiment::ALL {
            let c = ExperimentConfig::default_for(e);
            c.validate().unwrap();
            let text = c.to_toml().unwrap();
            assert_eq!(ExperimentConfig::from_toml(e, &text).unwrap(), c, "{}", e.name());
        }
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = ExperimentConfig::from_toml(Experiment::RateStudy, "").unwrap();
        assert_eq!(c, ExperimentConfig::default_for(Experiment::RateStudy));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_toml(Experiment::WaveAdversarial, "n_min = 1\nbogus = 3\n").unwrap_err();
        assert!(matches!(err, RunError::Parse(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejections() {
        let bad = [
            (Experiment::WaveAdversarial, "n_min = 3\nn_max = 2"),
            (Experiment::WaveRegularized, "alpha = 0.0\nbeta = 0.0"),
            (Experiment::PerconvRecon, "targets = []"),
            (Experiment::RateStudy, "alpha_k_min = 4\nalpha_k_max = 7"),
            (Experiment::RateStudy, "delta_points = 4"),
            (Experiment::BoundsAudit, "envelope_etas = [4.0]"),
            (Experiment::PerconvRecon, "signals = [\"square_wave\"]"),
            (Experiment::PerconvRecon, "signals = [\"piecewise_linear\", \"piecewise_linear\"]"),
        ];
        for (e, text) in bad {
            let err = ExperimentConfig::from_toml(e, text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
        }
    }

    #[test]
    fn overrides() {
        let mut c = ExperimentConfig::default_for(Experiment::BoundsAudit);
        c.set_seed(99);
        c.set_out_dir("elsewhere");
        assert_eq!((c.seed(), c.out_dir()), (99, "elsewhere"));
        assert_eq!(c.to_json()["seed"], 99);
    }

    #[test]
    fn sweeps() {
        let c = RateStudyConfig::default();
        assert_eq!(c.alphas().len(), 11);
        assert_eq!(c.alphas()[0], 1.0 / 16.0);
        let d = c.deltas();
        assert_eq!(d.len(), 9);
        assert!((d[0] - 1e-6).abs() < 1e-20 && (d[8] - 1e-2).abs() < 1e-15);
    }
}
