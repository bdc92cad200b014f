use std::path::Path;

use serde::{Deserialize, Serialize};
use tomita::udw::{FieldModel, GaussianTestFunction, DEFAULT_AMPLITUDE, DEFAULT_SEPARATION};
use tomita::Tolerances;

use crate::error::CliError;

/// Smallest Fock cutoff accepted from configuration.
pub const MIN_CUTOFF: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    pub out: Option<String>,
    pub tolerances: CheckTolerances,
    /// Thresholds used inside the numerical engine.
    pub engine: Tolerances,
    pub modular: ModularConfig,
    pub susy: SusyConfig,
    pub udw: UdwConfig,
    pub sweep: SweepConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            format: Format::Csv,
            out: None,
            tolerances: CheckTolerances::default(),
            engine: Tolerances::default(),
            modular: ModularConfig::default(),
            susy: SusyConfig::default(),
            udw: UdwConfig::default(),
            sweep: SweepConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

/// Pass/fail thresholds applied by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckTolerances {
    pub modular: f64,
    pub concurrence: f64,
    pub susy: f64,
    pub udw: f64,
    pub chsh: f64,
    pub vacuum: f64,
    pub quadrature: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self { modular: 1e-9, concurrence: 1e-9, susy: 1e-10, udw: 1e-6, chsh: 1e-4, vacuum: 1e-6, quadrature: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModularCase {
    #[default]
    BellPsiPlus,
    BellPhiPlus,
    Schmidt,
    Random,
    Custom,
}

/// Complex number as `[re, im]`.
pub type ComplexEntry = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModularConfig {
    pub case: ModularCase,
    /// Weight of `|00⟩` for the `schmidt` case.
    pub p: f64,
    /// Block sizes `n_i` of `⊕ B(C^{n_i}) ⊗ I` for the `random` case.
    pub blocks: Vec<usize>,
    /// Row-major generator matrices for the `custom` case.
    pub generators: Vec<Vec<Vec<ComplexEntry>>>,
    pub omega: Vec<ComplexEntry>,
}

impl Default for ModularConfig {
    fn default() -> Self {
        Self { case: ModularCase::default(), p: 0.3, blocks: vec![2, 1], generators: Vec::new(), omega: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SusyConfig {
    pub n_max: usize,
    pub hbar_omega: f64,
    pub k: usize,
    pub l: usize,
    /// `α` values; `β = √(1 − α²)`.
    pub alpha: Vec<f64>,
}

impl Default for SusyConfig {
    fn default() -> Self {
        Self { n_max: 8, hbar_omega: 1.0, k: 3, l: 2, alpha: (0..=10).map(|i| i as f64 / 10.0).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UdwMode {
    /// Closed forms only.
    Abstract,
    /// Adds the two-mode Fock simulation.
    #[default]
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionPair {
    #[serde(default)]
    pub model: FieldModel,
    pub f_a: GaussianTestFunction,
    pub f_b: GaussianTestFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UdwConfig {
    pub mode: UdwMode,
    pub r: Vec<f64>,
    /// `⟨h, h⟩` values used when no test functions are given.
    pub hh: Vec<f64>,
    pub test_functions: Option<TestFunctionPair>,
    pub n_max: usize,
    pub detector_gap: f64,
}

impl Default for UdwConfig {
    fn default() -> Self {
        Self {
            mode: UdwMode::Numeric,
            r: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            hh: vec![0.0, 0.1, 0.2, 0.35, 0.5],
            test_functions: None,
            n_max: 16,
            detector_gap: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n).map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub mode: UdwMode,
    pub r: Range,
    pub hh: Range,
    /// Mirror-pair separations; when non-empty they replace the `hh` range.
    pub separations: Vec<f64>,
    pub amplitude: f64,
    pub model: FieldModel,
    pub n_max: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mode: UdwMode::Abstract,
            r: Range { start: 0.0, stop: 2.0, steps: 21 },
            hh: Range { start: 0.0, stop: 1.0, steps: 11 },
            separations: Vec::new(),
            amplitude: DEFAULT_AMPLITUDE,
            model: FieldModel::default(),
            n_max: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub random_instances: usize,
    pub random_states: usize,
    pub susy_n_max: usize,
    pub fock_n_max: usize,
    /// Detector scenario checked for three-way agreement.
    pub udw_n_max: usize,
    pub udw_r: Vec<f64>,
    pub udw_hh: Vec<f64>,
    pub separation: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            random_instances: 20,
            random_states: 50,
            susy_n_max: 8,
            fock_n_max: 16,
            udw_n_max: 16,
            udw_r: vec![0.0, 0.5, 1.0],
            udw_hh: vec![0.0, 0.25, 0.5],
            separation: DEFAULT_SEPARATION,
        }
    }
}

fn positive(name: &str, value: f64) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {value}")))
    }
}

fn cutoff(name: &str, value: usize) -> Result<(), CliError> {
    if value >= MIN_CUTOFF {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be at least {MIN_CUTOFF}, got {value}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        for (name, value) in [
            ("tolerances.modular", t.modular),
            ("tolerances.concurrence", t.concurrence),
            ("tolerances.susy", t.susy),
            ("tolerances.udw", t.udw),
            ("tolerances.chsh", t.chsh),
            ("tolerances.vacuum", t.vacuum),
            ("tolerances.quadrature", t.quadrature),
        ] {
            positive(name, value)?;
        }
        let e = &self.engine;
        for (name, value) in [
            ("engine.hermitian", e.hermitian),
            ("engine.eigen", e.eigen),
            ("engine.psd", e.psd),
            ("engine.modular", e.modular),
            ("engine.condition_bound", e.condition_bound),
            ("engine.rank", e.rank),
        ] {
            positive(name, value)?;
        }
        cutoff("susy.n_max", self.susy.n_max)?;
        cutoff("udw.n_max", self.udw.n_max)?;
        cutoff("sweep.n_max", self.sweep.n_max)?;
        cutoff("verify.susy_n_max", self.verify.susy_n_max)?;
        cutoff("verify.fock_n_max", self.verify.fock_n_max)?;
        cutoff("verify.udw_n_max", self.verify.udw_n_max)?;
        positive("susy.hbar_omega", self.susy.hbar_omega)?;
        positive("verify.separation", self.verify.separation)?;
        if let Some(pair) = &self.udw.test_functions {
            pair.model.validate()?;
            pair.f_a.validate()?;
            pair.f_b.validate()?;
        }
        self.sweep.model.validate()?;
        if self.sweep.separations.iter().any(|s| !s.is_finite()) {
            return Err(CliError::Config("sweep.separations must be finite".into()));
        }
        if self.modular.case == ModularCase::Custom && self.modular.generators.is_empty() {
            return Err(CliError::Config("modular.case = \"custom\" needs generators and omega".into()));
        }
        Ok(())
    }
}
