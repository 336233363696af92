//! Run configuration: a TOML file with grid, index, data, tolerance,
//! verification and output sections. Every section has defaults, so an
//! empty file is a valid configuration.

use std::path::{Path, PathBuf};

use halfspace::core::{Grading, HalfSpaceGrid};
use halfspace::navier_stokes::PicardOptions;
use halfspace::verify::{BandSpec, RatioTarget};
use halfspace::BesovIndex;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub period: f64,
    pub n_tan: usize,
    pub height: f64,
    pub n_vert: usize,
    pub grading: Grading,
    pub t_final: f64,
    pub n_time: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 2,
            period: 2.0 * std::f64::consts::PI,
            n_tan: 32,
            height: 8.0,
            n_vert: 65,
            grading: Grading::Uniform,
            t_final: 0.5,
            n_time: 16,
        }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<HalfSpaceGrid, CliError> {
        HalfSpaceGrid::new(
            self.n,
            self.period,
            self.n_tan,
            self.height,
            self.n_vert,
            self.grading,
            self.t_final,
            self.n_time,
        )
        .map_err(CliError::config)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct IndexConfig {
    pub alpha: f64,
    /// Defaults to the critical exponent `(n+2)/(α+1)`.
    pub q: Option<f64>,
    pub beta: Option<f64>,
    pub p: Option<f64>,
}

impl Default for IndexConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            q: None,
            beta: None,
            p: None,
        }
    }
}

impl IndexConfig {
    pub fn build(&self, n: usize) -> Result<BesovIndex, CliError> {
        let q = self.q.unwrap_or((n as f64 + 2.0) / (self.alpha + 1.0));
        let idx = BesovIndex::new(n, self.alpha, q).map_err(CliError::config)?;
        match (self.beta, self.p) {
            (Some(b), Some(p)) => idx.with_force(b, p).map_err(CliError::config),
            (None, None) => Ok(idx),
            _ => Err(CliError::Config("index.beta and index.p must be given together".into())),
        }
    }
}

/// Initial data families.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    Zero,
    /// `amp·(cos x_1 B'(x_n), …, sin x_1 B(x_n))` with `B = x_n² e^{−x_n²}`.
    Vortex { amp: f64 },
    /// Seeded band-limited divergence-free field vanishing on the wall.
    Random {
        amp: f64,
        #[serde(default)]
        band: BandSpec,
    },
}

/// Boundary data families.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundarySpec {
    Zero,
    /// `g_1 = amp·sin(πt/T) cos x_1`, other components zero.
    Pulse { amp: f64 },
    /// Seeded band-limited data in every component, vanishing at `t = 0`.
    Random {
        amp: f64,
        #[serde(default)]
        band: BandSpec,
    },
    /// The wall trace of the heat extension of the initial data, which
    /// makes the pair compatible.
    HeatTrace,
}

/// Force families (linear solves only).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForceSpec {
    Zero,
    Random {
        amp: f64,
        #[serde(default)]
        band: BandSpec,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DataConfig {
    /// Replace all data by the manufactured two-dimensional solution.
    pub manufactured: bool,
    pub initial: InitialSpec,
    pub boundary: BoundarySpec,
    pub force: ForceSpec,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            manufactured: false,
            initial: InitialSpec::Vortex { amp: 1.0 },
            boundary: BoundarySpec::Pulse { amp: 1.0 },
            force: ForceSpec::Zero,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub picard_tol: f64,
    pub max_iter: usize,
    pub patience: usize,
    /// Largest accepted relative gap between a fast operator and its oracle.
    pub oracle: f64,
    /// Largest accepted drift of a ratio study.
    pub drift: f64,
    /// Largest accepted relative deviation of the data norm under rescaling.
    pub scaling_data: f64,
    /// Largest accepted relative deviation of the solution norm under rescaling.
    pub scaling_solution: f64,
    /// Largest accepted weak-form gap, in units of its quadrature tolerance.
    pub weak_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let p = PicardOptions::default();
        Self {
            picard_tol: p.tol,
            max_iter: p.max_iter,
            patience: p.patience,
            oracle: 1e-6,
            drift: 0.25,
            scaling_data: 0.03,
            scaling_solution: 0.05,
            weak_gap: 5.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub samples: usize,
    pub refinements: usize,
    /// Target names; empty means all.
    pub targets: Vec<String>,
    pub band: BandSpec,
    /// Run the oracle comparisons on a coarse copy of the grid.
    pub oracles: bool,
    pub oracle_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: 20,
            refinements: 1,
            targets: Vec::new(),
            band: BandSpec::default(),
            oracles: true,
            oracle_samples: 2,
        }
    }
}

impl VerifyConfig {
    pub fn targets(&self) -> Result<Vec<RatioTarget>, CliError> {
        if self.targets.is_empty() {
            return Ok(RatioTarget::ALL.to_vec());
        }
        self.targets
            .iter()
            .map(|t| RatioTarget::from_name(t).ok_or_else(|| CliError::Config(format!("unknown ratio target `{t}`"))))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingConfig {
    pub lambdas: Vec<f64>,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self { lambdas: vec![0.5, 2.0] }
    }
}

/// One norm to evaluate on a stored field.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormSpec {
    /// `‖f‖_{L^q}` over space and time.
    Lq { q: f64 },
    /// `‖f‖_{L^q(0,T; Ḃ^s_q)}`.
    Space { s: f64, q: f64 },
    /// `‖f‖_{Ḃ^{s,s/2}_q}`; the parabolic Littlewood–Paley norm for `s ∉ (0, 2)`.
    SpaceTime { s: f64, q: f64 },
    /// `‖f(·, t_k)‖_{Ḃ^s_q}` at one time node.
    Slice { s: f64, q: f64, k: usize },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct NormsConfig {
    /// Snapshot file written by a solve (`.bin` with its `.json` sidecar).
    pub field: Option<PathBuf>,
    pub list: Vec<NormSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Write the solution field as a binary snapshot.
    pub snapshots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            snapshots: true,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub threads: Option<usize>,
    pub tolerance_scale: Option<f64>,
    pub grid: GridConfig,
    pub index: IndexConfig,
    pub data: DataConfig,
    pub tolerances: Tolerances,
    pub verify: VerifyConfig,
    pub scaling: ScalingConfig,
    pub norms: NormsConfig,
    pub output: OutputConfig,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grid.build()?;
        self.index.build(self.grid.n)?;
        if let Some(s) = self.tolerance_scale {
            if !(s > 0.0 && s.is_finite()) {
                return Err(CliError::Config(format!("tolerance_scale must be positive, got {s}")));
            }
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        if self.verify.samples == 0 {
            return Err(CliError::Config("verify.samples must be at least 1".into()));
        }
        self.verify.targets()?;
        if self.scaling.lambdas.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(CliError::Config("scaling.lambdas must be positive".into()));
        }
        let t = &self.tolerances;
        if !(t.picard_tol > 0.0) || t.max_iter == 0 || t.patience == 0 {
            return Err(CliError::Config("picard_tol, max_iter and patience must be positive".into()));
        }
        if self.data.manufactured && self.grid.n != 2 {
            return Err(CliError::Config("the manufactured solution needs n = 2".into()));
        }
        Ok(())
    }

    pub fn tolerance_scale(&self) -> f64 {
        self.tolerance_scale.unwrap_or(1.0)
    }

    pub fn picard_options(&self) -> PicardOptions {
        PicardOptions {
            max_iter: self.tolerances.max_iter,
            tol: self.tolerances.picard_tol,
            patience: self.tolerances.patience,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn parses_tagged_families() {
        let cfg = Config::parse(
            r#"
            seed = 7
            [grid]
            n_tan = 16
            n_vert = 33
            [data]
            initial = { kind = "random", amp = 2.0 }
            boundary = { kind = "heat_trace" }
            [verify]
            targets = ["t2", "poisson_lq"]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.grid.n_tan, 16);
        assert!(matches!(cfg.data.initial, InitialSpec::Random { amp, .. } if amp == 2.0));
        assert_eq!(cfg.data.boundary, BoundarySpec::HeatTrace);
        assert_eq!(cfg.verify.targets().unwrap(), vec![RatioTarget::T2, RatioTarget::PoissonLq]);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "[grid]\nn = 4",
            "[index]\nalpha = 2.5",
            "[index]\nbeta = 0.1",
            "[verify]\ntargets = [\"nope\"]",
            "unknown_key = 1",
            "[scaling]\nlambdas = [0.0]",
            "tolerance_scale = -1.0",
        ] {
            assert!(matches!(Config::parse(text), Err(CliError::Config(_))), "{text}");
        }
    }
}
