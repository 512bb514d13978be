//! Experiment configuration: a single TOML file describes the model, the
//! proposal, the run parameters and the output policy. Command-line flags
//! may only override the seed and the output directory, so a config file is
//! a complete, reproducible description of an experiment.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use gaussmh::bounds::{BoundInputs, UnspecifiedConstants};
use gaussmh::models::{
    make_quadratic_model, make_tps_model, DoubleWell, LinearRamp, QuadraticConstants, TpsConfig,
    ZeroPotential,
};
use gaussmh::{NormSpace, ProposalKind, TargetModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sample,
    Couple,
    Scaling,
    Bounds,
    Plan,
    Exit,
    TpsDemo,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Sample => "sample",
            ExperimentKind::Couple => "couple",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::Plan => "plan",
            ExperimentKind::Exit => "exit",
            ExperimentKind::TpsDemo => "tps-demo",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    /// Standard Gaussian target (`V == 0`).
    Gaussian { d: usize },
    /// `V(x) = (1/2) sum b_i x_i^2`.
    Quadratic { b: Vec<f64> },
    /// Transition-path-sampling target over dyadic coefficients.
    Tps {
        levels: u32,
        ell: usize,
        start: Vec<f64>,
        end: Vec<f64>,
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default)]
        potential: PotentialKind,
    },
}

fn default_alpha() -> f64 {
    0.6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    #[default]
    DoubleWell,
    Linear,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProposalKindConfig {
    Ou,
    SemiImplicit,
    ExplicitEuler,
}

impl From<ProposalKindConfig> for ProposalKind {
    fn from(value: ProposalKindConfig) -> Self {
        match value {
            ProposalKindConfig::Ou => ProposalKind::OrnsteinUhlenbeck,
            ProposalKindConfig::SemiImplicit => ProposalKind::SemiImplicit,
            ProposalKindConfig::ExplicitEuler => ProposalKind::ExplicitEuler,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProposalConfig {
    pub kind: ProposalKindConfig,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub h_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Mandatory: there is no wall-clock default.
    pub seed: u64,
    #[serde(default = "default_n_steps")]
    pub n_steps: u64,
    #[serde(default = "default_n_samples")]
    pub n_samples: u64,
    #[serde(default = "default_n_replicas")]
    pub n_replicas: u64,
    #[serde(default)]
    pub burn_in: u64,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    #[serde(default)]
    pub x0_tilde: Option<Vec<f64>>,
    #[serde(default)]
    pub record_trajectory: bool,
}

fn default_n_steps() -> u64 {
    10_000
}

fn default_n_samples() -> u64 {
    20_000
}

fn default_n_replicas() -> u64 {
    200
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UnspecifiedConfig {
    pub a: Option<f64>,
    pub c_main: Option<f64>,
    pub d_main: Option<f64>,
    pub q_main: Option<f64>,
    pub rho: Option<f64>,
    pub c2_lyap: Option<f64>,
    pub d_exit: Option<f64>,
    pub d_bar: Option<f64>,
}

impl UnspecifiedConfig {
    pub fn resolve(&self) -> UnspecifiedConstants {
        let d = UnspecifiedConstants::default();
        UnspecifiedConstants {
            a: self.a.unwrap_or(d.a),
            c_main: self.c_main.unwrap_or(d.c_main),
            d_main: self.d_main.unwrap_or(d.d_main),
            q_main: self.q_main.unwrap_or(d.q_main),
            rho: self.rho.unwrap_or(d.rho),
            c2_lyap: self.c2_lyap.unwrap_or(d.c2_lyap),
            d_exit: self.d_exit.unwrap_or(d.d_exit),
            d_bar: self.d_bar.unwrap_or(d.d_bar),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    pub k: Option<f64>,
    pub m_r: Option<f64>,
    pub n_r: Option<f64>,
    pub c: Option<[f64; 4]>,
    /// `m_1, m_2, ...` in order.
    pub moments: Option<Vec<f64>>,
    pub r: Option<f64>,
    /// Step size for the calculators; defaults to the proposal's `h`.
    pub h: Option<f64>,
    /// Evaluation point for the state-dependent bounds.
    pub x_norm: Option<f64>,
    pub grad_u_norm: Option<f64>,
    /// Planner target accuracy.
    pub epsilon: Option<f64>,
    /// Planner step-size rule coefficient and exponent.
    pub planner_c: Option<f64>,
    pub planner_q: Option<f64>,
    pub unspecified: UnspecifiedConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub proposal: Option<ProposalConfig>,
    pub run: RunConfig,
    #[serde(default)]
    pub bounds: Option<BoundsConfig>,
    #[serde(default = "default_output")]
    pub output: OutputConfig,
}

fn default_output() -> OutputConfig {
    OutputConfig { dir: default_out_dir(), formats: default_formats() }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let config: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if let Some(proposal) = &self.proposal {
            if let Some(h) = proposal.h {
                if !(h > 0.0 && h < 2.0) {
                    bail!("proposal.h = {h} must lie in (0, 2)");
                }
            }
            if let Some(grid) = &proposal.h_grid {
                if grid.len() < 4 {
                    bail!("proposal.h_grid needs at least 4 points");
                }
                if grid.windows(2).any(|w| w[0] >= w[1]) {
                    bail!("proposal.h_grid must be strictly increasing");
                }
                if grid.iter().any(|&h| !(h > 0.0 && h < 2.0)) {
                    bail!("proposal.h_grid values must lie in (0, 2)");
                }
            }
        }
        Ok(())
    }

    pub fn model_required(&self) -> Result<&ModelConfig> {
        self.model.as_ref().context("missing [model] section (key `model`)")
    }

    pub fn proposal_required(&self) -> Result<&ProposalConfig> {
        self.proposal.as_ref().context("missing [proposal] section (key `proposal`)")
    }

    pub fn bounds_required(&self) -> Result<&BoundsConfig> {
        self.bounds.as_ref().context("missing [bounds] section (key `bounds`)")
    }
}

impl ProposalConfig {
    pub fn h_required(&self) -> Result<f64> {
        self.h.context("missing key `proposal.h`")
    }

    pub fn h_grid_required(&self) -> Result<&[f64]> {
        self.h_grid.as_deref().context("missing key `proposal.h_grid`")
    }
}

/// A constructed model with its norm space and whatever exact constants the
/// construction provides.
pub struct ModelBundle {
    pub model: TargetModel,
    pub norm: NormSpace,
    pub quadratic: Option<QuadraticConstants>,
    pub label: String,
}

pub fn build_model(config: &ModelConfig) -> Result<ModelBundle> {
    match config {
        ModelConfig::Gaussian { d } => {
            if *d == 0 {
                bail!("model.d must be at least 1");
            }
            let (model, constants) = make_quadratic_model(&vec![0.0; *d])?;
            Ok(ModelBundle {
                model,
                norm: NormSpace::euclidean(*d),
                quadratic: Some(constants),
                label: format!("gaussian(d={d})"),
            })
        }
        ModelConfig::Quadratic { b } => {
            let (model, constants) = make_quadratic_model(b)?;
            Ok(ModelBundle {
                model,
                norm: NormSpace::euclidean(b.len()),
                quadratic: Some(constants),
                label: format!("quadratic(d={})", b.len()),
            })
        }
        ModelConfig::Tps { levels, ell, start, end, alpha, potential } => {
            let tps_config = TpsConfig {
                levels: *levels,
                ell: *ell,
                start: start.clone(),
                end: end.clone(),
                alpha: *alpha,
            };
            if !tps_config.alpha_in_recommended_window() {
                eprintln!(
                    "warning: alpha = {alpha} lies outside the recommended window \
                     ({}, {}) where the norm constants stay dimension-free",
                    TpsConfig::recommended_alpha_window(8.0).0,
                    TpsConfig::recommended_alpha_window(8.0).1,
                );
            }
            let bundle = match potential {
                PotentialKind::DoubleWell => make_tps_model(&tps_config, Arc::new(DoubleWell))?,
                PotentialKind::Linear => make_tps_model(&tps_config, Arc::new(LinearRamp))?,
                PotentialKind::Zero => make_tps_model(&tps_config, Arc::new(ZeroPotential))?,
            };
            Ok(ModelBundle {
                model: bundle.model,
                norm: bundle.norm,
                quadratic: None,
                label: format!("tps(m={levels}, ell={ell})"),
            })
        }
    }
}

/// Assembles calculator inputs from the explicit `[bounds]` section, filling
/// gaps from the model's exact constants (quadratic models) and closed-form
/// Euclidean moments where possible.
pub fn build_bound_inputs(
    bounds: &BoundsConfig,
    model: Option<&ModelBundle>,
    h: f64,
) -> Result<BoundInputs> {
    let mut inputs = BoundInputs::new(bounds.h.unwrap_or(h))
        .map_err(|e| anyhow::anyhow!("bounds.h: {e}"))?
        .with_unspecified(bounds.unspecified.resolve());

    let quadratic = model.and_then(|m| m.quadratic.as_ref());
    if let Some(k) = bounds.k.or_else(|| quadratic.and_then(|q| q.k)) {
        inputs = inputs.with_k(k).map_err(|e| anyhow::anyhow!("bounds.k: {e}"))?;
    }
    if let Some(m_r) = bounds.m_r.or_else(|| quadratic.map(|q| q.m)) {
        inputs = inputs.with_m(m_r);
    }
    if let Some(n_r) = bounds.n_r.or_else(|| quadratic.map(|q| q.n)) {
        inputs = inputs.with_n(n_r);
    }
    if let Some(c) = bounds.c.or_else(|| quadratic.map(|q| q.c)) {
        inputs = inputs.with_c(c);
    }
    let moments = match &bounds.moments {
        Some(m) => Some(m.clone()),
        // Euclidean norm: closed-form chi moments
        None => model.and_then(|m| {
            m.quadratic.as_ref().map(|_| {
                (1..=3u32)
                    .map(|n| gaussmh::estimators::chi_moment(m.model.dim(), n))
                    .collect::<Vec<_>>()
            })
        }),
    };
    if let Some(m) = moments {
        inputs = inputs.with_moments(m).map_err(|e| anyhow::anyhow!("bounds.moments: {e}"))?;
    }
    if let Some(r) = bounds.r {
        inputs = inputs.with_r(r);
    }
    Ok(inputs)
}
