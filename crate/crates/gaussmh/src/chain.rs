//! Single-chain Metropolis-Hastings stepping.

use rand::Rng;
use rand_distr::{Open01, StandardNormal};

use crate::acceptance::log_g;
use crate::error::{Error, Result};
use crate::norm::NormSpace;
use crate::proposal::{propose, ProposalSpec};
use crate::target::TargetModel;

/// One proposal/accept-reject transition.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub next: Vec<f64>,
    pub proposal: Vec<f64>,
    pub g_value: f64,
    pub accepted: bool,
    pub log_uniform: f64,
}

/// Accept iff `ln u < -g^+`. Comparing in log space avoids underflow for
/// large positive `g`; ties resolve to reject.
pub fn accepts(log_uniform: f64, g: f64) -> bool {
    log_uniform < -g.max(0.0)
}

/// Draws the noise and the uniform internally; on rejection `next` is a
/// bit-for-bit copy of `x`.
pub fn mh_step<R: Rng + ?Sized>(
    spec: &ProposalSpec,
    model: &TargetModel,
    x: &[f64],
    rng: &mut R,
) -> Result<StepOutcome> {
    model.check_point(x)?;
    let z: Vec<f64> = (0..model.dim()).map(|_| rng.sample(StandardNormal)).collect();
    let u: f64 = rng.sample(Open01);
    let proposal = propose(spec, model, x, &z)?;
    let g_value = log_g(spec, model, x, &proposal)?;
    let log_uniform = u.ln();
    let accepted = accepts(log_uniform, g_value);
    let next = if accepted { proposal.clone() } else { x.to_vec() };
    Ok(StepOutcome { next, proposal, g_value, accepted, log_uniform })
}

/// Storage policy for [`run_chain`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ChainOptions {
    /// Keep every visited state in memory. Off by default; long runs should
    /// use the streaming summary.
    pub record_trajectory: bool,
}

/// Cap on `(n_steps + 1) * dim` values held when recording a trajectory.
pub const MAX_TRAJECTORY_VALUES: usize = 50_000_000;

/// Streaming summary of a chain run: acceptance counts, per-coordinate
/// running mean and variance (over the `n` post-step states), and the
/// largest minus norm seen (including the initial state).
#[derive(Debug, Clone)]
pub struct ChainSummary {
    pub n_steps: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    pub mean: Vec<f64>,
    pub cov_diag: Vec<f64>,
    pub max_minus_norm: f64,
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub summary: ChainSummary,
    pub final_state: Vec<f64>,
    pub trajectory: Option<Vec<Vec<f64>>>,
}

pub fn run_chain<R: Rng + ?Sized>(
    spec: &ProposalSpec,
    model: &TargetModel,
    norm: &NormSpace,
    x0: &[f64],
    n_steps: u64,
    options: ChainOptions,
    rng: &mut R,
) -> Result<ChainRun> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be at least 1"));
    }
    model.check_point(x0)?;
    if norm.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: norm.dim() });
    }
    let mut trajectory = if options.record_trajectory {
        let values = (n_steps as usize + 1).saturating_mul(model.dim());
        if values > MAX_TRAJECTORY_VALUES {
            return Err(Error::TrajectoryTooLarge { values, limit: MAX_TRAJECTORY_VALUES });
        }
        let mut t = Vec::with_capacity(n_steps as usize + 1);
        t.push(x0.to_vec());
        Some(t)
    } else {
        None
    };

    let d = model.dim();
    let mut x = x0.to_vec();
    let mut accepted = 0u64;
    let mut mean = vec![0.0; d];
    let mut m2 = vec![0.0; d];
    let mut max_minus_norm = norm.minus_norm(&x);

    for k in 0..n_steps {
        let step = mh_step(spec, model, &x, rng)?;
        x = step.next;
        if step.accepted {
            accepted += 1;
        }
        // Welford update over the post-step states
        let count = (k + 1) as f64;
        for i in 0..d {
            let delta = x[i] - mean[i];
            mean[i] += delta / count;
            m2[i] += delta * (x[i] - mean[i]);
        }
        let nrm = norm.minus_norm(&x);
        if nrm > max_minus_norm {
            max_minus_norm = nrm;
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(x.clone());
        }
    }

    let denom = if n_steps > 1 { (n_steps - 1) as f64 } else { 1.0 };
    let cov_diag = m2.iter().map(|v| v / denom).collect();
    Ok(ChainRun {
        summary: ChainSummary {
            n_steps,
            accepted,
            acceptance_rate: accepted as f64 / n_steps as f64,
            mean,
            cov_diag,
            max_minus_norm,
        },
        final_state: x,
        trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::make_quadratic_model;
    use crate::proposal::ProposalKind;
    use crate::stream::RandomStream;

    #[test]
    fn threshold_logic() {
        // accept iff ln u < -g^+
        assert!(accepts(-0.1, 0.05)); // u ~ 0.905 below alpha ~ 0.951
        assert!(!accepts(-0.05, 0.1)); // u ~ 0.951 above alpha ~ 0.905
        assert!(accepts(-0.1, -3.0));
        assert!(accepts(-0.1, 0.0));
        // tie rejects
        assert!(!accepts(-0.05, 0.05));
    }

    #[test]
    fn gaussian_semi_implicit_always_accepts() {
        let model = TargetModel::standard_gaussian(2);
        let spec = ProposalSpec::new(ProposalKind::SemiImplicit, 0.8).unwrap();
        let norm = NormSpace::euclidean(2);
        let mut rng = RandomStream::new(3);
        let run = run_chain(&spec, &model, &norm, &[0.5, -0.5], 500, ChainOptions::default(), &mut rng)
            .unwrap();
        assert_eq!(run.summary.accepted, 500);
        assert_eq!(run.summary.acceptance_rate, 1.0);
    }

    #[test]
    fn rejected_step_copies_state_exactly() {
        // b < -1 makes uphill proposals likely to be rejected
        let (model, _) = make_quadratic_model(&[-1.5]).unwrap();
        let spec = ProposalSpec::new(ProposalKind::SemiImplicit, 0.5).unwrap();
        let mut rng = RandomStream::new(9);
        let x = [0.7];
        let mut saw_rejection = false;
        for _ in 0..200 {
            let step = mh_step(&spec, &model, &x, &mut rng).unwrap();
            if !step.accepted {
                saw_rejection = true;
                assert_eq!(step.next, x.to_vec());
                assert_eq!(step.next[0].to_bits(), x[0].to_bits());
            }
        }
        assert!(saw_rejection);
    }

    #[test]
    fn fixed_seed_reproduces_trajectories() {
        let (model, _) = make_quadratic_model(&[0.25, -0.1]).unwrap();
        let spec = ProposalSpec::new(ProposalKind::SemiImplicit, 0.3).unwrap();
        let norm = NormSpace::euclidean(2);
        let opts = ChainOptions { record_trajectory: true };
        let run = |seed: u64| {
            let mut rng = RandomStream::new(seed);
            run_chain(&spec, &model, &norm, &[1.0, 1.0], 1000, opts, &mut rng).unwrap()
        };
        let a = run(77);
        let b = run(77);
        assert_eq!(a.trajectory.unwrap(), b.trajectory.unwrap());
        assert_eq!(a.summary.accepted, b.summary.accepted);
    }

    #[test]
    fn single_step_run_matches_mh_step() {
        let (model, _) = make_quadratic_model(&[0.25]).unwrap();
        let spec = ProposalSpec::new(ProposalKind::SemiImplicit, 0.3).unwrap();
        let norm = NormSpace::euclidean(1);
        let mut rng1 = RandomStream::new(123);
        let mut rng2 = RandomStream::new(123);
        let run = run_chain(&spec, &model, &norm, &[0.4], 1, ChainOptions::default(), &mut rng1)
            .unwrap();
        let step = mh_step(&spec, &model, &[0.4], &mut rng2).unwrap();
        assert_eq!(run.final_state, step.next);
    }

    #[test]
    fn stationary_variance_of_quadratic_target() {
        // V(x) = b x^2 / 2 has stationary law N(0, 1/(1+b)); the variance
        // tolerance inflates the iid standard error by the AR(1)
        // autocorrelation time of the proposal mean map.
        let b = 0.25;
        let h = 0.5;
        let n = 100_000u64;
        let (model, _) = make_quadratic_model(&[b]).unwrap();
        let spec = ProposalSpec::new(ProposalKind::SemiImplicit, h).unwrap();
        let norm = NormSpace::euclidean(1);
        let mut rng = RandomStream::new(2024);
        // burn-in
        let burn = run_chain(&spec, &model, &norm, &[0.0], 2_000, ChainOptions::default(), &mut rng)
            .unwrap();
        let run = run_chain(
            &spec,
            &model,
            &norm,
            &burn.final_state,
            n,
            ChainOptions::default(),
            &mut rng,
        )
        .unwrap();
        let target_var = 1.0 / (1.0 + b);
        let a = 1.0 - 0.5 * h * (1.0 + b);
        let tau = (1.0 + a) / (1.0 - a);
        let se = target_var * (2.0 * tau / n as f64).sqrt();
        let err = (run.summary.cov_diag[0] - target_var).abs();
        assert!(err <= 3.0 * se, "variance {} vs {target_var} (3se = {})", run.summary.cov_diag[0], 3.0 * se);
    }

    #[test]
    fn trajectory_cap_guides_to_streaming() {
        let model = TargetModel::standard_gaussian(1000);
        let spec = ProposalSpec::new(ProposalKind::OrnsteinUhlenbeck, 0.5).unwrap();
        let norm = NormSpace::euclidean(1000);
        let mut rng = RandomStream::new(0);
        let err = run_chain(
            &spec,
            &model,
            &norm,
            &vec![0.0; 1000],
            100_000,
            ChainOptions { record_trajectory: true },
            &mut rng,
        )
        .unwrap_err();
        assert!(matches!(err, Error::TrajectoryTooLarge { .. }));
    }
}
