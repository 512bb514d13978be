//! Synchronous coupling of two Metropolis-Hastings chains.
//!
//! Both chains receive the same Gaussian innovation and the same acceptance
//! uniform. For the kernels in this crate the coupled proposal distance is
//! then deterministic, so all randomness in the one-step distance comes from
//! the accept/reject pattern.

use rand::Rng;
use rand_distr::{Open01, StandardNormal};

use crate::acceptance::{acceptance, log_g};
use crate::chain::accepts;
use crate::error::{Error, Result};
use crate::norm::NormSpace;
use crate::proposal::{propose, ProposalKind, ProposalSpec};
use crate::target::TargetModel;

/// A pair of chain states advanced with shared randomness.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub x: Vec<f64>,
    pub x_tilde: Vec<f64>,
}

impl CoupledState {
    pub fn new(x: Vec<f64>, x_tilde: Vec<f64>) -> Result<Self> {
        if x.len() != x_tilde.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: x_tilde.len() });
        }
        Ok(CoupledState { x, x_tilde })
    }

    pub fn coalesced(&self) -> bool {
        self.x == self.x_tilde
    }
}

/// Which of the four accept/reject combinations occurred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoupleEvent {
    BothAccept,
    BothReject,
    /// First chain accepted, second rejected.
    FirstOnly,
    /// Second chain accepted, first rejected.
    SecondOnly,
}

impl CoupleEvent {
    pub fn discordant(&self) -> bool {
        matches!(self, CoupleEvent::FirstOnly | CoupleEvent::SecondOnly)
    }
}

/// Record of a single coupled transition.
#[derive(Debug, Clone)]
pub struct CoupledStepRecord {
    pub event: CoupleEvent,
    pub g: f64,
    pub g_tilde: f64,
    /// `|alpha(x, Y) - alpha(x_tilde, Y_tilde)|`; under the shared uniform
    /// this is the conditional probability of a discordant decision.
    pub alpha_gap: f64,
}

/// Advances both chains with one shared noise draw and one shared uniform.
pub fn coupled_step<R: Rng + ?Sized>(
    spec: &ProposalSpec,
    model: &TargetModel,
    state: &CoupledState,
    rng: &mut R,
) -> Result<(CoupledState, CoupledStepRecord)> {
    let d = model.dim();
    let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let u: f64 = rng.sample(Open01);
    let log_u = u.ln();

    let y = propose(spec, model, &state.x, &z)?;
    let y_tilde = propose(spec, model, &state.x_tilde, &z)?;
    let g = log_g(spec, model, &state.x, &y)?;
    let g_tilde = log_g(spec, model, &state.x_tilde, &y_tilde)?;
    let accept = accepts(log_u, g);
    let accept_tilde = accepts(log_u, g_tilde);

    let event = match (accept, accept_tilde) {
        (true, true) => CoupleEvent::BothAccept,
        (false, false) => CoupleEvent::BothReject,
        (true, false) => CoupleEvent::FirstOnly,
        (false, true) => CoupleEvent::SecondOnly,
    };
    let next = CoupledState {
        x: if accept { y } else { state.x.clone() },
        x_tilde: if accept_tilde { y_tilde } else { state.x_tilde.clone() },
    };
    let record = CoupledStepRecord {
        event,
        g,
        g_tilde,
        alpha_gap: (acceptance(g) - acceptance(g_tilde)).abs(),
    };
    Ok((next, record))
}

/// Minus-norm distance between the two coupled proposals, which is
/// deterministic under the shared noise: the OU factor is `1 - h/2`, and the
/// Euler drifts give `|x - x_tilde - (grad U(x) - grad U(x_tilde)) h/2|_-`.
pub fn proposal_coupling_distance(
    spec: &ProposalSpec,
    model: &TargetModel,
    norm: &NormSpace,
    x: &[f64],
    x_tilde: &[f64],
) -> Result<f64> {
    model.check_point(x)?;
    model.check_point(x_tilde)?;
    match spec.kind() {
        ProposalKind::OrnsteinUhlenbeck => {
            Ok((1.0 - 0.5 * spec.h()) * norm.minus_distance(x, x_tilde))
        }
        ProposalKind::SemiImplicit | ProposalKind::ExplicitEuler => {
            let gu = model.grad_u(x)?;
            let gu_tilde = model.grad_u(x_tilde)?;
            let diff: Vec<f64> = (0..x.len())
                .map(|i| x[i] - x_tilde[i] - 0.5 * spec.h() * (gu[i] - gu_tilde[i]))
                .collect();
            Ok(norm.minus_norm(&diff))
        }
    }
}

/// Trajectory-level report of a coupled run.
#[derive(Debug, Clone)]
pub struct ContractionReport {
    /// Minus-norm distance after each step (`n` entries).
    pub distances: Vec<f64>,
    pub initial_distance: f64,
    /// Mean of the per-step ratios `dist_after / dist_before` over steps with
    /// a positive pre-step distance.
    pub mean_ratio: f64,
    pub ratio_std_error: f64,
    pub n_ratio_samples: u64,
    pub both_accept: u64,
    pub both_reject: u64,
    pub discordant: u64,
    /// First step index at which the states became exactly equal, if any.
    pub coalescence_step: Option<u64>,
    /// First step index whose pre-step state pair left the ball of the given
    /// radius, if exit monitoring was requested.
    pub exit_step: Option<u64>,
    /// Mean deterministic proposal-distance ratio over monitored steps; the
    /// gap between this and `mean_ratio` is the accept/reject contribution.
    pub mean_proposal_ratio: f64,
}

/// Evolves the pair `n` steps, recording distances, event tallies,
/// coalescence, and (optionally) the first exit of either component from the
/// ball `{|x|_- < radius}`, evaluated on the pre-step state.
pub fn run_coupled_chain<R: Rng + ?Sized>(
    spec: &ProposalSpec,
    model: &TargetModel,
    norm: &NormSpace,
    initial: &CoupledState,
    n_steps: u64,
    exit_radius: Option<f64>,
    rng: &mut R,
) -> Result<ContractionReport> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be at least 1"));
    }
    model.check_point(&initial.x)?;
    model.check_point(&initial.x_tilde)?;

    let mut state = initial.clone();
    let mut distances = Vec::with_capacity(n_steps as usize);
    let initial_distance = norm.minus_distance(&state.x, &state.x_tilde);
    let mut ratio_mean = 0.0;
    let mut ratio_m2 = 0.0;
    let mut n_ratios = 0u64;
    let mut proposal_ratio_sum = 0.0;
    let mut both_accept = 0u64;
    let mut both_reject = 0u64;
    let mut discordant = 0u64;
    let mut coalescence_step = None;
    let mut exit_step = None;

    for k in 0..n_steps {
        if let Some(radius) = exit_radius {
            if exit_step.is_none()
                && (norm.minus_norm(&state.x) >= radius || norm.minus_norm(&state.x_tilde) >= radius)
            {
                exit_step = Some(k);
            }
        }
        let before = norm.minus_distance(&state.x, &state.x_tilde);
        if before > 0.0 {
            proposal_ratio_sum +=
                proposal_coupling_distance(spec, model, norm, &state.x, &state.x_tilde)? / before;
        }
        let (next, record) = coupled_step(spec, model, &state, rng)?;
        match record.event {
            CoupleEvent::BothAccept => both_accept += 1,
            CoupleEvent::BothReject => both_reject += 1,
            _ => discordant += 1,
        }
        state = next;
        let after = norm.minus_distance(&state.x, &state.x_tilde);
        distances.push(after);
        if before > 0.0 {
            n_ratios += 1;
            let ratio = after / before;
            let delta = ratio - ratio_mean;
            ratio_mean += delta / n_ratios as f64;
            ratio_m2 += delta * (ratio - ratio_mean);
        }
        if coalescence_step.is_none() && state.coalesced() {
            coalescence_step = Some(k + 1);
        }
    }

    let ratio_std_error = if n_ratios > 1 {
        (ratio_m2 / (n_ratios as f64 - 1.0) / n_ratios as f64).sqrt()
    } else {
        0.0
    };
    Ok(ContractionReport {
        distances,
        initial_distance,
        mean_ratio: ratio_mean,
        ratio_std_error,
        n_ratio_samples: n_ratios,
        both_accept,
        both_reject,
        discordant,
        coalescence_step,
        exit_step,
        mean_proposal_ratio: if n_ratios > 0 { proposal_ratio_sum / n_ratios as f64 } else { 0.0 },
    })
}
