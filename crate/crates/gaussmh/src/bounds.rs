//! Closed-form bound calculators: proposal and Metropolis-Hastings
//! contraction factors, rejection and acceptance-sensitivity bounds,
//! Lyapunov exit bounds, iterated Wasserstein bounds, and the step planner.
//!
//! Several of these bounds carry constants that the analysis proves to exist
//! but never pins down numerically (`A`, `C`, `D`, `q`, `rho`, the Lyapunov
//! drift constant, `D_bar`). Those are explicit inputs here, defaulting to 1,
//! and every report echoes them: none of these bounds is parameter-free.

use crate::error::{Error, Result};
use crate::proposal::ProposalKind;

/// User-supplied stand-ins for constants the theory leaves unspecified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnspecifiedConstants {
    /// OU contraction remainder coefficient.
    pub a: f64,
    /// Step-size smallness coefficient in `h^{-1} >= C (1 + R)^q`.
    pub c_main: f64,
    /// Convergence-bound coefficient.
    pub d_main: f64,
    /// Step-size smallness exponent.
    pub q_main: f64,
    /// Exit-bound smallness exponent.
    pub rho: f64,
    /// Lyapunov drift constant (in `q_h f <= f^{1-Kh/4} e^{c h}`).
    pub c2_lyap: f64,
    /// Exit-probability coefficient.
    pub d_exit: f64,
    /// Final-distance coefficient.
    pub d_bar: f64,
}

impl Default for UnspecifiedConstants {
    fn default() -> Self {
        UnspecifiedConstants {
            a: 1.0,
            c_main: 1.0,
            d_main: 1.0,
            q_main: 1.0,
            rho: 1.0,
            c2_lyap: 1.0,
            d_exit: 1.0,
            d_bar: 1.0,
        }
    }
}

/// Inputs shared by the calculators. Optional fields error only when a
/// formula actually needs them. `moments[i]` is `m_{i+1} = E |Z|_-^{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub k: Option<f64>,
    pub m_r: Option<f64>,
    pub n_r: Option<f64>,
    pub c: [Option<f64>; 4],
    pub p: [u32; 4],
    pub moments: Vec<f64>,
    pub r: Option<f64>,
    pub h: f64,
    pub unspecified: UnspecifiedConstants,
}

impl BoundInputs {
    pub fn new(h: f64) -> Result<Self> {
        // h = 0 is allowed so the h -> 0 limits of the factors can be evaluated
        if !(h >= 0.0 && h < 2.0) || !h.is_finite() {
            return Err(Error::InvalidStepSize(h));
        }
        Ok(BoundInputs {
            k: None,
            m_r: None,
            n_r: None,
            c: [None; 4],
            p: [0; 4],
            moments: Vec::new(),
            r: None,
            h,
            unspecified: UnspecifiedConstants::default(),
        })
    }

    pub fn with_k(mut self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k <= 1.0) {
            return Err(Error::invalid(format!("K = {k} must lie in (0, 1]")));
        }
        self.k = Some(k);
        Ok(self)
    }

    pub fn with_m(mut self, m: f64) -> Self {
        self.m_r = Some(m);
        self
    }

    pub fn with_n(mut self, n: f64) -> Self {
        self.n_r = Some(n);
        self
    }

    pub fn with_c(mut self, c: [f64; 4]) -> Self {
        self.c = [Some(c[0]), Some(c[1]), Some(c[2]), Some(c[3])];
        self
    }

    /// Moments `m_1, m_2, ...` in order.
    pub fn with_moments(mut self, moments: Vec<f64>) -> Result<Self> {
        if moments.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::invalid("norm moments must be finite and nonnegative"));
        }
        if moments.len() >= 2 && moments[1] < moments[0] * moments[0] * (1.0 - 1e-12) {
            return Err(Error::invalid("inconsistent moments: m2 < m1^2"));
        }
        // log-convexity of the moment sequence
        for i in 1..moments.len().saturating_sub(1) {
            if moments[i] * moments[i] > moments[i - 1] * moments[i + 1] * (1.0 + 1e-9) {
                return Err(Error::invalid(format!(
                    "inconsistent moments: m{}^2 > m{} m{}",
                    i + 1,
                    i,
                    i + 2
                )));
            }
        }
        self.moments = moments;
        Ok(self)
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_unspecified(mut self, u: UnspecifiedConstants) -> Self {
        self.unspecified = u;
        self
    }

    fn k_required(&self) -> Result<f64> {
        self.k.ok_or(Error::MissingConstant("K"))
    }

    fn m_required(&self) -> Result<f64> {
        self.m_r.ok_or(Error::MissingConstant("M(R)"))
    }

    fn n_required(&self) -> Result<f64> {
        self.n_r.ok_or(Error::MissingConstant("N(R)"))
    }

    fn r_required(&self) -> Result<f64> {
        self.r.ok_or(Error::MissingConstant("R"))
    }

    fn c_required(&self, index: usize) -> Result<f64> {
        const NAMES: [&str; 4] = ["C1", "C2", "C3", "C4"];
        self.c[index].ok_or(Error::MissingConstant(NAMES[index]))
    }

    /// `m_n` (1-based).
    pub fn moment(&self, n: usize) -> Result<f64> {
        self.moments
            .get(n - 1)
            .copied()
            .ok_or(Error::MissingConstant("norm moment m_n"))
    }
}

/// Contraction mode of the bare proposal map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionMode {
    /// `1 - (1 - N(R)) h / 2`: needs only the Lipschitz bound on `hess V`.
    Lipschitz,
    /// `1 - K h / 2 + M(R)^2 h^2 / 8`: needs convexity.
    Convex,
}

/// One-step contraction factor of the (unadjusted) proposal map. May exceed
/// 1; the caller interprets.
pub fn proposal_contraction_factor(inputs: &BoundInputs, mode: ContractionMode) -> Result<f64> {
    let h = inputs.h;
    match mode {
        ContractionMode::Lipschitz => {
            let n = inputs.n_required()?;
            Ok(1.0 - 0.5 * (1.0 - n) * h)
        }
        ContractionMode::Convex => {
            let k = inputs.k_required()?;
            let m = inputs.m_required()?;
            Ok(1.0 - 0.5 * k * h + m * m * h * h / 8.0)
        }
    }
}

/// Evaluation point for state-dependent bounds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalPoint {
    /// `|x|_-` (for pair bounds, the max over the two states).
    pub x_norm: f64,
    /// `|grad U(x)|_-` (for pair bounds, the sup over the segment).
    pub grad_u_norm: f64,
}

/// Which explicit rejection/sensitivity formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectionKind {
    /// OU proposals under bounded second derivatives (`p_2 = 0`); uses
    /// `C_1, C_2, m_1, m_2` and `|x|_-`.
    OuP2Zero,
    /// Semi-implicit proposals with `p_2 = p_3 = 0` (sensitivity additionally
    /// assumes `p_4 = 0`); uses `C_2..C_4`, `m_1..m_3`, and `|grad U(x)|_-`.
    SemiImplicitExplicit,
}

/// Upper bound on the expected one-step rejection probability `E[1 - alpha]`
/// at the given point.
pub fn rejection_bound(inputs: &BoundInputs, kind: RejectionKind, at: &EvalPoint) -> Result<f64> {
    let h = inputs.h;
    match kind {
        RejectionKind::OuP2Zero => {
            let c1 = inputs.c_required(0)?;
            let c2 = inputs.c_required(1)?;
            let m1 = inputs.moment(1)?;
            let m2 = inputs.moment(2)?;
            let s = at.x_norm;
            Ok(m1 * (c1 + c2 * s) * h.sqrt()
                + 0.5 * (2.0 * m2 * c2 + c1 * s + c2 * s * s) * h
                + 0.5 * m1 * c2 * s * h.powf(1.5))
        }
        RejectionKind::SemiImplicitExplicit => {
            let c2 = inputs.c_required(1)?;
            let c3 = inputs.c_required(2)?;
            let m1 = inputs.moment(1)?;
            let m2 = inputs.moment(2)?;
            let m3 = inputs.moment(3)?;
            let g = at.grad_u_norm;
            Ok(h.powf(1.5) * (0.25 * c3 * m3 + 0.5 * c2 * m1 * g)
                + h * h * (0.25 * c2 * g * g + 0.5 * c2 * (1.0 + c2) * m2)
                + h.powi(3) * (c3 * g.powi(3) / 32.0 + c2 * (1.0 + c2) * g * g / 8.0))
        }
    }
}

/// Upper bound per unit minus-norm distance on how strongly the acceptance
/// decision depends on the current state: the L2 norm of the acceptance
/// difference for OU proposals, the mean plus-norm of the acceptance-ratio
/// gradient for semi-implicit proposals.
pub fn acceptance_sensitivity_bound(
    inputs: &BoundInputs,
    kind: RejectionKind,
    at: &EvalPoint,
) -> Result<f64> {
    let h = inputs.h;
    match kind {
        RejectionKind::OuP2Zero => {
            let c1 = inputs.c_required(0)?;
            let c2 = inputs.c_required(1)?;
            let m2 = inputs.moment(2)?;
            Ok(m2.sqrt() * c2 * h.sqrt() + 0.5 * (c1 + 2.0 * c2 * at.x_norm) * h)
        }
        RejectionKind::SemiImplicitExplicit => {
            let c2 = inputs.c_required(1)?;
            let c3 = inputs.c_required(2)?;
            let c4 = inputs.c_required(3)?;
            let m1 = inputs.moment(1)?;
            let m2 = inputs.moment(2)?;
            let m3 = inputs.moment(3)?;
            let g = at.grad_u_norm;
            Ok(0.25 * h.powf(1.5) * (c4 * m3 + (1.0 + c2) * c2 * m1 + 2.0 * c3 * g * m1)
                + h * h / 8.0
                    * (4.0 * c2 * (1.0 + 2.0 * c2) * m2 + 3.0 * c2 * (1.0 + c2) * g + 2.0 * c3 * g * g)
                + h.powf(2.5) / 16.0 * c2 * (1.0 + c2) * (1.0 + c2) * (2.0 * m1 + h.sqrt() * g)
                + h.powi(3) / 32.0 * (4.0 * c3 * (1.0 + 2.0 * c2) * g * g + c4 * g.powi(3)))
        }
    }
}

/// The semi-implicit contraction constant needs suprema of the rejection and
/// sensitivity polynomials over the ball. Evaluating the explicit formulas at
/// a worst-case point (divided by their leading `h^{3/2}` order) provides
/// them; suprema over non-monotone models must be supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiImplicitAux {
    /// Supremum stand-in for the rejection polynomial.
    pub beta: f64,
    /// `m_2^{1/2}` times the sensitivity polynomial supremum.
    pub gamma: f64,
    /// Sensitivity polynomial supremum times `|grad U|_-`.
    pub delta: f64,
}

/// Computes the aux constants from the explicit formulas at `at`, which
/// should be the worst case over the ball (for diagonal quadratic models,
/// `grad_u_norm = M(R) * R`).
pub fn semi_implicit_aux(inputs: &BoundInputs, at: &EvalPoint) -> Result<SemiImplicitAux> {
    if inputs.h <= 0.0 {
        return Err(Error::InvalidStepSize(inputs.h));
    }
    let order = inputs.h.powf(1.5);
    let beta = rejection_bound(inputs, RejectionKind::SemiImplicitExplicit, at)? / order;
    let q = acceptance_sensitivity_bound(inputs, RejectionKind::SemiImplicitExplicit, at)? / order;
    let m2 = inputs.moment(2)?;
    Ok(SemiImplicitAux { beta, gamma: m2.sqrt() * q, delta: q * at.grad_u_norm })
}

/// A contraction constant together with whether it certifies contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionFactor {
    pub value: f64,
    pub contractive: bool,
}

/// One-step Wasserstein contraction constant of the Metropolis-Hastings
/// kernel on the ball of radius `R`:
///
/// * OU: `1 - h/2 + m_2 C_2 h + A (1 + R)(1 + h^{1/2} R) h^{3/2}`,
/// * semi-implicit: `1 - K h/2 + (M(R)^2/8 + gamma) h^2 + (K beta + delta/2) h^{5/2}`.
pub fn mh_contraction_factor(
    inputs: &BoundInputs,
    kind: ProposalKind,
    aux: Option<&SemiImplicitAux>,
) -> Result<ContractionFactor> {
    let h = inputs.h;
    let value = match kind {
        ProposalKind::OrnsteinUhlenbeck => {
            let c2 = inputs.c_required(1)?;
            let m2 = inputs.moment(2)?;
            let r = inputs.r_required()?;
            let a = inputs.unspecified.a;
            1.0 - 0.5 * h + m2 * c2 * h + a * (1.0 + r) * (1.0 + h.sqrt() * r) * h.powf(1.5)
        }
        ProposalKind::SemiImplicit => {
            let k = inputs.k_required()?;
            let m = inputs.m_required()?;
            let aux = aux.ok_or(Error::MissingConstant("beta/gamma/delta"))?;
            1.0 - 0.5 * k * h
                + (m * m / 8.0 + aux.gamma) * h * h
                + (k * aux.beta + 0.5 * aux.delta) * h.powf(2.5)
        }
        ProposalKind::ExplicitEuler => {
            return Err(Error::UnsupportedProposal("explicit Euler"));
        }
    };
    Ok(ContractionFactor { value, contractive: value < 1.0 })
}

/// `exp(K |x|_-^2 / 16)`, the Lyapunov function controlling exits.
pub fn lyapunov_value(k: f64, x_norm: f64) -> f64 {
    (k * x_norm * x_norm / 16.0).exp()
}

/// Probability-shaped bound reported raw and clipped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitBound {
    pub raw: f64,
    pub clipped: f64,
}

/// Bound `D n h exp(K (|x|_-^2 - R^2) / 24)` on the probability that the
/// chain started at `x` leaves the ball of radius `R` within `n` steps.
/// The step-size smallness regime `h^{-1} >= C (1 + R)^rho` is the caller's
/// responsibility.
pub fn lyapunov_exit_bound(inputs: &BoundInputs, x_norm: f64, n_steps: u64) -> Result<ExitBound> {
    let k = inputs.k_required()?;
    let r = inputs.r_required()?;
    let d = inputs.unspecified.d_exit;
    let raw = d * n_steps as f64 * inputs.h * (k * (x_norm * x_norm - r * r) / 24.0).exp();
    Ok(ExitBound { raw, clipped: raw.clamp(0.0, 1.0) })
}

/// `gamma^n w0 + diameter * (exit_mu + exit_nu)`: contraction on a region
/// plus an escape-probability correction.
pub fn iterated_wasserstein_bound(
    contraction: f64,
    n_steps: u64,
    w0: f64,
    diameter: f64,
    exit_mu: f64,
    exit_nu: f64,
) -> Result<f64> {
    if !(contraction > 0.0 && contraction < 1.0) {
        return Err(Error::VacuousContraction(contraction));
    }
    for (name, p) in [("exit_mu", exit_mu), ("exit_nu", exit_nu)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("{name} = {p} is not a probability")));
        }
    }
    Ok(contraction.powi(n_steps.try_into().unwrap_or(i32::MAX)) * w0
        + diameter * (exit_mu + exit_nu))
}

/// `58 R (1 - K h / 4)^n + D_bar R exp(-K R^2 / 33) n h`: distance of the
/// chain law after `n` steps from the target conditioned to the ball.
pub fn final_distance_bound(inputs: &BoundInputs, n_steps: u64) -> Result<f64> {
    let k = inputs.k_required()?;
    let r = inputs.r_required()?;
    let d_bar = inputs.unspecified.d_bar;
    let geometric = 58.0 * r * (1.0 - 0.25 * k * inputs.h).powi(n_steps.try_into().unwrap_or(i32::MAX));
    let additive = d_bar * r * (-k * r * r / 33.0).exp() * n_steps as f64 * inputs.h;
    Ok(geometric + additive)
}

/// Smallest `n h` that drives the geometric term of the final bound below
/// `epsilon / 2`.
pub fn required_nh(k: f64, r: f64, epsilon: f64) -> f64 {
    4.0 / k * (116.0 * r / epsilon).ln()
}

/// A feasible plan: run `n` steps of size `h` on the ball of radius `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub r: f64,
    pub h: f64,
    pub n: u64,
    /// The final-distance bound this plan achieves.
    pub achieved: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanOutcome {
    Feasible(Plan),
    /// No admissible parameters; names the constraint that failed.
    Infeasible { violated: String },
}

const PLANNER_GRID_RATIO: f64 = 1.1;
const PLANNER_MAX_RADIUS: f64 = 1e6;

/// Picks `(R, h, n)` achieving final distance below `epsilon`:
/// the smallest radius on a geometric grid whose closed-form feasibility
/// inequality holds, step size from `h^{-1} = ceil(C (1 + R)^q)`, and step
/// count from the geometric-term requirement. The additive term is then
/// verified once with the rounded `n`.
pub fn step_planner(epsilon: f64, k: f64, d_bar: f64, c: f64, q: f64) -> Result<PlanOutcome> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid(format!("epsilon = {epsilon} must be positive")));
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::invalid(format!("K = {k} must lie in (0, 1]")));
    }
    if !(d_bar >= 0.0 && c > 0.0 && q >= 0.0) {
        return Err(Error::invalid("D_bar must be nonnegative, C positive, q nonnegative"));
    }

    let mut r = 1.0;
    let feasibility = |r: f64| {
        8.0 * d_bar / k * (116.0 * r / epsilon).ln() * r * (-k * r * r / 33.0).exp() < epsilon
    };
    while !feasibility(r) {
        r *= PLANNER_GRID_RATIO;
        if r > PLANNER_MAX_RADIUS {
            return Err(Error::invalid(format!(
                "no radius up to {PLANNER_MAX_RADIUS} satisfies the feasibility inequality"
            )));
        }
    }

    let h = 1.0 / (c * (1.0 + r).powf(q)).ceil();
    let nh_min = required_nh(k, r, epsilon);
    let n = if nh_min <= 0.0 { 0 } else { (nh_min / h).ceil() as u64 };
    let additive = d_bar * r * (-k * r * r / 33.0).exp() * n as f64 * h;
    if additive >= 0.5 * epsilon {
        return Ok(PlanOutcome::Infeasible {
            violated: format!(
                "additive term {additive} at n = {n} is not below epsilon/2 = {}",
                0.5 * epsilon
            ),
        });
    }
    let inputs = BoundInputs::new(h)?
        .with_k(k)?
        .with_r(r)
        .with_unspecified(UnspecifiedConstants { d_bar, ..Default::default() });
    let achieved = final_distance_bound(&inputs, n)?;
    Ok(PlanOutcome::Feasible(Plan { r, h, n, achieved }))
}

/// Named calculator outputs with the inputs echoed alongside.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub values: Vec<(String, f64)>,
}

impl BoundReport {
    pub fn new(inputs: BoundInputs) -> Self {
        BoundReport { inputs, values: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.values.push((name.into(), value));
    }
}
