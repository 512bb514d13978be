//! Monte Carlo estimators that confront the analytic bounds with simulation.
//!
//! Every estimator is deterministic given its stream and parameters. Replica
//! parallelism derives one substream per replica index and reduces in index
//! order, so results do not depend on the worker count.

use rand::Rng;
use statrs::function::gamma::ln_gamma;

use crate::acceptance::{acceptance, log_g};
use crate::chain::mh_step;
use crate::coupling::{coupled_step, CoupledState};
use crate::error::{Error, Result};
use crate::norm::NormSpace;
use crate::proposal::{propose, ProposalKind, ProposalSpec};
use crate::stream::RandomStream;
use crate::target::TargetModel;
use rand_distr::StandardNormal;

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

#[derive(Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn estimate(&self) -> EstimateWithError {
        let std_error = if self.n > 1 {
            (self.m2 / (self.n as f64 - 1.0) / self.n as f64).sqrt()
        } else {
            0.0
        };
        EstimateWithError { value: self.mean, std_error, n_samples: self.n }
    }
}

/// Runs `f(0..n)` on up to `workers` threads and returns the results in index
/// order. `workers <= 1` runs inline.
pub fn map_indexed<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(n.max(1));
    if workers <= 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(workers);
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (w, slice) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (j, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(w * chunk + j));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every index computed")).collect()
}

/// Monte Carlo mean of `1 - alpha(x, Y(x))` over fresh proposals from `x`.
pub fn estimate_rejection_probability<R: Rng + ?Sized>(
    spec: &ProposalSpec,
    model: &TargetModel,
    x: &[f64],
    n_samples: u64,
    rng: &mut R,
) -> Result<EstimateWithError> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be at least 1"));
    }
    model.check_point(x)?;
    let mut acc = Welford::default();
    let d = model.dim();
    for _ in 0..n_samples {
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let y = propose(spec, model, x, &z)?;
        let g = log_g(spec, model, x, &y)?;
        acc.push(1.0 - acceptance(g));
    }
    Ok(acc.estimate())
}

/// Log-log fit of rejection estimates against the step size.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub h: Vec<f64>,
    pub estimates: Vec<EstimateWithError>,
    /// Whether each grid point entered the fit (dropped: zero estimates and
    /// relative standard errors above 20%).
    pub used: Vec<bool>,
    pub slope: f64,
    pub intercept: f64,
    /// `ln(estimate) - (intercept + slope ln h)` for the used points.
    pub residuals: Vec<f64>,
}

/// Relative standard error above which a grid point is dropped from the fit.
pub const MAX_RELATIVE_STD_ERROR: f64 = 0.2;

impl ScalingFit {
    /// Least-squares `ln(estimate) = intercept + slope ln(h)` over the usable
    /// points of a precomputed sweep.
    pub fn from_estimates(h: Vec<f64>, estimates: Vec<EstimateWithError>) -> Result<Self> {
        if h.len() != estimates.len() {
            return Err(Error::DimensionMismatch { expected: h.len(), got: estimates.len() });
        }
        if h.len() < 4 || h.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("h grid must be strictly increasing with at least 4 points"));
        }
        if h.iter().any(|&v| !(v > 0.0 && v < 2.0)) {
            return Err(Error::invalid("h grid must lie in (0, 2)"));
        }
        let used: Vec<bool> = estimates
            .iter()
            .map(|e| e.value > 0.0 && e.std_error <= MAX_RELATIVE_STD_ERROR * e.value)
            .collect();
        let points: Vec<(f64, f64)> = h
            .iter()
            .zip(&estimates)
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|((hi, e), _)| (hi.ln(), e.value.ln()))
            .collect();
        if points.len() < 3 {
            return Err(Error::TooFewPoints(points.len()));
        }
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        let residuals = points.iter().map(|(x, y)| y - (intercept + slope * x)).collect();
        Ok(ScalingFit { h, estimates, used, slope, intercept, residuals })
    }
}

/// Estimates the rejection probability on each grid step size and fits the
/// scaling exponent. Each grid point runs on its own substream.
pub fn fit_scaling_exponent(
    kind: ProposalKind,
    model: &TargetModel,
    x: &[f64],
    h_grid: &[f64],
    n_samples: u64,
    stream: &RandomStream,
    workers: usize,
) -> Result<ScalingFit> {
    let estimates = map_indexed(h_grid.len(), workers, |i| {
        let spec = ProposalSpec::new(kind, h_grid[i])?;
        let mut rng = stream.substream(i as u64);
        estimate_rejection_probability(&spec, model, x, n_samples, &mut rng)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    ScalingFit::from_estimates(h_grid.to_vec(), estimates)
}

/// Mean one-step coupled distance from the fixed pair `(x, x_tilde)`,
/// normalized by the initial distance.
pub fn estimate_contraction_rate<R: Rng + ?Sized>(
    spec: &ProposalSpec,
    model: &TargetModel,
    norm: &NormSpace,
    x: &[f64],
    x_tilde: &[f64],
    n_samples: u64,
    rng: &mut R,
) -> Result<EstimateWithError> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be at least 1"));
    }
    let before = norm.minus_distance(x, x_tilde);
    if before == 0.0 {
        return Err(Error::invalid("x and x_tilde must differ"));
    }
    let state = CoupledState::new(x.to_vec(), x_tilde.to_vec())?;
    let mut acc = Welford::default();
    for _ in 0..n_samples {
        let (next, _) = coupled_step(spec, model, &state, rng)?;
        acc.push(norm.minus_distance(&next.x, &next.x_tilde) / before);
    }
    Ok(acc.estimate())
}

/// Fraction of replicas whose chain leaves the ball `{|x|_- < radius}`
/// within the first `n_steps` states (the initial state included).
#[allow(clippy::too_many_arguments)]
pub fn estimate_exit_probability(
    spec: &ProposalSpec,
    model: &TargetModel,
    norm: &NormSpace,
    x0: &[f64],
    radius: f64,
    n_steps: u64,
    n_replicas: u64,
    stream: &RandomStream,
    workers: usize,
) -> Result<EstimateWithError> {
    if n_replicas == 0 || n_steps == 0 {
        return Err(Error::invalid("n_steps and n_replicas must be at least 1"));
    }
    model.check_point(x0)?;
    if norm.minus_norm(x0) >= radius {
        return Err(Error::invalid("the initial state must lie inside the ball"));
    }
    let exits = map_indexed(n_replicas as usize, workers, |r| -> Result<bool> {
        let mut rng = stream.substream(r as u64);
        let mut x = x0.to_vec();
        // states X_0 .. X_{n-1}; X_0 is inside by the precondition
        for _ in 1..n_steps {
            x = mh_step(spec, model, &x, &mut rng)?.next;
            if norm.minus_norm(&x) >= radius {
                return Ok(true);
            }
        }
        Ok(false)
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    let count = exits.iter().filter(|&&e| e).count() as f64;
    let p = count / n_replicas as f64;
    Ok(EstimateWithError {
        value: p,
        std_error: (p * (1.0 - p) / n_replicas as f64).sqrt(),
        n_samples: n_replicas,
    })
}

/// Exact 1-Wasserstein distance between the empirical distributions of two
/// samples, via the quantile-function integral. For equal sizes this is the
/// mean absolute difference of the sorted samples; unequal sizes integrate
/// the piecewise-constant quantile functions exactly. Also an upper bound for
/// the radius-truncated cost, which is dominated by the plain distance.
pub fn wasserstein_1d(samples_a: &[f64], samples_b: &[f64]) -> Result<f64> {
    if samples_a.is_empty() || samples_b.is_empty() {
        return Err(Error::invalid("both sample sets must be nonempty"));
    }
    if samples_a.iter().chain(samples_b).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("samples"));
    }
    let mut a = samples_a.to_vec();
    let mut b = samples_b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).expect("finite values"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("finite values"));
    let (n, m) = (a.len() as u128, b.len() as u128);
    let denom = (n * m) as f64;
    let (mut i, mut j) = (0usize, 0usize);
    let mut t = 0u128; // current quantile level in units of 1/(n m)
    let mut total = 0.0;
    while i < a.len() && j < b.len() {
        let next_a = (i as u128 + 1) * m;
        let next_b = (j as u128 + 1) * n;
        let next = next_a.min(next_b);
        total += (next - t) as f64 / denom * (a[i] - b[j]).abs();
        t = next;
        if next_a == next {
            i += 1;
        }
        if next_b == next {
            j += 1;
        }
    }
    Ok(total)
}

/// Max over the given points of the norm-wise relative error between the
/// analytic gradient and a central finite difference of `f`.
pub fn finite_difference_check<F, G>(
    f: F,
    grad_f: G,
    points: &[Vec<f64>],
    fd_step: f64,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    if !(fd_step > 0.0) {
        return Err(Error::invalid("fd_step must be positive"));
    }
    let mut worst: f64 = 0.0;
    for x in points {
        let grad = grad_f(x);
        let mut err_sq = 0.0;
        let mut fd_sq = 0.0;
        for i in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += fd_step;
            xm[i] -= fd_step;
            let fd = (f(&xp) - f(&xm)) / (2.0 * fd_step);
            let e = grad[i] - fd;
            err_sq += e * e;
            fd_sq += fd * fd;
        }
        worst = worst.max(err_sq.sqrt() / fd_sq.sqrt().max(1e-12));
    }
    Ok(worst)
}

/// Drift diagnostics of the Lyapunov function `exp(K |x|_-^2 / 16)` at one
/// starting point.
#[derive(Debug, Clone)]
pub struct DriftCheckPoint {
    pub x: Vec<f64>,
    pub f_start: f64,
    pub f_mean: EstimateWithError,
    /// Smallest `c` with `E[f(X_1)] <= f(x)^{1 - K h / 4} e^{c h}` at the
    /// Monte Carlo mean.
    pub fitted_c2: f64,
    pub passes_at_user_c2: bool,
}

/// Estimates `E[f(X_1) | X_0 = x]` at each point and reports the fitted drift
/// constant plus a pass/fail against the supplied one.
#[allow(clippy::too_many_arguments)]
pub fn lyapunov_drift_check<R: Rng + ?Sized>(
    spec: &ProposalSpec,
    model: &TargetModel,
    norm: &NormSpace,
    k: f64,
    c2_user: f64,
    points: &[Vec<f64>],
    n_samples: u64,
    rng: &mut R,
) -> Result<Vec<DriftCheckPoint>> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::invalid(format!("K = {k} must lie in (0, 1]")));
    }
    let h = spec.h();
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        model.check_point(x)?;
        let f_start = crate::bounds::lyapunov_value(k, norm.minus_norm(x));
        let mut acc = Welford::default();
        for _ in 0..n_samples {
            let next = mh_step(spec, model, x, rng)?.next;
            acc.push(crate::bounds::lyapunov_value(k, norm.minus_norm(&next)));
        }
        let f_mean = acc.estimate();
        let base = f_start.powf(1.0 - 0.25 * k * h);
        let fitted_c2 = (f_mean.value / base).ln() / h;
        out.push(DriftCheckPoint {
            x: x.clone(),
            f_start,
            f_mean,
            fitted_c2,
            passes_at_user_c2: fitted_c2 <= c2_user,
        });
    }
    Ok(out)
}

/// Monte Carlo minus-norm moments `E |Z|_-^n` of a standard Gaussian vector,
/// one value per requested order.
pub fn minus_norm_moments<R: Rng + ?Sized>(
    norm: &NormSpace,
    orders: &[u32],
    n_samples: u64,
    rng: &mut R,
) -> Result<Vec<EstimateWithError>> {
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be at least 1"));
    }
    let d = norm.dim();
    let mut accs: Vec<Welford> = orders.iter().map(|_| Welford::default()).collect();
    let mut z = vec![0.0; d];
    for _ in 0..n_samples {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        let nrm = norm.minus_norm(&z);
        for (acc, &order) in accs.iter_mut().zip(orders) {
            acc.push(nrm.powi(order as i32));
        }
    }
    Ok(accs.iter().map(|a| a.estimate()).collect())
}

/// Closed-form chi moment `E |Z|^n` for a standard Gaussian in `d`
/// dimensions: `2^{n/2} Gamma((d + n)/2) / Gamma(d/2)`.
pub fn chi_moment(d: usize, n: u32) -> f64 {
    let d = d as f64;
    let n = n as f64;
    (0.5 * n * 2f64.ln() + ln_gamma(0.5 * (d + n)) - ln_gamma(0.5 * d)).exp()
}
