//! Experiment dispatch: builds the model and proposal from the config, runs
//! the requested computation on seeded streams, and emits tables.

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde_json::json;

use gaussmh::bounds::{
    self, acceptance_sensitivity_bound, final_distance_bound, iterated_wasserstein_bound,
    lyapunov_exit_bound, lyapunov_value, mh_contraction_factor, proposal_contraction_factor,
    rejection_bound, semi_implicit_aux, step_planner, BoundInputs, ContractionMode, EvalPoint,
    BoundReport, PlanOutcome, RejectionKind,
};
use gaussmh::chain::{run_chain, ChainOptions};
use gaussmh::coupling::{run_coupled_chain, CoupledState};
use gaussmh::estimators::{
    estimate_exit_probability, estimate_rejection_probability, fit_scaling_exponent,
    minus_norm_moments, ScalingFit,
};
use gaussmh::models::{make_tps_model, DoubleWell, TpsConfig};
use gaussmh::{NormSpace, ProposalKind, ProposalSpec, RandomStream, TargetModel};

use crate::config::{build_bound_inputs, build_model, ExperimentConfig, ExperimentKind};
use crate::report::{Reporter, Table, Value};

pub fn run_experiment(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    match config.experiment {
        ExperimentKind::Sample => sample(config, reporter),
        ExperimentKind::Couple => couple(config, reporter),
        ExperimentKind::Scaling => scaling(config, reporter),
        ExperimentKind::Bounds => bounds_report(config, reporter),
        ExperimentKind::Plan => plan(config, reporter),
        ExperimentKind::Exit => exit_probability(config, reporter),
        ExperimentKind::TpsDemo => tps_demo(config, reporter),
    }
}

fn starting_point(config: &ExperimentConfig, dim: usize) -> Result<Vec<f64>> {
    match &config.run.x0 {
        Some(x0) => {
            if x0.len() != dim {
                bail!("run.x0 has length {} but the model dimension is {dim}", x0.len());
            }
            Ok(x0.clone())
        }
        None => Ok(vec![0.0; dim]),
    }
}

fn proposal_spec(config: &ExperimentConfig) -> Result<ProposalSpec> {
    let proposal = config.proposal_required()?;
    Ok(ProposalSpec::new(proposal.kind.into(), proposal.h_required()?)?)
}

fn num(x: f64) -> Value {
    Value::Num(x)
}

fn sample(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    let bundle = build_model(config.model_required()?)?;
    let spec = proposal_spec(config)?;
    let mut rng = RandomStream::new(config.run.seed);
    let mut x = starting_point(config, bundle.model.dim())?;
    if config.run.burn_in > 0 {
        x = run_chain(
            &spec,
            &bundle.model,
            &bundle.norm,
            &x,
            config.run.burn_in,
            ChainOptions::default(),
            &mut rng,
        )?
        .final_state;
    }
    let options = ChainOptions { record_trajectory: config.run.record_trajectory };
    let run = run_chain(&spec, &bundle.model, &bundle.norm, &x, config.run.n_steps, options, &mut rng)?;

    let mut moments = Table::new(&["coordinate", "mean", "variance"]);
    for i in 0..bundle.model.dim() {
        moments.push(vec![
            Value::Int(i as i64),
            num(run.summary.mean[i]),
            num(run.summary.cov_diag[i]),
        ]);
    }
    let mut tables: Vec<(&str, &Table)> = vec![("sample", &moments)];

    let trajectory_table = run.trajectory.as_ref().map(|trajectory| {
        let mut columns = vec!["step".to_string()];
        columns.extend((0..bundle.model.dim()).map(|i| format!("x{i}")));
        let mut t = Table { columns, rows: Vec::new() };
        for (step, state) in trajectory.iter().enumerate() {
            let mut row = vec![Value::Int(step as i64)];
            row.extend(state.iter().map(|&v| num(v)));
            t.push(row);
        }
        t
    });
    if let Some(t) = trajectory_table.as_ref() {
        tables.push(("trajectory", t));
    }

    let summary = json!({
        "model": bundle.label,
        "proposal": spec.kind().label(),
        "h": spec.h(),
        "burn_in": config.run.burn_in,
        "n_steps": run.summary.n_steps,
        "accepted": run.summary.accepted,
        "acceptance_rate": run.summary.acceptance_rate,
        "max_minus_norm": run.summary.max_minus_norm,
        "final_state": run.final_state,
    });
    reporter.emit("sample", &tables, summary)?;
    Ok(())
}

fn couple(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    let bundle = build_model(config.model_required()?)?;
    let spec = proposal_spec(config)?;
    let x0 = starting_point(config, bundle.model.dim())?;
    let x0_tilde = config
        .run
        .x0_tilde
        .clone()
        .context("missing key `run.x0_tilde` (the second chain's start)")?;
    let state = CoupledState::new(x0, x0_tilde)?;
    let mut rng = RandomStream::new(config.run.seed);
    let report = run_coupled_chain(
        &spec,
        &bundle.model,
        &bundle.norm,
        &state,
        config.run.n_steps,
        config.run.radius,
        &mut rng,
    )?;

    let mut distances = Table::new(&["step", "distance"]);
    for (step, d) in report.distances.iter().enumerate() {
        distances.push(vec![Value::Int(step as i64 + 1), num(*d)]);
    }
    let summary = json!({
        "model": bundle.label,
        "proposal": spec.kind().label(),
        "h": spec.h(),
        "initial_distance": report.initial_distance,
        "mean_ratio": report.mean_ratio,
        "ratio_std_error": report.ratio_std_error,
        "n_ratio_samples": report.n_ratio_samples,
        "both_accept": report.both_accept,
        "both_reject": report.both_reject,
        "discordant": report.discordant,
        "coalescence_step": report.coalescence_step,
        "exit_step": report.exit_step,
        "mean_proposal_ratio": report.mean_proposal_ratio,
    });
    reporter.emit("couple", &[("couple", &distances)], summary)?;
    Ok(())
}

fn scaling(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    let bundle = build_model(config.model_required()?)?;
    let proposal = config.proposal_required()?;
    let kind: ProposalKind = proposal.kind.into();
    let h_grid = proposal.h_grid_required()?;
    let root = RandomStream::new(config.run.seed);

    let mut x = starting_point(config, bundle.model.dim())?;
    if config.run.burn_in > 0 {
        let h = proposal
            .h
            .context("run.burn_in > 0 needs `proposal.h` for the equilibration step size")?;
        let spec = ProposalSpec::new(kind, h)?;
        let mut rng = root.substream(0);
        x = run_chain(
            &spec,
            &bundle.model,
            &bundle.norm,
            &x,
            config.run.burn_in,
            ChainOptions::default(),
            &mut rng,
        )?
        .final_state;
    }

    let fit = fit_scaling_exponent(
        kind,
        &bundle.model,
        &x,
        h_grid,
        config.run.n_samples,
        &root.substream(1),
        reporter.workers,
    )?;

    // analytic ceiling at the sweep's state, when constants are available
    let x_norm = bundle.norm.minus_norm(&x);
    let grad_u_norm = bundle.norm.minus_norm(&bundle.model.grad_u(&x)?);
    let at = EvalPoint { x_norm, grad_u_norm };
    let rejection_kind = match kind {
        ProposalKind::OrnsteinUhlenbeck => Some(RejectionKind::OuP2Zero),
        ProposalKind::SemiImplicit => Some(RejectionKind::SemiImplicitExplicit),
        ProposalKind::ExplicitEuler => None,
    };
    let default_bounds = Default::default();
    let bounds_config = config.bounds.as_ref().unwrap_or(&default_bounds);

    let mut table = Table::new(&["h", "estimate", "std_error", "bound"]);
    for (i, &h) in h_grid.iter().enumerate() {
        let est = &fit.estimates[i];
        let bound = rejection_kind
            .and_then(|rk| build_bound_inputs(bounds_config, Some(&bundle), h).ok().map(|inp| (rk, inp)))
            .and_then(|(rk, inputs)| rejection_bound(&inputs, rk, &at).ok());
        table.push(vec![
            num(h),
            num(est.value),
            num(est.std_error),
            bound.map(num).unwrap_or(Value::Blank),
        ]);
    }
    let summary = json!({
        "model": bundle.label,
        "proposal": kind.label(),
        "n_samples": config.run.n_samples,
        "x_norm": x_norm,
        "grad_u_norm": grad_u_norm,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "used": fit.used,
    });
    reporter.emit("scaling", &[("scaling", &table)], summary)?;
    Ok(())
}

/// Pure-calculator report: every quantity that the supplied constants allow,
/// with the inputs echoed and the skipped calculators listed.
fn bounds_report(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    let bundle = match &config.model {
        Some(model) => Some(build_model(model)?),
        None => None,
    };
    let default_bounds = Default::default();
    let bounds_config = config.bounds.as_ref().unwrap_or(&default_bounds);
    let h = match (bounds_config.h, &config.proposal) {
        (Some(h), _) => h,
        (None, Some(p)) => p.h_required()?,
        (None, None) => bail!("missing key `bounds.h` (or a [proposal] section with h)"),
    };
    let mut inputs = build_bound_inputs(bounds_config, bundle.as_ref(), h)?;
    // TPS norms have no closed-form moments; estimate them on a seeded stream
    if inputs.moments.is_empty() {
        if let Some(b) = bundle.as_ref() {
            let mut rng = RandomStream::new(config.run.seed).substream(999);
            let estimates = minus_norm_moments(&b.norm, &[1, 2, 3], 1_000_000, &mut rng)?;
            inputs = inputs
                .with_moments(estimates.iter().map(|e| e.value).collect())
                .map_err(|e| anyhow::anyhow!("estimated moments: {e}"))?;
        }
    }
    let at = EvalPoint {
        x_norm: bounds_config.x_norm.unwrap_or(0.0),
        grad_u_norm: bounds_config.grad_u_norm.unwrap_or(0.0),
    };
    // worst case over the ball for the semi-implicit aux constants: exact for
    // diagonal quadratic models, otherwise the user's evaluation point
    let aux_point = match (bundle.as_ref().and_then(|b| b.quadratic.as_ref()), inputs.r) {
        (Some(q), Some(r)) => EvalPoint { x_norm: r, grad_u_norm: q.grad_u_sup(r) },
        _ => at,
    };

    let mut report = BoundReport::new(inputs.clone());
    let mut skipped = Vec::new();
    fn emit_row(
        report: &mut BoundReport,
        skipped: &mut Vec<serde_json::Value>,
        name: &str,
        result: gaussmh::Result<f64>,
    ) {
        match result {
            Ok(v) => report.push(name, v),
            Err(e) => skipped.push(json!({ "name": name, "reason": e.to_string() })),
        }
    }

    emit_row(&mut report, &mut skipped, "input_h", Ok(inputs.h));
    emit_row(&mut report, &mut skipped, "input_k", inputs.k.ok_or(gaussmh::Error::MissingConstant("K")));
    emit_row(&mut report, &mut skipped, "input_m_r", inputs.m_r.ok_or(gaussmh::Error::MissingConstant("M(R)")));
    emit_row(&mut report, &mut skipped, "input_n_r", inputs.n_r.ok_or(gaussmh::Error::MissingConstant("N(R)")));
    for (i, c) in inputs.c.iter().enumerate() {
        emit_row(
            &mut report,
            &mut skipped,
            &format!("input_c{}", i + 1),
            c.ok_or(gaussmh::Error::MissingConstant("C_n")),
        );
    }
    for n in 1..=inputs.moments.len() {
        emit_row(&mut report, &mut skipped, &format!("input_m{n}"), inputs.moment(n));
    }
    emit_row(&mut report, &mut skipped, "input_r", inputs.r.ok_or(gaussmh::Error::MissingConstant("R")));
    let u = inputs.unspecified;
    for (name, v) in [
        ("input_a", u.a),
        ("input_c_main", u.c_main),
        ("input_d_main", u.d_main),
        ("input_q_main", u.q_main),
        ("input_rho", u.rho),
        ("input_c2_lyap", u.c2_lyap),
        ("input_d_exit", u.d_exit),
        ("input_d_bar", u.d_bar),
    ] {
        emit_row(&mut report, &mut skipped, name, Ok(v));
    }
    emit_row(&mut report, &mut skipped, "eval_x_norm", Ok(at.x_norm));
    emit_row(&mut report, &mut skipped, "eval_grad_u_norm", Ok(at.grad_u_norm));

    emit_row(
        &mut report,
        &mut skipped,
        "proposal_factor_lipschitz",
        proposal_contraction_factor(&inputs, ContractionMode::Lipschitz),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "proposal_factor_convex",
        proposal_contraction_factor(&inputs, ContractionMode::Convex),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "mh_factor_ou",
        mh_contraction_factor(&inputs, ProposalKind::OrnsteinUhlenbeck, None).map(|f| f.value),
    );
    let aux = semi_implicit_aux(&inputs, &aux_point);
    match &aux {
        Ok(aux) => {
            emit_row(&mut report, &mut skipped, "aux_beta", Ok(aux.beta));
            emit_row(&mut report, &mut skipped, "aux_gamma", Ok(aux.gamma));
            emit_row(&mut report, &mut skipped, "aux_delta", Ok(aux.delta));
        }
        Err(e) => skipped.push(json!({ "name": "aux", "reason": e.to_string() })),
    }
    emit_row(
        &mut report,
        &mut skipped,
        "mh_factor_semi_implicit",
        aux.and_then(|aux| {
            mh_contraction_factor(&inputs, ProposalKind::SemiImplicit, Some(&aux)).map(|f| f.value)
        }),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "rejection_bound_ou",
        rejection_bound(&inputs, RejectionKind::OuP2Zero, &at),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "rejection_bound_semi_implicit",
        rejection_bound(&inputs, RejectionKind::SemiImplicitExplicit, &at),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "sensitivity_bound_ou",
        acceptance_sensitivity_bound(&inputs, RejectionKind::OuP2Zero, &at),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "sensitivity_bound_semi_implicit",
        acceptance_sensitivity_bound(&inputs, RejectionKind::SemiImplicitExplicit, &at),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "lyapunov_value",
        inputs
            .k
            .ok_or(gaussmh::Error::MissingConstant("K"))
            .map(|k| lyapunov_value(k, at.x_norm)),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "exit_bound_raw",
        lyapunov_exit_bound(&inputs, at.x_norm, config.run.n_steps).map(|b| b.raw),
    );
    emit_row(
        &mut report,
        &mut skipped,
        "exit_bound_clipped",
        lyapunov_exit_bound(&inputs, at.x_norm, config.run.n_steps).map(|b| b.clipped),
    );
    emit_row(&mut report, &mut skipped, "final_distance_bound", final_distance_bound(&inputs, config.run.n_steps));
    // iterated bound assembled from the pieces, when they exist
    let iterated = lyapunov_exit_bound(&inputs, at.x_norm, config.run.n_steps).and_then(|exit| {
        let k = inputs.k.ok_or(gaussmh::Error::MissingConstant("K"))?;
        let r = inputs.r.ok_or(gaussmh::Error::MissingConstant("R"))?;
        iterated_wasserstein_bound(
            1.0 - 0.25 * k * inputs.h,
            config.run.n_steps,
            2.0 * r,
            2.0 * r,
            exit.clipped,
            exit.clipped,
        )
    });
    emit_row(&mut report, &mut skipped, "iterated_wasserstein_bound", iterated);

    let mut table = Table::new(&["name", "value"]);
    for (name, value) in &report.values {
        table.push(vec![Value::Text(name.clone()), Value::Num(*value)]);
    }
    let summary = json!({
        "model": bundle.as_ref().map(|b| b.label.clone()),
        "n_steps": config.run.n_steps,
        "aux_point": { "x_norm": aux_point.x_norm, "grad_u_norm": aux_point.grad_u_norm },
        "skipped": skipped,
    });
    reporter.emit("bounds", &[("bounds", &table)], summary)?;
    Ok(())
}

fn plan(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    let bounds_config = config.bounds_required()?;
    let bundle = match &config.model {
        Some(model) => Some(build_model(model)?),
        None => None,
    };
    let epsilon = bounds_config.epsilon.context("missing key `bounds.epsilon`")?;
    let k = bounds_config
        .k
        .or_else(|| bundle.as_ref().and_then(|b| b.quadratic.as_ref()).and_then(|q| q.k))
        .context("missing key `bounds.k` (no model-derived convexity constant available)")?;
    let u = bounds_config.unspecified.resolve();
    let c = bounds_config.planner_c.unwrap_or(u.c_main);
    let q = bounds_config.planner_q.unwrap_or(u.q_main);
    let outcome = step_planner(epsilon, k, u.d_bar, c, q)?;

    let mut table = Table::new(&["feasible", "r", "h", "n", "achieved"]);
    let summary = match &outcome {
        PlanOutcome::Feasible(plan) => {
            table.push(vec![
                Value::Int(1),
                num(plan.r),
                num(plan.h),
                Value::Int(plan.n as i64),
                num(plan.achieved),
            ]);
            let replay_inputs = BoundInputs::new(plan.h)?
                .with_k(k)?
                .with_r(plan.r)
                .with_unspecified(u);
            let replay = final_distance_bound(&replay_inputs, plan.n)?;
            json!({
                "epsilon": epsilon,
                "k": k,
                "d_bar": u.d_bar,
                "planner_c": c,
                "planner_q": q,
                "required_nh": bounds::required_nh(k, plan.r, epsilon),
                "replayed_bound": replay,
                "replay_below_epsilon": replay < epsilon,
            })
        }
        PlanOutcome::Infeasible { violated } => {
            table.push(vec![Value::Int(0), Value::Blank, Value::Blank, Value::Blank, Value::Blank]);
            json!({
                "epsilon": epsilon,
                "k": k,
                "d_bar": u.d_bar,
                "planner_c": c,
                "planner_q": q,
                "violated": violated,
            })
        }
    };
    reporter.emit("plan", &[("plan", &table)], summary)?;
    Ok(())
}

fn exit_probability(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    let bundle = build_model(config.model_required()?)?;
    let spec = proposal_spec(config)?;
    let radius = config.run.radius.context("missing key `run.radius`")?;
    let x0 = starting_point(config, bundle.model.dim())?;
    let root = RandomStream::new(config.run.seed);
    let est = estimate_exit_probability(
        &spec,
        &bundle.model,
        &bundle.norm,
        &x0,
        radius,
        config.run.n_steps,
        config.run.n_replicas,
        &root,
        reporter.workers,
    )?;

    let default_bounds = Default::default();
    let bounds_config = config.bounds.as_ref().unwrap_or(&default_bounds);
    let x_norm = bundle.norm.minus_norm(&x0);
    let bound = build_bound_inputs(bounds_config, Some(&bundle), spec.h())
        .ok()
        .and_then(|inputs| {
            let inputs = if inputs.r.is_none() { inputs.with_r(radius) } else { inputs };
            lyapunov_exit_bound(&inputs, x_norm, config.run.n_steps).ok()
        });

    let mut table = Table::new(&[
        "radius",
        "n_steps",
        "n_replicas",
        "estimate",
        "std_error",
        "bound_raw",
        "bound_clipped",
    ]);
    table.push(vec![
        num(radius),
        Value::Int(config.run.n_steps as i64),
        Value::Int(config.run.n_replicas as i64),
        num(est.value),
        num(est.std_error),
        bound.map(|b| num(b.raw)).unwrap_or(Value::Blank),
        bound.map(|b| num(b.clipped)).unwrap_or(Value::Blank),
    ]);
    let summary = json!({
        "model": bundle.label,
        "proposal": spec.kind().label(),
        "h": spec.h(),
        "x_norm": x_norm,
        "dominated": bound.map(|b| est.value <= b.clipped + 3.0 * est.std_error),
    });
    reporter.emit("exit", &[("exit", &table)], summary)?;
    Ok(())
}

/// Canned pipeline: the double-well bridge model at levels 3..=8, with the
/// step-size scaling sweep at level 5 and the fixed-step dimension sweep.
fn tps_demo(config: &ExperimentConfig, reporter: &Reporter) -> Result<()> {
    let root = RandomStream::new(config.run.seed);
    let h_grid: Vec<f64> = match config.proposal.as_ref().and_then(|p| p.h_grid.clone()) {
        Some(grid) => grid,
        None => vec![0.02, 0.04, 0.08, 0.16],
    };
    let h_fixed = 0.05;
    let burn_in = 2_000;

    let demo_bundle = |m: u32| -> Result<(TargetModel, NormSpace)> {
        let tps = make_tps_model(
            &TpsConfig { levels: m, ell: 1, start: vec![-1.0], end: vec![1.0], alpha: 0.6 },
            Arc::new(DoubleWell),
        )?;
        Ok((tps.model, tps.norm))
    };

    // level-5 scaling sweep, both proposal families, one equilibrated state
    let (model5, norm5) = demo_bundle(5)?;
    let spec5 = ProposalSpec::new(ProposalKind::SemiImplicit, h_fixed)?;
    let mut rng = root.substream(0);
    let x = run_chain(
        &spec5,
        &model5,
        &norm5,
        &vec![0.0; model5.dim()],
        burn_in,
        ChainOptions::default(),
        &mut rng,
    )?
    .final_state;
    let mut scaling_table = Table::new(&["kind", "h", "estimate", "std_error"]);
    let mut slopes = serde_json::Map::new();
    for (i, kind) in [ProposalKind::OrnsteinUhlenbeck, ProposalKind::SemiImplicit]
        .into_iter()
        .enumerate()
    {
        let fit: ScalingFit = fit_scaling_exponent(
            kind,
            &model5,
            &x,
            &h_grid,
            config.run.n_samples,
            &root.substream(1 + i as u64),
            reporter.workers,
        )?;
        for (j, &h) in h_grid.iter().enumerate() {
            scaling_table.push(vec![
                Value::Text(kind.label().to_string()),
                num(h),
                num(fit.estimates[j].value),
                num(fit.estimates[j].std_error),
            ]);
        }
        slopes.insert(kind.label().to_string(), json!(fit.slope));
    }

    // dimension sweep: stationary average rejection at fixed h
    let mut dimension_table = Table::new(&["m", "d", "rejection", "std_error"]);
    let mut rates = Vec::new();
    for m in 3..=8u32 {
        let (model, norm) = demo_bundle(m)?;
        let mut rng = root.substream(10 + m as u64);
        let start = run_chain(
            &spec5,
            &model,
            &norm,
            &vec![0.0; model.dim()],
            burn_in,
            ChainOptions::default(),
            &mut rng,
        )?
        .final_state;
        let run =
            run_chain(&spec5, &model, &norm, &start, config.run.n_steps, ChainOptions::default(), &mut rng)?;
        let p = 1.0 - run.summary.acceptance_rate;
        let se = (p * (1.0 - p) / run.summary.n_steps as f64).sqrt();
        rates.push(p);
        dimension_table.push(vec![
            Value::Int(m as i64),
            Value::Int(model.dim() as i64),
            num(p),
            num(se),
        ]);
    }
    let (lo, hi) = rates
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &p| (lo.min(p), hi.max(p)));

    // single-state rejection spread across dimensions, for the sidecar
    let mut single_state = Vec::new();
    for m in 3..=8u32 {
        let (model, norm) = demo_bundle(m)?;
        let mut rng = root.substream(30 + m as u64);
        let start = run_chain(
            &spec5,
            &model,
            &norm,
            &vec![0.0; model.dim()],
            burn_in,
            ChainOptions::default(),
            &mut rng,
        )?
        .final_state;
        let est =
            estimate_rejection_probability(&spec5, &model, &start, config.run.n_samples, &mut rng)?;
        single_state.push(json!({ "m": m, "estimate": est.value, "std_error": est.std_error }));
    }

    let summary = json!({
        "h_fixed": h_fixed,
        "h_grid": h_grid,
        "burn_in": burn_in,
        "n_samples": config.run.n_samples,
        "n_steps": config.run.n_steps,
        "slopes": slopes,
        "dimension_max_min_ratio": hi / lo,
        "single_state_rejection": single_state,
    });
    reporter.emit(
        "tps-demo",
        &[("tps_scaling", &scaling_table), ("tps_dimension", &dimension_table)],
        summary,
    )?;
    Ok(())
}
