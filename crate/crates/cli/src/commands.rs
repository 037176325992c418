use serde::Serialize;
use serde_json::{json, Value};

use rao_fusion::asymptotics::{clairvoyant_pd, noncentrality};
use rao_fusion::fusion::snr_db_to_amplitude;
use rao_fusion::montecarlo::{
    self, calibrate_levels, heatmap_pd, noise_power, sweep_snr, sweep_tau, validate_threshold, Experiment,
};
use rao_fusion::quantizer::{default_interval, objective_curve, optimize_threshold};
use rao_fusion::{validation, NoiseFamily, NoiseModel, Point, Rule, TargetDraw};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::RunOutput;

pub struct QuantizerArgs {
    pub family: NoiseFamily,
    pub pe: f64,
    /// `None`: unit variance.
    pub scale: Option<f64>,
    pub shape: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub tol: f64,
    pub points: usize,
}

#[derive(Serialize)]
struct CurveRow {
    tau: f64,
    psi0: f64,
}

pub fn design_quantizer(args: &QuantizerArgs, out: &mut RunOutput) -> Result<Value, CliError> {
    let noise = match args.scale {
        Some(s) => NoiseModel::new(args.family, s, args.shape)?,
        None => NoiseModel::unit_variance(args.family, args.shape)?,
    };
    let (dlo, dhi) = default_interval(&noise);
    let interval = (args.lo.unwrap_or(dlo), args.hi.unwrap_or(dhi));
    if !(interval.0 < interval.1) {
        return Err(CliError::validation(format!(
            "search interval [{}, {}] is empty",
            interval.0, interval.1
        )));
    }
    if !(args.tol > 0.0) || args.points < 2 {
        return Err(CliError::validation("--tol must be positive and --points at least 2"));
    }
    let design = optimize_threshold(&noise, args.pe, interval, args.tol)?;
    let curve: Vec<CurveRow> = objective_curve(&noise, args.pe, interval, args.points)?
        .into_iter()
        .map(|(tau, psi0)| CurveRow { tau, psi0 })
        .collect();
    out.write_csv(Some("curve"), &curve)?;
    println!(
        "family={} scale={} pe={} tau*={:.9} psi0(tau*)={:.9}",
        args.family,
        noise.scale(),
        args.pe,
        design.tau_star,
        design.objective_at_star
    );
    Ok(json!({
        "family": args.family,
        "scale": noise.scale(),
        "shape": noise.shape(),
        "pe": args.pe,
        "design": design,
    }))
}

#[derive(Serialize)]
struct CalibrationRow {
    rule: Rule,
    pf_target: f64,
    gamma: f64,
    achieved_pf: f64,
    achieved_pf_se: f64,
    validation_pf: f64,
    validation_se: f64,
    trials: usize,
    master_seed: u64,
}

pub fn calibrate(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<Value, CliError> {
    let scene = cfg.build_scene()?;
    let grid = cfg.build_grid(&scene)?;
    let draw = cfg.target_draw()?;
    let budget = cfg.budget();
    let mut rows = Vec::new();
    for &rule in &cfg.montecarlo.rules {
        let (h0, _) = budget.trials_for(rule);
        let exp = Experiment::new(rule, &scene, &grid, draw.clone())?;
        for c in calibrate_levels(&exp, &cfg.montecarlo.pf, h0, budget.master_seed)? {
            let v = validate_threshold(&exp, c.gamma, h0, budget.master_seed)?;
            println!(
                "{:<16} pf0={:<6} gamma={:.6} achieved={:.5} fresh={:.5} ± {:.5}",
                rule.key(),
                c.pf_target,
                c.gamma,
                c.achieved_pf,
                v.pd,
                v.se
            );
            rows.push(CalibrationRow {
                rule,
                pf_target: c.pf_target,
                gamma: c.gamma,
                achieved_pf: c.achieved_pf,
                achieved_pf_se: c.achieved_pf_se,
                validation_pf: v.pd,
                validation_se: v.se,
                trials: h0,
                master_seed: budget.master_seed,
            });
        }
    }
    out.write_csv(None, &rows)?;
    Ok(json!({ "rows": rows.len() }))
}

pub fn sweep_tau_cmd(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<Value, CliError> {
    let scene = cfg.build_scene()?;
    let grid = cfg.build_grid(&scene)?;
    let taus = cfg.tau_values()?;
    let rows = sweep_tau(
        &scene,
        &grid,
        &cfg.montecarlo.rules,
        &taus,
        &cfg.sweep.tau_snr_db,
        &cfg.sweep.polarities,
        &cfg.montecarlo.pf,
        &cfg.target_draw()?,
        &cfg.budget(),
    )?;
    out.write_csv(None, &rows)?;
    Ok(json!({ "rows": rows.len(), "taus": taus }))
}

pub fn sweep_snr_cmd(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<Value, CliError> {
    let scene = cfg.build_scene()?;
    let grid = cfg.build_grid(&scene)?;
    let snr = cfg.snr_values()?;
    let draw = cfg.target_draw()?;
    let budget = cfg.budget();
    let mut rows = Vec::new();
    for &pe in &cfg.sweep.pes {
        rows.extend(sweep_snr(
            &scene,
            &grid,
            &cfg.montecarlo.rules,
            &snr,
            &cfg.montecarlo.pf,
            pe,
            cfg.sweep.polarity,
            &draw,
            &budget,
        )?);
    }
    out.write_csv(None, &rows)?;
    Ok(json!({ "rows": rows.len(), "snr_db": snr, "pes": cfg.sweep.pes }))
}

fn heatmap_positions(cfg: &ExperimentConfig) -> Result<Vec<Point>, CliError> {
    Ok(cfg
        .region()?
        .lattice(cfg.sweep.heatmap_side, cfg.sweep.heatmap_placement))
}

pub fn heatmap(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<Value, CliError> {
    let scene = cfg.build_scene()?;
    let grid = cfg.build_grid(&scene)?;
    let positions = heatmap_positions(cfg)?;
    let budget = cfg.budget();
    let mut rows = Vec::new();
    for &pf in &cfg.montecarlo.pf {
        rows.extend(heatmap_pd(
            &scene,
            &grid,
            &cfg.montecarlo.rules,
            &positions,
            cfg.sweep.heatmap_snr_db,
            pf,
            &budget,
        )?);
    }
    out.write_csv(None, &rows)?;
    Ok(json!({ "rows": rows.len(), "cells": positions.len(), "snr_db": cfg.sweep.heatmap_snr_db }))
}

#[derive(Serialize)]
struct RocRow {
    rule: Rule,
    snr_db: f64,
    gamma: f64,
    pf: f64,
    pd: f64,
    trials_h0: usize,
    trials_h1: usize,
    master_seed: u64,
}

pub fn roc(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<Value, CliError> {
    let scene = cfg.build_scene()?;
    let grid = cfg.build_grid(&scene)?;
    let draw = cfg.target_draw()?;
    let budget = cfg.budget();
    let snr = cfg.sweep.roc_snr_db;
    let theta = f64::from(cfg.sweep.polarity) * snr_db_to_amplitude(snr, noise_power(&scene));
    let mut rows = Vec::new();
    for &rule in &cfg.montecarlo.rules {
        let (h0, h1) = budget.trials_for(rule);
        let exp = Experiment::new(rule, &scene, &grid, draw.clone())?;
        for p in montecarlo::roc(&exp, theta, cfg.sweep.roc_points, h0, h1, budget.master_seed)? {
            rows.push(RocRow {
                rule,
                snr_db: snr,
                gamma: p.gamma,
                pf: p.pf,
                pd: p.pd,
                trials_h0: h0,
                trials_h1: h1,
                master_seed: budget.master_seed,
            });
        }
    }
    out.write_csv(None, &rows)?;
    Ok(json!({ "rows": rows.len(), "snr_db": snr }))
}

#[derive(Serialize)]
struct PredictRow {
    x: f64,
    y: f64,
    snr_db: f64,
    pf: f64,
    lambda: f64,
    pd_predicted: f64,
}

/// Clairvoyant asymptotic detection probability at a fixed target, or over
/// the heatmap lattice when the target is drawn uniformly.
pub fn predict(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<Value, CliError> {
    let scene = cfg.build_scene()?;
    let positions = match cfg.target_draw()? {
        TargetDraw::Fixed(p) => vec![p],
        TargetDraw::Uniform => heatmap_positions(cfg)?,
    };
    let power = noise_power(&scene);
    let snr = cfg.snr_values()?;
    let mut rows = Vec::new();
    for p in &positions {
        for &s in &snr {
            let lambda = noncentrality(snr_db_to_amplitude(s, power), p, &scene);
            for &pf in &cfg.montecarlo.pf {
                rows.push(PredictRow {
                    x: p.coords().first().copied().unwrap_or(f64::NAN),
                    y: p.coords().get(1).copied().unwrap_or(f64::NAN),
                    snr_db: s,
                    pf,
                    lambda,
                    pd_predicted: clairvoyant_pd(pf, lambda)?,
                });
            }
        }
    }
    out.write_csv(None, &rows)?;
    Ok(json!({ "rows": rows.len(), "positions": positions.len() }))
}

/// Exact-enumeration checks. `Ok(false)` when any check fails.
pub fn validate(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(Value, bool), CliError> {
    let checks = validation::run_all(cfg.montecarlo.master_seed)?;
    for c in &checks {
        println!(
            "{} {:<36} cases={:<3} worst={:.3e} tol={:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.cases,
            c.worst_error,
            c.tolerance
        );
    }
    out.write_csv(None, &checks)?;
    let passed = checks.iter().all(|c| c.passed);
    Ok((json!({ "passed": passed, "checks": checks }), passed))
}
