use std::collections::BTreeMap;
use std::fs::File;

use hdmac::dmc::{evaluate_bounds, DmcDocument, DmcSpec, InputDistribution};
use hdmac::exponents::{event16_rate_bound, rho_sweep, slope_check, write_sweep_csv, ExponentInputs};
use hdmac::format::sig12;
use hdmac::gaussian::{compute_bounds, consumption};
use hdmac::optimizer::{contains, frontier_with, mac_baseline, read_rate_pairs, tdma_point, POWER_TOL};
use hdmac::polytope::cooperative::{compare_on_samples, sample_standard_cone, standard_cone, verify_projection, Verdict};
use hdmac::polytope::{PolytopeError, Rational};
use hdmac::region::rate_rows;
use hdmac::{Execution, IBounds, Pentagon};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, Mode, RunConfig};
use crate::error::CliError;

/// What a mode produced: the artifact, a human summary, and a verdict that
/// is reported after the artifact has been written.
pub struct Outcome {
    pub artifact: Vec<u8>,
    pub summary: String,
    pub verdict: Result<(), CliError>,
}

pub struct Context {
    pub exec: Execution,
    pub seed: u64,
}

pub fn default_format(mode: Mode) -> Format {
    match mode {
        Mode::FmeVerify | Mode::DmcBounds => Format::Json,
        _ => Format::Csv,
    }
}

pub fn run(mode: Mode, cfg: &RunConfig, format: Format, ctx: &Context) -> Result<Outcome, CliError> {
    match mode {
        Mode::Region => region(cfg, format),
        Mode::Frontier => frontier(cfg, format, ctx),
        Mode::Compare => compare(cfg, format, ctx),
        Mode::FmeVerify => fme_verify(cfg, format, ctx),
        Mode::Exponent => exponent(cfg, format),
        Mode::DmcBounds => dmc_bounds(cfg, format),
    }
}

fn ok(artifact: Vec<u8>, summary: String) -> Outcome {
    Outcome { artifact, summary, verdict: Ok(()) }
}

/// JSON with every float rounded to 12 significant digits.
fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    round_floats(&mut v);
    let mut out = serde_json::to_vec_pretty(&v).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x: f64 = sig12(n.as_f64().expect("f64 number")).parse().expect("sig12 output parses");
            *v = json!(x);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn load_dmc(cfg: &RunConfig) -> Result<(DmcSpec, InputDistribution), CliError> {
    let path = &cfg.dmc.as_ref().expect("validated").path;
    DmcDocument::load(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn region(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let slots = cfg.schedule.expect("validated");
    let form = cfg.search.form;
    let mut verdict = Ok(());
    let bounds: IBounds = match (&cfg.gaussian, &cfg.policy) {
        (Some(params), Some(policy)) => {
            let (u1, u2) = consumption(policy, slots);
            if u1 > params.p1 + POWER_TOL || u2 > params.p2 + POWER_TOL {
                verdict = Err(CliError::Verification(format!(
                    "policy spends ({u1}, {u2}), above the budgets ({}, {})",
                    params.p1, params.p2
                )));
            }
            compute_bounds(params, policy, slots).map_err(|e| CliError::Config(e.to_string()))?
        }
        _ => {
            let (spec, dist) = load_dmc(cfg)?;
            evaluate_bounds(&spec, &dist, slots).map_err(|e| CliError::Config(e.to_string()))?
        }
    };
    let rows = rate_rows(&bounds, form).map_err(|e| CliError::Config(e.to_string()))?;
    let vertices = Pentagon::from_bounds(&bounds, form).vertices();
    let artifact = match format {
        Format::Csv => {
            let row_lines = rows.iter().map(|r| vec!["row".into(), r.label.clone(), sig12(r.r1), sig12(r.r2), sig12(r.bound)]);
            let vertex_lines =
                vertices.iter().enumerate().map(|(i, v)| vec!["vertex".into(), format!("v{i}"), sig12(v.0), sig12(v.1), String::new()]);
            csv_bytes(&["kind", "label", "r1", "r2", "bound"], row_lines.chain(vertex_lines))?
        }
        Format::Json => to_json(&json!({ "bounds": bounds, "form": form, "rows": rows, "vertices": vertices }))?,
    };
    let summary = format!("region: {} rows, {} vertices", rows.len(), vertices.len());
    Ok(Outcome { artifact, summary, verdict })
}

fn frontier(cfg: &RunConfig, format: Format, ctx: &Context) -> Result<Outcome, CliError> {
    let params = cfg.gaussian.expect("validated");
    let f = frontier_with(&params, &cfg.search, cfg.schedule, ctx.exec).map_err(optimizer_error)?;
    let artifact = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            f.write_csv(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
            buf
        }
        Format::Json => to_json(&f)?,
    };
    Ok(ok(artifact, format!("frontier: {} points over {} weights", f.points.len(), f.sweep.len())))
}

fn optimizer_error(e: hdmac::optimizer::OptimizerError) -> CliError {
    use hdmac::optimizer::OptimizerError as E;
    match e {
        E::Witness { .. } => CliError::Verification(e.to_string()),
        E::Params(_) | E::Config(_) => CliError::Config(e.to_string()),
        other => CliError::Io(other.to_string()),
    }
}

fn compare(cfg: &RunConfig, format: Format, ctx: &Context) -> Result<Outcome, CliError> {
    let params = cfg.gaussian.expect("validated");
    let tol = cfg.compare.tolerance;
    let mut sets: Vec<(&str, Vec<(f64, f64)>)> = vec![
        ("cooperative", frontier_with(&params, &cfg.search, None, ctx.exec).map_err(optimizer_error)?.rate_pairs()),
        ("mac", mac_baseline(&params).map_err(optimizer_error)?.vertices()),
        ("tdma", tdma_point(&params, &cfg.search).map_err(optimizer_error)?.rate_pairs()),
    ];
    if let Some(path) = &cfg.compare.external {
        let file = File::open(path)?;
        let pairs = read_rate_pairs(file).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if pairs.is_empty() {
            return Err(CliError::Config(format!("{}: no rate pairs", path.display())));
        }
        sets.push(("external", pairs));
    }
    let mut verdicts = Vec::new();
    for (outer, outer_pts) in &sets {
        for (inner, inner_pts) in &sets {
            if outer != inner {
                let holds = contains(outer_pts, inner_pts, tol).map_err(optimizer_error)?;
                verdicts.push((*outer, *inner, holds));
            }
        }
    }
    let summary = verdicts
        .iter()
        .map(|(o, i, h)| format!("{o} {} {i}", if *h { "contains" } else { "does not contain" }))
        .collect::<Vec<_>>()
        .join("\n");
    let artifact = match format {
        Format::Csv => csv_bytes(
            &["outer", "inner", "contains", "tolerance"],
            verdicts.iter().map(|(o, i, h)| vec![o.to_string(), i.to_string(), h.to_string(), sig12(tol)]),
        )?,
        Format::Json => {
            let sets: BTreeMap<&str, &Vec<(f64, f64)>> = sets.iter().map(|(k, v)| (*k, v)).collect();
            let verdicts: Vec<Value> =
                verdicts.iter().map(|(o, i, h)| json!({ "outer": o, "inner": i, "contains": h })).collect();
            to_json(&json!({ "tolerance": tol, "sets": sets, "verdicts": verdicts }))?
        }
    };
    Ok(ok(artifact, summary))
}

fn fme_verify(cfg: &RunConfig, format: Format, ctx: &Context) -> Result<Outcome, CliError> {
    let fme = &cfg.fme;
    let cone = standard_cone();
    let report = verify_projection(fme.split, fme.form, &cone, fme.row_limit).map_err(|e| match e {
        PolytopeError::RowLimit { .. } => CliError::ResourceLimit(e.to_string()),
        other => CliError::Io(other.to_string()),
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let samples: Vec<BTreeMap<String, Rational>> = (0..fme.samples).map(|_| sample_standard_cone(&mut rng)).collect();
    let agreement = compare_on_samples(&report.pruned, &report.template, &samples).map_err(|e| CliError::Io(e.to_string()))?;

    let verdict_text = match (report.verdict, agreement.all_agree()) {
        (Verdict::Match, true) => "PASS",
        (Verdict::ExtraRows, _) => "FINDING",
        _ => "FAIL",
    };
    let lines = |sys: &hdmac::polytope::RationalInequalitySystem| -> Vec<String> {
        sys.rows().iter().map(|r| sys.format_row(r)).collect()
    };
    let mut summary = format!(
        "fme-verify: {verdict_text}; {} projected rows, {} after pruning, template {}; {}/{} samples with equal vertex sets",
        report.projected.len(),
        report.pruned.len(),
        report.template.len(),
        agreement.same_vertices,
        agreement.samples,
    );
    for row in report.extra_rows_text() {
        summary.push_str(&format!("\n  extra non-redundant row: {row}"));
    }
    for row in report.missing_rows_text() {
        summary.push_str(&format!("\n  missing template row: {row}"));
    }

    let artifact = match format {
        Format::Json => to_json(&json!({
            "split": report.split,
            "form": report.form,
            "verdict": verdict_text,
            "projected": lines(&report.projected),
            "pruned": lines(&report.pruned),
            "template": lines(&report.template),
            "extra": report.extra_rows_text(),
            "missing": report.missing_rows_text(),
            "samples": agreement,
            "seed": ctx.seed,
        }))?,
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = vec![vec!["verdict".into(), verdict_text.into()]];
            for (section, items) in [
                ("projected", lines(&report.projected)),
                ("pruned", lines(&report.pruned)),
                ("template", lines(&report.template)),
                ("extra", report.extra_rows_text()),
                ("missing", report.missing_rows_text()),
            ] {
                rows.extend(items.into_iter().map(|r| vec![section.to_string(), r]));
            }
            csv_bytes(&["section", "row"], rows)?
        }
    };
    let verdict = match verdict_text {
        "FAIL" => Err(CliError::Verification(format!(
            "projection differs from the template ({} extra, {} missing, {}/{} samples agree)",
            report.extra.len(),
            report.missing.len(),
            agreement.same_vertices.min(agreement.same_region),
            agreement.samples
        ))),
        _ => Ok(()),
    };
    Ok(Outcome { artifact, summary, verdict })
}

fn exponent(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let (spec, dist) = load_dmc(cfg)?;
    let slots = cfg.schedule.expect("validated");
    let x = &cfg.exponent;
    let inputs = ExponentInputs { spec: spec.clone(), dist: dist.clone(), slots, rho: 0.0 };
    let bad = |e: hdmac::exponents::ExponentError| CliError::Config(e.to_string());
    let rhos: Vec<f64> = (0..x.rho_points).map(|k| k as f64 / (x.rho_points - 1) as f64).collect();
    let sweep = rho_sweep(&inputs, &rhos).map_err(bad)?;
    let (finite_diff, analytic) = slope_check(&inputs, x.step).map_err(bad)?;
    let i8 = evaluate_bounds(&spec, &dist, slots).map_err(|e| CliError::Config(e.to_string()))?.i8;
    let rate_bound = event16_rate_bound(&inputs).map_err(bad)?;
    let discrepancy = (finite_diff - analytic).abs();

    let summary = format!(
        "exponent: slope at 0 by finite difference {} (h = {}), analytic {}, discrepancy {}; I8 = {}",
        sig12(finite_diff),
        sig12(x.step),
        sig12(analytic),
        sig12(discrepancy),
        sig12(i8)
    );
    let artifact = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&sweep, &mut buf).map_err(|e| CliError::Io(e.to_string()))?;
            buf
        }
        Format::Json => to_json(&json!({
            "sweep": sweep,
            "slope_check": {
                "step": x.step,
                "finite_difference": finite_diff,
                "analytic": analytic,
                "discrepancy": discrepancy,
                "tolerance": x.tolerance,
            },
            "event16_rate_bound": rate_bound,
            "i8": i8,
        }))?,
    };
    let verdict = if discrepancy > x.tolerance {
        Err(CliError::Verification(format!("slope discrepancy {discrepancy} exceeds {}", x.tolerance)))
    } else if (rate_bound - i8).abs() > 1e-12 {
        Err(CliError::Verification(format!("rate bound {rate_bound} differs from I8 = {i8}")))
    } else {
        Ok(())
    };
    Ok(Outcome { artifact, summary, verdict })
}

fn dmc_bounds(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let (spec, dist) = load_dmc(cfg)?;
    let slots = cfg.schedule.expect("validated");
    let b = evaluate_bounds(&spec, &dist, slots).map_err(|e| CliError::Config(e.to_string()))?;
    let verdict = b.check_invariants(1e-12).map_err(CliError::Verification);
    let artifact = match format {
        Format::Json => to_json(&b)?,
        Format::Csv => csv_bytes(
            &["bound", "value"],
            hdmac::polytope::cooperative::BOUND_PARAMETERS
                .iter()
                .zip(b.values())
                .map(|(k, v)| vec![k.to_string(), v.map(sig12).unwrap_or_default()]),
        )?,
    };
    Ok(Outcome { artifact, summary: format!("dmc-bounds: I10 = {}", sig12(b.i10)), verdict })
}
