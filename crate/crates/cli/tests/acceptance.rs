//! Acceptance suite: one line per criterion, non-zero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hdmac::dmc::{evaluate_bounds, Alphabets};
use hdmac::exponents::{event16_rate_bound, psi, rho_sweep, slope_check, ExponentInputs};
use hdmac::gaussian::{quadrature_mi_check, CheckedBound, GaussianParams, PowerPolicy};
use hdmac::optimizer::{contains, frontier, mac_baseline, max_weighted_sum_with, SearchConfig};
use hdmac::polytope::cooperative::{
    compare_on_samples, sample_standard_cone, standard_cone, verify_projection, RegionForm, SplitRates, Verdict,
};
use hdmac::polytope::{Rational, DEFAULT_ROW_LIMIT};
use hdmac::{Execution, SlotSchedule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, body: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let detail = body()?;
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))?;
    Ok(format!("{detail} in {elapsed:.2?}"))
}

fn c1_projection() -> Check {
    timed(Duration::from_secs(5), || {
        let cone = standard_cone();
        let report = verify_projection(SplitRates::Unconstrained, RegionForm::SixRow, &cone, DEFAULT_ROW_LIMIT)
            .map_err(|e| e.to_string())?;
        ensure(report.verdict == Verdict::Match, || {
            format!("extra rows {:?}, missing rows {:?}", report.extra_rows_text(), report.missing_rows_text())
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let samples: Vec<BTreeMap<String, Rational>> = (0..200).map(|_| sample_standard_cone(&mut rng)).collect();
        let agree = compare_on_samples(&report.pruned, &report.template, &samples).map_err(|e| e.to_string())?;
        ensure(agree.same_vertices == 200, || format!("{agree:?}"))?;

        // with non-negative split rates four rows survive; they must come back as a finding
        let nn = verify_projection(SplitRates::NonNegative, RegionForm::SixRow, &cone, DEFAULT_ROW_LIMIT)
            .map_err(|e| e.to_string())?;
        ensure(nn.verdict == Verdict::ExtraRows && nn.extra.len() == 4, || format!("non-negative split: {:?}", nn.verdict))?;
        Ok(format!(
            "six rows, 200/200 vertex sets equal; non-negative split reports extra rows [{}]",
            nn.extra_rows_text().join("; ")
        ))
    })
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianParams {
    GaussianParams {
        k10: rng.gen_range(0.1..3.0),
        k20: rng.gen_range(0.1..3.0),
        k12: rng.gen_range(0.0..3.0),
        k21: rng.gen_range(0.0..3.0),
        n0: rng.gen_range(0.2..3.0),
        n1: rng.gen_range(0.2..3.0),
        n2: rng.gen_range(0.2..3.0),
        p1: rng.gen_range(0.0..5.0),
        p2: rng.gen_range(0.0..5.0),
    }
}

fn c2_mac_special_case() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = SearchConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = random_gaussian(&mut rng);
        let mac = mac_baseline(&p).map_err(|e| e.to_string())?;
        let at = |mu: f64| {
            max_weighted_sum_with(&p, mu, &cfg, Some(SlotSchedule::mac()), Execution::default()).map_err(|e| e.to_string())
        };
        let (a, b, s) = (at(1.0)?, at(0.0)?, at(0.5)?);
        for (got, want) in [(a.r1, mac.r1_max), (b.r2, mac.r2_max), (s.r1 + s.r2, mac.sum_max)] {
            worst = worst.max((got - want).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("largest gap {worst:e}"))?;
    Ok(format!("50 parameter sets, largest gap {worst:.1e}"))
}

fn c3_symmetric_frontiers() -> Check {
    timed(Duration::from_secs(60), || {
        let cfg = SearchConfig::default();
        let mut previous: Option<Vec<f64>> = None;
        let mut notes = Vec::new();
        for k in [1.0, 2.0, 3.0] {
            let p = GaussianParams::symmetric(1.0, k, 2.0);
            let f = frontier(&p, &cfg).map_err(|e| e.to_string())?;
            let mac = mac_baseline(&p).map_err(|e| e.to_string())?;
            ensure(contains(&f.rate_pairs(), &mac.vertices(), 1e-3).unwrap(), || format!("K12 = {k}: MAC not contained"))?;
            let symmetric = contains(&f.rate_pairs(), &f.mirrored_pairs(), 1e-3).unwrap()
                && contains(&f.mirrored_pairs(), &f.rate_pairs(), 1e-3).unwrap();
            ensure(symmetric, || format!("K12 = {k}: frontier not symmetric"))?;
            let values: Vec<f64> = f.sweep.iter().map(|s| s.objective).collect();
            if let Some(prev) = &previous {
                for (i, (lo, hi)) in prev.iter().zip(&values).enumerate() {
                    ensure(*hi >= *lo, || format!("K12 = {k}: weighted sum drops at mu = {}", f.sweep[i].mu))?;
                }
            }
            notes.push(format!("K12={k}: sum {:.6}", values[values.len() / 2] * 2.0));
            previous = Some(values);
        }
        Ok(notes.join(", "))
    })
}

fn c4_mac_anchor() -> Check {
    let mac = mac_baseline(&GaussianParams::symmetric(1.0, 1.0, 2.0)).map_err(|e| e.to_string())?;
    let want = 0.5 * 5f64.log2();
    ensure((mac.sum_max - want).abs() <= 1e-9, || format!("sum bound {}", mac.sum_max))?;
    Ok(format!("sum bound {:.9}", mac.sum_max))
}

fn c5_dmc_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = common::random_alphabets(&mut rng, 3);
        let (spec, dist) = common::random_instance(&mut rng, a);
        let slots = common::random_schedule(&mut rng);
        let fast = evaluate_bounds(&spec, &dist, slots).map_err(|e| e.to_string())?;
        let flat = common::FlatJoint::new(&spec, &dist).bounds(slots);
        worst = worst.max(common::max_bound_gap(&fast, &flat));
    }
    ensure(worst <= 1e-12, || format!("largest gap {worst:e}"))?;
    Ok(format!("100 instances, largest gap {worst:.1e}"))
}

fn c6_quadrature() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = random_gaussian(&mut rng);
        let mut u = || rng.gen_range(0.0..3.0);
        let policy = PowerPolicy { p10: u(), p_u: u(), p20: u(), p_v: u(), p13: u(), p23: u(), ..Default::default() };
        let slots = common::random_schedule(&mut rng);
        for bound in [CheckedBound::I2, CheckedBound::I4, CheckedBound::I5, CheckedBound::I6, CheckedBound::I7] {
            let (closed, numeric) = quadrature_mi_check(&p, &policy, slots, bound).map_err(|e| e.to_string())?;
            worst = worst.max((closed - numeric).abs());
        }
    }
    ensure(worst <= 1e-3, || format!("largest gap {worst:e}"))?;
    Ok(format!("50 draws x 5 bounds, largest gap {worst:.1e}"))
}

fn c7_exponents() -> Check {
    let binary = Alphabets { u: 2, v: 2, x10: 2, x20: 2, x13: 2, x23: 2, y: 2, y12: 2, y21: 2 };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rhos: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let (mut worst_slope, mut worst_i8): (f64, f64) = (0.0, 0.0);
    for n in 0..20 {
        let (spec, dist) = common::random_instance(&mut rng, binary);
        let slots = common::random_schedule(&mut rng);
        let x = ExponentInputs { spec, dist, slots, rho: 0.0 };
        let err = |e: hdmac::exponents::ExponentError| e.to_string();
        ensure(psi(&x).map_err(err)? == 0.0, || format!("instance {n}: psi(0) != 0"))?;
        let (fd, analytic) = slope_check(&x, 1e-5).map_err(err)?;
        worst_slope = worst_slope.max((fd - analytic).abs());
        let i8 = evaluate_bounds(&x.spec, &x.dist, slots).map_err(|e| e.to_string())?.i8;
        worst_i8 = worst_i8.max((event16_rate_bound(&x).map_err(err)? - i8).abs());
        let values: Vec<f64> = rho_sweep(&x, &rhos).map_err(err)?.iter().map(|r| r.psi).collect();
        let monotone = values.windows(2).all(|w| w[1] >= w[0]);
        let concave = values.windows(3).all(|w| w[0] + w[2] <= 2.0 * w[1] + 1e-12);
        ensure(monotone && concave, || format!("instance {n}: psi not concave non-decreasing: {values:?}"))?;
    }
    ensure(worst_slope <= 1e-4, || format!("slope discrepancy {worst_slope:e}"))?;
    ensure(worst_i8 <= 1e-12, || format!("event-16 bound differs from I8 by {worst_i8:e}"))?;
    Ok(format!("20 instances, slope discrepancy {worst_slope:.1e}, I8 gap {worst_i8:.1e}"))
}

fn c8_determinism() -> Check {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        "region_zero.toml",
        "symmetric_k2.toml",
        "compare_k2.toml",
        "fme_verify.toml",
        "fme_nonnegative.toml",
        "exponent.toml",
        "dmc_bounds.toml",
    ];
    let mut count = 0;
    for name in runs {
        for format in ["csv", "json"] {
            let mut outputs = Vec::new();
            for attempt in 0..2 {
                let out = dir.path().join(format!("{name}.{format}.{attempt}"));
                let status = Command::new(env!("CARGO_BIN_EXE_hdmac"))
                    .arg("--config")
                    .arg(configs.join(name))
                    .args(["--format", format, "--out"])
                    .arg(&out)
                    .output()
                    .map_err(|e| e.to_string())?
                    .status;
                ensure(status.success(), || format!("{name} ({format}) exited with {status}"))?;
                outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
            }
            ensure(outputs[0] == outputs[1], || format!("{name} ({format}) differs between runs"))?;
            count += 1;
        }
    }
    Ok(format!("{count} mode/format pairs byte-identical"))
}

fn main() {
    let criteria: [(u32, fn() -> Check); 8] = [
        (1, c1_projection),
        (2, c2_mac_special_case),
        (3, c3_symmetric_frontiers),
        (4, c4_mac_anchor),
        (5, c5_dmc_oracle),
        (6, c6_quadrature),
        (7, c7_exponents),
        (8, c8_determinism),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(reason) => {
                failed += 1;
                println!("criterion {n}: FAIL ({reason})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
