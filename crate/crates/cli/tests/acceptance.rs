//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use spin_uncertainty::measure_sim::{
    analytic_row, run_sweep, simulate_expectation_at, ShotConfig, SweepRow,
};
use spin_uncertainty::moments::outcome_distribution;
use spin_uncertainty::prober::{self, ProbeConfig, COUNTEREXAMPLE_THRESHOLD};
use spin_uncertainty::relations::{tau, RelationContext, RelationId};
use spin_uncertainty::soak::{self, SoakConfig};
use spin_uncertainty::spin_ops::build_spin_operators;
use spin_uncertainty::states::{
    bloch_from_density, density_from_bloch, magnetic_state, random_mixed_indexed,
    random_pure_indexed, BlochVector, StateFamily,
};
use spin_uncertainty::triangle::{self, AnalogKind, TrianglePoint};
use spin_uncertainty::{Axis, SpinQuantumNumber, State};

const HALF: SpinQuantumNumber = SpinQuantumNumber::HALF;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn bloch(rx: f64, ry: f64, rz: f64) -> State {
    density_from_bloch(BlochVector::new(rx, ry, rz)).unwrap()
}

fn operator_algebra() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for twice in 1..=10 {
        let ops = build_spin_operators::<f64>(SpinQuantumNumber::from_twice(twice)).unwrap();
        let r = ops.residuals();
        worst = worst
            .max(r.comm_xy)
            .max(r.comm_yz)
            .max(r.comm_zx)
            .max(r.casimir);
    }
    let t = start.elapsed();
    verdict(
        worst <= 1e-12 && within(t, 1.0),
        format!(
            "max residual {worst:.2e} (<= 1e-12), {:.3}s (< 1s)",
            t.as_secs_f64()
        ),
    )
}

fn soundness_soak() -> Verdict {
    let start = Instant::now();
    let summary = soak::run(&SoakConfig::new(100_000, 20_240_601, HALF)).unwrap();
    let t = start.elapsed();
    let worst = summary
        .rows
        .iter()
        .map(|r| r.min_gap)
        .fold(f64::INFINITY, f64::min);
    verdict(
        worst >= -1e-10 && summary.passed() && within(t, 60.0),
        format!(
            "{} relations x 2 ensembles x 1e5 states, min gap {worst:.3e} (>= -1e-10), {:.2}s (< 60s)",
            summary.rows.len() / 2,
            t.as_secs_f64()
        ),
    )
}

fn saturation_suite() -> Verdict {
    let half = RelationContext::<f64>::new(HALF).unwrap();
    let k = 1.0 / 3f64.sqrt();
    let h = 1.0 / 2f64.sqrt();
    let mut cases: Vec<(String, f64)> = vec![
        (
            "R3 @ (1,1,1)/sqrt3".into(),
            half.evaluate(RelationId::TripleProduct, &bloch(k, k, k))
                .unwrap()
                .gap,
        ),
        (
            "R5 @ (1,1,1)/sqrt3".into(),
            half.evaluate(RelationId::TripleSum, &bloch(k, k, k))
                .unwrap()
                .gap,
        ),
        (
            "R3 @ (0,0,1)".into(),
            half.evaluate(RelationId::TripleProduct, &bloch(0.0, 0.0, 1.0))
                .unwrap()
                .gap,
        ),
        (
            "R8 @ (1,-1,0)/sqrt2".into(),
            half.evaluate(RelationId::VarianceOfSums, &bloch(h, -h, 0.0))
                .unwrap()
                .gap,
        ),
    ];
    let r10 = half
        .evaluate(RelationId::EntropicTriple, &bloch(0.0, 0.0, 1.0))
        .unwrap();
    cases.push(("R10 @ (0,0,1)".into(), r10.gap));
    let r6 = (0..100)
        .map(|i| {
            half.evaluate(RelationId::SumHalf, &random_pure_indexed(2, 606, i))
                .unwrap()
                .gap
                .abs()
        })
        .fold(0.0, f64::max);
    cases.push(("R6 @ 100 pure".into(), r6));
    let one = RelationContext::<f64>::new(SpinQuantumNumber::ONE).unwrap();
    let r7 = one
        .evaluate(
            RelationId::SumGeneralSpin,
            &magnetic_state(SpinQuantumNumber::ONE, 2).unwrap(),
        )
        .unwrap();
    cases.push(("R7 @ s=1 |m=1>".into(), r7.gap));
    let bounds_ok = (r10.rhs - 4f64.ln()).abs() <= 1e-15 && r7.rhs == 1.0;
    let worst = cases.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
    let detail = cases
        .iter()
        .map(|(name, g)| format!("{name} {:.1e}", g.abs()))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(
        worst <= 1e-12 && bounds_ok,
        format!(
            "max |gap| {worst:.2e} (<= 1e-12); bounds ln4 and 1 {}; {detail}",
            if bounds_ok { "ok" } else { "WRONG" }
        ),
    )
}

fn chains_hold(rows: &[SweepRow]) -> (bool, f64) {
    let mut worst = f64::INFINITY;
    for r in rows {
        for gap in [
            r.sum0.value - r.sum1.value,
            r.sum1.value - r.sum2.value,
            r.pro0.value - r.pro1.value,
            r.pro1.value - r.pro2.value,
        ] {
            worst = worst.min(gap);
        }
    }
    (worst >= -1e-12, worst)
}

fn latitude_sweep() -> Verdict {
    let rows = run_sweep(StateFamily::R1Latitude, 360, &ShotConfig::new(1, 0), true).unwrap();
    let (chains, worst) = chains_hold(&rows);
    let target = 6f64.powf(-1.5);
    let mut eq_err = 0.0f64;
    for idx in [45, 135, 225, 315] {
        let r = &rows[idx];
        for v in [
            r.sum0.value - 0.5,
            r.sum1.value - 0.5,
            r.pro0.value - target,
            r.pro1.value - target,
        ] {
            eq_err = eq_err.max(v.abs());
        }
    }
    let t32 = tau::<f64>().powf(1.5);
    let ratio_err = rows
        .iter()
        .filter(|r| r.pro2.value > 1e-15)
        .map(|r| (r.pro1.value / r.pro2.value - t32).abs())
        .fold(0.0, f64::max);
    verdict(
        chains && eq_err <= 1e-12 && ratio_err <= 1e-12,
        format!(
            "360 points: chain min gap {worst:.2e}; equality points err {eq_err:.2e} (<= 1e-12); Pro1/Pro2 - tau^1.5 max {ratio_err:.2e}"
        ),
    )
}

fn meridian_sweep() -> Verdict {
    let rows = run_sweep(StateFamily::R2Meridian, 361, &ShotConfig::new(1, 0), true).unwrap();
    let (chains, worst) = chains_hold(&rows);
    let ctx = RelationContext::<f64>::new(HALF).unwrap();
    let theta = 2f64.sqrt().atan();
    let row = analytic_row(&ctx, theta, &StateFamily::R2Meridian.point(theta).state()).unwrap();
    let sum_eq = (row.sum0.value - row.sum1.value).abs();
    let poles = [&rows[0], &rows[360]]
        .iter()
        .map(|r| r.pro0.value.abs().max(r.pro1.value.abs()))
        .fold(0.0, f64::max);
    verdict(
        chains && sum_eq <= 1e-12 && poles <= 1e-12,
        format!("361 points: chain min gap {worst:.2e}; |Sum0-Sum1| at arctan sqrt2 {sum_eq:.2e}; Pro0,Pro1 at poles {poles:.2e}"),
    )
}

fn monte_carlo_fidelity() -> Verdict {
    let start = Instant::now();
    let k = 1.0 / 3f64.sqrt();
    let state = StateFamily::R1Latitude.point(0.3).state();
    let ctx = RelationContext::<f64>::new(HALF).unwrap();
    let exact = ctx.moments(&state).unwrap();
    let trials = 1000;
    let mut covered = 0;
    for seed in 0..trials {
        let cfg = ShotConfig::new(4_000_000, seed);
        let ok = Axis::ALL.iter().all(|&axis| {
            let e = simulate_expectation_at(&state, axis, &cfg, 0).unwrap();
            (e.estimate - exact.mean[axis.index()]).abs() <= 5.0 * e.stderr
        });
        covered += ok as u32;
    }
    let coverage = covered as f64 / trials as f64;

    let balanced = bloch(k, k, k);
    let shots = 10_000u64;
    let mut worst_ratio_err = 0.0f64;
    let mut ratios = Vec::new();
    for axis in Axis::ALL {
        let est: Vec<f64> = (0..30)
            .map(|seed| {
                simulate_expectation_at(&balanced, axis, &ShotConfig::new(shots, seed), 0)
                    .unwrap()
                    .estimate
            })
            .collect();
        let mean = est.iter().sum::<f64>() / 30.0;
        let sd = (est.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 29.0).sqrt();
        let expected = ((1.0 - k * k) / 4.0 / shots as f64).sqrt();
        let ratio = sd / expected;
        worst_ratio_err = worst_ratio_err.max((ratio - 1.0).abs());
        ratios.push(format!("{}={ratio:.3}", axis.name()));
    }
    let t = start.elapsed();
    verdict(
        coverage >= 0.99 && worst_ratio_err <= 0.2 && within(t, 60.0),
        format!(
            "5-sigma coverage {:.1}% over {trials} trials (>= 99%); spread/sqrt(Var/N) {} (within 20%); {:.2}s (< 60s)",
            coverage * 100.0,
            ratios.join(" "),
            t.as_secs_f64()
        ),
    )
}

fn prober_tightness() -> Verdict {
    let cfg = ProbeConfig {
        seed: 7,
        ..ProbeConfig::default()
    };
    let r5 = prober::min_gap(RelationId::TripleSum, HALF, &cfg).unwrap();
    let b = bloch_from_density(&r5.argmin_state).unwrap().to_array();
    let k = 1.0 / 3f64.sqrt();
    let comp_err = b.iter().map(|c| (c.abs() - k).abs()).fold(0.0, f64::max);
    let v_half = prober::min_variance_sum(HALF, &cfg).unwrap().min_lhs;
    let v_one = prober::min_variance_sum(SpinQuantumNumber::ONE, &cfg)
        .unwrap()
        .min_lhs;
    let mut scans = Vec::new();
    let mut scan_ok = true;
    for twice in [2, 3] {
        let r =
            prober::scan_conjecture(SpinQuantumNumber::from_twice(twice), 100_000, &cfg).unwrap();
        let clean = r.min_gap >= COUNTEREXAMPLE_THRESHOLD;
        scan_ok &= clean || r.counterexample.is_some();
        scans.push(format!(
            "s={} min gap {:.2e}{}",
            SpinQuantumNumber::from_twice(twice),
            r.min_gap,
            if clean {
                ""
            } else {
                " (counterexample artifact)"
            }
        ));
    }
    verdict(
        r5.min_gap <= 1e-8 && comp_err <= 1e-4 && (v_half - 0.5).abs() <= 1e-8 && (v_one - 1.0).abs() <= 1e-6 && scan_ok,
        format!(
            "R5 min gap {:.2e}, |r_i| - 1/sqrt3 max {comp_err:.1e}; variance sum {v_half:.10} (s=1/2), {v_one:.8} (s=1); {}",
            r5.min_gap,
            scans.join(", ")
        ),
    )
}

fn triangle_analog() -> Verdict {
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for side in [0.5, 1.0, 2.0] {
        let summary = triangle::scan(100_000, 31, side).unwrap();
        violations += summary.violations;
        for m in &summary.minima {
            worst = worst.min(m.min_gap);
        }
    }
    let centroid = triangle::check_analogs(&TrianglePoint::<f64>::centroid(1.0));
    let sum_gap = centroid
        .iter()
        .filter(|r| AnalogKind::of(r.relation) == Some(AnalogKind::TripleSum))
        .map(|r| r.gap.abs())
        .fold(0.0, f64::max);
    verdict(
        worst >= -1e-12 && violations == 0 && sum_gap <= 1e-12,
        format!("3 sides x 1e5 points: min gap {worst:.2e} (>= -1e-12); centroid sum-analog |gap| {sum_gap:.1e}"),
    )
}

fn oracle_equivalence() -> Verdict {
    let ops = build_spin_operators::<f64>(HALF).unwrap();
    let mut worst = 0.0f64;
    for i in 0..10_000u64 {
        let state = if i % 2 == 0 {
            random_pure_indexed(2, 99, i)
        } else {
            random_mixed_indexed(2, 99, i)
        };
        let r = bloch_from_density(&state).unwrap().to_array();
        for axis in Axis::ALL {
            let d = outcome_distribution(&state, ops.component(axis)).unwrap();
            let mean = d.mean();
            let var = d.second_moment() - mean * mean;
            let ri = r[axis.index()];
            worst = worst
                .max((mean - ri / 2.0).abs())
                .max((var - (1.0 - ri * ri) / 4.0).abs());
        }
    }
    verdict(
        worst <= 1e-12,
        format!("1e4 states, max deviation {worst:.2e} (<= 1e-12)"),
    )
}

fn spinlab(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .env_remove("SPINLAB_SEED")
        .output()
        .expect("spinlab runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, Vec<&str>); 4] = [
        (
            "sim.csv",
            vec![
                "--seed", "42", "simulate", "--family", "r2", "--points", "12", "--shots", "100000",
            ],
        ),
        (
            "probe.json",
            vec![
                "--seed",
                "5",
                "probe",
                "--relation",
                "R3",
                "--spin",
                "1",
                "--restarts",
                "8",
            ],
        ),
        (
            "tri.json",
            vec![
                "--seed",
                "8",
                "triangle",
                "--samples",
                "5000",
                "--side",
                "2",
            ],
        ),
        (
            "soak.json",
            vec!["--seed", "3", "soak", "--samples", "2000", "--spin", "2"],
        ),
    ];
    let mut failures = Vec::new();
    for (name, args) in &runs {
        let first = dir.path().join(name);
        let second = dir.path().join(format!("replay-{name}"));
        let first_s = first.to_str().unwrap();
        let mut argv = args.clone();
        argv.extend(["--emit", first_s]);
        let code = spinlab(&argv);
        let manifest = format!("{first_s}.manifest.json");
        let replay = spinlab(&[
            "replay",
            "--manifest",
            &manifest,
            "--emit",
            second.to_str().unwrap(),
            "--threads",
            "1",
        ]);
        let same =
            code == 0 && replay == 0 && read(&first) == read(&second) && !read(&first).is_empty();
        if !same {
            failures.push(*name);
        }
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} stochastic commands replayed byte-identically from their manifests",
                runs.len()
            )
        } else {
            format!("replay differs for {}", failures.join(", "))
        },
    )
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_default()
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("operator algebra", operator_algebra),
        ("relation soundness soak", soundness_soak),
        ("saturation suite", saturation_suite),
        ("latitude sweep (analytic)", latitude_sweep),
        ("meridian sweep (analytic)", meridian_sweep),
        ("monte carlo fidelity", monte_carlo_fidelity),
        ("prober tightness", prober_tightness),
        ("triangle analog", triangle_analog),
        ("oracle equivalence", oracle_equivalence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!(
            "criterion {:>2} {:<28} {}  {}",
            i + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += !v.pass as usize;
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
