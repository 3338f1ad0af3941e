use spin_uncertainty::measure_sim::{simulate_expectation_at, ShotConfig};
use spin_uncertainty::prober::{self, ProbeConfig, COUNTEREXAMPLE_THRESHOLD};
use spin_uncertainty::relations::{RelationContext, RelationId};
use spin_uncertainty::states::{density_from_bloch, random_pure_indexed, BlochVector};
use spin_uncertainty::triangle;
use spin_uncertainty::{Axis, SpinQuantumNumber};

#[test]
fn general_spin_sum_bound_on_random_states() {
    for twice in [2, 3, 4] {
        let s = SpinQuantumNumber::from_twice(twice);
        let ctx = RelationContext::<f64>::new(s).unwrap();
        for i in 0..2_000 {
            let state = random_pure_indexed::<f64>(s.dim(), 41, i);
            assert!(
                ctx.evaluate(RelationId::SumGeneralSpin, &state)
                    .unwrap()
                    .gap
                    >= -1e-10
            );
        }
    }
}

#[test]
fn conjecture_scan_finds_no_counterexample() {
    let cfg = ProbeConfig {
        seed: 1,
        ..ProbeConfig::default()
    };
    for twice in [2, 3] {
        let r =
            prober::scan_conjecture(SpinQuantumNumber::from_twice(twice), 20_000, &cfg).unwrap();
        assert!(
            r.min_gap >= COUNTEREXAMPLE_THRESHOLD,
            "twice_s = {twice}: {}",
            r.min_gap
        );
        assert!(r.counterexample.is_none());
    }
}

#[test]
fn probe_result_serializes_with_its_state() {
    let cfg = ProbeConfig {
        restarts: 4,
        ..ProbeConfig::default()
    };
    let r = prober::min_gap(RelationId::TripleSum, SpinQuantumNumber::HALF, &cfg).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["relation"], "R5_TRIPLE_SUM");
    assert_eq!(json["argmin_state"]["dim"], 2);
    assert!(json.get("counterexample").is_none());
}

#[test]
fn estimator_spread_tracks_shot_noise() {
    let k = 1.0 / 3f64.sqrt();
    let state = density_from_bloch(BlochVector::new(k, k, k)).unwrap();
    let shots = 10_000;
    let n = 200;
    let estimates: Vec<f64> = (0..n)
        .map(|seed| {
            simulate_expectation_at(&state, Axis::X, &ShotConfig::new(shots, seed), 0)
                .unwrap()
                .estimate
        })
        .collect();
    let mean = estimates.iter().sum::<f64>() / n as f64;
    let sd = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let expected = ((1.0 - k * k) / 4.0 / shots as f64).sqrt();
    assert!((sd / expected - 1.0).abs() <= 0.15, "{sd} vs {expected}");
}

#[test]
fn triangle_scan_across_sides() {
    for side in [0.5, 1.0, 2.0] {
        let summary = triangle::scan(20_000, 4, side).unwrap();
        assert_eq!(summary.violations, 0);
        for m in &summary.minima {
            assert!(m.min_gap >= -1e-12);
        }
    }
}
