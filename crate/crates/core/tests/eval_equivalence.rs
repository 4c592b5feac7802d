mod common;

use qfloor::eval::{evaluate, match_sample, EvalSettings, Mode};
use qfloor::pipeline::{build_db, select_aps, synth, LabeledSample, SampleSet, SplitConfig};
use qfloor::{Method, SignVector};

fn random_db(rng: &mut rand_chacha::ChaCha8Rng, n: usize, m: usize, floors: i32) -> SampleSet {
    use rand::Rng;
    SampleSet {
        ap_order: (0..n).map(|i| format!("AP{i}")).collect(),
        samples: (0..m)
            .map(|l| LabeledSample {
                building_id: "0".into(),
                floor: rng.random_range(0..floors),
                location_id: l.to_string(),
                vector: common::random_vector(rng, n),
                count: 1,
            })
            .collect(),
    }
}

fn chosen(db: &SampleSet, psi: &SignVector, method: Method) -> Option<usize> {
    match_sample(db, psi, method, Mode::Exact, 0, 0).unwrap().chosen_index
}

#[test]
fn quantum_and_swap_pick_the_classical_argmax() {
    let mut rng = common::rng(5);
    // N = 4: few distinct vectors, so ties are common
    for _ in 0..300 {
        let db = random_db(&mut rng, 4, 6, 3);
        let psi = common::random_vector(&mut rng, 4);
        let want = chosen(&db, &psi, Method::ClassicalAbsDot);
        assert_eq!(chosen(&db, &psi, Method::QuantumNeuron), want);
        assert_eq!(chosen(&db, &psi, Method::SwapTest), want);
    }
    for n in [8usize, 16] {
        for _ in 0..500 {
            let db = random_db(&mut rng, n, 8, 4);
            let psi = common::random_vector(&mut rng, n);
            let want = chosen(&db, &psi, Method::ClassicalAbsDot);
            assert_eq!(chosen(&db, &psi, Method::QuantumNeuron), want);
            assert_eq!(chosen(&db, &psi, Method::SwapTest), want);
        }
    }
}

fn synthetic_split(seed: u64) -> (SampleSet, SampleSet) {
    let cfg = synth::SynthConfig {
        buildings: 1,
        floors: 4,
        aps_per_floor: 6,
        samples_per_floor: 40,
        seed,
        ..Default::default()
    };
    let records = synth::generate(&cfg).unwrap();
    let aps = select_aps(&records, 16).unwrap();
    let out = build_db(
        &records,
        &aps,
        SplitConfig {
            train_fraction: 0.7,
            seed,
        },
        None,
    )
    .unwrap();
    (out.db, out.test)
}

#[test]
fn reports_agree_and_cdfs_are_monotone() {
    let (db, test) = synthetic_split(21);
    let run = |method, mode| {
        evaluate(&db, &test, EvalSettings { method, mode, seed: 4 }, None).unwrap()
    };
    let classical = run(Method::ClassicalAbsDot, Mode::Exact);
    let quantum = run(Method::QuantumNeuron, Mode::Exact);
    let swap = run(Method::SwapTest, Mode::Exact);
    assert_eq!(quantum.estimated_floors, classical.estimated_floors);
    assert_eq!(quantum.cdf, classical.cdf);
    assert_eq!(swap.chosen_indices, classical.chosen_indices);
    assert_eq!((quantum.qubits_used, swap.qubits_used), (5, 9));
    assert!(quantum.total_gate_count > 0);
    assert_eq!(classical.total_gate_count, 0);

    for report in [&classical, &quantum, &swap, &run(Method::Random, Mode::Exact)] {
        let fractions: Vec<f64> = report.cdf.iter().map(|p| p.cumulative_fraction).collect();
        assert!(fractions.windows(2).all(|w| w[0] <= w[1]));
        assert!(report.cdf.windows(2).all(|w| w[0].error < w[1].error));
        assert_eq!(*fractions.last().unwrap(), 1.0);
    }
}

#[test]
fn sampled_accuracy_stays_close_to_exact() {
    let (db, test) = synthetic_split(8);
    let exact = evaluate(
        &db,
        &test,
        EvalSettings {
            method: Method::QuantumNeuron,
            mode: Mode::Exact,
            seed: 0,
        },
        None,
    )
    .unwrap();
    for seed in [1u64, 2, 3] {
        let sampled = evaluate(
            &db,
            &test,
            EvalSettings {
                method: Method::QuantumNeuron,
                mode: Mode::Shots(8192),
                seed,
            },
            None,
        )
        .unwrap();
        assert!(
            (sampled.accuracy - exact.accuracy).abs() <= 0.05,
            "seed {seed}: {} vs {}",
            sampled.accuracy,
            exact.accuracy
        );
        assert_eq!(sampled.shots, 8192);
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let (db, test) = synthetic_split(3);
    let settings = EvalSettings {
        method: Method::QuantumNeuron,
        mode: Mode::Shots(1024),
        seed: 17,
    };
    let one = evaluate(&db, &test, settings, Some(1)).unwrap();
    let four = evaluate(&db, &test, settings, Some(4)).unwrap();
    assert_eq!(one, four);
}
