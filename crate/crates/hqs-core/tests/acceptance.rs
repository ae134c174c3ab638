//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use common::*;
use hqs_core::experiments::{self, config::SystemSpec, ExperimentConfig, ExperimentKind};
use hqs_core::sampling::{domain, sample_haar, RandomStream};
use hqs_core::selector::{haar_threshold_schedule, select_outcome};
use hqs_core::{HiddenSource, ProjectiveMeasurement, StateVector, ThresholdStrategy};
use std::f64::consts::FRAC_1_SQRT_2;

fn report_line(criterion: usize, pass: bool, description: &str) {
    println!(
        "[criterion {criterion:2}] {}: {description}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {description}");
}

fn qutrit_psi() -> StateVector {
    StateVector::from_real(&[0.26f64.sqrt(), 0.25f64.sqrt(), 0.49f64.sqrt()]).unwrap()
}

fn qutrit_phi() -> StateVector {
    StateVector::from_real(&[0.3f64.sqrt(), 0.3f64.sqrt(), 0.4f64.sqrt()]).unwrap()
}

fn sz_basis() -> ProjectiveMeasurement {
    ProjectiveMeasurement::standard(vec!["mz=-1".into(), "mz=0".into(), "mz=+1".into()]).unwrap()
}

fn rotated_qutrit_basis() -> ProjectiveMeasurement {
    let s = FRAC_1_SQRT_2;
    ProjectiveMeasurement::new(
        vec![
            StateVector::from_real(&[s, s, 0.0]).unwrap(),
            StateVector::from_real(&[s, -s, 0.0]).unwrap(),
            StateVector::basis_state(3, 2).unwrap(),
        ],
        vec!["+".into(), "-".into(), "mz=+1".into()],
    )
    .unwrap()
}

#[test]
fn criterion_01_golden_contextuality_pair() {
    let strategy = ThresholdStrategy::AnalyticHaar;
    let t1 = select_outcome(&qutrit_psi(), &qutrit_phi(), &sz_basis(), &strategy).unwrap();
    let t2 = select_outcome(
        &qutrit_psi(),
        &qutrit_phi(),
        &rotated_qutrit_basis(),
        &strategy,
    )
    .unwrap();
    let pass = t1.selected_label == "mz=+1"
        && (t1.sorted_p[0] - 0.49).abs() < 1e-12
        && (t1.thresholds[0] - 0.3).abs() < 1e-12
        && (t1.sorted_q[0] - 0.4).abs() < 1e-10
        && t2.selected_label == "+"
        && (t2.sorted_p[0] - 0.51).abs() < 1e-2
        && (t2.thresholds[0] - 0.29).abs() < 1e-2
        && (t2.sorted_q[0] - 0.6).abs() < 1e-10;
    report_line(
        1,
        pass,
        "golden contextuality pair: S_z selects mz=+1, rotated basis selects +",
    );
}

#[test]
fn criterion_02_golden_nonlocality_pair() {
    let psi = StateVector::from_real(&[0.5f64.sqrt(), 0.1f64.sqrt(), 0.0, 0.4f64.sqrt()]).unwrap();
    let phi_a = StateVector::from_real(&[0.8f64.sqrt(), 0.2f64.sqrt()]).unwrap();
    let phi_b = StateVector::from_real(&[0.4f64.sqrt(), 0.6f64.sqrt()]).unwrap();
    let phi = phi_a.tensor(&phi_b);
    let z = ProjectiveMeasurement::standard(vec!["0".into(), "1".into()]).unwrap();
    let s = FRAC_1_SQRT_2;
    let pm = ProjectiveMeasurement::new(
        vec![
            StateVector::from_real(&[s, s]).unwrap(),
            StateVector::from_real(&[s, -s]).unwrap(),
        ],
        vec!["+".into(), "-".into()],
    )
    .unwrap();
    let strategy = ThresholdStrategy::AnalyticHaar;
    let t1 = select_outcome(&psi, &phi, &z.tensor(&z), &strategy).unwrap();
    let t2 = select_outcome(&psi, &phi, &pm.tensor(&z), &strategy).unwrap();
    let pi1 = 1.0 - 0.5f64.powf(1.0 / 3.0);
    let pass = t1.selected_label == "0⊗0"
        && (t1.sorted_p[0] - 0.5).abs() < 1e-10
        && (t1.sorted_q[0] - 0.32).abs() < 1e-10
        && (t1.thresholds[0] - pi1).abs() < 1e-10
        && t2.selected_label == "+⊗1"
        && (t2.sorted_p[0] - 0.45).abs() < 1e-10
        && (t2.sorted_q[0] - 0.54).abs() < 1e-10;
    report_line(
        2,
        pass,
        "golden nonlocality pair: standard basis selects 0⊗0, rotated A selects +⊗1",
    );
}

#[test]
fn criterion_03_born_reproduction() {
    let trials = 100_000u64;
    let fixed: [(usize, Vec<f64>); 3] = [
        (2, vec![0.7f64.sqrt(), 0.3f64.sqrt()]),
        (3, vec![0.26f64.sqrt(), 0.25f64.sqrt(), 0.49f64.sqrt()]),
        (4, vec![0.5f64.sqrt(), 0.1f64.sqrt(), 0.0, 0.4f64.sqrt()]),
    ];
    let mut worst = 0.0f64;
    for (dim, fixed_amps) in fixed {
        let m = ProjectiveMeasurement::standard((0..dim).map(|i| i.to_string()).collect()).unwrap();
        let mut states = vec![StateVector::from_real(&fixed_amps).unwrap()];
        states.extend((0..20).map(|k| haar_state(dim, 0xC3 + dim as u64, k)));
        let source = HiddenSource::haar(dim, 7 * dim as u64 + 1).unwrap();
        for (si, psi) in states.iter().enumerate() {
            let born = m.born_probabilities(psi).unwrap();
            let mut counts = vec![0u64; dim];
            for t in 0..trials {
                let phi = source.sample_hidden(si as u64 * trials + t);
                let trace =
                    select_outcome(psi, &phi, &m, &ThresholdStrategy::AnalyticHaar).unwrap();
                counts[trace.permutation[trace.selected_rank - 1]] += 1;
            }
            for (&count, &p) in counts.iter().zip(born.probs()) {
                worst = worst.max((count as f64 / trials as f64 - p).abs());
            }
        }
    }
    report_line(
        3,
        worst < 0.01,
        &format!(
            "Born reproduction at D in {{2,3,4}}, 21 states each, N=1e5: \
             max |freq - born| = {worst:.4} < 0.01"
        ),
    );
}

#[test]
fn criterion_04_conditional_threshold_oracle() {
    // The closed-form second threshold at D=3 against a rejection-sampling
    // conditional quantile: condition 1e6 raw Haar q-vectors on
    // q1 within +-0.005 of the observed value, then take the matching
    // quantile of q2.
    let raw: Vec<[f64; 3]> = {
        let mut stream = RandomStream::derive(0xD1, domain::SCAN ^ 0xfeed, 0);
        (0..1_000_000)
            .map(|_| {
                let phi = sample_haar(3, &mut stream).unwrap();
                let a = phi.amplitudes();
                [a[0].norm_sqr(), a[1].norm_sqr(), a[2].norm_sqr()]
            })
            .collect()
    };
    let band = 0.005;
    let mut worst = 0.0f64;
    let mut cfg_stream = RandomStream::derive(0xD2, domain::SCAN ^ 0xfeed, 1);
    for _ in 0..10 {
        // Random descending normalized p and a q1 value in a region where
        // the conditional sample is well populated.
        let mut p = [
            cfg_stream.uniform() + 1e-3,
            cfg_stream.uniform() + 1e-3,
            cfg_stream.uniform() + 1e-3,
        ];
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p.sort_by(|a, b| b.total_cmp(a));
        let q1 = 0.05 + 0.75 * cfg_stream.uniform();

        let c2 = p[1] / (1.0 - p[0]);
        let closed = haar_threshold_schedule(&p, &[q1, 0.0, 0.0], 3)[1];

        let mut conditioned: Vec<f64> = raw
            .iter()
            .filter(|q| (q[0] - q1).abs() <= band)
            .map(|q| q[1])
            .collect();
        assert!(conditioned.len() > 1000, "conditioning starved at q1={q1}");
        conditioned.sort_by(f64::total_cmp);
        let level = (1.0 - c2).clamp(0.0, 1.0);
        let idx = ((conditioned.len() as f64 * level) as usize).min(conditioned.len() - 1);
        let empirical = conditioned[idx];
        worst = worst.max((closed - empirical).abs());
    }
    report_line(
        4,
        worst < 0.01,
        &format!(
            "Dirichlet closed form vs rejection-sampling conditional quantile at D=3, \
             10 configurations: max |difference| = {worst:.4} < 0.01"
        ),
    );
}

#[test]
fn criterion_05_qubit_symmetric_form() {
    let m = ProjectiveMeasurement::standard(vec!["0".into(), "1".into()]).unwrap();
    let mut checked = 0u64;
    let mut agreed = 0u64;
    for k in 0..10_000u64 {
        let psi = haar_state(2, 0xAB, 2 * k);
        let phi = haar_state(2, 0xAB, 2 * k + 1);
        let p = m.born_probabilities(&psi).unwrap();
        let q = m.born_probabilities(&phi).unwrap();
        let s0 = p.probs()[0] + q.probs()[0];
        let s1 = p.probs()[1] + q.probs()[1];
        if (s0 - s1).abs() < 1e-12 {
            continue; // exact tie, measure zero
        }
        checked += 1;
        let trace = select_outcome(&psi, &phi, &m, &ThresholdStrategy::AnalyticHaar).unwrap();
        let argmax = if s0 > s1 { "0" } else { "1" };
        if trace.selected_label == argmax {
            agreed += 1;
        }
    }
    report_line(
        5,
        agreed == checked && checked > 9_900,
        &format!(
            "qubit symmetric form q1+p1 > q2+p2: agreement {agreed}/{checked} off the tie set"
        ),
    );
}

#[test]
fn criterion_06_chsh() {
    let config = ExperimentConfig::defaults(ExperimentKind::Chsh);
    let report = experiments::run(&config).unwrap();
    let s = report.estimate("S").unwrap().value;
    let s_control = report.estimate("S_control").unwrap().value;
    let tsirelson = 2.0 * 2.0f64.sqrt();
    let pass = report.passed() && (s - tsirelson).abs() < 0.03 && s_control.abs() <= 2.0 + 0.03;
    report_line(
        6,
        pass,
        &format!(
            "CHSH singlet S = {s:.4} within 0.03 of {tsirelson:.4}; \
             product control |S| = {:.4} <= 2.03",
            s_control.abs()
        ),
    );
}

#[test]
fn criterion_07_no_signaling() {
    let config = ExperimentConfig::defaults(ExperimentKind::NoSignaling);
    let report = experiments::run(&config).unwrap();
    let diff0 = report.estimate("marginal_diff[0]").unwrap();
    let diff1 = report.estimate("marginal_diff[1]").unwrap();
    let counter = report.estimate("counter.marginal_diff[0]").unwrap();
    let pass = report.passed()
        && diff0.value < 0.01
        && diff1.value < 0.01
        && diff0.gated
        && !counter.gated
        && counter.value > 0.0;
    report_line(
        7,
        pass,
        &format!(
            "no-signaling: B-marginal differences ({:.4}, {:.4}) < 0.01 under Haar; \
             known-hidden-state counter-demo reports difference {}",
            diff0.value, diff1.value, counter.value
        ),
    );
}

#[test]
fn criterion_08_haar_sampler_beta_law() {
    let n = 10_000;
    let mut worst_ratio = 0.0f64;
    for dim in [2usize, 3, 4, 6] {
        let source = HiddenSource::haar(dim, 0xBE7A + dim as u64).unwrap();
        let mut q: Vec<f64> = (0..n)
            .map(|t| source.sample_hidden(t as u64).amplitudes()[0].norm_sqr())
            .collect();
        let stat = ks_one_sample(&mut q, |x| 1.0 - (1.0 - x).powi(dim as i32 - 1));
        worst_ratio = worst_ratio.max(stat / ks_critical_1pct(n));
    }
    report_line(
        8,
        worst_ratio < 1.0,
        &format!(
            "Haar overlap law Beta(1, D-1) at D in {{2,3,4,6}}: \
             worst KS statistic at {:.2}x the 1% critical value",
            worst_ratio
        ),
    );
}

#[test]
fn criterion_09_sequential_null_and_sweep() {
    let config = ExperimentConfig::defaults(ExperimentKind::Sequential);
    let report = experiments::run(&config).unwrap();
    let r_x = report.estimate("r_x").unwrap();
    let r_z = report.estimate("r_z").unwrap();
    let kappas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let sweep: Vec<f64> = kappas
        .iter()
        .map(|k| {
            report
                .estimate(&format!("sweep.r_x[kappa={k}]"))
                .map(|e| e.value)
                .unwrap_or(f64::NAN)
        })
        .collect();
    let sweep_reported = sweep.iter().all(|v| v.is_finite())
        && report
            .estimates
            .iter()
            .filter(|e| e.name.starts_with("sweep."))
            .all(|e| !e.gated);
    let pass = report.passed()
        && r_x.value.abs() < 0.02
        && r_z.value.abs() < 0.02
        && r_x.gated
        && sweep_reported;
    report_line(
        9,
        pass,
        &format!(
            "sequential: full-refresh lag-1 correlations r_x={:.4}, r_z={:.4} < 0.02; \
             kappa sweep reported (not gated): {:?}",
            r_x.value,
            r_z.value,
            sweep
                .iter()
                .map(|v| (v * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_10_beamsplitter() {
    // N = 1: Hong-Ou-Mandel frequencies (0.5, 0, 0.5) within 0.01.
    let mut pass = true;
    let mut detail = String::new();
    {
        let config = ExperimentConfig::defaults(ExperimentKind::Beamsplitter);
        let report = experiments::run(&config).unwrap();
        let f20 = report.estimate("freq[|2,0⟩]").unwrap().value;
        let f11 = report.estimate("freq[|1,1⟩]").unwrap().value;
        let f02 = report.estimate("freq[|0,2⟩]").unwrap().value;
        pass &=
            report.passed() && (f20 - 0.5).abs() < 0.01 && f11 == 0.0 && (f02 - 0.5).abs() < 0.01;
        detail.push_str(&format!("N=1 freq=({f20:.3},{f11},{f02:.3})"));
    }
    // N in {2,3}: cancelled outcomes have exactly zero frequency, surviving
    // ones match the convolution oracle within 0.01.
    for n in [2usize, 3] {
        let mut config = ExperimentConfig::defaults(ExperimentKind::Beamsplitter);
        config.beamsplitter.as_mut().unwrap().photons = n;
        let report = experiments::run(&config).unwrap();
        let amps = experiments::beamsplitter::output_amplitudes(n);
        let labels = experiments::beamsplitter::outcome_labels(n);
        for (label, amp) in labels.iter().zip(&amps) {
            let freq = report.estimate(&format!("freq[{label}]")).unwrap().value;
            if amp * amp < 1e-12 {
                pass &= freq == 0.0;
            } else {
                pass &= (freq - amp * amp).abs() < 0.01;
            }
        }
        pass &= report.passed();
        detail.push_str(&format!("; N={n} ok"));
    }
    report_line(10, pass, &format!("beamsplitter photon counting: {detail}"));
}

#[test]
fn criterion_11_determinism() {
    // Identical config and seed must reproduce every report byte for byte.
    let mut pass = true;
    for kind in ExperimentKind::ALL {
        let mut config = ExperimentConfig::defaults(kind);
        // Determinism is trial-count independent; keep reruns quick.
        config.trials = match kind {
            ExperimentKind::Contextuality | ExperimentKind::Nonlocality => 200,
            ExperimentKind::Sequential => 300,
            _ => 2_000,
        };
        if kind == ExperimentKind::Sequential {
            config.tolerance = 0.2;
        }
        let first = experiments::run(&config).unwrap().to_json();
        let second = experiments::run(&config).unwrap().to_json();
        pass &= first == second;
        // A different seed must change sampled outcomes somewhere.
        if !matches!(
            kind,
            ExperimentKind::Contextuality | ExperimentKind::Nonlocality
        ) {
            let mut reseeded = config.clone();
            reseeded.seed = config.seed + 1;
            pass &= experiments::run(&reseeded).unwrap().to_json() != first;
        }
    }
    report_line(
        11,
        pass,
        "determinism: identical config+seed gives byte-identical reports for all experiments",
    );
}

#[test]
fn criterion_03b_fixed_point_check_d2_exact() {
    // Deterministic-state corner of the Born criterion: psi = e0 gives
    // frequency exactly (1, 0) for any trial count.
    let mut config = ExperimentConfig::defaults(ExperimentKind::BornCheck);
    config.system = Some(SystemSpec {
        psi: vec![[1.0, 0.0], [0.0, 0.0]],
    });
    config.measurements = vec![];
    config.trials = 1_000;
    let report = experiments::run(&config).unwrap();
    assert!(report.passed());
    assert_eq!(report.estimate("freq[0]").unwrap().value, 1.0);
}
