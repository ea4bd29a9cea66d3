//! End-to-end acceptance suite. Each criterion prints a single PASS/FAIL
//! line; the suite as a whole passes only if every criterion does. Runtime
//! caps are asserted alongside the numerical checks, so a regression in
//! either correctness or cost fails the build.

use std::process::Command;
use std::time::Instant;

use amplab::derivation::{
    derive_amplitude_system, exact_cubic_coefficients, parse_poly, Monomial, Nonlinearity,
    SymbolSpec,
};
use amplab::experiments::{
    study_approximation, study_concentration, study_ht_bounds, study_invariant_measure,
    study_linear_coupling, study_residual, StudyConfig, StudyKind,
};
use amplab::noise::{ou_covariance, ou_covariance_mc, stream_id, CorrelationSpec, WienerStream};
use amplab::spectral::{inject_iota, make_domain, norm, project_pi, FourierField, NormKind, Space};

fn verdict(n: usize, name: &str, pass: bool) -> bool {
    println!(
        "criterion {n} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn random_mean_zero_field(domain: amplab::spectral::DomainSpec, stream: &mut WienerStream) -> FourierField {
    let mut u = FourierField::zero(domain, Space::U);
    for k in 1..=domain.cutoff {
        let c = stream.next_complex_std();
        u.set(k, c);
        u.set(-k, c.conj());
    }
    u
}

#[test]
fn criterion_01_projection_algebra() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for &l in &[1.0, std::f64::consts::PI, 2.0 * std::f64::consts::PI] {
        for &eps in &[0.3, 0.1, 0.05] {
            let cutoff = (3.0 * l / (eps * std::f64::consts::PI)).ceil() as i64;
            let domain = make_domain(l, eps, cutoff).unwrap();
            let mut stream = WienerStream::new(42, stream_id(0, 0, 100));
            for _ in 0..100 {
                let u = random_mean_zero_field(domain, &mut stream);
                let a = inject_iota(&u).unwrap();
                let back = project_pi(&a).unwrap();
                // round trip is the identity
                let err: f64 = u
                    .coeffs
                    .iter()
                    .zip(back.coeffs.iter())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                worst = worst.max(err);
                // injection is an L2 isometry on mean-zero data
                let nu = norm(&u, NormKind::L2).unwrap();
                let na = norm(&a, NormKind::L2).unwrap();
                worst = worst.max((nu - na).abs() / nu.max(1.0));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-12 && elapsed < 1.0;
    println!("  worst identity/isometry defect {worst:.3e}, {elapsed:.2}s");
    assert!(verdict(1, "projection algebra", pass));
}

#[test]
fn criterion_02_linear_coupling() {
    let start = Instant::now();
    let config = StudyConfig::default_for(StudyKind::Linear);
    let coupled = study_linear_coupling(&config).unwrap();
    let mut decoupled_cfg = config.clone();
    decoupled_cfg.decoupled = true;
    let decoupled = study_linear_coupling(&decoupled_cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "  coupled slope {:.3} CI [{:.3}, {:.3}]; decoupled slope {:.3} CI [{:.3}, {:.3}]; {elapsed:.0}s",
        coupled.slope,
        coupled.slope_ci.0,
        coupled.slope_ci.1,
        decoupled.slope,
        decoupled.slope_ci.0,
        decoupled.slope_ci.1,
    );
    if decoupled.slope_ci.1 < 0.0 {
        // The control error grows mildly (sup-norms over a band of ~1/eps
        // modes pick up a sqrt-log factor), so its CI can sit slightly
        // below zero. What the control must rule out is positive decay.
        println!("  note: decoupled control drifts slightly negative (log-growth of the sup)");
    }
    let pass = coupled.slope >= 0.35
        && coupled.slope_ci.0 > 0.0
        && decoupled.slope_ci.0 <= 0.0
        && elapsed < 600.0;
    assert!(verdict(2, "linear coupling scaling", pass));
}

#[test]
fn criterion_03_residual_scaling() {
    let start = Instant::now();
    let config = StudyConfig::default_for(StudyKind::Residual);
    let result = study_residual(&config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "  slope {:.3} CI [{:.3}, {:.3}]; {elapsed:.0}s",
        result.slope, result.slope_ci.0, result.slope_ci.1
    );
    let pass = result.slope >= 0.35 && result.pass && elapsed < 900.0;
    assert!(verdict(3, "residual scaling", pass));
}

#[test]
fn criterion_04_approximation_scaling() {
    let start = Instant::now();
    let mut config = StudyConfig::default_for(StudyKind::Approx);
    config.nu = 1.0;
    let result = study_approximation(&config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let total: usize = result.per_eps.iter().map(|s| s.errors.len()).sum();
    let abort_fraction = result.aborted as f64 / (total + result.aborted) as f64;
    println!(
        "  slope {:.3} CI [{:.3}, {:.3}], abort fraction {:.3}; {elapsed:.0}s",
        result.slope, result.slope_ci.0, result.slope_ci.1, abort_fraction
    );
    let pass =
        result.slope >= 0.35 && abort_fraction <= 0.05 && result.pass && elapsed < 1800.0;
    assert!(verdict(4, "approximation scaling", pass));
}

#[test]
fn criterion_05_semigroup_difference_bounds() {
    let start = Instant::now();
    let mut config = StudyConfig::default_for(StudyKind::HtBounds);
    config.eps_ladder = vec![0.2, 0.1, 0.05, 0.025];
    let report = study_ht_bounds(&config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "  alpha {}, max ratios {:.3} / {:.3} (threshold {}); {elapsed:.2}s",
        report.alpha, report.max_ratio_alpha, report.max_ratio_h1_c0, report.threshold
    );
    let pass = report.pass
        && report.max_ratio_alpha <= 2.0
        && report.max_ratio_h1_c0 <= 2.0
        && elapsed < 10.0;
    assert!(verdict(5, "semigroup difference bounds", pass));
}

#[test]
fn criterion_06_ou_series_covariance() {
    let start = Instant::now();
    let t_horizon = 1.0;
    let times = [0.25, 0.5, 1.0];
    let pairs = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)];
    let n_samples = 100_000;
    let mut pass = true;
    for (gi, &gamma) in [0.5, 1.0, 4.0].iter().enumerate() {
        let stats = ou_covariance_mc(gamma, t_horizon, 2000, &times, &pairs, n_samples, |s| {
            WienerStream::new(2024, stream_id(gi as i64, s, 200))
        });
        for (&(mean, se), &(i, j)) in stats.iter().zip(pairs.iter()) {
            let exact = ou_covariance(gamma, times[i], times[j]);
            let tol = (4.0 * se).max(1e-2);
            let ok = (mean - exact).abs() <= tol;
            pass &= ok;
            println!(
                "  gamma {gamma} cov({}, {}): sampled {mean:.5} exact {exact:.5} tol {tol:.5}{}",
                times[i],
                times[j],
                if ok { "" } else { "  <-- out of tolerance" }
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("  {elapsed:.1}s");
    pass &= elapsed < 60.0;
    assert!(verdict(6, "series expansion covariance", pass));
}

fn canonical(mut m: Monomial) -> Monomial {
    m.sort();
    m
}

#[test]
fn criterion_07_amplitude_derivation() {
    let start = Instant::now();
    let corr = CorrelationSpec::white();
    let mut pass = true;
    for zeros in [vec![1_i64], vec![1, 3], vec![1, 4], vec![2, 3]] {
        let text = zeros
            .iter()
            .map(|z| format!("({} - z^2)^2", z * z))
            .collect::<Vec<_>>()
            .join(" * ");
        let spec = SymbolSpec::new(
            parse_poly(&text).unwrap(),
            (*zeros.iter().max().unwrap() + 1) as f64,
            format!("{zeros:?}"),
        );
        for nl in [Nonlinearity::Cubic, Nonlinearity::GradSquared] {
            let sys = derive_amplitude_system(&spec, nl, &corr).unwrap();
            let oracle = exact_cubic_coefficients(&zeros, nl);
            for (target, per_target) in oracle.iter().enumerate() {
                for (mono, &c) in per_target {
                    let got = sys.term(target, *mono).unwrap_or(0.0);
                    if (got + c as f64).abs() > 1e-9 {
                        println!(
                            "  zeros {zeros:?} {nl:?} target {target} {mono:?}: derived {got}, oracle {}",
                            -(c as f64)
                        );
                        pass = false;
                    }
                }
                let n_terms = sys.cubic_terms.iter().filter(|t| t.target == target).count();
                if n_terms != per_target.len() {
                    println!("  zeros {zeros:?} {nl:?}: term count mismatch");
                    pass = false;
                }
            }
        }
    }
    // Side-by-side comparison with the previously reported coefficient
    // pattern for carriers {1, 3} under u (du/dx)^2. The derived values
    // are backed by the independent integer-arithmetic oracle above; a
    // mismatch with the reported pattern is a recorded finding, not a
    // failure of this suite.
    let spec13 = SymbolSpec::new(
        parse_poly("(1 - z^2)^2 * (9 - z^2)^2").unwrap(),
        4.0,
        "{1,3}",
    );
    let sys13 = derive_amplitude_system(&spec13, Nonlinearity::GradSquared, &corr).unwrap();
    let eq1 = [
        ("A|A|^2", canonical([(0, false), (0, false), (0, true)])),
        ("A|B|^2", canonical([(0, false), (1, false), (1, true)])),
        ("conj(A)^2 B", canonical([(0, true), (0, true), (1, false)])),
    ];
    let eq2 = [
        ("B|A|^2", canonical([(0, false), (0, true), (1, false)])),
        ("B|B|^2", canonical([(1, false), (1, false), (1, true)])),
        ("A^3", canonical([(0, false), (0, false), (0, false)])),
    ];
    let reported1 = [3.0, 18.0, 5.0];
    let reported2 = [2.0, 27.0, 1.0];
    println!("  carriers {{1, 3}}, u (du/dx)^2 -- derived vs reported magnitudes:");
    for (eq, (terms, reported)) in [(1, (&eq1, &reported1)), (2, (&eq2, &reported2))] {
        for ((label, mono), rep) in terms.iter().zip(reported.iter()) {
            let derived = sys13.term(eq - 1, *mono).unwrap_or(0.0);
            println!(
                "    equation {eq} {label}: derived {derived:+.1}, reported magnitude {rep}{}",
                if derived.abs() == *rep { "" } else { "  <-- differs (finding)" }
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 1.0;
    assert!(verdict(7, "amplitude derivation vs oracle", pass));
}

#[test]
fn criterion_08_noise_concentration() {
    let start = Instant::now();
    let config = StudyConfig::default_for(StudyKind::Concentration);
    let result = study_concentration(&config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "  slope {:.3} CI [{:.3}, {:.3}]; {elapsed:.0}s",
        result.slope, result.slope_ci.0, result.slope_ci.1
    );
    let pass = result.slope >= 0.35 && result.pass && elapsed < 900.0;
    assert!(verdict(8, "noise concentration", pass));
}

#[test]
fn criterion_09_invariant_measure() {
    let start = Instant::now();
    let mut config = StudyConfig::default_for(StudyKind::Invariant);
    config.t_burn = 10.0;
    config.window = 20.0;
    let result = study_invariant_measure(&config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "  slope {:.3} CI [{:.3}, {:.3}]; {elapsed:.0}s",
        result.slope, result.slope_ci.0, result.slope_ci.1
    );
    let pass = result.slope >= 0.35 && result.pass && elapsed < 1800.0;
    assert!(verdict(9, "invariant measure proximity", pass));
}

#[test]
fn criterion_10_byte_determinism() {
    let bin = env!("CARGO_BIN_EXE_amplab");
    let dir = std::env::temp_dir().join("amplab-acceptance-determinism");
    let _ = std::fs::remove_dir_all(&dir);
    let cfg_path = dir.join("small.cfg");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        &cfg_path,
        "[study]\neps_ladder = 0.4, 0.2, 0.1\nsamples = 8\nt0 = 0.25\nl = 3.141592653589793\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for (run, threads) in [("r1", "1"), ("r2", "1"), ("r3", "4")] {
        let out = dir.join(run);
        let status = Command::new(bin)
            .args(["study", "linear", "--seed", "11"])
            .arg("--config")
            .arg(&cfg_path)
            .arg("--out")
            .arg(&out)
            .env("AMPLAB_THREADS", threads)
            .status()
            .unwrap();
        // exit code 0 or 1 both fine here: only byte stability is at stake
        assert!(status.code().is_some_and(|c| c <= 1), "study errored");
        outputs.push((
            std::fs::read(out.join("linear.csv")).unwrap(),
            std::fs::read(out.join("linear.json")).unwrap(),
        ));
    }
    let pass = outputs.iter().all(|o| o == &outputs[0]);
    assert!(verdict(10, "byte-identical reruns", pass));
}
