//! Acceptance checks. Each test prints one `[PASS]`/`[FAIL]` line.
//!
//! The lines go straight to the process stdout, so they show up without
//! `--nocapture`.

use std::io::Write;

use fdgain::channel::Scenario;
use fdgain::region::{
    approx_rssi_b_min, classify_regime, design_constraint, exact_rssi_b_min, oracle_rssi_b_min, quadratic_coeffs,
};
use fdgain::sim::{empirical_rssi_b_min, ergodic_rate_sweep, simulate_fd, SimConfig, Sweep};
use fdgain::{
    derive_noise_profile, Decibel, LinearRatio, LinkState, NoiseProfile, PowerDbm, PowerMw, RadioImpairments, Scheme,
};
use fdgain_cli::config::{Overrides, RunConfig};
use fdgain_cli::{run, Cli, Command};

fn report(id: u32, title: &str, pass: bool, detail: String) {
    let line = format!("[{}] {id:>2} {title}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
}

fn mw(dbm: f64) -> PowerMw {
    PowerDbm::new(dbm).to_mw()
}

fn dbm(p: PowerMw) -> f64 {
    p.to_dbm().unwrap().value()
}

fn lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Profile with N_l = N_m = 1, so that η = μ + σ_q² and ζ = P_th.
fn grid_profile(eta_db: f64, zeta_dbm: f64) -> NoiseProfile {
    let eta = lin(eta_db);
    let mu = 0.9 * eta;
    NoiseProfile::from_parts(
        LinearRatio::new(mu).unwrap(),
        LinearRatio::new(eta - mu).unwrap(),
        mw(zeta_dbm),
        LinearRatio::ONE,
        LinearRatio::ONE,
    )
    .unwrap()
}

const GRID_ETA_DB: [f64; 3] = [-80.0, -55.0, -30.0];
const GRID_ZETA_DBM: [f64; 3] = [-120.0, -105.0, -90.0];

fn grid_rssi_a() -> Vec<f64> {
    (0..7).map(|i| -100.0 + i as f64 * 100.0 / 6.0).collect()
}

fn reference(mu_db: f64) -> NoiseProfile {
    derive_noise_profile(&RadioImpairments::reference(Decibel::new(mu_db)).unwrap())
}

fn default_scenario() -> Scenario {
    RunConfig::default().scenario().unwrap()
}

#[test]
fn c01_eta_reproduction() {
    let eta = reference(-40.0).eta().to_db().unwrap().value();
    report(
        1,
        "eta at mu=-40 dB, 12 bits, N_m=10 dB",
        (-40.2..=-39.7).contains(&eta),
        format!("eta = {eta:.3} dB"),
    );
}

#[test]
fn c02_design_constant() {
    let np = reference(-50.0);
    let mut detail = Vec::new();
    let mut pass = true;
    for scheme in Scheme::ALL {
        let b = design_constraint(&np, PowerDbm::new(-80.0), scheme)
            .unwrap()
            .budget
            .value();
        pass &= (b + 96.5).abs() <= 0.5;
        detail.push(format!("{scheme} {b:.3} dB"));
    }
    report(2, "design budget at target -80 dBm", pass, detail.join(", "));
}

#[test]
fn c03_bluetooth_presets() {
    let np = reference(-50.0);
    let mut detail = Vec::new();
    let mut pass = true;
    for scheme in Scheme::ALL {
        let sol = design_constraint(&np, PowerDbm::new(-80.0), scheme).unwrap();
        for (px, want) in [(0.0, 46.0), (4.0, 50.0), (20.0, 66.0)] {
            let c = sol.required_suppression(PowerDbm::new(px)).value();
            pass &= (c - want).abs() <= 1.0;
            detail.push(format!("{scheme}@{px}dBm {c:.2}"));
        }
    }
    report(3, "Bluetooth suppression 46/50/66 dB", pass, detail.join(", "));
}

#[test]
fn c04_region_value() {
    let s = default_scenario();
    let np = derive_noise_profile(&s.impairments);
    let (v, regime) = approx_rssi_b_min(&np, s.mean_rssi_a(), Scheme::AnalogCancellation).unwrap();
    let v = dbm(v);
    report(
        4,
        "AC region at mu=-60 dB, C=40 dB",
        (v + 87.0).abs() <= 1.0,
        format!("{v:.3} dBm ({})", regime.kind),
    );
}

#[test]
fn c05_oracle_equivalence() {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for eta in GRID_ETA_DB {
        for zeta in GRID_ZETA_DBM {
            let np = grid_profile(eta, zeta);
            for a in grid_rssi_a() {
                for scheme in Scheme::ALL {
                    let exact = exact_rssi_b_min(&quadratic_coeffs(&np, mw(a), scheme));
                    let oracle = oracle_rssi_b_min(&np, mw(a), scheme, 1e-3).unwrap();
                    worst = worst.max((dbm(exact) - dbm(oracle)).abs());
                    n += 1;
                }
            }
        }
    }
    report(
        5,
        "exact root vs bisection oracle",
        worst <= 0.01,
        format!("{n} points, max |diff| = {worst:.2e} dB"),
    );
}

#[test]
fn c06_approximation_gap() {
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    let mut worst_far: f64 = 0.0;
    let mut worst_far_at = String::new();
    for eta in GRID_ETA_DB {
        for zeta in GRID_ZETA_DBM {
            let np = grid_profile(eta, zeta);
            let dense = (0..=2000).map(|i| -100.0 + i as f64 * 0.05);
            for a in grid_rssi_a().into_iter().chain(dense) {
                for scheme in Scheme::ALL {
                    let exact = dbm(exact_rssi_b_min(&quadratic_coeffs(&np, mw(a), scheme)));
                    let (approx, regime) = approx_rssi_b_min(&np, mw(a), scheme).unwrap();
                    let gap = (dbm(approx) - exact).abs();
                    let at = format!("eta={eta} zeta={zeta} A={a:.2} {scheme}");
                    if gap > worst {
                        worst = gap;
                        worst_at = at.clone();
                    }
                    let clearance = (a - dbm(regime.weak_upper))
                        .abs()
                        .min((a - dbm(regime.strong_lower)).abs());
                    if clearance >= 6.0 && gap > worst_far {
                        worst_far = gap;
                        worst_far_at = at;
                    }
                }
            }
        }
    }
    report(
        6,
        "piecewise approximation gap",
        worst <= 3.5 && worst_far <= 0.5,
        format!(
            "max {worst:.3} dB at [{worst_at}] (limit 3.5); max >= 6 dB from thresholds {worst_far:.3} dB at [{worst_far_at}] (limit 0.5)"
        ),
    );
}

#[test]
fn c07_monte_carlo_sinr() {
    let points = [
        (-70.0, -30.0, -60.0),
        (-70.0, -50.0, -80.0),
        (-60.0, -40.0, -60.0),
        (-60.0, -20.0, -50.0),
        (-60.0, -60.0, -85.0),
        (-50.0, -30.0, -70.0),
        (-50.0, -50.0, -70.0),
        (-50.0, -10.0, -40.0),
        (-40.0, -40.0, -60.0),
        (-40.0, -70.0, -90.0),
        (-45.0, -20.0, -55.0),
        (-55.0, -35.0, -75.0),
    ];
    let mut worst_sinr: f64 = 0.0;
    let mut worst_term: f64 = 0.0;
    let mut runs = 0;
    for (i, &(mu, a, b)) in points.iter().enumerate() {
        let np = reference(mu);
        let link = LinkState::new(mw(a), mw(b));
        for scheme in Scheme::ALL {
            let inv_gain = match scheme {
                Scheme::DigitalCancellation => link.rssi_a.value() + link.rssi_b.value(),
                Scheme::AnalogCancellation => link.rssi_b.value(),
            };
            let m = np.mu().value();
            for exact_exponential in [false, true] {
                let cfg = SimConfig {
                    n_samples: 100_000,
                    seed: i as u64,
                    scheme,
                    exact_exponential,
                    ..SimConfig::default()
                };
                let r = simulate_fd(&np, &link, &cfg).unwrap();
                worst_sinr = worst_sinr.max(r.rel_error);
                let nb = r.noise_breakdown;
                let terms = [
                    (nb.phase_si.value(), m * link.rssi_a.value()),
                    (nb.phase_soi.value(), m * link.rssi_b.value()),
                    (
                        nb.receiver.value(),
                        np.zeta().value() + np.mixer_excess().value() * inv_gain,
                    ),
                    (nb.quantization.value(), np.sigma_q2().value() * inv_gain),
                ];
                for (got, want) in terms {
                    worst_term = worst_term.max((got - want).abs() / want);
                }
                runs += 1;
            }
        }
    }
    report(
        7,
        "sample-level SINR vs closed form",
        worst_sinr < 0.02 && worst_term < 0.05,
        format!(
            "{} points, {runs} runs; max SINR rel err {worst_sinr:.4} (limit 0.02), max term rel err {worst_term:.4} (limit 0.05)",
            points.len()
        ),
    );
}

#[test]
fn c08_crossover() {
    let cases = [
        (-40.0, -40.0, Scheme::DigitalCancellation),
        (-50.0, -30.0, Scheme::AnalogCancellation),
        (-60.0, -60.0, Scheme::DigitalCancellation),
    ];
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (mu, a, scheme) in cases {
        let np = reference(mu);
        let exact = dbm(exact_rssi_b_min(&quadratic_coeffs(&np, mw(a), scheme)));
        let cfg = SimConfig {
            scheme,
            fading_enabled: false,
            ..SimConfig::default()
        };
        let emp = dbm(empirical_rssi_b_min(&np, mw(a), &cfg, 0.01).unwrap());
        worst = worst.max((emp - exact).abs());
        detail.push(format!("{scheme} mu={mu} A={a}: {emp:.2} vs {exact:.2}"));
    }
    report(
        8,
        "simulated FD=HD crossover",
        worst <= 0.2,
        format!("max {worst:.3} dB; {}", detail.join("; ")),
    );
}

#[test]
fn c09_ergodic_gain() {
    let s = default_scenario();
    let sweep = Sweep::RssiB(vec![PowerDbm::new(-80.0), PowerDbm::new(-70.0)]);
    let mut pass = true;
    let mut detail = Vec::new();
    for scheme in Scheme::ALL {
        let cfg = SimConfig {
            scheme,
            ..SimConfig::default()
        };
        let rows = ergodic_rate_sweep(&s, &sweep, &cfg).unwrap();
        let (lo, hi) = (rows[0].gain_ratio, rows[1].gain_ratio);
        pass &= (1.1..=1.5).contains(&lo) && (1.1..=1.5).contains(&hi) && hi > lo;
        detail.push(format!("{scheme}: {lo:.3} @-80, {hi:.3} @-70"));
    }
    report(
        9,
        "ergodic FD/HD gain in [1.1, 1.5], increasing",
        pass,
        detail.join("; "),
    );
}

#[test]
fn c10_power_saturation() {
    let s = default_scenario();
    let powers = RunConfig::default()
        .sweep
        .tx_power_dbm
        .points()
        .into_iter()
        .map(PowerDbm::new)
        .collect();
    let sweep = Sweep::TxPower(powers);
    let mut pass = true;
    let mut detail = Vec::new();
    for scheme in Scheme::ALL {
        let cfg = SimConfig {
            scheme,
            ..SimConfig::default()
        };
        let rows = ergodic_rate_sweep(&s, &sweep, &cfg).unwrap();
        let n = rows.len();
        let d_fd = (rows[n - 1].rate_fd - rows[n - 2].rate_fd).abs();
        let d_hd = rows[n - 1].rate_hd - rows[n - 2].rate_hd;
        let monotone = rows.windows(2).all(|w| w[1].gain_ratio <= w[0].gain_ratio);
        pass &= d_fd < 0.01 && d_hd > 0.0 && monotone;
        detail.push(format!(
            "{scheme}: dR_FD={d_fd:.2e}, dR_HD={d_hd:.3}, ratio nonincreasing={monotone}"
        ));
    }
    report(10, "FD saturates with power at D=50 m", pass, detail.join("; "));
}

fn simulate_to(path: &std::path::Path, threads: usize) -> Vec<u8> {
    let o = Overrides {
        out: Some(path.to_path_buf()),
        seed: Some(42),
        threads: Some(threads),
        samples: Some(100_000),
        ..Overrides::default()
    };
    run(&Cli {
        command: Command::Simulate(o),
    })
    .unwrap();
    std::fs::read(path).unwrap()
}

fn numbers(csv: &[u8]) -> Vec<f64> {
    String::from_utf8_lossy(csv)
        .lines()
        .skip(1)
        .flat_map(|l| l.split(',').filter_map(|c| c.parse::<f64>().ok()).collect::<Vec<_>>())
        .collect()
}

#[test]
fn c11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulate_to(&dir.path().join("a.csv"), 1);
    let b = simulate_to(&dir.path().join("b.csv"), 1);
    let byte_identical = a == b;
    let reference = numbers(&a);
    let mut worst: f64 = 0.0;
    for threads in [2, 4, 0] {
        let other = numbers(&simulate_to(&dir.path().join(format!("t{threads}.csv")), threads));
        assert_eq!(other.len(), reference.len());
        for (x, y) in reference.iter().zip(&other) {
            let scale = x.abs().max(y.abs());
            if scale > 0.0 {
                worst = worst.max((x - y).abs() / scale);
            }
        }
    }
    report(
        11,
        "simulate output reproducible",
        byte_identical && worst <= 1e-12,
        format!("threads=1 byte-identical={byte_identical}, max rel diff across 2/4/all threads {worst:.1e}"),
    );
}

#[test]
fn grid_spans_all_regimes() {
    use fdgain::region::RegimeKind;
    let mut seen = [false; 3];
    for eta in GRID_ETA_DB {
        for zeta in GRID_ZETA_DBM {
            let np = grid_profile(eta, zeta);
            for a in grid_rssi_a() {
                for scheme in Scheme::ALL {
                    let k = classify_regime(&np, mw(a), scheme).unwrap().kind;
                    seen[match k {
                        RegimeKind::Weak => 0,
                        RegimeKind::Intermediate => 1,
                        RegimeKind::Strong => 2,
                    }] = true;
                }
            }
        }
    }
    assert_eq!(seen, [true; 3]);
}
