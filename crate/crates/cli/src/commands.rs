//! Subcommand bodies. Each builds a [`Table`] from a resolved config.

use fdgain::channel::Scenario;
use fdgain::region::{design_constraint, oracle_rssi_b_min, rate_gain_region};
use fdgain::sim::{ergodic_rate_sweep, simulate_fd, simulate_hd, SimResult, Sweep};
use fdgain::{derive_noise_profile, LinkState, PowerDbm, PowerMw, Scheme};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Oracle bisection tolerance for the `region` column.
pub const ORACLE_TOL_DB: f64 = 1e-3;

/// Bluetooth power classes: (label, P_x in dBm).
pub const BLUETOOTH_CLASSES: [(&str, f64); 3] = [("bt_class3", 0.0), ("bt_class2", 4.0), ("bt_class1", 20.0)];

fn dbm(p: PowerMw) -> Result<f64, CliError> {
    Ok(p.to_dbm()?.value())
}

pub fn region(cfg: &RunConfig) -> Result<Table, CliError> {
    let np = derive_noise_profile(&cfg.impairments_at(cfg.impairments.mu_total_db)?);
    let mut cols = vec!["rssi_a_dbm", "exact_dbm", "approx_dbm", "regime", "scheme"];
    if cfg.sim.oracle {
        cols.push("oracle_dbm");
    }
    let mut t = Table::new(&cols);
    for scheme in cfg.sim.scheme.schemes() {
        for a in cfg.sweep.rssi_a_dbm.points() {
            let rssi_a = PowerDbm::new(a).to_mw();
            let r = rate_gain_region(&np, rssi_a, scheme)?;
            let mut row: Vec<Cell> = vec![
                a.into(),
                dbm(r.rssi_b_min_exact)?.into(),
                dbm(r.rssi_b_min_approx)?.into(),
                r.regime.kind.as_str().into(),
                scheme.short_name().into(),
            ];
            if cfg.sim.oracle {
                row.push(dbm(oracle_rssi_b_min(&np, rssi_a, scheme, ORACLE_TOL_DB)?)?.into());
            }
            t.push(row);
        }
    }
    Ok(t)
}

/// Required passive suppression over the (μ, P_x) grid, then the Bluetooth
/// presets at the configured μ.
pub fn design(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "preset",
        "scheme",
        "mu_db",
        "tx_power_dbm",
        "noise_db",
        "regime",
        "budget_db",
        "required_suppression_db",
    ]);
    let target = PowerDbm::new(cfg.design.target_dbm);
    let mut grid: Vec<(Option<&str>, f64, Vec<f64>)> = cfg
        .sweep
        .mu_db
        .points()
        .into_iter()
        .map(|mu| (None, mu, cfg.sweep.tx_power_dbm.points()))
        .collect();
    if cfg.design.bluetooth_presets {
        for (label, px) in BLUETOOTH_CLASSES {
            grid.push((Some(label), cfg.impairments.mu_total_db, vec![px]));
        }
    }
    for scheme in cfg.sim.scheme.schemes() {
        for (preset, mu, powers) in &grid {
            let np = derive_noise_profile(&cfg.impairments_at(*mu)?);
            let sol = design_constraint(&np, target, scheme)?;
            for &px in powers {
                t.push(vec![
                    (*preset).into(),
                    scheme.short_name().into(),
                    (*mu).into(),
                    px.into(),
                    sol.noise.value().into(),
                    sol.regime.as_str().into(),
                    sol.budget.value().into(),
                    sol.required_suppression(PowerDbm::new(px)).value().into(),
                ]);
            }
        }
    }
    Ok(t)
}

const RATE_COLUMNS: [&str; 5] = ["scheme", "x", "rate_fd_bps_hz", "rate_hd_bps_hz", "gain_ratio"];

fn rate_table(s: &Scenario, sweep: Sweep, x_name: &'static str, cfg: &RunConfig) -> Result<Table, CliError> {
    let mut cols = RATE_COLUMNS;
    cols[1] = x_name;
    let mut t = Table::new(&cols);
    for scheme in cfg.sim.scheme.schemes() {
        for r in ergodic_rate_sweep(s, &sweep, &cfg.sim_config(scheme))? {
            t.push(vec![
                scheme.short_name().into(),
                r.x.into(),
                r.rate_fd.into(),
                r.rate_hd.into(),
                r.gain_ratio.into(),
            ]);
        }
    }
    Ok(t)
}

/// Mean rates against the signal-of-interest RSSI, self-interference at P_x − C.
pub fn rates(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.scenario()?;
    let points = cfg.sweep.rssi_b_dbm.points().into_iter().map(PowerDbm::new).collect();
    rate_table(&s, Sweep::RssiB(points), "rssi_b_dbm", cfg)
}

/// Mean rates against transmit power at the scenario distance.
pub fn sweep_power(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.scenario()?;
    let points = cfg.sweep.tx_power_dbm.points().into_iter().map(PowerDbm::new).collect();
    rate_table(&s, Sweep::TxPower(points), "tx_power_dbm", cfg)
}

/// Sample-level simulation at one link, FD for each scheme plus HD.
pub fn simulate(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.scenario()?;
    let np = derive_noise_profile(&s.impairments);
    let rssi_a = match cfg.sim.rssi_a_dbm {
        Some(a) => PowerDbm::new(a).to_mw(),
        None => s.mean_rssi_a(),
    };
    let link = LinkState::new(rssi_a, PowerDbm::new(cfg.sim.rssi_b_dbm).to_mw());
    let mut t = Table::new(&[
        "mode",
        "scheme",
        "rssi_a_dbm",
        "rssi_b_dbm",
        "empirical_sinr_linear",
        "analytic_sinr_linear",
        "rel_error",
        "empirical_rate_bps_hz",
        "analytic_rate_bps_hz",
        "signal_power_mw",
        "phase_si_mw",
        "phase_soi_mw",
        "receiver_noise_mw",
        "quantization_noise_mw",
    ]);
    let mut push = |mode: &str, scheme: &str, r: &SimResult| -> Result<(), CliError> {
        let nb = r.noise_breakdown;
        t.push(vec![
            mode.into(),
            scheme.into(),
            dbm(link.rssi_a)?.into(),
            dbm(link.rssi_b)?.into(),
            r.empirical_sinr.value().into(),
            r.analytic_sinr.value().into(),
            r.rel_error.into(),
            r.empirical_rate.into(),
            r.analytic_rate.into(),
            r.signal_power.value().into(),
            nb.phase_si.value().into(),
            nb.phase_soi.value().into(),
            nb.receiver.value().into(),
            nb.quantization.value().into(),
        ]);
        Ok(())
    };
    for scheme in cfg.sim.scheme.schemes() {
        let r = simulate_fd(&np, &link, &cfg.sim_config(scheme))?;
        push("fd", scheme.short_name(), &r)?;
    }
    let hd = simulate_hd(&np, link.rssi_b, &cfg.sim_config(Scheme::DigitalCancellation))?;
    push("hd", "", &hd)?;
    Ok(t)
}
