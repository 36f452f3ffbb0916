//! Run configuration: TOML file, built-in defaults, flag overrides.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use fdgain::channel::{FadingParams, PathLossParams, Scenario};
use fdgain::sim::SimConfig;
use fdgain::{Decibel, PowerDbm, RadioImpairments, Scheme};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Dc,
    Ac,
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::Dc => vec![Scheme::DigitalCancellation],
            SchemeChoice::Ac => vec![Scheme::AnalogCancellation],
            SchemeChoice::Both => Scheme::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImpairmentsSection {
    /// Total phase noise μ = μ_t + μ_r, split evenly between the oscillators.
    pub mu_total_db: f64,
    pub lna_nf_db: f64,
    pub mixer_nf_db: f64,
    pub adc_bits: u32,
    pub bandwidth_hz: f64,
    pub temperature_k: f64,
}

impl Default for ImpairmentsSection {
    fn default() -> Self {
        ImpairmentsSection {
            mu_total_db: -60.0,
            lna_nf_db: 4.0,
            mixer_nf_db: 10.0,
            adc_bits: 12,
            bandwidth_hz: 1e6,
            temperature_k: 290.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioSection {
    pub tx_power_dbm: f64,
    pub passive_suppression_db: f64,
    pub distance_m: f64,
    pub carrier_freq_hz: f64,
    pub path_loss_exponent: f64,
    pub shadow_sigma_db: f64,
    /// Rician K of the signal-of-interest path.
    pub soi_k_db: f64,
    /// Rician K of the self-interference path.
    pub si_k_db: f64,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        ScenarioSection {
            tx_power_dbm: 0.0,
            passive_suppression_db: 40.0,
            distance_m: 50.0,
            carrier_freq_hz: 2.4e9,
            path_loss_exponent: 2.5,
            shadow_sigma_db: 3.5,
            soi_k_db: 0.0,
            si_k_db: 35.0,
        }
    }
}

/// Inclusive range `min, min + step, …, ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Range {
    const fn new(min: f64, max: f64, step: f64) -> Self {
        Range { min, max, step }
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        let ok = self.min.is_finite() && self.max.is_finite() && self.step.is_finite();
        if !ok || self.step <= 0.0 || self.max < self.min {
            return Err(CliError::Config(format!(
                "sweep.{name}: need finite min <= max and step > 0, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        // Integer stepping so every point is min + i·step exactly.
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.min + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub rssi_a_dbm: Range,
    pub rssi_b_dbm: Range,
    pub tx_power_dbm: Range,
    pub mu_db: Range,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            rssi_a_dbm: Range::new(-100.0, 0.0, 1.0),
            rssi_b_dbm: Range::new(-100.0, -40.0, 2.0),
            tx_power_dbm: Range::new(-10.0, 40.0, 5.0),
            mu_db: Range::new(-100.0, -40.0, 5.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignSection {
    pub target_dbm: f64,
    /// Append the Bluetooth class 3/2/1 rows (0, 4, 20 dBm).
    pub bluetooth_presets: bool,
}

impl Default for DesignSection {
    fn default() -> Self {
        DesignSection {
            target_dbm: -80.0,
            bluetooth_presets: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
    pub scheme: SchemeChoice,
    pub exact_exponential: bool,
    pub fading: bool,
    /// Add a bisection-oracle column to `region`.
    pub oracle: bool,
    /// Self-interference RSSI for `simulate`; defaults to P_x − C.
    pub rssi_a_dbm: Option<f64>,
    pub rssi_b_dbm: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            samples: 100_000,
            seed: 1,
            threads: 1,
            scheme: SchemeChoice::Both,
            exact_exponential: false,
            fading: true,
            oracle: false,
            rssi_a_dbm: None,
            rssi_b_dbm: -60.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            path: None,
            format: Format::Csv,
        }
    }
}

/// Everything a command needs, after overrides.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub impairments: ImpairmentsSection,
    pub scenario: ScenarioSection,
    pub sweep: SweepSection,
    pub design: DesignSection,
    pub sim: SimSection,
    pub output: OutputSection,
}

/// Flags shared by every subcommand; each overrides the matching file key.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML config file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeChoice>,
    /// Worker threads; 1 is the bitwise reference path, 0 uses all cores.
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    #[arg(long, value_name = "N")]
    pub samples: Option<u64>,

    #[arg(long, allow_hyphen_values = true)]
    pub mu_total_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tx_power_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub passive_suppression_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub distance_m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub target_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rssi_a_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rssi_b_dbm: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub rssi_a_min_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rssi_a_max_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rssi_a_step_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rssi_b_min_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rssi_b_max_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rssi_b_step_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tx_power_min_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tx_power_max_dbm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tx_power_step_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_min_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_max_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_step_db: Option<f64>,

    /// Add the bisection-oracle column to `region`.
    #[arg(long)]
    pub oracle: bool,
    /// Disable fading in `rates` and `sweep-power`.
    #[arg(long)]
    pub no_fading: bool,
    /// Use exact phase rotations in `simulate`.
    #[arg(long)]
    pub exact_exponential: bool,
}

fn set<T: Copy>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// File (or defaults) plus flag overrides, validated.
    pub fn resolve(o: &Overrides) -> Result<Self, CliError> {
        let mut c = match &o.config {
            Some(p) => Self::load(p)?,
            None => RunConfig::default(),
        };
        c.apply(o);
        c.validate()?;
        Ok(c)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.out.is_some() {
            self.output.path = o.out.clone();
        }
        set(&mut self.output.format, o.format);
        set(&mut self.sim.seed, o.seed);
        set(&mut self.sim.scheme, o.scheme);
        set(&mut self.sim.threads, o.threads);
        set(&mut self.sim.samples, o.samples);
        set(&mut self.impairments.mu_total_db, o.mu_total_db);
        set(&mut self.scenario.tx_power_dbm, o.tx_power_dbm);
        set(&mut self.scenario.passive_suppression_db, o.passive_suppression_db);
        set(&mut self.scenario.distance_m, o.distance_m);
        set(&mut self.design.target_dbm, o.target_dbm);
        if o.rssi_a_dbm.is_some() {
            self.sim.rssi_a_dbm = o.rssi_a_dbm;
        }
        set(&mut self.sim.rssi_b_dbm, o.rssi_b_dbm);

        let s = &mut self.sweep;
        set(&mut s.rssi_a_dbm.min, o.rssi_a_min_dbm);
        set(&mut s.rssi_a_dbm.max, o.rssi_a_max_dbm);
        set(&mut s.rssi_a_dbm.step, o.rssi_a_step_db);
        set(&mut s.rssi_b_dbm.min, o.rssi_b_min_dbm);
        set(&mut s.rssi_b_dbm.max, o.rssi_b_max_dbm);
        set(&mut s.rssi_b_dbm.step, o.rssi_b_step_db);
        set(&mut s.tx_power_dbm.min, o.tx_power_min_dbm);
        set(&mut s.tx_power_dbm.max, o.tx_power_max_dbm);
        set(&mut s.tx_power_dbm.step, o.tx_power_step_db);
        set(&mut s.mu_db.min, o.mu_min_db);
        set(&mut s.mu_db.max, o.mu_max_db);
        set(&mut s.mu_db.step, o.mu_step_db);

        self.sim.oracle |= o.oracle;
        self.sim.fading &= !o.no_fading;
        self.sim.exact_exponential |= o.exact_exponential;
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.impairments_at(self.impairments.mu_total_db)?;
        self.scenario()?;
        self.sweep.rssi_a_dbm.validate("rssi_a_dbm")?;
        self.sweep.rssi_b_dbm.validate("rssi_b_dbm")?;
        self.sweep.tx_power_dbm.validate("tx_power_dbm")?;
        self.sweep.mu_db.validate("mu_db")?;
        for mu in self.sweep.mu_db.points() {
            self.impairments_at(mu)?;
        }
        if self.sim.samples == 0 {
            return Err(CliError::Config("sim.samples must be >= 1".into()));
        }
        let finite = [
            self.design.target_dbm,
            self.sim.rssi_b_dbm,
            self.sim.rssi_a_dbm.unwrap_or(0.0),
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("target and RSSI values must be finite".into()));
        }
        Ok(())
    }

    /// Impairments with the configured hardware and total phase noise `mu_db`.
    pub fn impairments_at(&self, mu_db: f64) -> Result<RadioImpairments, CliError> {
        let i = &self.impairments;
        let half = Decibel::new(mu_db).to_linear().value() / 2.0;
        let mu = fdgain::LinearRatio::new(half).map_err(config_err)?;
        RadioImpairments::new(
            mu,
            mu,
            Decibel::new(i.lna_nf_db).to_linear(),
            Decibel::new(i.mixer_nf_db).to_linear(),
            i.adc_bits,
            i.bandwidth_hz,
        )
        .and_then(|r| r.with_temperature(i.temperature_k))
        .map_err(config_err)
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let s = &self.scenario;
        let path_loss =
            PathLossParams::new(s.carrier_freq_hz, s.path_loss_exponent, s.shadow_sigma_db).map_err(config_err)?;
        let sc = Scenario {
            tx_power: PowerDbm::new(s.tx_power_dbm),
            passive_suppression: Decibel::new(s.passive_suppression_db),
            distance_m: s.distance_m,
            path_loss,
            soi_fading: FadingParams::new(s.soi_k_db),
            si_fading: FadingParams::new(s.si_k_db),
            impairments: self.impairments_at(self.impairments.mu_total_db)?,
        };
        sc.validate().map_err(config_err)?;
        Ok(sc)
    }

    pub fn sim_config(&self, scheme: Scheme) -> SimConfig {
        SimConfig {
            n_samples: self.sim.samples,
            seed: self.sim.seed,
            scheme,
            exact_exponential: self.sim.exact_exponential,
            fading_enabled: self.sim.fading,
            threads: self.sim.threads,
        }
    }
}

fn config_err(e: fdgain::Error) -> CliError {
    CliError::Config(e.to_string())
}
