//! Scenario configuration as a flat TOML document.
//!
//! Every key is optional and falls back to the reference parameter set
//! (38 GHz, 4x4 arrays, 20 dBm budgets, -110 dBm noise, DN uniform in a
//! 500 m disk). Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::channel::{ArraySet, EnvParams, UpaSpec, Vec3};
use crate::error::{Error, Result};
use crate::harness::{DnRule, Scenario};
use crate::rates::dbm_to_watts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub h_min: f64,
    pub h_max: f64,
    pub p_s_tot_dbm: f64,
    pub p_v_tot_dbm: f64,
    pub noise1_dbm: f64,
    pub noise2_dbm: f64,
    pub fc_hz: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    #[serde(rename = "L")]
    pub num_nlos: usize,
    /// Defaults to `1/sqrt(L)`.
    pub sigma_f: Option<f64>,
    pub los_a: f64,
    pub los_b: f64,
    /// Sides of the square arrays.
    pub array_sn: usize,
    pub array_rx: usize,
    pub array_tx: usize,
    pub array_dn: usize,
    /// Element spacing in wavelengths.
    pub element_spacing: f64,
    /// Relay panel center distance in wavelengths.
    pub panel_separation: f64,
    pub eps_x: f64,
    pub eps_y: f64,
    pub eps_h: f64,
    pub kappa: f64,
    pub eps_r: f64,
    pub max_iters: usize,
    pub cm_repair: bool,
    pub trials: usize,
    pub master_seed: u64,
    pub workers: usize,
    pub delta_m_deg: f64,
    /// Fixed DN position; both must be given together.
    pub x_d: Option<f64>,
    pub y_d: Option<f64>,
    /// Radius of the DN disk when no fixed DN is given.
    pub dn_radius: f64,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let env = EnvParams::default();
        Self {
            h_min: 100.0,
            h_max: 300.0,
            p_s_tot_dbm: 20.0,
            p_v_tot_dbm: 20.0,
            noise1_dbm: -110.0,
            noise2_dbm: -110.0,
            fc_hz: env.carrier_freq,
            alpha_los: env.los_exponent,
            alpha_nlos: env.nlos_exponent,
            num_nlos: env.nlos_count,
            sigma_f: None,
            los_a: env.los_curve_offset,
            los_b: env.los_curve_slope,
            array_sn: 4,
            array_rx: 4,
            array_tx: 4,
            array_dn: 4,
            element_spacing: 0.5,
            panel_separation: env.panel_separation,
            eps_x: 1.0,
            eps_y: 1.0,
            eps_h: 1.0,
            kappa: 10.0,
            eps_r: 0.01,
            max_iters: 50,
            cm_repair: false,
            trials: 1000,
            master_seed: 1,
            workers: 0,
            delta_m_deg: 0.0,
            x_d: None,
            y_d: None,
            dn_radius: 500.0,
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Validated scenario described by this document.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let upa = |side: usize| UpaSpec::new(side, side, self.element_spacing);
        let dn_rule = match (self.x_d, self.y_d) {
            (Some(x), Some(y)) => DnRule::Fixed(Vec3::new(x, y, 0.0)),
            (None, None) => DnRule::Disk(self.dn_radius),
            _ => return Err(Error::Config("x_d and y_d must be given together".into())),
        };
        let scenario = Scenario {
            dn_rule,
            min_altitude: self.h_min,
            max_altitude: self.h_max,
            grid: [self.eps_x, self.eps_y, self.eps_h],
            arrays: ArraySet {
                sn: upa(self.array_sn)?,
                dn: upa(self.array_dn)?,
                tx: upa(self.array_tx)?,
                rx: upa(self.array_rx)?,
            },
            source_power: dbm_to_watts(self.p_s_tot_dbm),
            relay_power: dbm_to_watts(self.p_v_tot_dbm),
            noise_at_relay: dbm_to_watts(self.noise1_dbm),
            noise_at_dest: dbm_to_watts(self.noise2_dbm),
            env: EnvParams {
                carrier_freq: self.fc_hz,
                los_exponent: self.alpha_los,
                nlos_exponent: self.alpha_nlos,
                nlos_count: self.num_nlos,
                fading_std: self.sigma_f.unwrap_or(1.0 / (self.num_nlos.max(1) as f64).sqrt()),
                los_curve_offset: self.los_a,
                los_curve_slope: self.los_b,
                panel_separation: self.panel_separation,
            },
            shrink_factor: self.kappa,
            min_rate_gain: self.eps_r,
            max_iters: self.max_iters,
            cm_repair: self.cm_repair,
            misalignment_deg: self.delta_m_deg,
            trials: self.trials,
            master_seed: self.master_seed,
            workers: self.workers,
        };
        if let DnRule::Fixed(dn) = scenario.dn_rule {
            if dn.x == 0.0 && dn.y == 0.0 {
                return Err(Error::SnDnCoincide);
            }
        }
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Parses `NAME=v1,v2,...`.
pub fn parse_sweep_flag(flag: &str) -> Result<(crate::harness::SweepParam, Vec<f64>)> {
    let (name, values) =
        flag.split_once('=').ok_or_else(|| Error::Config(format!("sweep flag '{flag}' is not NAME=v1,v2,...")))?;
    let param = name.trim().parse()?;
    let values = values
        .split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config(format!("sweep value '{v}' is not a finite number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((param, values))
}
