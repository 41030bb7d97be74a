//! Effective beamformed gains, achievable rates and max-min power control.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelSet;
use crate::error::{Error, Result};

/// Squared bilinear forms of the four links under a given set of BFVs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EffectiveGains {
    pub g_s2v: f64,
    pub g_si: f64,
    pub g_v2d: f64,
    pub g_s2d: f64,
}

impl EffectiveGains {
    fn check(&self) -> Result<()> {
        for (name, g) in [("g_s2v", self.g_s2v), ("g_si", self.g_si), ("g_v2d", self.g_v2d), ("g_s2d", self.g_s2d)] {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be finite and >= 0, got {g}")));
            }
        }
        Ok(())
    }
}

/// Transmit powers of the SN and the relay, watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPair {
    pub source: f64,
    pub relay: f64,
}

/// Noise powers at the relay (`noise_at_relay`) and at the DN (`noise_at_dest`), watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisePowers {
    pub noise_at_relay: f64,
    pub noise_at_dest: f64,
}

/// Rates in bps/Hz. `end_to_end` is the min of the two hops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkRates {
    pub s2v: f64,
    pub v2d: f64,
    pub end_to_end: f64,
}

fn check_len(expected: usize, w: &[Complex64]) -> Result<()> {
    if w.len() != expected {
        return Err(Error::DimensionMismatch { expected, actual: w.len() });
    }
    Ok(())
}

/// `|w_r^H H_S2V w_S|^2`, `|w_r^H H_SI w_t|^2`, `|w_D^H H_V2D w_t|^2` and
/// `|w_D^H H_S2D w_S|^2`.
pub fn effective_gains(
    w_s: &[Complex64],
    w_r: &[Complex64],
    w_t: &[Complex64],
    w_d: &[Complex64],
    channels: &ChannelSet,
) -> Result<EffectiveGains> {
    check_len(channels.s2v.tx_len(), w_s)?;
    check_len(channels.s2v.rx_len(), w_r)?;
    check_len(channels.si.tx_len(), w_t)?;
    check_len(channels.si.rx_len(), w_r)?;
    check_len(channels.v2d.tx_len(), w_t)?;
    check_len(channels.v2d.rx_len(), w_d)?;
    check_len(channels.s2d.tx_len(), w_s)?;
    check_len(channels.s2d.rx_len(), w_d)?;
    Ok(EffectiveGains {
        g_s2v: channels.s2v.bilinear(w_r, w_s).norm_sqr(),
        g_si: channels.si.bilinear(w_r, w_t).norm_sqr(),
        g_v2d: channels.v2d.bilinear(w_d, w_t).norm_sqr(),
        g_s2d: channels.s2d.bilinear(w_d, w_s).norm_sqr(),
    })
}

fn sinr_s2v(g: &EffectiveGains, p: PowerPair, n: NoisePowers) -> f64 {
    g.g_s2v * p.source / (g.g_si * p.relay + n.noise_at_relay)
}

fn sinr_v2d(g: &EffectiveGains, p: PowerPair, n: NoisePowers) -> f64 {
    g.g_v2d * p.relay / (g.g_s2d * p.source + n.noise_at_dest)
}

/// Hop rates with the relay's residual SI at the relay and the SN's leakage
/// at the DN treated as noise.
pub fn achievable_rates(gains: &EffectiveGains, powers: PowerPair, noises: NoisePowers) -> LinkRates {
    let s2v = log2_1p(sinr_s2v(gains, powers, noises));
    let v2d = log2_1p(sinr_v2d(gains, powers, noises));
    LinkRates { s2v, v2d, end_to_end: s2v.min(v2d) }
}

/// `log2(1 + x)`.
pub fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// Positive root of `a x^2 + b x + c` with `c <= 0 <= b`, written without
/// the cancellation of the textbook formula. Falls back to the linear root
/// when `a` is negligible against `b`.
fn positive_root(a: f64, b: f64, c: f64) -> Option<f64> {
    if a.abs() < 1e-15 * b.abs() {
        return Some(-c / b);
    }
    if a == 0.0 {
        return None;
    }
    let disc = b * b - 4.0 * a * c;
    assert!(disc >= 0.0, "power-control discriminant is negative: {disc}");
    let s = disc.sqrt();
    let denom = b + s;
    if denom == 0.0 {
        return Some(0.0);
    }
    Some(-2.0 * c / denom)
}

/// Max-min power allocation. The link that is weaker at full power keeps
/// its transmitter at the cap; the other transmitter backs off until the
/// two rates are equal.
pub fn optimal_powers(
    gains: &EffectiveGains,
    source_cap: f64,
    relay_cap: f64,
    noises: NoisePowers,
) -> Result<PowerPair> {
    gains.check()?;
    if !(source_cap > 0.0 && relay_cap > 0.0 && source_cap.is_finite() && relay_cap.is_finite()) {
        return Err(Error::InvalidInput(format!("power caps must be positive, got {source_cap}, {relay_cap}")));
    }
    if !(noises.noise_at_relay > 0.0 && noises.noise_at_dest > 0.0) {
        return Err(Error::InvalidInput("noise powers must be positive".into()));
    }
    let full = PowerPair { source: source_cap, relay: relay_cap };
    if gains.g_s2v == 0.0 || gains.g_v2d == 0.0 {
        return Ok(full);
    }
    let (s1, s2) = (noises.noise_at_relay, noises.noise_at_dest);
    if sinr_s2v(gains, full, noises) < sinr_v2d(gains, full, noises) {
        let a1 = gains.g_si * gains.g_v2d;
        let b1 = gains.g_v2d * s1;
        let c1 = -gains.g_s2v * source_cap * (gains.g_s2d * source_cap + s2);
        let relay = positive_root(a1, b1, c1).unwrap_or(relay_cap).clamp(0.0, relay_cap);
        Ok(PowerPair { source: source_cap, relay })
    } else {
        let a2 = gains.g_s2d * gains.g_s2v;
        let b2 = gains.g_s2v * s2;
        let c2 = -gains.g_v2d * relay_cap * (gains.g_si * relay_cap + s1);
        let source = positive_root(a2, b2, c2).unwrap_or(source_cap).clamp(0.0, source_cap);
        Ok(PowerPair { source, relay: relay_cap })
    }
}

/// `10^((dBm - 30) / 10)`.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}
