//! Propagation parameters and the seeded, position-consistent environment.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::geometry::{AngleSet, Vec3};
use crate::error::{Error, Result};

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Which link a channel matrix (or a random draw) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkRole {
    S2V,
    V2D,
    S2D,
    SI,
}

impl LinkRole {
    pub fn name(self) -> &'static str {
        match self {
            LinkRole::S2V => "S2V",
            LinkRole::V2D => "V2D",
            LinkRole::S2D => "S2D",
            LinkRole::SI => "SI",
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            LinkRole::S2V => 1,
            LinkRole::V2D => 2,
            LinkRole::S2D => 3,
            LinkRole::SI => 4,
        }
    }
}

/// Large-scale propagation parameters shared by every link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvParams {
    pub carrier_freq: f64,
    pub los_exponent: f64,
    pub nlos_exponent: f64,
    pub nlos_count: usize,
    pub fading_std: f64,
    pub los_curve_offset: f64,
    pub los_curve_slope: f64,
    /// Distance between the relay's Tx and Rx panel centers, in wavelengths.
    pub panel_separation: f64,
}

impl Default for EnvParams {
    fn default() -> Self {
        let nlos_count = 4;
        Self {
            carrier_freq: 38e9,
            los_exponent: 1.9,
            nlos_exponent: 3.3,
            nlos_count,
            fading_std: 1.0 / (nlos_count as f64).sqrt(),
            los_curve_offset: 11.95,
            los_curve_slope: 0.14,
            panel_separation: 10.0,
        }
    }
}

impl EnvParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidInput(format!("{what} = {v}")));
        if !(self.carrier_freq > 0.0 && self.carrier_freq.is_finite()) {
            return bad("carrier frequency", self.carrier_freq);
        }
        if !(self.los_exponent > 0.0 && self.los_exponent <= self.nlos_exponent && self.nlos_exponent.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "path-loss exponents need 0 < LoS exponent <= NLoS exponent, got {} and {}",
                self.los_exponent, self.nlos_exponent
            )));
        }
        if !(self.fading_std > 0.0 && self.fading_std.is_finite()) {
            return bad("fading std", self.fading_std);
        }
        if !(self.los_curve_offset > 0.0 && self.los_curve_slope > 0.0) {
            return Err(Error::InvalidInput(format!(
                "LoS logistic parameters must be positive, got a = {}, b = {}",
                self.los_curve_offset, self.los_curve_slope
            )));
        }
        if !(self.panel_separation > 0.0 && self.panel_separation.is_finite()) {
            return bad("panel separation", self.panel_separation);
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    /// Free-space amplitude factor `c / (4 pi f_c)`.
    pub fn free_space_factor(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * TAU * self.carrier_freq)
    }
}

/// One random NLoS path: departure and arrival angles plus its small-scale
/// fading draw `X ~ CN(0, fading_std^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlosDraw {
    pub departure: AngleSet,
    pub arrival: AngleSet,
    pub fading: Complex64,
}

/// Seeded randomness of one channel realization.
///
/// Every value is a pure function of the master seed and the query, so
/// revisiting a position during the LoS search sees the same blockage and
/// all schemes in a trial see the same environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentRealization {
    pub master_seed: u64,
    /// Quantization steps `(eps_x, eps_y, eps_h)` of the LoS field.
    pub grid: [f64; 3],
}

const STREAM_LOS: u64 = 0x4c6f_5346;
const STREAM_NLOS: u64 = 0x4e4c_6f53;

impl EnvironmentRealization {
    pub fn new(master_seed: u64, grid: [f64; 3]) -> Self {
        Self { master_seed, grid }
    }

    pub fn quantize(&self, p: Vec3) -> [i64; 3] {
        [(p.x / self.grid[0]).round() as i64, (p.y / self.grid[1]).round() as i64, (p.z / self.grid[2]).round() as i64]
    }

    /// Uniform draw in `[0, 1)` attached to the grid cell of `p` for `role`.
    pub fn los_uniform(&self, role: LinkRole, p: Vec3) -> f64 {
        let [i, j, k] = self.quantize(p);
        let h = mix(self.master_seed, &[STREAM_LOS, role.tag(), i as u64, j as u64, k as u64]);
        unit_f64(h)
    }

    /// Bernoulli LoS indicator with success probability `probability`.
    pub fn los_indicator(&self, role: LinkRole, p: Vec3, probability: f64) -> bool {
        self.los_uniform(role, p) < probability
    }

    /// The `count` NLoS paths of `role`. Azimuths are uniform on `[0, 2pi)`,
    /// elevations uniform on `[0, pi/2]`.
    pub fn nlos_paths(&self, role: LinkRole, count: usize, fading_std: f64) -> Vec<NlosDraw> {
        let mut rng = self.stream(&[STREAM_NLOS, role.tag()]);
        let scale = fading_std / 2f64.sqrt();
        (0..count)
            .map(|_| {
                let departure = AngleSet::new(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * TAU);
                let arrival = AngleSet::new(rng.random::<f64>() * FRAC_PI_2, rng.random::<f64>() * TAU);
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                NlosDraw { departure, arrival, fading: Complex64::new(re * scale, im * scale) }
            })
            .collect()
    }

    /// An independent generator for auxiliary draws (tie breaking,
    /// misalignment, random placement) keyed on `tags`.
    pub fn stream(&self, tags: &[u64]) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix(self.master_seed, tags))
    }
}

/// Derives a child seed from `seed` and a list of words (splitmix64 rounds).
pub fn mix(seed: u64, words: &[u64]) -> u64 {
    let mut h = splitmix(seed ^ 0x9e37_79b9_7f4a_7c15);
    for &w in words {
        h = splitmix(h ^ splitmix(w.wrapping_add(0x6a09_e667_f3bc_c909)));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
