//! Channel synthesis for the SN -> relay -> DN link.
//!
//! The three far-field links (S2V, V2D, S2D) are sums of rank-one steering
//! products. The relay's self-interference channel uses a spherical-wave
//! model between its two panels.

mod environment;
mod geometry;

pub use environment::{mix, EnvParams, EnvironmentRealization, LinkRole, NlosDraw, SPEED_OF_LIGHT};
pub use geometry::{link_geometry, steering_vector, AngleSet, UpaSpec, Vec3};

pub(crate) use geometry::ground_elevation;

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// LoS amplitude `(c / 4 pi f_c) d^(-alpha_LoS / 2)`.
pub fn los_path_gain(distance: f64, env: &EnvParams) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(env.free_space_factor() * distance.powf(-env.los_exponent / 2.0))
}

/// NLoS amplitude `(c / 4 pi f_c) d^(-alpha_NLoS / 2) X` for a fading draw `X`.
pub fn nlos_path_gain(distance: f64, env: &EnvParams, draw: Complex64) -> Result<Complex64> {
    if !(distance > 0.0) {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(draw * (env.free_space_factor() * distance.powf(-env.nlos_exponent / 2.0)))
}

/// Logistic LoS probability of an air-to-ground link at `elevation` radians.
pub fn los_probability(elevation: f64, env: &EnvParams) -> f64 {
    let deg = elevation.to_degrees();
    1.0 / (1.0 + env.los_curve_offset * (-env.los_curve_slope * (deg - env.los_curve_offset)).exp())
}

/// One propagation path of a far-field channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathComponent {
    pub gain: Complex64,
    pub departure: AngleSet,
    pub arrival: AngleSet,
    pub is_los: bool,
}

/// Channel from a transmit array to a receive array (`rx x tx` entries).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub entries: CMatrix,
    pub role: LinkRole,
    /// Path list for far-field roles; empty for the self-interference channel.
    pub components: Vec<PathComponent>,
}

impl ChannelMatrix {
    /// Sums `gain * a_rx(arrival) a_tx(departure)^H` over `components`.
    pub fn from_components(role: LinkRole, components: Vec<PathComponent>, tx: &UpaSpec, rx: &UpaSpec) -> Self {
        let mut entries = CMatrix::zeros(rx.total(), tx.total());
        for c in &components {
            let a_rx = steering_vector(rx, c.arrival);
            let a_tx = steering_vector(tx, c.departure);
            for (i, ar) in a_rx.iter().enumerate() {
                let g = c.gain * ar;
                for (j, at) in a_tx.iter().enumerate() {
                    entries[(i, j)] += g * at.conj();
                }
            }
        }
        Self { entries, role, components }
    }

    pub fn rx_len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn tx_len(&self) -> usize {
        self.entries.ncols()
    }

    /// `H w` for a transmit weight vector.
    pub fn apply(&self, w: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(w.len(), self.tx_len(), "{} channel: tx length", self.role.name());
        (0..self.rx_len()).map(|i| (0..self.tx_len()).map(|j| self.entries[(i, j)] * w[j]).sum()).collect()
    }

    /// `H^H v` for a receive weight vector.
    pub fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.rx_len(), "{} channel: rx length", self.role.name());
        (0..self.tx_len()).map(|j| (0..self.rx_len()).map(|i| self.entries[(i, j)].conj() * v[i]).sum()).collect()
    }

    /// The bilinear form `w_rx^H H w_tx`.
    pub fn bilinear(&self, w_rx: &[Complex64], w_tx: &[Complex64]) -> Complex64 {
        let hw = self.apply(w_tx);
        w_rx.iter().zip(&hw).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Positions of the source node, the relay and the destination node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub sn: Vec3,
    pub uav: Vec3,
    pub dn: Vec3,
}

impl Placement {
    /// Distance and LoS angles of a far-field link. For S2V and V2D the
    /// angles are those of the ground node -> relay line at both ends; S2D
    /// uses the horizontal SN-DN distance.
    pub fn los_link(&self, role: LinkRole) -> Result<(f64, AngleSet)> {
        match role {
            LinkRole::S2V => link_geometry(self.sn, self.uav),
            LinkRole::V2D => link_geometry(self.dn, self.uav),
            LinkRole::S2D => {
                let d = self.dn.sub(self.sn);
                let dist = d.x.hypot(d.y);
                if !(dist > 0.0) {
                    return Err(Error::DegenerateGeometry);
                }
                let (_, angles) = link_geometry(self.sn, self.dn)?;
                Ok((dist, angles))
            }
            LinkRole::SI => Err(Error::InvalidInput("SI is not a far-field link".into())),
        }
    }

    /// Probability that the LoS path of an air-to-ground link exists.
    pub fn los_probability(&self, role: LinkRole, env: &EnvParams) -> Result<f64> {
        let elevation = match role {
            LinkRole::S2V => ground_elevation(self.sn, self.uav)?,
            LinkRole::V2D => ground_elevation(self.dn, self.uav)?,
            _ => return Ok(0.0),
        };
        Ok(los_probability(elevation, env))
    }

    /// LoS indicator of `role` drawn from the position-consistent field.
    pub fn has_los(&self, role: LinkRole, env_real: &EnvironmentRealization, env: &EnvParams) -> Result<bool> {
        match role {
            LinkRole::S2V | LinkRole::V2D => {
                let p = self.los_probability(role, env)?;
                Ok(env_real.los_indicator(role, self.uav, p))
            }
            _ => Ok(false),
        }
    }
}

/// Path list of a far-field link: the LoS path (if the environment lets it
/// through) followed by `env.nlos_count` NLoS paths.
pub fn farfield_components(
    role: LinkRole,
    env_real: &EnvironmentRealization,
    env: &EnvParams,
    placement: &Placement,
) -> Result<Vec<PathComponent>> {
    let (distance, los_angles) = placement.los_link(role)?;
    let mut out = Vec::with_capacity(env.nlos_count + 1);
    if placement.has_los(role, env_real, env)? {
        out.push(PathComponent {
            gain: Complex64::new(los_path_gain(distance, env)?, 0.0),
            departure: los_angles,
            arrival: los_angles,
            is_los: true,
        });
    }
    for draw in env_real.nlos_paths(role, env.nlos_count, env.fading_std) {
        out.push(PathComponent {
            gain: nlos_path_gain(distance, env, draw.fading)?,
            departure: draw.departure,
            arrival: draw.arrival,
            is_los: false,
        });
    }
    Ok(out)
}

/// Far-field channel of `role` for the given placement and realization.
pub fn build_farfield_channel(
    role: LinkRole,
    env_real: &EnvironmentRealization,
    env: &EnvParams,
    placement: &Placement,
    tx_upa: &UpaSpec,
    rx_upa: &UpaSpec,
) -> Result<ChannelMatrix> {
    let components = farfield_components(role, env_real, env, placement)?;
    Ok(ChannelMatrix::from_components(role, components, tx_upa, rx_upa))
}

/// Element positions of a horizontal panel centered at `center`, row-major.
fn panel_elements(upa: &UpaSpec, center: Vec3, wavelength: f64) -> Vec<Vec3> {
    let d = upa.spacing_over_lambda * wavelength;
    let mo = (upa.rows as f64 - 1.0) / 2.0;
    let no = (upa.cols as f64 - 1.0) / 2.0;
    let mut out = Vec::with_capacity(upa.total());
    for m in 0..upa.rows {
        for n in 0..upa.cols {
            out.push(Vec3::new(center.x + (m as f64 - mo) * d, center.y + (n as f64 - no) * d, center.z));
        }
    }
    out
}

/// Tx-element to Rx-element distances `r[rx][tx]` of the relay panels: both
/// horizontal, Rx centered at the origin and Tx shifted along `x` by the
/// panel separation.
pub fn si_distances(env: &EnvParams, tx_upa: &UpaSpec, rx_upa: &UpaSpec) -> Vec<Vec<f64>> {
    let lambda = env.wavelength();
    let rx = panel_elements(rx_upa, Vec3::ORIGIN, lambda);
    let tx = panel_elements(tx_upa, Vec3::new(env.panel_separation * lambda, 0.0, 0.0), lambda);
    rx.iter().map(|r| tx.iter().map(|t| r.distance(*t)).collect()).collect()
}

/// Near-field self-interference channel of the relay.
pub fn build_si_channel(env: &EnvParams, tx_upa: &UpaSpec, rx_upa: &UpaSpec) -> Result<ChannelMatrix> {
    if !(env.panel_separation > 0.0) {
        return Err(Error::InvalidInput(format!("panel separation must be positive, got {}", env.panel_separation)));
    }
    let lambda = env.wavelength();
    let k = env.free_space_factor();
    let r = si_distances(env, tx_upa, rx_upa);
    let entries = CMatrix::from_fn(rx_upa.total(), tx_upa.total(), |i, j| {
        let rij = r[i][j];
        Complex64::from_polar(k * rij.powf(-env.los_exponent / 2.0), -TAU * rij / lambda)
    });
    Ok(ChannelMatrix { entries, role: LinkRole::SI, components: Vec::new() })
}

/// The four channels seen by one relay placement.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub s2v: ChannelMatrix,
    pub v2d: ChannelMatrix,
    pub s2d: ChannelMatrix,
    pub si: ChannelMatrix,
}

/// Array geometry of the four panels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArraySet {
    pub sn: UpaSpec,
    pub dn: UpaSpec,
    pub tx: UpaSpec,
    pub rx: UpaSpec,
}

impl ArraySet {
    pub fn uniform(upa: UpaSpec) -> Self {
        Self { sn: upa, dn: upa, tx: upa, rx: upa }
    }
}

impl ChannelSet {
    pub fn build(
        env_real: &EnvironmentRealization,
        env: &EnvParams,
        placement: &Placement,
        arrays: &ArraySet,
    ) -> Result<Self> {
        Ok(Self {
            s2v: build_farfield_channel(LinkRole::S2V, env_real, env, placement, &arrays.sn, &arrays.rx)?,
            v2d: build_farfield_channel(LinkRole::V2D, env_real, env, placement, &arrays.tx, &arrays.dn)?,
            s2d: build_farfield_channel(LinkRole::S2D, env_real, env, placement, &arrays.sn, &arrays.dn)?,
            si: build_si_channel(env, &arrays.tx, &arrays.rx)?,
        })
    }
}

/// Half-power beamwidth (degrees) of an `n`-element broadside linear array
/// with spacing `d_over_lambda`, from the 2.782/N array-factor approximation.
pub fn half_power_beamwidth_deg(n: usize, d_over_lambda: f64) -> f64 {
    let theta_m = PI / 2.0;
    let theta_h = (2.782 / (n as f64 * TAU * d_over_lambda)).acos();
    2.0 * (theta_m - theta_h).abs().to_degrees()
}
