use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::prng::Stream;
use crate::xslib::{E_MAX, E_MIN};

/// Direction from two uniforms: μ = 2u₁ − 1, φ = 2πu₂.
pub fn isotropic_from(u1: f64, u2: f64) -> Vec3 {
    let mu = 2.0 * u1 - 1.0;
    let phi = 2.0 * PI * u2;
    let s = (1.0 - mu * mu).max(0.0).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), mu)
}

pub fn sample_isotropic(rng: &mut Stream) -> Vec3 {
    let u1 = rng.uniform();
    let u2 = rng.uniform();
    isotropic_from(u1, u2)
}

/// Free-flight distance −ln(1 − u)/Σt.
pub fn collision_distance_from(sigma_t: f64, u: f64) -> Result<f64> {
    if !(sigma_t > 0.0) {
        return Err(Error::Physics(format!(
            "total cross section {sigma_t} is not positive"
        )));
    }
    Ok(-(1.0 - u).ln() / sigma_t)
}

pub fn sample_collision_distance(sigma_t: f64, rng: &mut Stream) -> Result<f64> {
    collision_distance_from(sigma_t, rng.uniform())
}

/// Clamps into the grid range; the flag reports whether clamping happened.
pub fn clamp_energy(e: f64) -> (f64, bool) {
    let c = e.clamp(E_MIN, E_MAX);
    (c, c != e)
}

/// Fission neutron energy −T ln(1 − u), clamped to the grid range.
pub fn fission_energy_from(temperature: f64, u: f64) -> (f64, bool) {
    clamp_energy(-temperature * (1.0 - u).ln())
}

/// Outgoing energy E (α + (1 − α) u), clamped to the grid range.
pub fn scatter_energy_from(e: f64, alpha: f64, u: f64) -> (f64, bool) {
    clamp_energy(e * (alpha + (1.0 - alpha) * u))
}
