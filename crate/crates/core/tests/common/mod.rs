//! Closed-form motion of a charge starting at rest in a linearly polarized
//! plane wave `A = a x_hat sin(phi)`, `k` along z, used as an independent oracle.
//!
//! Conservation of the transverse canonical momentum and of `gamma m c - p_z`
//! give, with `phi` as parameter:
//!   p_x = -(q/c) a sin(phi),  p_z = p_x^2 / (2 m c),
//!   dx/dphi = p_x / (m omega), dz/dphi = p_z / (m omega), dt/dphi = gamma / omega.

#![allow(dead_code)]

use lightcone::minkowski::{FourVector, Vec3};
use lightcone::potential::{plane_wave, PotentialField, Waveform};

#[derive(Debug, Clone, Copy)]
pub struct LinearWaveOracle {
    pub a: f64,
    pub q: f64,
    pub m: f64,
    pub c: f64,
    pub omega: f64,
}

impl LinearWaveOracle {
    pub fn field(&self) -> PotentialField {
        let k = self.omega / self.c;
        plane_wave(
            FourVector::new(0.0, self.a, 0.0, 0.0),
            FourVector::new(k, 0.0, 0.0, k),
            Waveform::Sin,
        )
        .unwrap()
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    fn drift_coefficient(&self) -> f64 {
        // q^2 a^2 / (2 m^2 c^4)
        (self.q * self.a).powi(2) / (2.0 * self.m * self.m * self.c.powi(4))
    }

    pub fn time_at(&self, phi: f64) -> f64 {
        (phi + self.drift_coefficient() * (phi / 2.0 - (2.0 * phi).sin() / 4.0)) / self.omega
    }

    /// Phase reached at lab time `t`, by bisection on the monotone `time_at`.
    pub fn phase_at(&self, t: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.omega * t);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.time_at(mid) < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn momentum(&self, phi: f64) -> Vec3 {
        let px = -(self.q / self.c) * self.a * phi.sin();
        Vec3::new(px, 0.0, px * px / (2.0 * self.m * self.c))
    }

    pub fn position(&self, phi: f64) -> Vec3 {
        let x = -(self.q * self.a / (self.c * self.m * self.omega)) * (1.0 - phi.cos());
        let z =
            self.c * self.drift_coefficient() / self.omega * (phi / 2.0 - (2.0 * phi).sin() / 4.0);
        Vec3::new(x, 0.0, z)
    }

    pub fn position_at_time(&self, t: f64) -> Vec3 {
        self.position(self.phase_at(t))
    }
}
