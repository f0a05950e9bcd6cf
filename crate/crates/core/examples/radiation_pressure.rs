//! An electron released from rest in a ramped circular wave drifts forward
//! with momentum U_p/c. Freezing the wave at the origin removes the drift.

use std::f64::consts::PI;

use lightcone::dynamics::{
    drift_momentum, ponderomotive_energy, simulate, ParticleState, SimulationOptions,
};
use lightcone::minkowski::{FourVector, Vec3};
use lightcone::potential::{dipole_freeze, PotentialField, Ramp};

fn main() -> lightcone::Result<()> {
    let (q, m, c, hbar, omega) = (-1.0, 1.0, 1.0, 1.0, 1.0);
    let period = 2.0 * PI / omega;
    let k = FourVector::new(omega / c, 0.0, 0.0, omega / c);
    let opts = SimulationOptions::new(period / 2000.0, 20.0 * period).with_stride(10);

    println!(
        "{:>4} {:>10} {:>12} {:>10} {:>10} {:>10}",
        "A0", "U_p", "drift", "ratio", "dipole", "photons"
    );
    for a0 in [0.5, 1.0, 2.0] {
        let wave = PotentialField::circular(a0, k, Some(Ramp::new(2.0)?))?;
        let u_p = ponderomotive_energy(&wave, q, m, c)?;
        let run = |field: &PotentialField| -> lightcone::Result<_> {
            let traj = simulate(ParticleState::at_rest(q, m), field, &opts)?;
            drift_momentum(&traj, Vec3::new(0.0, 0.0, 1.0), period, 10)?
                .with_field(u_p, omega, hbar)
        };
        let full = run(&wave)?;
        let frozen = run(&dipole_freeze(&wave, Vec3::ZERO))?;
        println!(
            "{a0:>4} {u_p:>10.5} {:>12.6} {:>10.5} {:>10.2e} {:>10.4}",
            full.drift_p_parallel,
            full.drift_ratio(c).unwrap_or(f64::NAN),
            frozen.drift_ratio(c).unwrap_or(f64::NAN),
            full.n_photons.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
