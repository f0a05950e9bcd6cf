//! Classical relativistic motion of a point charge in the fields of a potential.

use std::f64::consts::PI;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::minkowski::{minkowski_dot, FourVector, Vec3};
use crate::potential::{evaluate_fields, FieldOptions, PotentialField};

/// Minimum number of periods a trajectory must span for drift averaging.
pub const MIN_DRIFT_PERIODS: usize = 5;

/// Phase samples used for cycle averages; exact for low-order trigonometric polynomials.
const CYCLE_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub t: f64,
    pub r: Vec3,
    /// Relativistic momentum `gamma m v`.
    pub p: Vec3,
    pub q: f64,
    pub m: f64,
}

impl ParticleState {
    pub fn at_rest(q: f64, m: f64) -> Self {
        ParticleState {
            t: 0.0,
            r: Vec3::ZERO,
            p: Vec3::ZERO,
            q,
            m,
        }
    }

    pub fn gamma(&self, c: f64) -> f64 {
        let mc = self.m * c;
        (1.0 + self.p.norm_sq() / (mc * mc)).sqrt()
    }

    pub fn velocity(&self, c: f64) -> Vec3 {
        self.p * (1.0 / (self.gamma(c) * self.m))
    }

    /// `sqrt(m^2 c^4 + p^2 c^2) - m c^2`, written to avoid cancellation.
    pub fn kinetic_energy(&self, c: f64) -> f64 {
        let p2 = self.p.norm_sq();
        let mc2 = self.m * c * c;
        p2 * c * c / ((mc2 * mc2 + p2 * c * c).sqrt() + mc2)
    }

    pub fn event(&self, c: f64) -> FourVector {
        FourVector::from_parts(c * self.t, self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Record every `stride`-th step.
    pub stride: usize,
    pub c: f64,
    pub fields: FieldOptions,
}

impl SimulationOptions {
    pub fn new(dt: f64, t_end: f64) -> Self {
        SimulationOptions {
            dt,
            t_end,
            stride: 1,
            c: 1.0,
            fields: FieldOptions::default(),
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_fields(mut self, fields: FieldOptions) -> Self {
        self.fields = fields;
        self
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// The particle came too close to a field singularity.
    Singularity {
        t: f64,
        detail: String,
    },
    NonFinite {
        t: f64,
        detail: String,
    },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<ParticleState>,
    pub dt: f64,
    pub stride: usize,
    pub c: f64,
    pub field_descriptor: String,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> &ParticleState {
        self.samples
            .last()
            .expect("trajectory holds the initial state")
    }

    pub fn duration(&self) -> f64 {
        self.last().t - self.samples[0].t
    }

    pub fn is_complete(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Writes `t,x,y,z,px,py,pz,gamma` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,x,y,z,px,py,pz,gamma")?;
        for s in &self.samples {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t,
                s.r.x,
                s.r.y,
                s.r.z,
                s.p.x,
                s.p.y,
                s.p.z,
                s.gamma(self.c)
            )?;
        }
        Ok(())
    }
}

/// One drift-kick-rotate-kick-drift step. Fields are taken at the staggered
/// half-step position.
fn boris_step(
    s: &ParticleState,
    field: &PotentialField,
    dt: f64,
    c: f64,
    opts: FieldOptions,
) -> Result<ParticleState> {
    let half = 0.5 * dt;
    let r_half = s.r + s.velocity(c) * half;
    let t_half = s.t + half;
    let f = evaluate_fields(field, FourVector::from_parts(c * t_half, r_half), opts)?;

    let impulse = f.e * (s.q * half);
    let p_minus = s.p + impulse;
    let mc = s.m * c;
    let gamma_minus = (1.0 + p_minus.norm_sq() / (mc * mc)).sqrt();
    let tv = f.b * (s.q * half / (gamma_minus * s.m * c));
    let sv = tv * (2.0 / (1.0 + tv.norm_sq()));
    let p_prime = p_minus + p_minus.cross(tv);
    let p_plus = p_minus + p_prime.cross(sv);
    let p_new = p_plus + impulse;

    let mut next = ParticleState { p: p_new, ..*s };
    next.r = r_half + next.velocity(c) * half;
    Ok(next)
}

/// Integrates `dp/dt = q (E + v x B / c)` from `init` to `opts.t_end`.
///
/// Running into a field singularity or a non-finite state does not raise an
/// error; the trajectory is truncated and [`Trajectory::termination`] says why.
pub fn simulate(
    init: ParticleState,
    field: &PotentialField,
    opts: &SimulationOptions,
) -> Result<Trajectory> {
    let SimulationOptions {
        dt,
        t_end,
        stride,
        c,
        fields,
    } = *opts;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be positive, got {dt}"),
        });
    }
    if !(t_end > init.t) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must exceed the initial time {}, got {t_end}", init.t),
        });
    }
    if stride == 0 {
        return Err(Error::InvalidParameter {
            name: "stride",
            reason: "must be at least 1".into(),
        });
    }
    if !(c > 0.0) || !(init.m > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mass/c",
            reason: "must be positive".into(),
        });
    }

    let steps = ((t_end - init.t) / dt - 1e-9).ceil() as usize;
    let mut samples = Vec::with_capacity(steps / stride + 2);
    samples.push(init);
    let mut state = init;
    let mut termination = Termination::Completed;

    for n in 1..=steps {
        match boris_step(&state, field, dt, c, fields) {
            Ok(mut next) => {
                // reset from the step index so sample times stay uniformly spaced
                next.t = init.t + n as f64 * dt;
                if !next.r.is_finite() || !next.p.is_finite() {
                    termination = Termination::NonFinite {
                        t: state.t,
                        detail: "state became non-finite".into(),
                    };
                    break;
                }
                state = next;
            }
            Err(Error::Singularity { distance, limit }) => {
                termination = Termination::Singularity {
                    t: state.t,
                    detail: format!("distance {distance:.3e} to the source is below {limit:.3e}"),
                };
                break;
            }
            Err(Error::NonFinite(detail)) => {
                termination = Termination::NonFinite { t: state.t, detail };
                break;
            }
            Err(e) => return Err(e),
        }
        if n % stride == 0 {
            samples.push(state);
        }
    }

    Ok(Trajectory {
        samples,
        dt,
        stride,
        c,
        field_descriptor: field.describe(),
        termination,
    })
}

/// Runs independent trajectories in parallel; results keep the input order.
pub fn simulate_batch(
    inits: &[ParticleState],
    field: &PotentialField,
    opts: &SimulationOptions,
) -> Vec<Result<Trajectory>> {
    inits
        .par_iter()
        .map(|s| simulate(*s, field, opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PonderomotiveSummary {
    pub u_p: Option<f64>,
    /// Cycle-averaged momentum along the propagation direction.
    pub drift_p_parallel: f64,
    pub n_photons: Option<f64>,
}

impl PonderomotiveSummary {
    /// Attaches the field's ponderomotive energy and photon number.
    pub fn with_field(mut self, u_p: f64, omega: f64, hbar: f64) -> Result<Self> {
        self.u_p = Some(u_p);
        self.n_photons = Some(photon_number(u_p, omega, hbar)?);
        Ok(self)
    }

    /// `drift * c / U_p`; equals one when the drift is `U_p / c`.
    pub fn drift_ratio(&self, c: f64) -> Option<f64> {
        self.u_p
            .filter(|u| *u > 0.0)
            .map(|u| self.drift_p_parallel * c / u)
    }
}

/// Phase from which a field built from (ramped) plane waves has constant amplitude.
fn steady_phase(field: &PotentialField) -> f64 {
    field
        .plane_wave_parts()
        .or_else(|| {
            field
                .reference_potential()
                .and_then(|r| r.plane_wave_parts())
        })
        .map(|parts| parts.iter().map(|p| p.steady_phase()).fold(0.0, f64::max))
        .unwrap_or(0.0)
}

/// `U_p = -q^2 <A.A> / (2 m c^2)` with the average taken over one period of
/// the phase, after any turn-on ramp.
pub fn ponderomotive_energy(field: &PotentialField, q: f64, m: f64, c: f64) -> Result<f64> {
    let k = field
        .propagation_vector()
        .ok_or(Error::NoPropagationVector(
            "ponderomotive energy needs a transverse field",
        ))?;
    if !(m > 0.0 && c > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mass/c",
            reason: "must be positive".into(),
        });
    }
    let start = steady_phase(field);
    let mut sum = 0.0;
    for i in 0..CYCLE_SAMPLES {
        let phi = start + 2.0 * PI * i as f64 / CYCLE_SAMPLES as f64;
        let a = field.evaluate(FourVector::new(phi / k.t, 0.0, 0.0, 0.0))?;
        let residual = minkowski_dot(k, a);
        if residual.abs() > 1e-9 * a.euclid_norm().max(1.0) {
            return Err(Error::NotTransverse { residual });
        }
        sum += a.norm_sq();
    }
    let mean = sum / CYCLE_SAMPLES as f64;
    Ok((-q * q * mean / (2.0 * m * c * c)).max(0.0))
}

/// `n = U_p / (hbar omega)`.
pub fn photon_number(u_p: f64, omega: f64, hbar: f64) -> Result<f64> {
    if !(omega > 0.0 && hbar > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega/hbar",
            reason: format!("must be positive, got omega={omega}, hbar={hbar}"),
        });
    }
    Ok(u_p / (hbar * omega))
}

/// Time average of `p.k_dir` over the last `cycles` periods of the trajectory.
pub fn drift_momentum(
    traj: &Trajectory,
    k_dir: Vec3,
    period: f64,
    cycles: usize,
) -> Result<PonderomotiveSummary> {
    if !(period > 0.0) || cycles == 0 {
        return Err(Error::InvalidParameter {
            name: "period/cycles",
            reason: "must be positive".into(),
        });
    }
    let required = period * cycles.max(MIN_DRIFT_PERIODS) as f64;
    let available = traj.duration();
    if available + 1e-9 * period < required {
        return Err(Error::TrajectoryTooShort {
            available,
            required,
        });
    }
    let t_end = traj.last().t;
    let start = t_end - period * cycles as f64;
    let window: Vec<_> = traj
        .samples
        .iter()
        .filter(|s| s.t >= start - 1e-12 * period)
        .collect();
    let mut integral = 0.0;
    for w in window.windows(2) {
        integral += 0.5 * (w[0].p.dot(k_dir) + w[1].p.dot(k_dir)) * (w[1].t - w[0].t);
    }
    let span = window.last().unwrap().t - window[0].t;
    let drift = if span > 0.0 {
        integral / span
    } else {
        window[0].p.dot(k_dir)
    };
    Ok(PonderomotiveSummary {
        u_p: None,
        drift_p_parallel: drift,
        n_photons: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{plane_wave, PotentialField, Waveform};

    fn kz() -> FourVector {
        FourVector::new(1., 0., 0., 1.)
    }

    /// Simpson's rule over one period, independent of the trapezoid sum used above.
    fn simpson_cycle_average(f: impl Fn(f64) -> f64) -> f64 {
        let n = 200;
        let h = 2.0 * PI / n as f64;
        let mut s = f(0.0) + f(2.0 * PI);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0 / (2.0 * PI)
    }

    #[test]
    fn ponderomotive_examples() {
        let lin = plane_wave(FourVector::new(0., 1., 0., 0.), kz(), Waveform::Cos).unwrap();
        let oracle = -simpson_cycle_average(|p| -p.cos().powi(2)) / 2.0;
        assert!((oracle - 0.25).abs() < 1e-12);
        assert!((ponderomotive_energy(&lin, 1., 1., 1.).unwrap() - oracle).abs() < 1e-12);

        let circ = PotentialField::circular(1.0, kz(), None).unwrap();
        assert!((ponderomotive_energy(&circ, 1., 1., 1.).unwrap() - 0.5).abs() < 1e-12);

        let zero = plane_wave(FourVector::ZERO, kz(), Waveform::Cos).unwrap();
        assert_eq!(ponderomotive_energy(&zero, 1., 1., 1.).unwrap(), 0.0);
    }

    #[test]
    fn ponderomotive_is_even_in_charge() {
        let circ = PotentialField::circular(0.7, kz(), None).unwrap();
        assert_eq!(
            ponderomotive_energy(&circ, -1., 1., 1.).unwrap(),
            ponderomotive_energy(&circ, 1., 1., 1.).unwrap()
        );
    }

    #[test]
    fn ponderomotive_rejects_non_transverse() {
        let c = crate::potential::coulomb(1.0).unwrap();
        assert!(matches!(
            ponderomotive_energy(&c, 1., 1., 1.),
            Err(Error::NoPropagationVector(_))
        ));
        let longitudinal = PotentialField::custom("long", Some(kz()), |x| {
            FourVector::new(x.t.cos(), 0., 0., 0.)
        });
        assert!(matches!(
            ponderomotive_energy(&longitudinal, 1., 1., 1.),
            Err(Error::NotTransverse { .. })
        ));
    }

    #[test]
    fn photon_number_examples() {
        assert!((photon_number(0.5, 0.05, 1.0).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(photon_number(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(photon_number(0.25, 1.0, 1.0).unwrap(), 0.25);
        assert!(photon_number(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn free_particle_moves_uniformly() {
        let zero = PotentialField::constant(FourVector::ZERO);
        let init = ParticleState {
            p: Vec3::new(1., 0., 0.),
            ..ParticleState::at_rest(1., 1.)
        };
        let traj = simulate(init, &zero, &SimulationOptions::new(0.01, 10.0)).unwrap();
        let v = 1.0 / 2f64.sqrt();
        for s in &traj.samples {
            assert_eq!(s.p, init.p);
            assert!((s.r.x - v * s.t).abs() < 1e-12);
        }
        assert!(traj.is_complete());
        assert_eq!(traj.samples.len(), 1001);
    }

    #[test]
    fn sampling_is_uniform_with_stride() {
        let zero = PotentialField::constant(FourVector::ZERO);
        let traj = simulate(
            ParticleState::at_rest(1., 1.),
            &zero,
            &SimulationOptions::new(0.1, 5.0).with_stride(5),
        )
        .unwrap();
        assert_eq!(traj.samples.len(), 11);
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t);
            assert!((w[1].t - w[0].t - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn simulate_rejects_bad_options() {
        let zero = PotentialField::constant(FourVector::ZERO);
        let s = ParticleState::at_rest(1., 1.);
        assert!(simulate(s, &zero, &SimulationOptions::new(0.0, 1.0)).is_err());
        assert!(simulate(s, &zero, &SimulationOptions::new(0.1, 0.0)).is_err());
        assert!(simulate(s, &zero, &SimulationOptions::new(0.1, 1.0).with_stride(0)).is_err());
    }

    #[test]
    fn falling_into_coulomb_centre_truncates() {
        // attractive centre, particle starting on axis with no angular momentum
        let c = crate::potential::coulomb(-1.0).unwrap();
        let init = ParticleState {
            r: Vec3::new(0., 0., 0.5),
            ..ParticleState::at_rest(1., 1.)
        };
        let traj = simulate(init, &c, &SimulationOptions::new(1e-3, 50.0)).unwrap();
        assert!(
            matches!(traj.termination, Termination::Singularity { .. }),
            "{:?}",
            traj.termination
        );
        assert!(traj.last().t < 50.0);
    }

    #[test]
    fn drift_requires_enough_periods() {
        let zero = PotentialField::constant(FourVector::ZERO);
        let traj = simulate(
            ParticleState::at_rest(1., 1.),
            &zero,
            &SimulationOptions::new(0.01, 3.0),
        )
        .unwrap();
        assert!(matches!(
            drift_momentum(&traj, Vec3::new(0., 0., 1.), 1.0, 2),
            Err(Error::TrajectoryTooShort { .. })
        ));
        let long = simulate(
            ParticleState::at_rest(1., 1.),
            &zero,
            &SimulationOptions::new(0.01, 6.0),
        )
        .unwrap();
        assert_eq!(
            drift_momentum(&long, Vec3::new(0., 0., 1.), 1.0, 5)
                .unwrap()
                .drift_p_parallel,
            0.0
        );
    }

    #[test]
    fn csv_export_layout() {
        let zero = PotentialField::constant(FourVector::ZERO);
        let traj = simulate(
            ParticleState::at_rest(1., 1.),
            &zero,
            &SimulationOptions::new(0.5, 1.0),
        )
        .unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,x,y,z,px,py,pz,gamma");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2].split(',').next().unwrap(), "5.0000000000000000e-1");
        assert_eq!(lines[1].split(',').count(), 8);
    }

    #[test]
    fn kinetic_energy_is_stable_for_small_momenta() {
        let s = ParticleState {
            p: Vec3::new(1e-9, 0., 0.),
            ..ParticleState::at_rest(1., 1.)
        };
        assert!((s.kinetic_energy(1.0) - 0.5e-18).abs() < 1e-30);
    }
}
