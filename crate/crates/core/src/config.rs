//! Declarative scenario files.
//!
//! A scenario is a JSON document naming a potential, an optional gauge shift,
//! an optional Coulomb binding, an optional particle and run parameters.
//! Unknown keys are rejected everywhere. Directions are normalized on load,
//! so `load -> serialize -> load` reproduces the same parameters.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{ParticleState, SimulationOptions};
use crate::error::{Error, Result};
use crate::gauge::{
    apply_gauge, lambda_from_potential, light_cone_gauge, GaugeFunction, PhaseProfile,
};
use crate::minkowski::{make_propagation_vector, FourVector, Vec3};
use crate::potential::{
    coulomb_with_floor, dipole_freeze, nonphysical_gauge, plane_wave, superpose, PotentialField,
    Ramp, Waveform, DEFAULT_COULOMB_FLOOR,
};
use crate::validator::{
    SampleSpec, Tolerances, ValidationContext, ValidatorConfig, DEFAULT_HALF_WIDTH,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};

/// Time steps per optical period when `dt` is not given.
pub const DEFAULT_STEPS_PER_PERIOD: f64 = 2000.0;

/// Direction norms within this distance of one are kept verbatim.
const NORMALIZE_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub potential: PotentialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding: Option<BindingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particle: Option<ParticleSpec>,
    /// Evaluate the potential at a fixed spatial anchor (dipole approximation).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole: Option<DipoleSpec>,
    #[serde(default)]
    pub run: RunSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WaveformSpec {
    #[default]
    Cos,
    Sin,
}

impl From<WaveformSpec> for Waveform {
    fn from(w: WaveformSpec) -> Self {
        match w {
            WaveformSpec::Cos => Waveform::Cos,
            WaveformSpec::Sin => Waveform::Sin,
        }
    }
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    PlaneWave {
        /// Constant 4-vector `A_c`.
        amplitude: [f64; 4],
        omega: f64,
        #[serde(default = "z_axis")]
        direction: [f64; 3],
        #[serde(default)]
        waveform: WaveformSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ramp_cycles: Option<f64>,
    },
    /// `A0 (e1 cos + e2 sin)` with `(e1, e2)` transverse to `direction`.
    Circular {
        amplitude: f64,
        omega: f64,
        #[serde(default = "z_axis")]
        direction: [f64; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ramp_cycles: Option<f64>,
    },
    Coulomb {
        charge: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r_min: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Zero,
    Constant { value: f64 },
    Cos { amplitude: f64 },
    Sin { amplitude: f64 },
}

impl From<&ProfileSpec> for PhaseProfile {
    fn from(p: &ProfileSpec) -> Self {
        match *p {
            ProfileSpec::Zero => PhaseProfile::Zero,
            ProfileSpec::Constant { value } => PhaseProfile::Constant(value),
            ProfileSpec::Cos { amplitude } => PhaseProfile::Cos { amplitude },
            ProfileSpec::Sin { amplitude } => PhaseProfile::Sin { amplitude },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaugeSpec {
    /// `A -> -k (x.A')`, built directly.
    Nonphysical,
    /// Shift generated by `Lambda = -A(phi).x`; same potential as `nonphysical`.
    PotentialContraction,
    /// `Lambda = Lambda(phi)` given through its derivative.
    LightCone {
        profile: ProfileSpec,
    },
    Constant {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BindingSpec {
    pub charge: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSpec {
    pub q: f64,
    pub m: f64,
    #[serde(default)]
    pub position: [f64; 3],
    #[serde(default)]
    pub momentum: [f64; 3],
    #[serde(default)]
    pub t0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DipoleSpec {
    #[serde(default)]
    pub anchor: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub c: f64,
    pub hbar: f64,
    pub seed: u64,
    pub samples: usize,
    pub half_width: f64,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Defaults to one two-thousandth of the optical period.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub stride: usize,
    /// Trailing periods averaged for the drift momentum.
    pub average_cycles: usize,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            c: 1.0,
            hbar: 1.0,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            half_width: DEFAULT_HALF_WIDTH,
            tolerances: Tolerances::default(),
            t_end: None,
            dt: None,
            stride: 1,
            average_cycles: 10,
        }
    }
}

fn bad(field: &str, why: impl std::fmt::Display) -> Error {
    Error::Config(format!("`{field}`: {why}"))
}

fn finite(field: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(bad(field, format!("must be finite, got {v}"))),
        None => Ok(()),
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(field, format!("must be positive and finite, got {v}")))
    }
}

fn normalize(field: &str, d: &mut [f64; 3]) -> Result<()> {
    finite(field, d)?;
    let v = Vec3::from(*d);
    let n = v.norm();
    if n == 0.0 {
        return Err(bad(field, "must be non-zero"));
    }
    if (n - 1.0).abs() > NORMALIZE_SLACK {
        *d = (v * (1.0 / n)).to_array();
    }
    Ok(())
}

impl ScenarioConfig {
    /// Parses and normalizes a scenario; errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.normalize()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    fn normalize(&mut self) -> Result<()> {
        match &mut self.potential {
            PotentialSpec::PlaneWave {
                amplitude,
                omega,
                direction,
                ramp_cycles,
                ..
            } => {
                finite("potential.amplitude", amplitude)?;
                positive("potential.omega", *omega)?;
                normalize("potential.direction", direction)?;
                if let Some(r) = ramp_cycles {
                    positive("potential.ramp_cycles", *r)?;
                }
            }
            PotentialSpec::Circular {
                amplitude,
                omega,
                direction,
                ramp_cycles,
            } => {
                finite("potential.amplitude", &[*amplitude])?;
                positive("potential.omega", *omega)?;
                normalize("potential.direction", direction)?;
                if let Some(r) = ramp_cycles {
                    positive("potential.ramp_cycles", *r)?;
                }
            }
            PotentialSpec::Coulomb { charge, r_min } => {
                finite("potential.charge", &[*charge])?;
                if let Some(r) = r_min {
                    positive("potential.r_min", *r)?;
                }
            }
        }
        match &self.gauge {
            Some(GaugeSpec::Constant { value }) => finite("gauge.value", &[*value])?,
            Some(GaugeSpec::LightCone { profile }) => match profile {
                ProfileSpec::Zero => {}
                ProfileSpec::Constant { value: v }
                | ProfileSpec::Cos { amplitude: v }
                | ProfileSpec::Sin { amplitude: v } => finite("gauge.profile", &[*v])?,
            },
            _ => {}
        }
        if let Some(b) = &self.binding {
            finite("binding.charge", &[b.charge])?;
            if let Some(r) = b.r_min {
                positive("binding.r_min", r)?;
            }
        }
        if let Some(p) = &self.particle {
            finite("particle.q", &[p.q])?;
            positive("particle.m", p.m)?;
            finite("particle.position", &p.position)?;
            finite("particle.momentum", &p.momentum)?;
            finite("particle.t0", &[p.t0])?;
        }
        if let Some(d) = &self.dipole {
            finite("dipole.anchor", &d.anchor)?;
        }
        let run = &self.run;
        positive("run.c", run.c)?;
        positive("run.hbar", run.hbar)?;
        positive("run.half_width", run.half_width)?;
        if let Some(t) = run.t_end {
            finite("run.t_end", &[t])?;
        }
        if let Some(dt) = run.dt {
            positive("run.dt", dt)?;
        }
        if run.stride == 0 {
            return Err(bad("run.stride", "must be at least 1"));
        }
        if run.average_cycles == 0 {
            return Err(bad("run.average_cycles", "must be at least 1"));
        }
        let t = &run.tolerances;
        finite(
            "run.tolerances",
            &[
                t.algebraic,
                t.finite_difference,
                t.phase_dependence,
                t.classification,
                t.spacelike_fraction,
            ],
        )
    }

    /// Angular frequency of a wave potential.
    pub fn omega(&self) -> Option<f64> {
        match self.potential {
            PotentialSpec::PlaneWave { omega, .. } | PotentialSpec::Circular { omega, .. } => {
                Some(omega)
            }
            PotentialSpec::Coulomb { .. } => None,
        }
    }

    pub fn period(&self) -> Option<f64> {
        self.omega().map(|w| 2.0 * PI / w)
    }

    /// Unit propagation direction of a wave potential.
    pub fn direction(&self) -> Option<Vec3> {
        match self.potential {
            PotentialSpec::PlaneWave { direction, .. }
            | PotentialSpec::Circular { direction, .. } => Some(Vec3::from(direction)),
            PotentialSpec::Coulomb { .. } => None,
        }
    }

    /// The potential before any gauge shift or dipole freezing.
    pub fn base_potential(&self) -> Result<PotentialField> {
        let c = self.run.c;
        let ramp = |cycles: Option<f64>| cycles.map(Ramp::new).transpose();
        match self.potential {
            PotentialSpec::PlaneWave {
                amplitude,
                omega,
                direction,
                waveform,
                ramp_cycles,
            } => {
                let k = make_propagation_vector(omega, Vec3::from(direction), c)?;
                let field = plane_wave(FourVector::from(amplitude), k, waveform.into())?;
                match ramp(ramp_cycles)? {
                    Some(r) => {
                        let pw = field.as_plane_wave().expect("plane wave").with_ramp(r);
                        Ok(pw.into())
                    }
                    None => Ok(field),
                }
            }
            PotentialSpec::Circular {
                amplitude,
                omega,
                direction,
                ramp_cycles,
            } => {
                let k = make_propagation_vector(omega, Vec3::from(direction), c)?;
                PotentialField::circular(amplitude, k, ramp(ramp_cycles)?)
            }
            PotentialSpec::Coulomb { charge, r_min } => {
                coulomb_with_floor(charge, r_min.unwrap_or(DEFAULT_COULOMB_FLOOR))
            }
        }
    }

    fn gauge_function(&self, base: &PotentialField) -> Result<Option<GaugeFunction>> {
        let needs_k = "a light-cone gauge needs a propagation vector";
        Ok(match &self.gauge {
            None | Some(GaugeSpec::Nonphysical) => None,
            Some(GaugeSpec::PotentialContraction) => Some(lambda_from_potential(base)?),
            Some(GaugeSpec::LightCone { profile }) => {
                let k = base
                    .propagation_vector()
                    .ok_or(Error::NoPropagationVector(needs_k))?;
                Some(light_cone_gauge(profile.into(), k)?)
            }
            Some(GaugeSpec::Constant { value }) => Some(GaugeFunction::constant(*value)),
        })
    }

    /// The potential with the configured gauge applied, without dipole freezing.
    pub fn gauged_potential(&self) -> Result<PotentialField> {
        let base = self.base_potential()?;
        if matches!(self.gauge, Some(GaugeSpec::Nonphysical)) {
            return nonphysical_gauge(&base);
        }
        Ok(match self.gauge_function(&base)? {
            Some(g) => apply_gauge(&base, &g),
            None => base,
        })
    }

    /// The gauge-shifted potential, frozen at the dipole anchor when requested.
    pub fn potential(&self) -> Result<PotentialField> {
        let field = self.gauged_potential()?;
        Ok(match &self.dipole {
            Some(d) => dipole_freeze(&field, Vec3::from(d.anchor)),
            None => field,
        })
    }

    pub fn binding_potential(&self) -> Result<Option<PotentialField>> {
        self.binding
            .as_ref()
            .map(|b| coulomb_with_floor(b.charge, b.r_min.unwrap_or(DEFAULT_COULOMB_FLOOR)))
            .transpose()
    }

    /// Potential seen by a particle: the scenario potential plus any binding.
    pub fn total_potential(&self) -> Result<PotentialField> {
        let field = self.potential()?;
        match self.binding_potential()? {
            Some(b) => superpose(vec![field, b]),
            None => Ok(field),
        }
    }

    pub fn validation_context(&self) -> Result<ValidationContext> {
        Ok(match self.binding_potential()? {
            Some(b) => ValidationContext::TransverseWithBinding(b),
            None => ValidationContext::Standalone,
        })
    }

    pub fn validator_config(&self) -> ValidatorConfig {
        ValidatorConfig {
            sampling: SampleSpec {
                half_width: self.run.half_width,
                ..SampleSpec::new(self.run.samples, self.run.seed)
            },
            tolerances: self.run.tolerances,
            ..ValidatorConfig::default()
        }
    }

    pub fn particle_state(&self) -> Result<ParticleState> {
        let p = self
            .particle
            .as_ref()
            .ok_or_else(|| bad("particle", "section is required for simulation"))?;
        Ok(ParticleState {
            t: p.t0,
            r: Vec3::from(p.position),
            p: Vec3::from(p.momentum),
            q: p.q,
            m: p.m,
        })
    }

    pub fn simulation_options(&self) -> Result<SimulationOptions> {
        let t_end = self
            .run
            .t_end
            .ok_or_else(|| bad("run.t_end", "is required for simulation"))?;
        let dt = match (self.run.dt, self.period()) {
            (Some(dt), _) => dt,
            (None, Some(period)) => period / DEFAULT_STEPS_PER_PERIOD,
            (None, None) => {
                return Err(bad(
                    "run.dt",
                    "is required when the potential has no period",
                ))
            }
        };
        Ok(SimulationOptions::new(dt, t_end)
            .with_stride(self.run.stride)
            .with_c(self.run.c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialKind;

    const PLANE: &str = r#"{
        "potential": {"kind": "plane_wave", "amplitude": [0, 1, 0, 0], "omega": 1, "direction": [0, 0, 2]},
        "gauge": {"kind": "light_cone", "profile": {"kind": "cos", "amplitude": 0.1}},
        "particle": {"q": -1, "m": 1},
        "run": {"t_end": 30, "seed": 7}
    }"#;

    #[test]
    fn parses_and_normalizes_direction() {
        let cfg = ScenarioConfig::from_json(PLANE).unwrap();
        match cfg.potential {
            PotentialSpec::PlaneWave {
                direction,
                waveform,
                ..
            } => {
                assert_eq!(direction, [0.0, 0.0, 1.0]);
                assert_eq!(waveform, WaveformSpec::Cos);
            }
            _ => panic!(),
        }
        assert_eq!(cfg.run.seed, 7);
        assert_eq!(cfg.run.samples, DEFAULT_SAMPLES);
        assert_eq!(
            cfg.potential().unwrap().kind(),
            PotentialKind::GaugeTransformed
        );
    }

    #[test]
    fn round_trip_is_exact() {
        let text = r#"{"potential": {"kind": "circular", "amplitude": 1, "omega": 1, "direction": [1, 1, 1], "ramp_cycles": 2}}"#;
        let a = ScenarioConfig::from_json(text).unwrap();
        let b = ScenarioConfig::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        for text in [
            r#"{"potential": {"kind": "coulomb", "charge": 1}, "extra": 1}"#,
            r#"{"potential": {"kind": "coulomb", "charge": 1, "colour": 2}}"#,
            "{\"potential\": {\"kind\": \"coulomb\", \"charge\": 1},\n \"run\": {\"dtt\": 1}}",
        ] {
            let msg = ScenarioConfig::from_json(text).unwrap_err().to_string();
            assert!(
                msg.contains("unknown field") && msg.contains("line"),
                "{msg}"
            );
        }
    }

    #[test]
    fn rejects_nonphysical_parameters() {
        let cases = [
            r#"{"potential": {"kind": "plane_wave", "amplitude": [0, 1, 0, 0], "omega": -1}}"#,
            r#"{"potential": {"kind": "plane_wave", "amplitude": [0, 1, 0, 0], "omega": 1, "direction": [0, 0, 0]}}"#,
            r#"{"potential": {"kind": "coulomb", "charge": 1}, "particle": {"q": 1, "m": 0}}"#,
            r#"{"potential": {"kind": "coulomb", "charge": 1}, "run": {"c": 0}}"#,
            r#"{"potential": {"kind": "coulomb", "charge": 1e999}}"#,
        ];
        for text in cases {
            assert!(ScenarioConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn potential_contraction_matches_nonphysical() {
        let base = r#"{"potential": {"kind": "plane_wave", "amplitude": [0, 1, 0, 0], "omega": 1}, "gauge": {"kind": "#;
        let a = ScenarioConfig::from_json(&format!("{base}\"nonphysical\"}}}}"))
            .unwrap()
            .potential()
            .unwrap();
        let b = ScenarioConfig::from_json(&format!("{base}\"potential_contraction\"}}}}"))
            .unwrap()
            .potential()
            .unwrap();
        for x in [
            FourVector::new(0.3, -1.0, 2.0, 0.7),
            FourVector::new(-4.0, 1.5, 0.2, 3.0),
        ] {
            let d = a.evaluate(x).unwrap() - b.evaluate(x).unwrap();
            assert!(d.max_abs() < 1e-12);
        }
    }

    #[test]
    fn simulation_defaults_follow_the_period() {
        let cfg = ScenarioConfig::from_json(PLANE).unwrap();
        let opts = cfg.simulation_options().unwrap();
        assert!((opts.dt - 2.0 * PI / 2000.0).abs() < 1e-15);
        assert!(
            ScenarioConfig::from_json(r#"{"potential": {"kind": "coulomb", "charge": 1}}"#)
                .unwrap()
                .particle_state()
                .is_err()
        );
    }

    #[test]
    fn light_cone_gauge_on_coulomb_is_an_error() {
        let text = r#"{"potential": {"kind": "coulomb", "charge": 1}, "gauge": {"kind": "light_cone", "profile": {"kind": "zero"}}}"#;
        assert!(ScenarioConfig::from_json(text)
            .unwrap()
            .potential()
            .is_err());
    }
}
