//! Four-potential fields and extraction of E and B from them.
//!
//! Events are `x = (ct, r)`, so `(1/c) d/dt = d/dx^0` and the field
//! formulas `E = -grad(phi) - (1/c) dA/dt`, `B = curl A` need no explicit `c`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::diff;
use crate::error::{Error, Result};
use crate::gauge::GaugeFunction;
use crate::minkowski::{classify, minkowski_dot, phase, CausalClass, FourVector, Vec3};

/// Tolerance for `k.A_c = 0` on plane-wave construction.
pub const TRANSVERSALITY_TOLERANCE: f64 = 1e-10;

/// Default lower bound on `r` for Coulomb evaluation.
pub const DEFAULT_COULOMB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveform {
    Cos,
    Sin,
}

impl Waveform {
    /// `(w, w', w'')` at phase `phi`.
    fn derivatives(self, phi: f64) -> [f64; 3] {
        let (s, c) = phi.sin_cos();
        match self {
            Waveform::Cos => [c, -s, -c],
            Waveform::Sin => [s, c, -s],
        }
    }
}

/// Smooth turn-on of a plane wave: `(1 - cos(pi phi / Phi)) / 2` for
/// `0 <= phi <= Phi = 2 pi cycles`, zero before and one after.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ramp {
    pub cycles: f64,
}

impl Ramp {
    pub fn new(cycles: f64) -> Result<Self> {
        if !(cycles > 0.0 && cycles.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "ramp_cycles",
                reason: format!("must be positive, got {cycles}"),
            });
        }
        Ok(Ramp { cycles })
    }

    pub fn end_phase(self) -> f64 {
        2.0 * PI * self.cycles
    }

    fn derivatives(self, phi: f64) -> [f64; 3] {
        let end = self.end_phase();
        if phi <= 0.0 {
            [0.0, 0.0, 0.0]
        } else if phi >= end {
            [1.0, 0.0, 0.0]
        } else {
            let w = PI / end;
            let (s, c) = (w * phi).sin_cos();
            [0.5 * (1.0 - c), 0.5 * w * s, 0.5 * w * w * c]
        }
    }
}

/// `A^mu(x) = A_c^mu w(k.x)`, optionally multiplied by a [`Ramp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    amplitude: FourVector,
    k: FourVector,
    waveform: Waveform,
    ramp: Option<Ramp>,
}

impl PlaneWave {
    pub fn new(amplitude: FourVector, k: FourVector, waveform: Waveform) -> Result<Self> {
        if !amplitude.is_finite() || !k.is_finite() {
            return Err(Error::NonFinite("plane-wave parameters".into()));
        }
        if k.t <= 0.0 || classify(k, 1e-10) != CausalClass::Lightlike {
            return Err(Error::NotLightlike {
                k,
                norm: k.norm_sq(),
            });
        }
        let residual = minkowski_dot(k, amplitude);
        let scale = (k.euclid_norm() * amplitude.euclid_norm()).max(1.0);
        if residual.abs() > TRANSVERSALITY_TOLERANCE * scale {
            return Err(Error::NotTransverse { residual });
        }
        Ok(PlaneWave {
            amplitude,
            k,
            waveform,
            ramp: None,
        })
    }

    pub fn with_ramp(mut self, ramp: Ramp) -> Self {
        self.ramp = Some(ramp);
        self
    }

    pub fn amplitude(&self) -> FourVector {
        self.amplitude
    }

    pub fn k(&self) -> FourVector {
        self.k
    }

    pub fn waveform(&self) -> Waveform {
        self.waveform
    }

    pub fn ramp(&self) -> Option<Ramp> {
        self.ramp
    }

    /// Phase after which the amplitude is constant.
    pub fn steady_phase(&self) -> f64 {
        self.ramp.map_or(0.0, Ramp::end_phase)
    }

    /// Same wave with the amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> PlaneWave {
        PlaneWave {
            amplitude: self.amplitude * factor,
            ..*self
        }
    }

    fn profile(&self, phi: f64) -> [f64; 3] {
        let w = self.waveform.derivatives(phi);
        match self.ramp {
            None => w,
            Some(r) => {
                let e = r.derivatives(phi);
                [
                    e[0] * w[0],
                    e[1] * w[0] + e[0] * w[1],
                    e[2] * w[0] + 2.0 * e[1] * w[1] + e[0] * w[2],
                ]
            }
        }
    }

    /// `A(phi)`.
    pub fn at_phase(&self, phi: f64) -> FourVector {
        self.amplitude * self.profile(phi)[0]
    }

    /// `dA/dphi`.
    pub fn phase_derivative(&self, phi: f64) -> FourVector {
        self.amplitude * self.profile(phi)[1]
    }

    /// `d^2A/dphi^2`.
    pub fn second_phase_derivative(&self, phi: f64) -> FourVector {
        self.amplitude * self.profile(phi)[2]
    }

    pub fn evaluate(&self, x: FourVector) -> FourVector {
        self.at_phase(phase(self.k, x))
    }

    fn nonphysical(&self, x: FourVector) -> FourVector {
        let a1 = self.phase_derivative(phase(self.k, x));
        self.k * (-minkowski_dot(x, a1))
    }
}

/// `J[mu][nu] = dA^mu / dx^nu`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jacobian(pub [[f64; 4]; 4]);

impl Jacobian {
    /// `A^mu b_nu` as a rank-one Jacobian.
    fn outer(a: FourVector, b_lower: FourVector) -> Self {
        let mut j = [[0.0; 4]; 4];
        for (mu, row) in j.iter_mut().enumerate() {
            for (nu, v) in row.iter_mut().enumerate() {
                *v = a[mu] * b_lower[nu];
            }
        }
        Jacobian(j)
    }

    fn add(mut self, other: &Jacobian) -> Self {
        for mu in 0..4 {
            for nu in 0..4 {
                self.0[mu][nu] += other.0[mu][nu];
            }
        }
        self
    }

    pub fn electric(&self) -> Vec3 {
        let j = &self.0;
        Vec3::new(-j[0][1] - j[1][0], -j[0][2] - j[2][0], -j[0][3] - j[3][0])
    }

    pub fn magnetic(&self) -> Vec3 {
        let j = &self.0;
        Vec3::new(j[3][2] - j[2][3], j[1][3] - j[3][1], j[2][1] - j[1][2])
    }

    /// `d_mu A^mu`, the Lorenz-condition divergence.
    pub fn divergence(&self) -> f64 {
        (0..4).map(|mu| self.0[mu][mu]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialKind {
    PlaneWave,
    NonphysicalPlaneWave,
    Coulomb,
    Superposition,
    GaugeTransformed,
    DipoleFrozen,
    Static,
    Custom,
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PotentialKind::PlaneWave => "plane_wave",
            PotentialKind::NonphysicalPlaneWave => "nonphysical_plane_wave",
            PotentialKind::Coulomb => "coulomb",
            PotentialKind::Superposition => "superposition",
            PotentialKind::GaugeTransformed => "gauge_transformed",
            PotentialKind::DipoleFrozen => "dipole_frozen",
            PotentialKind::Static => "static",
            PotentialKind::Custom => "custom",
        })
    }
}

type CustomEval = Arc<dyn Fn(FourVector) -> FourVector + Send + Sync>;

enum Repr {
    PlaneWave(PlaneWave),
    Nonphysical(PlaneWave),
    Coulomb {
        charge: f64,
        r_min: f64,
    },
    Superposition(Vec<PotentialField>),
    GaugeTransformed {
        base: PotentialField,
        gauge: GaugeFunction,
    },
    DipoleFrozen {
        base: PotentialField,
        anchor: Vec3,
    },
    Static {
        offset: FourVector,
        e: Vec3,
        b: Vec3,
    },
    Custom {
        label: String,
        k: Option<FourVector>,
        eval: CustomEval,
    },
}

/// An immutable, cheaply clonable map from events to four-potentials.
#[derive(Clone)]
pub struct PotentialField(Arc<Repr>);

impl fmt::Debug for PotentialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PotentialField({})", self.describe())
    }
}

impl From<PlaneWave> for PotentialField {
    fn from(pw: PlaneWave) -> Self {
        PotentialField(Arc::new(Repr::PlaneWave(pw)))
    }
}

impl PotentialField {
    fn wrap(repr: Repr) -> Self {
        PotentialField(Arc::new(repr))
    }

    /// Circularly polarized wave `A0 (e1 cos phi + e2 sin phi)` with `(e1, e2, k_hat)`
    /// right-handed.
    pub fn circular(amplitude: f64, k: FourVector, ramp: Option<Ramp>) -> Result<Self> {
        let dir = k.spatial().normalized().ok_or(Error::NotLightlike {
            k,
            norm: k.norm_sq(),
        })?;
        let (e1, e2) = dir.transverse_basis();
        let mut parts = Vec::with_capacity(2);
        for (e, w) in [(e1, Waveform::Cos), (e2, Waveform::Sin)] {
            let mut pw = PlaneWave::new(FourVector::from_parts(0.0, e * amplitude), k, w)?;
            if let Some(r) = ramp {
                pw = pw.with_ramp(r);
            }
            parts.push(PotentialField::from(pw));
        }
        superpose(parts)
    }

    /// Uniform static fields: `phi = offset^0 - E.r`, `A = offset + B x r / 2`.
    pub fn uniform_static(offset: FourVector, e: Vec3, b: Vec3) -> Self {
        PotentialField::wrap(Repr::Static { offset, e, b })
    }

    /// Spatially and temporally constant four-potential.
    pub fn constant(value: FourVector) -> Self {
        PotentialField::uniform_static(value, Vec3::ZERO, Vec3::ZERO)
    }

    /// Arbitrary evaluator. `k` declares the propagation vector the field is
    /// meant to represent, if any, so transverse checks can be run on it.
    pub fn custom<F>(label: impl Into<String>, k: Option<FourVector>, eval: F) -> Self
    where
        F: Fn(FourVector) -> FourVector + Send + Sync + 'static,
    {
        PotentialField::wrap(Repr::Custom {
            label: label.into(),
            k,
            eval: Arc::new(eval),
        })
    }

    pub(crate) fn gauge_transformed(base: PotentialField, gauge: GaugeFunction) -> Self {
        PotentialField::wrap(Repr::GaugeTransformed { base, gauge })
    }

    pub fn kind(&self) -> PotentialKind {
        match &*self.0 {
            Repr::PlaneWave(_) => PotentialKind::PlaneWave,
            Repr::Nonphysical(_) => PotentialKind::NonphysicalPlaneWave,
            Repr::Coulomb { .. } => PotentialKind::Coulomb,
            Repr::Superposition(_) => PotentialKind::Superposition,
            Repr::GaugeTransformed { .. } => PotentialKind::GaugeTransformed,
            Repr::DipoleFrozen { .. } => PotentialKind::DipoleFrozen,
            Repr::Static { .. } => PotentialKind::Static,
            Repr::Custom { .. } => PotentialKind::Custom,
        }
    }

    pub fn as_plane_wave(&self) -> Option<&PlaneWave> {
        match &*self.0 {
            Repr::PlaneWave(pw) => Some(pw),
            _ => None,
        }
    }

    /// Gauge function of a [`PotentialKind::GaugeTransformed`] field.
    pub fn gauge(&self) -> Option<&GaugeFunction> {
        match &*self.0 {
            Repr::GaugeTransformed { gauge, .. } => Some(gauge),
            _ => None,
        }
    }

    /// Plane-wave components whose sum is this field, if it is built only
    /// from plane waves.
    pub fn plane_wave_parts(&self) -> Option<Vec<PlaneWave>> {
        match &*self.0 {
            Repr::PlaneWave(pw) => Some(vec![*pw]),
            Repr::Superposition(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.plane_wave_parts()?);
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub fn evaluate(&self, x: FourVector) -> Result<FourVector> {
        let v = self.evaluate_raw(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!(
                "potential {} at {x}",
                self.kind()
            )))
        }
    }

    fn evaluate_raw(&self, x: FourVector) -> Result<FourVector> {
        match &*self.0 {
            Repr::PlaneWave(pw) => Ok(pw.evaluate(x)),
            Repr::Nonphysical(pw) => Ok(pw.nonphysical(x)),
            Repr::Coulomb { charge, r_min } => {
                let r = x.spatial().norm();
                if r < *r_min {
                    return Err(Error::Singularity {
                        distance: r,
                        limit: *r_min,
                    });
                }
                Ok(FourVector::new(charge / r, 0.0, 0.0, 0.0))
            }
            Repr::Superposition(parts) => parts
                .iter()
                .try_fold(FourVector::ZERO, |acc, p| Ok(acc + p.evaluate_raw(x)?)),
            Repr::GaugeTransformed { base, gauge } => Ok(base.evaluate_raw(x)? + gauge.gradient(x)),
            Repr::DipoleFrozen { base, anchor } => {
                base.evaluate_raw(FourVector::from_parts(x.t, *anchor))
            }
            Repr::Static { offset, e, b } => {
                let r = x.spatial();
                Ok(FourVector::from_parts(
                    offset.t - e.dot(r),
                    offset.spatial() + b.cross(r) * 0.5,
                ))
            }
            Repr::Custom { eval, .. } => Ok(eval(x)),
        }
    }

    /// Propagation vector of the transverse field this potential represents.
    pub fn propagation_vector(&self) -> Option<FourVector> {
        match &*self.0 {
            Repr::PlaneWave(pw) | Repr::Nonphysical(pw) => Some(pw.k),
            Repr::Superposition(parts) => parts.iter().find_map(|p| p.propagation_vector()),
            Repr::GaugeTransformed { base, .. } | Repr::DipoleFrozen { base, .. } => {
                base.propagation_vector()
            }
            Repr::Coulomb { .. } | Repr::Static { .. } => None,
            Repr::Custom { k, .. } => *k,
        }
    }

    /// The radiation-gauge potential that produces the same fields, when it is
    /// known from how this field was constructed.
    pub fn reference_potential(&self) -> Option<PotentialField> {
        match &*self.0 {
            Repr::PlaneWave(_) | Repr::Coulomb { .. } | Repr::Static { .. } => Some(self.clone()),
            Repr::Nonphysical(pw) => Some(PotentialField::from(*pw)),
            Repr::GaugeTransformed { base, .. } => base.reference_potential(),
            Repr::Superposition(parts) => {
                let refs = parts
                    .iter()
                    .map(|p| p.reference_potential())
                    .collect::<Option<Vec<_>>>()?;
                superpose(refs).ok()
            }
            Repr::DipoleFrozen { base, anchor } => {
                Some(dipole_freeze(&base.reference_potential()?, *anchor))
            }
            Repr::Custom { .. } => None,
        }
    }

    /// Spatial distance from `x` to the nearest point where evaluation is singular.
    pub fn singularity_distance(&self, x: FourVector) -> Option<f64> {
        match &*self.0 {
            Repr::Coulomb { .. } => Some(x.spatial().norm()),
            Repr::Superposition(parts) => parts
                .iter()
                .filter_map(|p| p.singularity_distance(x))
                .reduce(f64::min),
            Repr::GaugeTransformed { base, .. } => base.singularity_distance(x),
            Repr::DipoleFrozen { base, anchor } => {
                base.singularity_distance(FourVector::from_parts(x.t, *anchor))
            }
            _ => None,
        }
    }

    /// Closed-form Jacobian, where one exists for this kind.
    pub fn analytic_jacobian(&self, x: FourVector) -> Option<Result<Jacobian>> {
        match &*self.0 {
            Repr::PlaneWave(pw) => {
                let a1 = pw.phase_derivative(phase(pw.k, x));
                Some(Ok(Jacobian::outer(a1, pw.k.lowered())))
            }
            Repr::Nonphysical(pw) => {
                let phi = phase(pw.k, x);
                let a1 = pw.phase_derivative(phi);
                let a2 = pw.second_phase_derivative(phi);
                let grad_s = a1.lowered() + pw.k.lowered() * minkowski_dot(x, a2);
                Some(Ok(Jacobian::outer(-pw.k, grad_s)))
            }
            Repr::Coulomb { charge, r_min } => {
                let r = x.spatial();
                let rn = r.norm();
                if rn < *r_min {
                    return Some(Err(Error::Singularity {
                        distance: rn,
                        limit: *r_min,
                    }));
                }
                let g = r * (-charge / (rn * rn * rn));
                let mut j = Jacobian::default();
                j.0[0][1] = g.x;
                j.0[0][2] = g.y;
                j.0[0][3] = g.z;
                Some(Ok(j))
            }
            Repr::Static { e, b, .. } => {
                let mut j = [[0.0; 4]; 4];
                j[0][1] = -e.x;
                j[0][2] = -e.y;
                j[0][3] = -e.z;
                j[1][2] = -0.5 * b.z;
                j[1][3] = 0.5 * b.y;
                j[2][1] = 0.5 * b.z;
                j[2][3] = -0.5 * b.x;
                j[3][1] = -0.5 * b.y;
                j[3][2] = 0.5 * b.x;
                Some(Ok(Jacobian(j)))
            }
            Repr::Superposition(parts) => {
                let mut acc = Jacobian::default();
                for p in parts {
                    match p.analytic_jacobian(x)? {
                        Ok(j) => acc = acc.add(&j),
                        Err(e) => return Some(Err(e)),
                    }
                }
                Some(Ok(acc))
            }
            Repr::DipoleFrozen { base, anchor } => {
                let inner = base.analytic_jacobian(FourVector::from_parts(x.t, *anchor))?;
                Some(inner.map(|j| {
                    let mut out = Jacobian::default();
                    for mu in 0..4 {
                        out.0[mu][0] = j.0[mu][0];
                    }
                    out
                }))
            }
            Repr::GaugeTransformed { .. } | Repr::Custom { .. } => None,
        }
    }

    /// Short human-readable description used as trajectory provenance.
    pub fn describe(&self) -> String {
        match &*self.0 {
            Repr::PlaneWave(pw) | Repr::Nonphysical(pw) => format!(
                "{}(A_c={}, k={}, {:?}{})",
                self.kind(),
                pw.amplitude,
                pw.k,
                pw.waveform,
                pw.ramp
                    .map(|r| format!(", ramp={} cycles", r.cycles))
                    .unwrap_or_default()
            ),
            Repr::Coulomb { charge, .. } => format!("coulomb(q={charge})"),
            Repr::Superposition(parts) => format!(
                "superposition[{}]",
                parts
                    .iter()
                    .map(|p| p.describe())
                    .collect::<Vec<_>>()
                    .join(" + ")
            ),
            Repr::GaugeTransformed { base, gauge } => {
                format!(
                    "gauge_transformed({}, {})",
                    base.describe(),
                    gauge.describe()
                )
            }
            Repr::DipoleFrozen { base, anchor } => format!(
                "dipole_frozen({}, anchor=({}, {}, {}))",
                base.describe(),
                anchor.x,
                anchor.y,
                anchor.z
            ),
            Repr::Static { offset, e, b } => format!(
                "static(offset={offset}, E=({}, {}, {}), B=({}, {}, {}))",
                e.x, e.y, e.z, b.x, b.y, b.z
            ),
            Repr::Custom { label, .. } => format!("custom({label})"),
        }
    }
}

pub fn plane_wave(
    amplitude: FourVector,
    k: FourVector,
    waveform: Waveform,
) -> Result<PotentialField> {
    PlaneWave::new(amplitude, k, waveform).map(PotentialField::from)
}

/// The potential `-k^mu (x^nu A'_nu)` obtained from a plane wave by the gauge
/// function `-A^mu(phi) x_mu`. It yields the plane wave's E and B but is
/// lightlike and depends on `x` beyond the phase.
pub fn nonphysical_gauge(base: &PotentialField) -> Result<PotentialField> {
    let pw = base
        .as_plane_wave()
        .ok_or(Error::NotPlaneWave("nonphysical gauge"))?;
    Ok(PotentialField::wrap(Repr::Nonphysical(*pw)))
}

/// Coulomb potential `(q/r, 0)` with the default evaluation floor.
pub fn coulomb(charge: f64) -> Result<PotentialField> {
    coulomb_with_floor(charge, DEFAULT_COULOMB_FLOOR)
}

pub fn coulomb_with_floor(charge: f64, r_min: f64) -> Result<PotentialField> {
    if charge == 0.0 || !charge.is_finite() {
        return Err(Error::InvalidParameter {
            name: "charge",
            reason: format!("must be nonzero and finite, got {charge}"),
        });
    }
    if !(r_min > 0.0 && r_min.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "r_min",
            reason: format!("must be positive, got {r_min}"),
        });
    }
    Ok(PotentialField::wrap(Repr::Coulomb { charge, r_min }))
}

pub fn superpose(parts: Vec<PotentialField>) -> Result<PotentialField> {
    if parts.is_empty() {
        return Err(Error::EmptySuperposition);
    }
    Ok(PotentialField::wrap(Repr::Superposition(parts)))
}

/// Freezes the spatial dependence of `field` at `anchor`: the result at
/// `(x^0, r)` equals `field` at `(x^0, anchor)`.
pub fn dipole_freeze(field: &PotentialField, anchor: Vec3) -> PotentialField {
    PotentialField::wrap(Repr::DipoleFrozen {
        base: field.clone(),
        anchor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    #[default]
    FiniteDifference,
    /// Use the closed-form Jacobian when the field has one, else finite differences.
    PreferAnalytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldOptions {
    /// Stencil step; `None` selects [`diff::default_step`].
    pub step: Option<f64>,
    pub mode: DerivativeMode,
}

impl FieldOptions {
    pub fn analytic() -> Self {
        FieldOptions {
            step: None,
            mode: DerivativeMode::PreferAnalytic,
        }
    }

    pub fn with_step(step: f64) -> Self {
        FieldOptions {
            step: Some(step),
            mode: DerivativeMode::FiniteDifference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub e: Vec3,
    pub b: Vec3,
    pub at: FourVector,
}

/// Fourth-order central-difference Jacobian of the potential at `x`.
pub fn fd_jacobian(field: &PotentialField, x: FourVector, h: f64) -> Result<Jacobian> {
    let mut j = Jacobian::default();
    for nu in 0..4 {
        let e = FourVector::basis(nu);
        let col = diff::central4(|s| field.evaluate(x + e * s), h)?;
        for mu in 0..4 {
            j.0[mu][nu] = col[mu];
        }
    }
    Ok(j)
}

/// Jacobian of the potential at `x` according to `opts`.
pub fn jacobian(field: &PotentialField, x: FourVector, opts: FieldOptions) -> Result<Jacobian> {
    let h = opts.step.unwrap_or_else(|| diff::default_step(x));
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "step",
            reason: format!("must be positive, got {h}"),
        });
    }
    if opts.mode == DerivativeMode::PreferAnalytic {
        if let Some(j) = field.analytic_jacobian(x) {
            return j;
        }
    }
    if let Some(d) = field.singularity_distance(x) {
        if d < 2.0 * h {
            return Err(Error::Singularity {
                distance: d,
                limit: 2.0 * h,
            });
        }
    }
    fd_jacobian(field, x, h)
}

pub fn evaluate_fields(
    field: &PotentialField,
    x: FourVector,
    opts: FieldOptions,
) -> Result<FieldSample> {
    let j = jacobian(field, x, opts)?;
    Ok(FieldSample {
        e: j.electric(),
        b: j.magnetic(),
        at: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

    fn kz() -> FourVector {
        FourVector::new(1., 0., 0., 1.)
    }

    fn linear_x(w: Waveform) -> PotentialField {
        plane_wave(FourVector::new(0., 1., 0., 0.), kz(), w).unwrap()
    }

    fn close(a: FourVector, b: FourVector, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    fn random_events(n: usize, seed: u64) -> Vec<FourVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                FourVector::new(
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                )
            })
            .collect()
    }

    #[test]
    fn plane_wave_examples() {
        let p = linear_x(Waveform::Cos);
        assert!(close(
            p.evaluate(FourVector::ZERO).unwrap(),
            FourVector::new(0., 1., 0., 0.),
            0.0
        ));
        let quarter = FourVector::new(HALF_PI, 0., 0., 0.);
        assert!(close(p.evaluate(quarter).unwrap(), FourVector::ZERO, 1e-16));
        let s = plane_wave(FourVector::new(0., 0., 1., 0.), kz(), Waveform::Sin).unwrap();
        assert!(close(
            s.evaluate(quarter).unwrap(),
            FourVector::new(0., 0., 1., 0.),
            0.0
        ));
    }

    #[test]
    fn plane_wave_rejects_longitudinal_amplitude() {
        let err = plane_wave(FourVector::new(1., 0., 0., 0.), kz(), Waveform::Cos).unwrap_err();
        assert!(matches!(err, Error::NotTransverse { residual } if residual == 1.0));
        assert!(matches!(
            plane_wave(
                FourVector::new(0., 1., 0., 0.),
                FourVector::new(1., 0., 0., 0.5),
                Waveform::Cos
            ),
            Err(Error::NotLightlike { .. })
        ));
    }

    #[test]
    fn nonphysical_examples() {
        let np = nonphysical_gauge(&linear_x(Waveform::Cos)).unwrap();
        // phi = 0: A' = -A_c sin 0 = 0
        assert!(close(
            np.evaluate(FourVector::new(0., 1., 0., 0.)).unwrap(),
            FourVector::ZERO,
            0.0
        ));
        // phi = pi/2: A' = (0,-1,0,0), x.A' = -(1)(-1) = 1, result -k
        let v = np.evaluate(FourVector::new(HALF_PI, 1., 0., 0.)).unwrap();
        assert!(close(v, FourVector::new(-1., 0., 0., -1.), 1e-15), "{v}");
        for x in random_events(50, 3) {
            assert!(np.evaluate(x).unwrap().norm_sq().abs() < 1e-10);
        }
        assert!(matches!(
            nonphysical_gauge(&coulomb(1.).unwrap()),
            Err(Error::NotPlaneWave(_))
        ));
    }

    #[test]
    fn coulomb_examples() {
        let c = coulomb(1.).unwrap();
        assert_eq!(
            c.evaluate(FourVector::new(7., 0., 0., 2.)).unwrap(),
            FourVector::new(0.5, 0., 0., 0.)
        );
        let m = coulomb(-1.).unwrap();
        assert_eq!(
            m.evaluate(FourVector::new(0., 1., 0., 0.)).unwrap(),
            FourVector::new(-1., 0., 0., 0.)
        );
        assert!(matches!(
            c.evaluate(FourVector::ZERO),
            Err(Error::Singularity { .. })
        ));
        assert!(coulomb(0.).is_err());
    }

    #[test]
    fn superposition_examples() {
        let pw = linear_x(Waveform::Cos);
        let sum = superpose(vec![pw.clone(), coulomb(1.).unwrap()]).unwrap();
        let x = FourVector::new(0., 0., 0., 2.);
        let v = sum.evaluate(x).unwrap();
        // phi = 0 - 2 = -2
        assert!(close(v, FourVector::new(0.5, (-2f64).cos(), 0., 0.), 1e-15));

        let single = superpose(vec![pw.clone()]).unwrap();
        let neg = PotentialField::from(pw.as_plane_wave().unwrap().scaled(-1.0));
        let cancel = superpose(vec![pw.clone(), neg]).unwrap();
        for x in random_events(10, 11) {
            assert_eq!(single.evaluate(x).unwrap(), pw.evaluate(x).unwrap());
            assert_eq!(cancel.evaluate(x).unwrap(), FourVector::ZERO);
        }
        assert!(matches!(superpose(vec![]), Err(Error::EmptySuperposition)));
    }

    #[test]
    fn plane_wave_fields_at_quarter_phase() {
        let p = linear_x(Waveform::Cos);
        let x = FourVector::new(HALF_PI, 0., 0., 0.);
        let exact = evaluate_fields(&p, x, FieldOptions::analytic()).unwrap();
        assert!((exact.e - Vec3::new(1., 0., 0.)).max_abs() < 1e-15);
        assert!((exact.b - Vec3::new(0., 1., 0.)).max_abs() < 1e-15);
        let fd = evaluate_fields(&p, x, FieldOptions::with_step(1e-4)).unwrap();
        assert!((fd.e - exact.e).max_abs() < 1e-6 && (fd.b - exact.b).max_abs() < 1e-6);
    }

    #[test]
    fn coulomb_field_is_inverse_square() {
        let c = coulomb(1.).unwrap();
        let x = FourVector::new(0., 0., 0., 2.);
        for opts in [FieldOptions::default(), FieldOptions::analytic()] {
            let s = evaluate_fields(&c, x, opts).unwrap();
            assert!(
                (s.e - Vec3::new(0., 0., 0.25)).max_abs() < 1e-10,
                "{:?}",
                s.e
            );
            assert!(s.b.max_abs() < 1e-12);
        }
        let near = FourVector::new(0., 0., 0., 1e-5);
        assert!(matches!(
            evaluate_fields(&c, near, FieldOptions::with_step(1e-4)),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn constant_potential_has_no_fields() {
        let f = PotentialField::constant(FourVector::new(3., -1., 2., 5.));
        let s =
            evaluate_fields(&f, FourVector::new(1., 2., 3., 4.), FieldOptions::default()).unwrap();
        assert!(s.e.max_abs() < 1e-12 && s.b.max_abs() < 1e-12);
    }

    #[test]
    fn uniform_static_fields_recovered() {
        let e = Vec3::new(0.3, -0.2, 1.1);
        let b = Vec3::new(-0.7, 0.4, 2.0);
        let f = PotentialField::uniform_static(FourVector::ZERO, e, b);
        let x = FourVector::new(0.5, 1.0, -2.0, 3.0);
        for opts in [FieldOptions::default(), FieldOptions::analytic()] {
            let s = evaluate_fields(&f, x, opts).unwrap();
            assert!((s.e - e).max_abs() < 1e-10 && (s.b - b).max_abs() < 1e-10);
        }
    }

    #[test]
    fn analytic_jacobians_match_finite_differences() {
        let base = PlaneWave::new(FourVector::new(0.3, 0.8, -0.5, 0.3), kz(), Waveform::Sin)
            .unwrap()
            .with_ramp(Ramp::new(1.0).unwrap());
        let fields = [
            PotentialField::from(base),
            nonphysical_gauge(&PotentialField::from(base)).unwrap(),
            nonphysical_gauge(&linear_x(Waveform::Cos)).unwrap(),
            coulomb(2.0).unwrap(),
            dipole_freeze(&linear_x(Waveform::Cos), Vec3::new(0.5, 0., 1.0)),
            PotentialField::circular(1.5, kz(), None).unwrap(),
        ];
        for f in &fields {
            for x in random_events(20, 5) {
                let a = f.analytic_jacobian(x).unwrap().unwrap();
                let n = fd_jacobian(f, x, diff::default_step(x)).unwrap();
                for mu in 0..4 {
                    for nu in 0..4 {
                        let d = (a.0[mu][nu] - n.0[mu][nu]).abs();
                        assert!(
                            d < 1e-6,
                            "{} J[{mu}][{nu}] {} vs {}",
                            f.describe(),
                            a.0[mu][nu],
                            n.0[mu][nu]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn plane_wave_fields_are_null() {
        let fields = [
            linear_x(Waveform::Cos),
            PotentialField::circular(1.0, kz(), None).unwrap(),
        ];
        for f in &fields {
            for x in random_events(50, 9) {
                let s = evaluate_fields(f, x, FieldOptions::default()).unwrap();
                assert!((s.e.norm() - s.b.norm()).abs() < 1e-8);
                assert!(s.e.dot(s.b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn nonphysical_gauge_reproduces_plane_wave_fields() {
        let pw = linear_x(Waveform::Cos);
        let np = nonphysical_gauge(&pw).unwrap();
        for x in random_events(100, 21) {
            let a = evaluate_fields(&pw, x, FieldOptions::default()).unwrap();
            let b = evaluate_fields(&np, x, FieldOptions::default()).unwrap();
            assert!((a.e - b.e).max_abs() < 1e-6 && (a.b - b.b).max_abs() < 1e-6);
        }
    }

    #[test]
    fn transversality_holds_everywhere() {
        let pw = linear_x(Waveform::Sin);
        for x in random_events(50, 1) {
            assert!(minkowski_dot(kz(), pw.evaluate(x).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn dipole_freeze_removes_magnetic_field() {
        let pw = linear_x(Waveform::Cos);
        let frozen = dipole_freeze(&pw, Vec3::ZERO);
        for x in random_events(30, 4) {
            let s = evaluate_fields(&frozen, x, FieldOptions::default()).unwrap();
            assert!(s.b.max_abs() < 1e-10);
            // E equals the travelling wave's E at the anchor
            let at_anchor = FourVector::new(x.t, 0., 0., 0.);
            let full = evaluate_fields(&pw, at_anchor, FieldOptions::default()).unwrap();
            assert!((s.e - full.e).max_abs() < 1e-8);
            let expected = Vec3::new(x.t.sin(), 0., 0.);
            assert!((s.e - expected).max_abs() < 1e-8);
        }
    }

    #[test]
    fn ramp_is_smooth_and_saturates() {
        let r = Ramp::new(2.0).unwrap();
        assert_eq!(r.derivatives(-1.0), [0.0, 0.0, 0.0]);
        assert_eq!(r.derivatives(r.end_phase() + 0.1), [1.0, 0.0, 0.0]);
        let mid = r.derivatives(r.end_phase() / 2.0);
        assert!((mid[0] - 0.5).abs() < 1e-15);
        assert!(Ramp::new(0.0).is_err());
    }
}
