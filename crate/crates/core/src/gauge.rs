//! Gauge functions and the transformation `A^mu -> A^mu + d^mu Lambda`.
//!
//! Gradients are contravariant, `d^mu = (d/dx^0, -grad)`, which makes the
//! single 4-vector rule equal to `phi + (1/c) dLambda/dt` and `A - grad Lambda`.

use std::fmt;
use std::sync::Arc;

use crate::diff;
use crate::error::{Error, Result};
use crate::minkowski::{classify, minkowski_dot, phase, CausalClass, FourVector};
use crate::potential::{PlaneWave, PotentialField};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type EventScalarFn = Arc<dyn Fn(FourVector) -> f64 + Send + Sync>;
type EventVectorFn = Arc<dyn Fn(FourVector) -> FourVector + Send + Sync>;

/// Quadrature tolerance for profiles without a closed-form antiderivative.
const QUADRATURE_TOLERANCE: f64 = 1e-13;

/// A scalar function of the phase, used as `Lambda'(phi)` of a light-cone gauge.
#[derive(Clone)]
pub enum PhaseProfile {
    Zero,
    Constant(f64),
    Cos {
        amplitude: f64,
    },
    Sin {
        amplitude: f64,
    },
    Custom {
        label: String,
        f: ScalarFn,
        /// Antiderivative with `F(0) = 0`; integrated numerically when absent.
        antiderivative: Option<ScalarFn>,
    },
}

impl fmt::Debug for PhaseProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseProfile::Zero => write!(f, "0"),
            PhaseProfile::Constant(c) => write!(f, "{c}"),
            PhaseProfile::Cos { amplitude } => write!(f, "{amplitude}*cos"),
            PhaseProfile::Sin { amplitude } => write!(f, "{amplitude}*sin"),
            PhaseProfile::Custom { label, .. } => write!(f, "{label}"),
        }
    }
}

impl PhaseProfile {
    pub fn custom<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PhaseProfile::Custom {
            label: label.into(),
            f: Arc::new(f),
            antiderivative: None,
        }
    }

    pub fn value(&self, phi: f64) -> f64 {
        match self {
            PhaseProfile::Zero => 0.0,
            PhaseProfile::Constant(c) => *c,
            PhaseProfile::Cos { amplitude } => amplitude * phi.cos(),
            PhaseProfile::Sin { amplitude } => amplitude * phi.sin(),
            PhaseProfile::Custom { f, .. } => f(phi),
        }
    }

    /// `int_0^phi value`.
    pub fn antiderivative(&self, phi: f64) -> f64 {
        match self {
            PhaseProfile::Zero => 0.0,
            PhaseProfile::Constant(c) => c * phi,
            PhaseProfile::Cos { amplitude } => amplitude * phi.sin(),
            PhaseProfile::Sin { amplitude } => amplitude * (1.0 - phi.cos()),
            PhaseProfile::Custom {
                f, antiderivative, ..
            } => match antiderivative {
                Some(a) => a(phi),
                None => diff::adaptive_simpson(&|p| f(p), 0.0, phi, QUADRATURE_TOLERANCE),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaugeKind {
    Constant,
    LightCone,
    PotentialContraction,
    Composite,
    Custom,
}

enum Repr {
    Constant(f64),
    LightCone {
        profile: PhaseProfile,
        k: FourVector,
    },
    PotentialContraction(PlaneWave),
    Sum(Vec<GaugeFunction>),
    Custom {
        label: String,
        value: EventScalarFn,
        gradient: Option<EventVectorFn>,
    },
}

/// A generating function `Lambda(x)` together with its gradient `d^mu Lambda`.
#[derive(Clone)]
pub struct GaugeFunction(Arc<Repr>);

impl fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaugeFunction({})", self.describe())
    }
}

impl GaugeFunction {
    fn wrap(r: Repr) -> Self {
        GaugeFunction(Arc::new(r))
    }

    pub fn constant(value: f64) -> Self {
        GaugeFunction::wrap(Repr::Constant(value))
    }

    /// Arbitrary `Lambda`; the gradient falls back to finite differences.
    pub fn custom<F>(label: impl Into<String>, value: F) -> Self
    where
        F: Fn(FourVector) -> f64 + Send + Sync + 'static,
    {
        GaugeFunction::wrap(Repr::Custom {
            label: label.into(),
            value: Arc::new(value),
            gradient: None,
        })
    }

    /// Arbitrary `Lambda` with a caller-supplied contravariant gradient.
    pub fn custom_with_gradient<F, G>(label: impl Into<String>, value: F, gradient: G) -> Self
    where
        F: Fn(FourVector) -> f64 + Send + Sync + 'static,
        G: Fn(FourVector) -> FourVector + Send + Sync + 'static,
    {
        GaugeFunction::wrap(Repr::Custom {
            label: label.into(),
            value: Arc::new(value),
            gradient: Some(Arc::new(gradient)),
        })
    }

    pub fn kind(&self) -> GaugeKind {
        match &*self.0 {
            Repr::Constant(_) => GaugeKind::Constant,
            Repr::LightCone { .. } => GaugeKind::LightCone,
            Repr::PotentialContraction(_) => GaugeKind::PotentialContraction,
            Repr::Sum(_) => GaugeKind::Composite,
            Repr::Custom { .. } => GaugeKind::Custom,
        }
    }

    pub fn value(&self, x: FourVector) -> f64 {
        match &*self.0 {
            Repr::Constant(v) => *v,
            Repr::LightCone { profile, k } => profile.antiderivative(phase(*k, x)),
            Repr::PotentialContraction(pw) => -minkowski_dot(pw.evaluate(x), x),
            Repr::Sum(parts) => parts.iter().map(|g| g.value(x)).sum(),
            Repr::Custom { value, .. } => value(x),
        }
    }

    /// Closed-form gradient, when known.
    pub fn analytic_gradient(&self, x: FourVector) -> Option<FourVector> {
        match &*self.0 {
            Repr::Constant(_) => Some(FourVector::ZERO),
            Repr::LightCone { profile, k } => Some(*k * profile.value(phase(*k, x))),
            Repr::PotentialContraction(pw) => {
                let phi = phase(pw.k(), x);
                Some(-(pw.at_phase(phi) + pw.k() * minkowski_dot(x, pw.phase_derivative(phi))))
            }
            Repr::Sum(parts) => parts.iter().try_fold(FourVector::ZERO, |acc, g| {
                Some(acc + g.analytic_gradient(x)?)
            }),
            Repr::Custom { gradient, .. } => gradient.as_ref().map(|g| g(x)),
        }
    }

    /// Fourth-order finite-difference gradient `(dL/dx^0, -dL/dx^i)`.
    pub fn fd_gradient(&self, x: FourVector, h: f64) -> FourVector {
        let mut out = [0.0; 4];
        for (mu, slot) in out.iter_mut().enumerate() {
            let e = FourVector::basis(mu);
            let d: f64 = diff::central4(
                |s| Ok::<_, std::convert::Infallible>(self.value(x + e * s)),
                h,
            )
            .unwrap_or_else(|e| match e {});
            *slot = if mu == 0 { d } else { -d };
        }
        out.into()
    }

    /// `d^mu Lambda`, analytic where available.
    pub fn gradient(&self, x: FourVector) -> FourVector {
        match self.analytic_gradient(x) {
            Some(g) => g,
            None => self.fd_gradient(x, diff::default_step(x)),
        }
    }

    /// Relative mismatch between [`Self::gradient`] and a finite-difference
    /// gradient of [`Self::value`].
    pub fn gradient_consistency(&self, x: FourVector, h: f64) -> f64 {
        let g = self.gradient(x);
        let n = self.fd_gradient(x, h);
        (g - n).max_abs() / g.max_abs().max(1.0)
    }

    pub fn describe(&self) -> String {
        match &*self.0 {
            Repr::Constant(v) => format!("constant({v})"),
            Repr::LightCone { profile, k } => format!("light_cone(L'={profile:?}, k={k})"),
            Repr::PotentialContraction(_) => "potential_contraction(-A.x)".to_string(),
            Repr::Sum(parts) => parts
                .iter()
                .map(|g| g.describe())
                .collect::<Vec<_>>()
                .join(" + "),
            Repr::Custom { label, .. } => format!("custom({label})"),
        }
    }
}

impl std::ops::Add for GaugeFunction {
    type Output = GaugeFunction;
    fn add(self, rhs: GaugeFunction) -> GaugeFunction {
        GaugeFunction::wrap(Repr::Sum(vec![self, rhs]))
    }
}

/// `A~ = A + d^mu Lambda`.
pub fn apply_gauge(field: &PotentialField, gauge: &GaugeFunction) -> PotentialField {
    PotentialField::gauge_transformed(field.clone(), gauge.clone())
}

/// `Lambda(phi)` with `d^mu Lambda = k^mu Lambda'(phi)`.
pub fn light_cone_gauge(lambda_prime: PhaseProfile, k: FourVector) -> Result<GaugeFunction> {
    if !k.is_finite() || k.t <= 0.0 || classify(k, 1e-10) != CausalClass::Lightlike {
        return Err(Error::NotLightlike {
            k,
            norm: k.norm_sq(),
        });
    }
    Ok(GaugeFunction::wrap(Repr::LightCone {
        profile: lambda_prime,
        k,
    }))
}

/// `Lambda = -A^mu(phi) x_mu` for a plane wave `A`.
pub fn lambda_from_potential(field: &PotentialField) -> Result<GaugeFunction> {
    let pw = field
        .as_plane_wave()
        .ok_or(Error::NotPlaneWave("potential-contraction gauge"))?;
    Ok(GaugeFunction::wrap(Repr::PotentialContraction(*pw)))
}

/// Second-order finite-difference d'Alembertian `d^mu d_mu Lambda` at `x`.
pub fn wave_equation_residual(gauge: &GaugeFunction, x: FourVector, h: f64) -> f64 {
    (0..4)
        .map(|mu| {
            let e = FourVector::basis(mu);
            let d2 = diff::central2_second(|s| gauge.value(x + e * s), h);
            if mu == 0 {
                d2
            } else {
                -d2
            }
        })
        .sum()
}
