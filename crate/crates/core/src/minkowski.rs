//! Flat-spacetime vector algebra under the (+,-,-,-) metric.
//!
//! A [`FourVector`] is always contravariant. It stands in for events
//! `x = (ct, r)`, potentials `A = (phi, A)`, propagation vectors
//! `k = (omega/c, k)` and momenta alike; the units follow from context.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Tolerance on `|d| - 1` accepted for propagation directions.
pub const UNIT_DIRECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Returns the unit vector along `self`, or `None` for a zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    /// Two unit vectors completing `self` (assumed unit) to a right-handed
    /// orthonormal frame `(e1, e2, self)`.
    pub fn transverse_basis(self) -> (Vec3, Vec3) {
        let helper = if self.x.abs() <= self.y.abs() && self.x.abs() <= self.z.abs() {
            Vec3::new(1.0, 0.0, 0.0)
        } else if self.y.abs() <= self.z.abs() {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        let e1 = (helper - self * helper.dot(self))
            .normalized()
            .expect("helper axis is never parallel to a unit vector");
        let e2 = self.cross(e1);
        (e1, e2)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector {
        t: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    pub fn from_parts(t: f64, spatial: Vec3) -> Self {
        FourVector::new(t, spatial.x, spatial.y, spatial.z)
    }

    /// Unit vector along coordinate axis `mu` (0 = time).
    pub fn basis(mu: usize) -> Self {
        let mut a = [0.0; 4];
        a[mu] = 1.0;
        a.into()
    }

    pub fn spatial(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Minkowski scalar product `a^mu b_mu`.
    pub fn dot(self, other: FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    /// `v^mu v_mu`.
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn euclid_norm_sq(self) -> f64 {
        self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.t.abs().max(self.spatial().max_abs())
    }

    pub fn is_finite(self) -> bool {
        self.t.is_finite() && self.spatial().is_finite()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    /// The covariant components `v_mu = (v^0, -v)`.
    pub fn lowered(self) -> FourVector {
        FourVector::new(self.t, -self.x, -self.y, -self.z)
    }

    pub fn classify(self, tol: f64) -> CausalClass {
        classify(self, tol)
    }
}

impl From<[f64; 4]> for FourVector {
    fn from(a: [f64; 4]) -> Self {
        FourVector::new(a[0], a[1], a[2], a[3])
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, mu: usize) -> &f64 {
        match mu {
            0 => &self.t,
            1 => &self.x,
            2 => &self.y,
            3 => &self.z,
            _ => panic!("four-vector index {mu} out of range"),
        }
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        v * self
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, o: FourVector) {
        *self = *self + o;
    }
}

impl SubAssign for FourVector {
    fn sub_assign(&mut self, o: FourVector) {
        *self = *self - o;
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.t, self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalClass {
    Lightlike,
    Spacelike,
    Timelike,
}

impl fmt::Display for CausalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CausalClass::Lightlike => "lightlike",
            CausalClass::Spacelike => "spacelike",
            CausalClass::Timelike => "timelike",
        })
    }
}

pub fn minkowski_dot(a: FourVector, b: FourVector) -> f64 {
    a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z
}

/// Phase `k^mu x_mu = omega t - k.r` of event `x`.
pub fn phase(k: FourVector, x: FourVector) -> f64 {
    minkowski_dot(k, x)
}

/// Builds `k = (omega/c, (omega/c) d)` for a unit direction `d`.
pub fn make_propagation_vector(omega: f64, direction: Vec3, c: f64) -> Result<FourVector> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "omega",
            reason: format!("must be positive and finite, got {omega}"),
        });
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: format!("must be positive and finite, got {c}"),
        });
    }
    let norm = direction.norm();
    if !((norm - 1.0).abs() <= UNIT_DIRECTION_TOLERANCE) {
        return Err(Error::NonUnitDirection { norm });
    }
    let k = omega / c;
    Ok(FourVector::from_parts(k, direction * k))
}

/// Causal class of `v`; the lightlike band is `tol * max(1, |v|^2_euclid)`.
pub fn classify(v: FourVector, tol: f64) -> CausalClass {
    let n = v.norm_sq();
    if n.abs() <= tol * v.euclid_norm_sq().max(1.0) {
        CausalClass::Lightlike
    } else if n < 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fv(a: [f64; 4]) -> FourVector {
        a.into()
    }

    #[test]
    fn dot_examples() {
        assert_eq!(
            minkowski_dot(fv([1., 0., 0., 1.]), fv([1., 0., 0., 1.])),
            0.0
        );
        assert_eq!(
            minkowski_dot(fv([1., 0., 0., 0.]), fv([1., 0., 0., 0.])),
            1.0
        );
        assert_eq!(
            minkowski_dot(fv([0., 1., 0., 0.]), fv([0., 1., 0., 0.])),
            -1.0
        );
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase(fv([1., 0., 0., 1.]), fv([2., 0., 0., 1.])), 1.0);
        assert_eq!(phase(fv([1., 0., 0., 1.]), FourVector::ZERO), 0.0);
        assert_eq!(phase(fv([2., 0., 0., 2.]), fv([3., 5., 7., 1.])), 4.0);
    }

    #[test]
    fn propagation_vector_examples() {
        let z = Vec3::new(0., 0., 1.);
        assert_eq!(
            make_propagation_vector(1., z, 1.).unwrap(),
            fv([1., 0., 0., 1.])
        );
        assert_eq!(
            make_propagation_vector(2., Vec3::new(1., 0., 0.), 1.).unwrap(),
            fv([2., 2., 0., 0.])
        );
        assert_eq!(
            make_propagation_vector(3., z, 2.).unwrap(),
            fv([1.5, 0., 0., 1.5])
        );
    }

    #[test]
    fn propagation_vector_rejects_bad_input() {
        assert!(matches!(
            make_propagation_vector(1., Vec3::new(0., 0., 2.), 1.),
            Err(Error::NonUnitDirection { .. })
        ));
        assert!(make_propagation_vector(0., Vec3::new(0., 0., 1.), 1.).is_err());
        assert!(make_propagation_vector(1., Vec3::new(0., 0., 1.), -1.).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(fv([1., 0., 0., 1.]), 1e-9), CausalClass::Lightlike);
        assert_eq!(classify(fv([0., 1., 0., 0.]), 1e-9), CausalClass::Spacelike);
        assert_eq!(classify(fv([1., 0., 0., 0.]), 1e-9), CausalClass::Timelike);
        // zero is on the light cone
        assert_eq!(classify(FourVector::ZERO, 1e-9), CausalClass::Lightlike);
    }

    #[test]
    fn transverse_basis_is_orthonormal() {
        for d in [
            Vec3::new(0., 0., 1.),
            Vec3::new(1., 0., 0.),
            Vec3::new(0.6, 0., 0.8),
            Vec3::new(1., 2., 3.).normalized().unwrap(),
        ] {
            let (e1, e2) = d.transverse_basis();
            assert!((e1.norm() - 1.0).abs() < 1e-14);
            assert!((e2.norm() - 1.0).abs() < 1e-14);
            assert!(e1.dot(d).abs() < 1e-14 && e2.dot(d).abs() < 1e-14 && e1.dot(e2).abs() < 1e-14);
            assert!((e1.cross(e2) - d).norm() < 1e-14);
        }
        let (e1, e2) = Vec3::new(0., 0., 1.).transverse_basis();
        assert_eq!((e1, e2), (Vec3::new(1., 0., 0.), Vec3::new(0., 1., 0.)));
    }

    fn arb_vec() -> impl Strategy<Value = FourVector> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(FourVector::from)
    }

    proptest! {
        #[test]
        fn dot_is_bilinear(a in arb_vec(), b in arb_vec(), c in arb_vec(),
                           alpha in -5.0f64..5.0, beta in -5.0f64..5.0) {
            let lhs = minkowski_dot(a * alpha + b * beta, c);
            let rhs = alpha * minkowski_dot(a, c) + beta * minkowski_dot(b, c);
            let scale = (alpha.abs() * a.euclid_norm() + beta.abs() * b.euclid_norm()) * c.euclid_norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn dot_is_symmetric(a in arb_vec(), b in arb_vec()) {
            prop_assert_eq!(minkowski_dot(a, b), minkowski_dot(b, a));
        }

        #[test]
        fn propagation_vectors_are_lightlike(omega in 1e-3f64..1e3, c in 1e-2f64..1e2,
                                             d in prop::array::uniform3(-1.0f64..1.0)) {
            prop_assume!(Vec3::from(d).norm() > 1e-3);
            let dir = Vec3::from(d).normalized().unwrap();
            let k = make_propagation_vector(omega, dir, c).unwrap();
            prop_assert_eq!(classify(k, 1e-12), CausalClass::Lightlike);
        }
    }
}
