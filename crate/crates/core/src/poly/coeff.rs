use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Which coefficient domain a polynomial lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    ExactRational,
    ComplexFloat,
}

/// Coefficient ring of a [`SparsePoly`](super::SparsePoly).
///
/// Exact domains drop terms whose coefficient becomes zero; the float domain
/// keeps every term until [`SparsePoly::normalize`](super::SparsePoly::normalize)
/// is called explicitly.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + 'static {
    const DOMAIN: Domain;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn div_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Nearest complex double; `None` when the value is out of range.
    fn to_c64(&self) -> Option<Complex64>;

    /// Whether an arithmetic result equal to zero should be removed from the
    /// term map.
    fn prunes_zero(&self) -> bool {
        Self::DOMAIN == Domain::ExactRational && self.is_zero()
    }
}

impl Coeff for Rational {
    const DOMAIN: Domain = Domain::ExactRational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn to_c64(&self) -> Option<Complex64> {
        rational_to_f64(self).map(|re| Complex64::new(re, 0.0))
    }
}

impl Coeff for Complex64 {
    const DOMAIN: Domain = Domain::ComplexFloat;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn to_c64(&self) -> Option<Complex64> {
        Some(*self)
    }
}

/// Nearest double to an exact rational, or `None` if it overflows.
pub fn rational_to_f64(q: &Rational) -> Option<f64> {
    if Zero::is_zero(q) {
        return Some(0.0);
    }
    let v = q.to_f64()?;
    if v.is_finite() && (v != 0.0 || q.abs() < <BigRational as One>::one()) {
        Some(v)
    } else {
        None
    }
}
