//! Exact scalars in ℚ or in a simple real extension ℚ(θ).
//!
//! Elements of ℚ(θ) are stored in the power basis 1, θ, …, θ^{n-1}. The
//! extension fields are a fixed catalogue; irreducibility of each minimal
//! polynomial is asserted, not computed.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use super::rational::Rat;
use crate::error::{Error, Result};

/// The catalogue of base fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldId {
    Rational,
    /// θ = √2.
    Sqrt2,
    /// θ = √3.
    Sqrt3,
    /// θ = √5, the field of H₃, H₄ and I₂(5).
    Sqrt5,
    /// θ = 2cos(π/7), root of θ³ − θ² − 2θ + 1.
    TwoCosPi7,
    /// θ = 2cos(π/8), root of θ⁴ − 4θ² + 2.
    TwoCosPi8,
}

impl FieldId {
    /// Minimal polynomial coefficients, constant term first, monic.
    pub fn minimal_polynomial(self) -> &'static [i64] {
        match self {
            FieldId::Rational => &[0, 1],
            FieldId::Sqrt2 => &[-2, 0, 1],
            FieldId::Sqrt3 => &[-3, 0, 1],
            FieldId::Sqrt5 => &[-5, 0, 1],
            FieldId::TwoCosPi7 => &[1, -2, -1, 1],
            FieldId::TwoCosPi8 => &[2, 0, -4, 0, 1],
        }
    }

    pub fn degree(self) -> usize {
        self.minimal_polynomial().len() - 1
    }

    /// The designated real root θ, to double precision.
    pub fn theta_approx(self) -> f64 {
        match self {
            FieldId::Rational => 0.0,
            FieldId::Sqrt2 => 2f64.sqrt(),
            FieldId::Sqrt3 => 3f64.sqrt(),
            FieldId::Sqrt5 => 5f64.sqrt(),
            FieldId::TwoCosPi7 => 2.0 * (std::f64::consts::PI / 7.0).cos(),
            FieldId::TwoCosPi8 => 2.0 * (std::f64::consts::PI / 8.0).cos(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldId::Rational => "Q",
            FieldId::Sqrt2 => "Q(sqrt2)",
            FieldId::Sqrt3 => "Q(sqrt3)",
            FieldId::Sqrt5 => "Q(sqrt5)",
            FieldId::TwoCosPi7 => "Q(2cos(pi/7))",
            FieldId::TwoCosPi8 => "Q(2cos(pi/8))",
        }
    }

    /// Combined field of two operands; ℚ embeds in every catalogue field.
    pub fn join(self, other: FieldId) -> FieldId {
        match (self, other) {
            (a, b) if a == b => a,
            (FieldId::Rational, b) => b,
            (a, FieldId::Rational) => a,
            (a, b) => panic!("incompatible fields {} and {}", a.name(), b.name()),
        }
    }
}

/// An exact element of a catalogue field.
#[derive(Clone)]
pub struct Scalar {
    field: FieldId,
    coords: SmallVec<[Rat; 2]>,
}

impl Scalar {
    pub fn zero(field: FieldId) -> Self {
        Scalar {
            field,
            coords: smallvec![Rat::zero(); field.degree()],
        }
    }

    pub fn one(field: FieldId) -> Self {
        Self::from_rat(field, Rat::one())
    }

    pub fn from_rat(field: FieldId, r: Rat) -> Self {
        let mut s = Self::zero(field);
        s.coords[0] = r;
        s
    }

    pub fn from_int(field: FieldId, n: i64) -> Self {
        Self::from_rat(field, Rat::from_int(n))
    }

    /// Rational constant in ℚ, promoted on contact with an extension element.
    pub fn rational(r: Rat) -> Self {
        Self::from_rat(FieldId::Rational, r)
    }

    pub fn int(n: i64) -> Self {
        Self::from_int(FieldId::Rational, n)
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(Rat::new(n, d))
    }

    /// θ itself.
    pub fn theta(field: FieldId) -> Self {
        assert!(field.degree() > 1, "ℚ has no generator");
        let mut s = Self::zero(field);
        s.coords[1] = Rat::one();
        s
    }

    /// Builds an element from power-basis coordinates.
    pub fn from_coords(field: FieldId, coords: Vec<Rat>) -> Self {
        assert_eq!(coords.len(), field.degree());
        Scalar {
            field,
            coords: coords.into(),
        }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Rat::is_zero)
    }

    /// The value as a rational, when it lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.coords[1..].iter().all(Rat::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Lifts into `field`, which must contain this element's field.
    pub fn promote(&self, field: FieldId) -> Scalar {
        if self.field == field {
            return self.clone();
        }
        assert_eq!(self.field, FieldId::Rational, "cannot embed {} into {}", self.field.name(), field.name());
        Scalar::from_rat(field, self.coords[0].clone())
    }

    pub fn approx(&self) -> f64 {
        let t = self.field.theta_approx();
        let mut acc = 0.0;
        let mut pow = 1.0;
        for c in &self.coords {
            acc += c.to_f64() * pow;
            pow *= t;
        }
        acc
    }

    /// Sign in the designated real embedding. Exact for ℚ and quadratic
    /// fields; other fields compare a double-precision evaluation, which is
    /// sound for the nonzero values of moderate height met in the catalogue.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        match self.field {
            FieldId::Rational => self.coords[0].signum(),
            FieldId::Sqrt2 | FieldId::Sqrt3 | FieldId::Sqrt5 => {
                let d = Rat::from_int(-self.field.minimal_polynomial()[0]);
                let (a, b) = (&self.coords[0], &self.coords[1]);
                let (sa, sb) = (a.signum(), b.signum());
                if sa >= 0 && sb >= 0 {
                    1
                } else if sa <= 0 && sb <= 0 {
                    -1
                } else {
                    // a + b√d with opposite signs: compare a² with d b².
                    let lhs = a * a;
                    let rhs = &(b * b) * &d;
                    if lhs > rhs {
                        sa
                    } else {
                        sb
                    }
                }
            }
            _ => {
                let v = self.approx();
                assert!(v.abs() > 1e-9, "sign undecidable in double precision");
                if v > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn checked_inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.field == FieldId::Rational {
            return Ok(Scalar::rational(self.coords[0].inv().unwrap()));
        }
        // Solve (multiplication-by-self matrix)·x = e₀ over ℚ.
        let n = self.field.degree();
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
        let mut basis = Scalar::one(self.field);
        for _ in 0..n {
            cols.push((self * &basis).coords.to_vec());
            basis = &basis * &Scalar::theta(self.field);
        }
        let mut m: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rat::one() } else { Rat::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::ZeroDivisor)?;
            m.swap(col, piv);
            let inv = m[col][col].inv().unwrap();
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=n {
                        let t = &m[col][k] * &f;
                        m[r][k] -= &t;
                    }
                }
            }
        }
        Ok(Scalar::from_coords(self.field, m.into_iter().map(|mut r| r.pop().unwrap()).collect()))
    }

    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("zero divisor")
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.checked_inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by a rational without touching the field structure.
    pub fn scale(&self, r: &Rat) -> Scalar {
        Scalar {
            field: self.field,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// JSON form: a fraction string for rationals, a coordinate list otherwise.
    pub fn to_json(&self) -> serde_json::Value {
        match self.as_rational() {
            Some(r) => serde_json::Value::String(r.to_string()),
            None => serde_json::Value::Array(
                self.coords.iter().map(|c| serde_json::Value::String(c.to_string())).collect(),
            ),
        }
    }
}

/// Values compare equal across fields (a rational equals its image in any
/// extension).
impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coords.len().max(other.coords.len());
        let zero = Rat::zero();
        (0..n).all(|i| self.coords.get(i).unwrap_or(&zero) == other.coords.get(i).unwrap_or(&zero))
            && (self.field == other.field || self.as_rational().is_some())
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let end = self.coords.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        self.coords[..end].hash(state);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·θ")?,
                _ => write!(f, "{c}·θ^{i}")?,
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        if self.field == rhs.field {
            return Scalar {
                field: self.field,
                coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
            };
        }
        let f = self.field.join(rhs.field);
        &self.promote(f) + &rhs.promote(f)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        if self.field == rhs.field {
            return Scalar {
                field: self.field,
                coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
            };
        }
        let f = self.field.join(rhs.field);
        &self.promote(f) - &rhs.promote(f)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.field != rhs.field {
            if let Some(r) = self.as_rational().filter(|_| self.field == FieldId::Rational) {
                return rhs.scale(r);
            }
            if let Some(r) = rhs.as_rational().filter(|_| rhs.field == FieldId::Rational) {
                return self.scale(r);
            }
            let f = self.field.join(rhs.field);
            return &self.promote(f) * &rhs.promote(f);
        }
        let field = self.field;
        let n = field.degree();
        if n == 1 {
            return Scalar {
                field,
                coords: smallvec![&self.coords[0] * &rhs.coords[0]],
            };
        }
        let mut prod = vec![Rat::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        let minpoly = field.minimal_polynomial();
        for k in (n..prod.len()).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            // θ^k = -Σ m_i θ^{k-n+i}
            for (i, &m) in minpoly[..n].iter().enumerate() {
                if m != 0 {
                    prod[k - n + i] -= &(&top * &Rat::from_int(m));
                }
            }
        }
        prod.truncate(n);
        Scalar {
            field,
            coords: prod.into(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if self.field == rhs.field {
            for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if self.field == rhs.field {
            for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt5_product_reduces() {
        let f = FieldId::Sqrt5;
        let t = Scalar::theta(f);
        let one = Scalar::one(f);
        let p = &(&one + &t) * &(&one - &t);
        assert_eq!(p, Scalar::from_int(f, -4));
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&Scalar::frac(2, 3) + &Scalar::frac(1, 6), Scalar::frac(5, 6));
    }

    #[test]
    fn theta_over_theta_is_one() {
        for f in [FieldId::Sqrt5, FieldId::TwoCosPi7, FieldId::TwoCosPi8] {
            let t = Scalar::theta(f);
            assert!(t.checked_div(&t).unwrap().is_one());
        }
    }

    #[test]
    fn zero_divisor_is_an_error() {
        let z = Scalar::zero(FieldId::Sqrt5);
        assert!(matches!(Scalar::one(FieldId::Sqrt5).checked_div(&z), Err(Error::ZeroDivisor)));
        assert!(matches!(Scalar::int(1).checked_div(&Scalar::int(0)), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn minimal_polynomials_vanish_at_theta() {
        for f in [FieldId::Sqrt2, FieldId::Sqrt3, FieldId::Sqrt5, FieldId::TwoCosPi7, FieldId::TwoCosPi8] {
            let t = Scalar::theta(f);
            let mut acc = Scalar::zero(f);
            for (k, &m) in f.minimal_polynomial().iter().enumerate() {
                acc += &t.pow(k as u32).scale(&Rat::from_int(m));
            }
            assert!(acc.is_zero(), "{}", f.name());
            let approx: f64 = f
                .minimal_polynomial()
                .iter()
                .enumerate()
                .map(|(k, &m)| m as f64 * f.theta_approx().powi(k as i32))
                .sum();
            assert!(approx.abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_sign_is_exact() {
        let f = FieldId::Sqrt5;
        // 2 - √5 < 0, 3 - √5 > 0
        let a = Scalar::from_coords(f, vec![Rat::from_int(2), Rat::from_int(-1)]);
        let b = Scalar::from_coords(f, vec![Rat::from_int(3), Rat::from_int(-1)]);
        assert_eq!(a.sign(), -1);
        assert_eq!(b.sign(), 1);
    }

    #[test]
    fn inverse_in_quartic_field() {
        let f = FieldId::TwoCosPi8;
        let x = &Scalar::theta(f).pow(3) + &Scalar::from_int(f, 2);
        assert!((&x * &x.inv()).is_one());
    }
}
