//! Graded multiplicity series of W-modules inside ΛV ⊗ H.
//!
//! The grading variable u counts exterior degree plus twice the polynomial
//! degree.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::linalg::{mat_mul, Matrix};
use crate::algebra::{Rat, Scalar};
use crate::error::{Error, Result};
use crate::group::{ClassFunction, ReflectionGroup};
use crate::report::Check;

/// Integer polynomial in u, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedSeries(Vec<i64>);

impl GradedSeries {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        GradedSeries(coeffs)
    }

    pub fn one() -> Self {
        GradedSeries(vec![1])
    }

    pub fn monomial(d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[d] = 1;
        GradedSeries(v)
    }

    /// `1 + u^d`.
    pub fn one_plus(d: usize) -> Self {
        Self::one().add(&Self::monomial(d))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, d: usize) -> i64 {
        self.0.get(d).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::default();
        }
        let mut v = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    /// Value at u = 1.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(d, c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}u"),
                (d, 1) => format!("u^{d}"),
                (d, c) => format!("{c}u^{d}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Coefficients `c_0..c_n` of `det(λI - A) = Σ c_i λ^i` (Faddeev–LeVerrier).
pub fn characteristic_polynomial(a: &Matrix) -> Vec<Scalar> {
    let n = a.len();
    let field = a[0][0].field();
    let mut c = vec![Scalar::zero(field); n + 1];
    c[n] = Scalar::one(field);
    let mut m = vec![vec![Scalar::zero(field); n]; n];
    for k in 1..=n {
        let am = mat_mul(a, &m);
        let mut next = am;
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let mut tr = Scalar::zero(field);
        for (i, row) in am.iter().enumerate() {
            tr += &row[i];
        }
        c[n - k] = -(tr.scale(&Rat::new(1, k as i64)));
    }
    c
}

type UPoly = Vec<Scalar>;

fn upoly_mul(a: &UPoly, b: &UPoly) -> UPoly {
    let field = a[0].field().join(b[0].field());
    let mut out = vec![Scalar::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// Exact quotient `a / b` with `b[0] = 1`; `None` if not exact.
fn upoly_div(a: &UPoly, b: &UPoly) -> Option<UPoly> {
    debug_assert!(b[0].is_one());
    let mut rem = a.clone();
    let field = rem[0].field();
    let qlen = a.len().checked_sub(b.len() - 1)?;
    let mut q = vec![Scalar::zero(field); qlen];
    for i in 0..qlen {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= &(&c * y);
        }
        q[i] = c;
    }
    rem.iter().all(Scalar::is_zero).then_some(q)
}

/// `(1/|W|) Σ_w χ(w) det(1+uw) ∏(1-u^{2d_i}) / det(1-u²w)`.
pub fn graded_multiplicity_series(g: &ReflectionGroup, chi: &ClassFunction) -> Result<GradedSeries> {
    let field = g.field();
    let n = g.rank();
    let mut numer: UPoly = vec![Scalar::one(field)];
    for &d in g.degrees() {
        let mut f = vec![Scalar::zero(field); 2 * d as usize + 1];
        f[0] = Scalar::one(field);
        f[2 * d as usize] = Scalar::from_int(field, -1);
        numer = upoly_mul(&numer, &f);
    }
    let mut total: UPoly = vec![Scalar::zero(field); numer.len() + n];
    for (k, class) in g.conjugacy_classes().iter().enumerate() {
        let w = g.element(class[0]);
        let c = characteristic_polynomial(w);
        // e_k = (-1)^k c_{n-k}
        let e: Vec<Scalar> = (0..=n).map(|k| if k % 2 == 0 { c[n - k].clone() } else { -&c[n - k] }).collect();
        let plus: UPoly = e.clone();
        let mut minus: UPoly = vec![Scalar::zero(field); 2 * n + 1];
        for (k, ek) in e.iter().enumerate() {
            minus[2 * k] = if k % 2 == 0 { ek.clone() } else { -ek };
        }
        let q = upoly_div(&numer, &minus).ok_or_else(|| Error::Internal("det(1-u²w) does not divide".into()))?;
        let term = upoly_mul(&plus, &q);
        let weight = &chi.values[k] * &Scalar::from_int(field, class.len() as i64);
        for (i, t) in term.iter().enumerate() {
            total[i] += &(t * &weight);
        }
    }
    let order = Rat::from_int(g.order() as i64);
    let mut coeffs = Vec::with_capacity(total.len());
    for (d, t) in total.iter().enumerate() {
        let v = t
            .as_rational()
            .map(|r| r / &order)
            .filter(|r| r.is_integer() && r.signum() >= 0)
            .ok_or_else(|| Error::NotACharacter(format!("coefficient {d} is {}", t.scale(&(Rat::one() / &order)))))?;
        coeffs.push(v.to_i64().ok_or_else(|| Error::Internal("series overflow".into()))?);
    }
    Ok(GradedSeries::new(coeffs))
}

/// `∏(1 + u^{2d_i-1})`.
pub fn invariant_series_product_formula(degrees: &[u32]) -> GradedSeries {
    degrees.iter().fold(GradedSeries::one(), |acc, &d| acc.mul(&GradedSeries::one_plus(2 * d as usize - 1)))
}

/// `∏_{i<r}(1 + u^{2d_i-1}) · Σ_i (u^{2d_i-3} + u^{2d_i-2})`.
pub fn covariant_series_product_formula(degrees: &[u32]) -> GradedSeries {
    let r = degrees.len();
    let ext = invariant_series_product_formula(&degrees[..r - 1]);
    let gens = degrees.iter().fold(GradedSeries::default(), |acc, &d| {
        acc.add(&GradedSeries::monomial(2 * d as usize - 3)).add(&GradedSeries::monomial(2 * d as usize - 2))
    });
    ext.mul(&gens)
}

/// Coefficientwise comparison of the W-side series with a Lie-side one.
pub fn reeder_series_check(g: &ReflectionGroup, zero_weight: &ClassFunction, lie_side: &GradedSeries, label: &str) -> Check {
    match graded_multiplicity_series(g, zero_weight) {
        Ok(w_side) => Check::new(
            format!("reeder_series[{label}]"),
            &w_side == lie_side,
            json!({ "weyl_side": w_side.coeffs(), "lie_side": lie_side.coeffs() }),
        ),
        Err(e) => Check::error(format!("reeder_series[{label}]"), &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(code: &str) -> ReflectionGroup {
        ReflectionGroup::build(code.parse().unwrap()).unwrap()
    }

    #[test]
    fn a1_series() {
        let g = build("A1");
        assert_eq!(graded_multiplicity_series(&g, &ClassFunction::trivial(&g)).unwrap(), GradedSeries::new(vec![1, 0, 0, 1]));
        assert_eq!(graded_multiplicity_series(&g, &ClassFunction::reflection(&g)).unwrap(), GradedSeries::new(vec![0, 1, 1]));
        assert_eq!(covariant_series_product_formula(&[2]), GradedSeries::new(vec![0, 1, 1]));
    }

    #[test]
    fn trivial_and_reflection_match_product_formulas() {
        for code in ["A2", "A3", "B2", "B3", "G2", "I2(5)", "I2(7)", "I2(8)", "H3", "F4"] {
            let g = build(code);
            let triv = graded_multiplicity_series(&g, &ClassFunction::trivial(&g)).unwrap();
            assert_eq!(triv, invariant_series_product_formula(g.degrees()), "{code}");
            let refl = graded_multiplicity_series(&g, &ClassFunction::reflection(&g)).unwrap();
            assert_eq!(refl, covariant_series_product_formula(g.degrees()), "{code}");
            assert_eq!(refl.total(), (g.rank() << g.rank()) as i64);
        }
    }

    #[test]
    fn b2_covariant_product() {
        let expect = GradedSeries::one_plus(3).mul(&GradedSeries::new(vec![0, 1, 1, 0, 0, 1, 1]));
        assert_eq!(covariant_series_product_formula(&[2, 4]), expect);
    }

    #[test]
    fn non_character_rejected() {
        let g = build("A2");
        let mut chi = ClassFunction::trivial(&g);
        chi.values[0] = Scalar::frac(1, 2);
        assert!(matches!(graded_multiplicity_series(&g, &chi), Err(Error::NotACharacter(_))));
    }

    #[test]
    fn charpoly() {
        let g = build("B2");
        let c = characteristic_polynomial(g.element(g.simple_reflections()[1]));
        // diag(1, -1): λ² - 1
        assert_eq!(c, vec![Scalar::int(-1), Scalar::int(0), Scalar::int(1)]);
    }
}
