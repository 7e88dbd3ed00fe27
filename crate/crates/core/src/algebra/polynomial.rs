//! Sparse multivariate polynomials over a catalogue field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::field::{FieldId, Scalar};
use super::rational::Rat;
use crate::error::{Error, Result};

/// Exponent vector. Ordered graded-reverse-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    /// First variable with a positive exponent, and the monomial with that
    /// exponent lowered by one.
    pub fn pow(&self, e: u16) -> Monomial {
        Monomial(self.0.iter().map(|x| x * e).collect())
    }

    pub fn split_first(&self) -> Option<(usize, Monomial)> {
        let i = self.0.iter().position(|&e| e > 0)?;
        let mut rest = self.clone();
        rest.0[i] -= 1;
        Some((i, rest))
    }

    /// `∏ e_i!`.
    pub fn factorial_weight(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in self.0.iter() {
            for k in 2..=e as u64 {
                acc *= k;
            }
        }
        acc
    }

    /// All monomials of total degree `d` in `nvars` variables, in ascending
    /// graded-reverse-lexicographic order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left as u16;
                out.push(Monomial::from_exponents(cur));
                return;
            }
            for e in 0..=left {
                cur[i] = e as u16;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            if a != b {
                // Smaller exponent in the last differing variable is larger.
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// A polynomial in `nvars` variables `x_1..x_r`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    field: FieldId,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: FieldId) -> Self {
        Polynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars, c.field());
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize, field: FieldId) -> Self {
        Self::constant(nvars, Scalar::one(field))
    }

    pub fn var(nvars: usize, field: FieldId, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Scalar::one(field))
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(m.nvars(), c.field());
        p.add_term(m, c);
        p
    }

    /// The linear form `Σ coeffs[j]·x_j`.
    pub fn linear(field: FieldId, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, field);
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, j), c.clone());
        }
        p
    }

    /// Builds from integer coefficients and exponent lists; convenient in tests.
    pub fn from_int_terms(field: FieldId, nvars: usize, terms: &[(i64, &[u16])]) -> Self {
        let mut p = Self::zero(nvars, field);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial::from_exponents(e), Scalar::from_int(field, *c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let mut p = Self::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    /// Leading term in graded-reverse-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        self.field = self.field.join(c.field());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &Polynomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut p = Self::zero(self.nvars, self.field.join(c.field()));
        if c.is_zero() {
            return p;
        }
        for (m, a) in &self.terms {
            p.terms.insert(m.clone(), a * c);
        }
        p
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let mut p = Self::zero(self.nvars, self.field.join(other.field));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(p)
    }

    fn check_vars(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::MismatchedVars(self.nvars, other.nvars))
        } else {
            Ok(())
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(self.nvars, self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut p = Self::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            p.add_term(m2, c.scale(&Rat::from_int(e as i64)));
        }
        p
    }

    /// `Σ_j v_j ∂p/∂x_j`.
    pub fn directional_derivative(&self, v: &[Scalar]) -> Polynomial {
        assert_eq!(v.len(), self.nvars);
        let mut p = Self::zero(self.nvars, self.field);
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() {
                p.add_scaled(&self.partial(j), vj);
            }
        }
        p
    }

    /// Linear substitution `x_i ↦ Σ_j rows[i][j]·x_j`.
    pub fn substitute_linear(&self, rows: &[Vec<Scalar>]) -> Polynomial {
        assert_eq!(rows.len(), self.nvars);
        let n = self.nvars;
        let forms: Vec<Polynomial> = rows.iter().map(|r| Polynomial::linear(self.field, r)).collect();
        let mut powers: Vec<Vec<Polynomial>> = forms.iter().map(|f| vec![Self::one(n, f.field()), f.clone()]).collect();
        let mut out = Self::zero(n, self.field);
        for (m, c) in &self.terms {
            let mut term = Self::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &forms[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            for (m2, c2) in term.terms {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// Substitution `x_i ↦ subs[i]`; the result lives in the ring of `subs`.
    pub fn compose(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.nvars);
        let n = subs[0].nvars;
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|f| vec![Self::one(n, f.field), f.clone()]).collect();
        let mut out = Self::zero(n, self.field.join(subs[0].field));
        for (m, c) in &self.terms {
            let mut term = Self::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &subs[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out.add_scaled(&term, &Scalar::one(out.field));
        }
        out
    }

    /// Apolar pairing `p(∂̃)q` at 0, with `∂̃_j = Σ_k ginv[j][k] ∂_k`.
    ///
    /// For `ginv` the inverse Gram matrix this pairing is invariant under the
    /// orthogonal group of the form.
    pub fn apolar(&self, q: &Polynomial, ginv: &[Vec<Scalar>]) -> Scalar {
        let mut acc = Scalar::zero(self.field.join(q.field));
        for (m, c) in &self.terms {
            if m.degree() != q.degree().unwrap_or(0) {
                continue;
            }
            let mut cur = q.clone();
            for (j, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    cur = cur.directional_derivative(&ginv[j]);
                }
            }
            if let Some(v) = cur.coeff(&Monomial::one(q.nvars)) {
                acc += &(c * v);
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t = &t * &x.pow(e as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Exact quotient by the linear form `Σ_j form[j]·x_j`.
    ///
    /// Works in the last variable `x_k` with a nonzero form coefficient: `p` is
    /// read as a polynomial in `x_k` over the remaining variables and divided
    /// synthetically, which is the coordinate change sending the form to
    /// `x_k`. A nonzero remainder means `p` was not divisible.
    pub fn divide_by_linear_form(&self, form: &[Scalar]) -> Result<Polynomial> {
        assert_eq!(form.len(), self.nvars);
        let k = form.iter().rposition(|c| !c.is_zero()).ok_or(Error::ZeroDivisor)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let lead_inv = form[k].inv();
        // rest = form - form[k]·x_k
        let rest: Vec<(usize, Scalar)> = form
            .iter()
            .enumerate()
            .filter(|(j, c)| *j != k && !c.is_zero())
            .map(|(j, c)| (j, c.clone()))
            .collect();
        // Coefficients of x_k^e, keyed with x_k's exponent zeroed.
        let top = self.terms.keys().map(|m| m.0[k]).max().unwrap() as usize;
        let mut slices: Vec<Polynomial> = vec![Self::zero(self.nvars, self.field); top + 1];
        for (m, c) in &self.terms {
            let e = m.0[k] as usize;
            let mut m2 = m.clone();
            m2.0[k] = 0;
            slices[e].add_term(m2, c.clone());
        }
        let mut quotient = Self::zero(self.nvars, self.field.join(form[k].field()));
        for e in (1..=top).rev() {
            let ce = std::mem::replace(&mut slices[e], Self::zero(self.nvars, self.field));
            if ce.is_zero() {
                continue;
            }
            // q_{e-1} = c_e / form[k]; c_{e-1} -= q_{e-1}·rest
            let q = ce.scale(&lead_inv);
            for (j, cj) in &rest {
                for (m, c) in &q.terms {
                    slices[e - 1].add_term(m.times_var(*j), -&(c * cj));
                }
            }
            for (m, c) in q.terms {
                let mut m2 = m;
                m2.0[k] = (e - 1) as u16;
                quotient.add_term(m2, c);
            }
        }
        if !slices[0].is_zero() {
            return Err(Error::NotDivisible);
        }
        Ok(quotient)
    }

    /// Rescales to a primitive integral polynomial with positive leading
    /// coefficient when all coefficients are rational; otherwise makes the
    /// leading coefficient one.
    pub fn primitive(&self) -> Polynomial {
        let Some((_, lead)) = self.leading() else {
            return self.clone();
        };
        let rationals: Option<Vec<&Rat>> = self.terms.values().map(|c| c.as_rational()).collect();
        match rationals {
            Some(rs) => {
                let mut den_lcm = BigInt::one();
                let mut num_gcd = BigInt::zero();
                for r in &rs {
                    den_lcm = den_lcm.lcm(&r.denom());
                    num_gcd = num_gcd.gcd(&r.numer());
                }
                let mut factor = Rat::from(den_lcm) / Rat::from(num_gcd.abs());
                if lead.as_rational().unwrap().signum() < 0 {
                    factor = -factor;
                }
                self.scale(&Scalar::rational(factor))
            }
            None => self.scale(&lead.inv()),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Polynomial {
        let mut p = Self::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial add")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(&-rhs).expect("polynomial sub")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial mul")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.map_coeffs(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldId = FieldId::Rational;

    fn x() -> Polynomial {
        Polynomial::var(2, Q, 0)
    }
    fn y() -> Polynomial {
        Polynomial::var(2, Q, 1)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let expect = Polynomial::from_int_terms(Q, 2, &[(1, &[2, 0]), (-1, &[0, 2])]);
        assert_eq!(p, expect);
        assert_eq!(&p + &Polynomial::zero(2, Q), p);
        let sq = &x().pow(2) * &y().pow(2);
        assert_eq!(sq, Polynomial::from_int_terms(Q, 2, &[(1, &[2, 2])]));
    }

    #[test]
    fn mismatched_vars_error() {
        let a = Polynomial::var(2, Q, 0);
        let b = Polynomial::var(3, Q, 0);
        assert!(matches!(a.checked_mul(&b), Err(Error::MismatchedVars(2, 3))));
    }

    #[test]
    fn derivatives() {
        let x1 = Polynomial::var(1, Q, 0);
        assert_eq!(x1.pow(2).partial(0), x1.scale(&Scalar::int(2)));
        assert!(Polynomial::constant(2, Scalar::int(7)).directional_derivative(&[Scalar::int(1), Scalar::int(1)]).is_zero());
        // ∂_(1,1)(x²y) = 2xy + x²
        let p = &x().pow(2) * &y();
        let d = p.directional_derivative(&[Scalar::int(1), Scalar::int(1)]);
        let expect = Polynomial::from_int_terms(Q, 2, &[(2, &[1, 1]), (1, &[2, 0])]);
        assert_eq!(d, expect);
    }

    #[test]
    fn linear_division() {
        let one = Scalar::int(1);
        let alpha = [one.clone(), -&one];
        let p = &x().pow(2) - &y().pow(2);
        assert_eq!(p.divide_by_linear_form(&alpha).unwrap(), &x() + &y());
        assert!(Polynomial::zero(2, Q).divide_by_linear_form(&alpha).unwrap().is_zero());
        let xy = &x() - &y();
        let p = &(&x().scale(&Scalar::int(2)) * &xy) * &xy;
        assert_eq!(p.divide_by_linear_form(&alpha).unwrap(), &x().scale(&Scalar::int(2)) * &xy);
        assert!(matches!(x().divide_by_linear_form(&alpha), Err(Error::NotDivisible)));
    }

    #[test]
    fn grevlex_order() {
        let m = |e: &[u16]| Monomial::from_exponents(e);
        assert!(m(&[1, 0, 0]) > m(&[0, 1, 0]));
        assert!(m(&[0, 1, 0]) > m(&[0, 0, 1]));
        assert!(m(&[0, 0, 3]) > m(&[0, 2, 0]));
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
    }

    #[test]
    fn substitution_swaps() {
        let z = Scalar::int(0);
        let o = Scalar::int(1);
        let swap = vec![vec![z.clone(), o.clone()], vec![o, z]];
        let p = &x().pow(2) * &y();
        assert_eq!(p.substitute_linear(&swap), &y().pow(2) * &x());
    }

    #[test]
    fn primitive_form() {
        let p = Polynomial::from_int_terms(Q, 2, &[(-4, &[2, 0]), (6, &[0, 2])]);
        assert_eq!(p.primitive(), Polynomial::from_int_terms(Q, 2, &[(2, &[2, 0]), (-3, &[0, 2])]));
    }
}
