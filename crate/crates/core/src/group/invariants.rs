//! Basic invariants and the Jacobian.

use std::collections::BTreeMap;

use super::{GroupType, ReflectionGroup};
use crate::algebra::linalg::{Echelon, SparseRow};
use crate::algebra::{Monomial, Polynomial, Scalar};
use crate::error::{Error, Result};

pub(super) fn basic_invariants(g: &ReflectionGroup) -> Result<Vec<Polynomial>> {
    let psi = match g.spec().map(|s| s.ty) {
        Some(GroupType::A(r)) if r >= 2 => type_a(g, r),
        Some(GroupType::B(r)) => type_b(g, r),
        Some(GroupType::I2(4)) => type_b(g, 2),
        _ => find_invariants(g, &(0..g.order()).collect::<Vec<_>>(), g.degrees(), true)?,
    };
    for (p, &d) in psi.iter().zip(g.degrees()) {
        debug_assert_eq!(p.degree(), Some(d));
    }
    jacobian_delta(g, &psi)?;
    Ok(psi)
}

/// Power sums of the ambient coordinates `ε_i = x_i - x_{i-1}`.
fn type_a(g: &ReflectionGroup, r: usize) -> Vec<Polynomial> {
    let f = g.field();
    let x = |i: usize| -> Polynomial {
        if i == 0 || i > r {
            Polynomial::zero(r, f)
        } else {
            Polynomial::var(r, f, i - 1)
        }
    };
    let eps: Vec<Polynomial> = (1..=r + 1).map(|i| &x(i) - &x(i - 1)).collect();
    let mut out = vec![g.gram_quadratic()];
    for k in 3..=r as u32 + 1 {
        let mut s = Polynomial::zero(r, f);
        for e in &eps {
            s = &s + &e.pow(k);
        }
        out.push(s.primitive());
    }
    out
}

/// Elementary symmetric functions of the squares.
fn type_b(g: &ReflectionGroup, r: usize) -> Vec<Polynomial> {
    let f = g.field();
    let sq: Vec<Polynomial> = (0..r).map(|i| Polynomial::var(r, f, i).pow(2)).collect();
    // e[k] after processing a prefix
    let mut e = vec![Polynomial::one(r, f)];
    e.extend((0..r).map(|_| Polynomial::zero(r, f)));
    for s in &sq {
        for k in (1..=r).rev() {
            e[k] = &e[k] + &(&e[k - 1] * s);
        }
    }
    let mut out = vec![g.gram_quadratic()];
    out.extend(e.into_iter().skip(2));
    out
}

/// All products of the given invariants of total degree `d`.
pub fn products_of_degree(invs: &[(u32, Polynomial)], d: u32) -> Vec<Polynomial> {
    fn rec(invs: &[(u32, Polynomial)], start: usize, left: u32, cur: Polynomial, out: &mut Vec<Polynomial>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..invs.len() {
            let (di, p) = &invs[i];
            if *di <= left {
                rec(invs, i, left - di, &cur * p, out);
            }
        }
    }
    let mut out = Vec::new();
    if let Some((_, p)) = invs.first() {
        rec(invs, 0, d, Polynomial::one(p.nvars(), p.field()), &mut out);
    }
    out
}

fn to_row(p: &Polynomial, index: &BTreeMap<Monomial, usize>) -> SparseRow {
    p.terms().map(|(m, c)| (index[m], c.clone())).collect()
}

/// Invariants of the subgroup `h` in the given degrees, chosen by Reynolds
/// averaging of seed monomials. With `gram_first` the first quadratic one is
/// the Gram quadratic form.
pub fn find_invariants(g: &ReflectionGroup, h: &[usize], degrees: &[u32], gram_first: bool) -> Result<Vec<Polynomial>> {
    let n = g.rank();
    let mut found: Vec<(u32, Polynomial)> = Vec::new();
    for &d in degrees {
        if gram_first && d == 2 && found.is_empty() {
            found.push((2, g.gram_quadratic()));
            continue;
        }
        let monos = Monomial::all_of_degree(n, d);
        let index: BTreeMap<Monomial, usize> = monos.iter().rev().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = Echelon::new();
        for p in products_of_degree(&found, d) {
            span.insert(&to_row(&p, &index));
        }
        let powers = (0..n).map(|i| Monomial::var(n, i).pow(d as u16));
        let seeds: Vec<Monomial> = powers.clone().chain(monos.iter().rev().filter(|m| !powers.clone().any(|p| &p == *m)).cloned()).collect();
        let mut accepted = None;
        for seed in seeds {
            let avg = g.reynolds_over(h, &Polynomial::monomial(seed, Scalar::one(g.field())));
            if avg.is_zero() {
                continue;
            }
            if span.insert(&to_row(&avg, &index)) {
                accepted = Some(avg.primitive());
                break;
            }
        }
        match accepted {
            Some(p) => found.push((d, p)),
            None => return Err(Error::SeedsExhausted(d)),
        }
    }
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

fn poly_det(m: &[Vec<Polynomial>], cols: &[usize]) -> Polynomial {
    let k = m.len() - cols.len();
    if cols.len() == 1 {
        return m[k][cols[0]].clone();
    }
    let mut acc = Polynomial::zero(m[0][0].nvars(), m[0][0].field());
    for (pos, &c) in cols.iter().enumerate() {
        if m[k][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[k][c] * &poly_det(m, &rest);
        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `det(∂ψ_j/∂x_i)` for `n` polynomials in `n` variables.
pub fn jacobian(psi: &[Polynomial]) -> Polynomial {
    let n = psi[0].nvars();
    let m: Vec<Vec<Polynomial>> = psi.iter().map(|p| (0..n).map(|i| p.partial(i)).collect()).collect();
    poly_det(&m, &(0..n).collect::<Vec<_>>())
}

/// `Δ = det(∂ψ_j/∂x_i)`, checked to be nonzero, of degree |T| and
/// sign-equivariant under the simple reflections.
pub fn jacobian_delta(g: &ReflectionGroup, psi: &[Polynomial]) -> Result<Polynomial> {
    let delta = jacobian(psi);
    if delta.is_zero() {
        return Err(Error::InvariantsNotIndependent);
    }
    if delta.degree() != Some(g.num_reflections() as u32) || !delta.is_homogeneous() {
        return Err(Error::Internal(format!("{}: Jacobian has wrong degree", g.label())));
    }
    for &s in g.simple_reflections() {
        let r = g.reflection_for_element(s).expect("simple reflection");
        if g.reflect_poly(r, &delta) != -&delta {
            return Err(Error::Internal(format!("{}: Jacobian not sign-equivariant", g.label())));
        }
    }
    Ok(delta)
}

/// `∏_{α∈Δ⁺} ℓ_α`.
pub fn root_product(g: &ReflectionGroup) -> Polynomial {
    let mut acc = Polynomial::one(g.rank(), g.field());
    for r in g.reflections() {
        acc = &acc * &Polynomial::linear(g.field(), &r.form);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldId;

    fn build(code: &str) -> ReflectionGroup {
        ReflectionGroup::build(code.parse().unwrap()).unwrap()
    }

    fn check(code: &str) {
        let g = build(code);
        let psi = g.basic_invariants().unwrap();
        assert_eq!(psi.len(), g.rank());
        assert_eq!(psi[0], g.gram_quadratic());
        for (p, &d) in psi.iter().zip(g.degrees()) {
            assert_eq!(p.degree(), Some(d), "{code}");
            for &s in g.simple_reflections() {
                assert_eq!(&g.act_poly(s, p), p, "{code}");
            }
        }
        let delta = jacobian_delta(&g, psi).unwrap();
        let prod = root_product(&g);
        let (m, c) = prod.leading().unwrap();
        let k = delta.coeff(m).unwrap() * &c.inv();
        assert_eq!(delta, prod.scale(&k), "{code}");
    }

    #[test]
    fn invariants_small_groups() {
        for code in ["A1", "A2", "A3", "B2", "B3", "G2", "I2(5)", "I2(7)", "I2(8)"] {
            check(code);
        }
    }

    #[test]
    fn invariants_h3() {
        check("H3");
    }

    #[test]
    fn invariants_f4() {
        check("F4");
    }

    #[test]
    fn a1_and_b2_examples() {
        let a1 = build("A1");
        let x = Polynomial::var(1, FieldId::Rational, 0);
        assert_eq!(a1.basic_invariants().unwrap()[0], x.pow(2));
        assert_eq!(jacobian_delta(&a1, a1.basic_invariants().unwrap()).unwrap(), x.scale(&Scalar::int(2)));
        let b2 = build("B2");
        let x = Polynomial::var(2, FieldId::Rational, 0);
        let y = Polynomial::var(2, FieldId::Rational, 1);
        let psi = b2.basic_invariants().unwrap();
        assert_eq!(psi[0], &x.pow(2) + &y.pow(2));
        assert_eq!(psi[1], &x.pow(2) * &y.pow(2));
        assert_eq!(jacobian_delta(&b2, psi).unwrap().degree(), Some(4));
    }
}
