//! de Rham d, Koszul δ, the reflection operators ∇_s and the Dunkl
//! differential D_c on ΛV ⊗ A and on ΛV ⊗ H.

use crate::algebra::weil::{mask_indices, merge_sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{Ambient, FieldId, Monomial, Polynomial, Rat, Scalar, WeilElement};
use crate::coinvariants::CoinvariantBasis;
use crate::error::{Error, Result};
use crate::group::{ClassFunction, Reflection, ReflectionGroup};
use crate::report::Check;

/// Multiplicities `c`, one value per reflection class.
#[derive(Debug, Clone, PartialEq)]
pub struct DunklParams {
    pub c: Vec<Scalar>,
}

impl DunklParams {
    /// `c ≡ 1`.
    pub fn unit(g: &ReflectionGroup) -> Self {
        DunklParams {
            c: vec![Scalar::one(g.field()); g.reflection_classes().len()],
        }
    }

    pub fn new(g: &ReflectionGroup, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != g.reflection_classes().len() {
            return Err(Error::Usage(format!(
                "{} has {} reflection classes, got {} multiplicities",
                g.label(),
                g.reflection_classes().len(),
                c.len()
            )));
        }
        Ok(DunklParams { c })
    }

    pub fn at(&self, s: &Reflection) -> &Scalar {
        &self.c[s.class]
    }

    /// `|T|_c = Σ_k c_k |T_k|`.
    pub fn weighted_count(&self, g: &ReflectionGroup) -> Scalar {
        let mut acc = Scalar::zero(g.field());
        for (c, cls) in self.c.iter().zip(g.reflection_classes()) {
            acc += &c.scale(&crate::algebra::Rat::from_int(cls.len() as i64));
        }
        acc
    }
}

/// `d(q⊗k) = Σ_j (e^j ∧ q) ⊗ ∂k/∂x_j` with `e^j = Σ_i G⁻¹_{ji} e_i`.
pub fn de_rham_d(g: &ReflectionGroup, w: &WeilElement) -> Result<WeilElement> {
    if w.ambient() != Ambient::FullWeil {
        return Err(Error::DeRhamOnQuotient);
    }
    let n = g.rank();
    let ginv = g.gram_inv();
    let mut out = WeilElement::zero(n, w.field(), Ambient::FullWeil);
    for (s, p) in w.terms() {
        for j in 0..n {
            let dk = p.partial(j);
            if dk.is_zero() {
                continue;
            }
            for (i, c) in ginv[j].iter().enumerate() {
                let sign = merge_sign(1 << i, s);
                if sign == 0 || c.is_zero() {
                    continue;
                }
                let c = if sign > 0 { c.clone() } else { -c };
                out.add_term(s | (1 << i), dk.scale(&c));
            }
        }
    }
    Ok(out)
}

/// Odd derivation with `δ(e_j⊗1) = 1⊗(e_j, x)` and `δ(1⊗p) = 0`.
/// On ΛV ⊗ H the result is reduced with `h`.
pub fn koszul_delta(g: &ReflectionGroup, w: &WeilElement, h: Option<&CoinvariantBasis>) -> WeilElement {
    let n = g.rank();
    let mut out = WeilElement::zero(n, w.field(), Ambient::FullWeil);
    let forms: Vec<Polynomial> = (0..n).map(|j| Polynomial::linear(g.field(), &g.gram()[j])).collect();
    for (s, p) in w.terms() {
        for (t, j) in mask_indices(s).enumerate() {
            let term = &forms[j] * p;
            out.add_term(s & !(1 << j), if t % 2 == 0 { term } else { -&term });
        }
    }
    finish(out, w.ambient(), h)
}

fn finish(out: WeilElement, ambient: Ambient, h: Option<&CoinvariantBasis>) -> WeilElement {
    match (ambient, h) {
        (Ambient::Quotient, Some(h)) => h.weil_normal_form(&out),
        (Ambient::Quotient, None) => panic!("quotient element needs a coinvariant basis"),
        _ => out,
    }
}

/// `(b - s·b)/(α_s, x)`.
pub fn divided_difference(g: &ReflectionGroup, s: &Reflection, b: &Polynomial) -> Result<Polynomial> {
    let diff = b - &g.reflect_poly(s, b);
    diff.divide_by_linear_form(&s.form)
        .map_err(|_| Error::Internal(format!("{}: divided difference not exact", g.label())))
}

/// `∇_s(a⊗b) = (α_s ∧ s(a)) ⊗ (b - s·b)/α_s`.
pub fn nabla_s(g: &ReflectionGroup, s: &Reflection, w: &WeilElement, h: Option<&CoinvariantBasis>) -> Result<WeilElement> {
    nabla_with_root(g, s, &s.root, &s.form, w, h)
}

/// `∇_s` computed from an arbitrary nonzero multiple of α_s.
pub fn nabla_with_root(
    g: &ReflectionGroup,
    s: &Reflection,
    root: &[Scalar],
    form: &[Scalar],
    w: &WeilElement,
    h: Option<&CoinvariantBasis>,
) -> Result<WeilElement> {
    let n = g.rank();
    let amb = Ambient::FullWeil;
    let alpha = WeilElement::vector(g.field(), root, amb);
    let mut out = WeilElement::zero(n, w.field(), amb);
    for (m, b) in w.terms() {
        let diff = b - &g.reflect_poly(s, b);
        if diff.is_zero() {
            continue;
        }
        let q = diff.divide_by_linear_form(form).map_err(|_| Error::Internal(format!("{}: ∇_s division not exact", g.label())))?;
        let a = WeilElement::from_term(m, Polynomial::one(n, g.field()), amb);
        let sa = g.reflect_weil(s, &a);
        let ext = alpha.wedge(&sa)?;
        for (t, c) in ext.terms() {
            out.add_term(t, &q * c);
        }
    }
    Ok(finish(out, w.ambient(), h))
}

/// `D_c = Σ_s c(s) ∇_s`.
pub fn dunkl_d(g: &ReflectionGroup, params: &DunklParams, w: &WeilElement, h: Option<&CoinvariantBasis>) -> Result<WeilElement> {
    let n = g.rank();
    let mut out = WeilElement::zero(n, w.field(), Ambient::FullWeil);
    let lifted = w.clone().with_ambient(Ambient::FullWeil);
    for s in g.reflections() {
        let c = params.at(s);
        if c.is_zero() {
            continue;
        }
        out.add_scaled(&nabla_s(g, s, &lifted, None)?, c);
    }
    Ok(finish(out, w.ambient(), h))
}

/// The closed-form eigenvalue of δD_c on a copy of the irreducible U.
pub fn delta_d_closed_form(g: &ReflectionGroup, params: &DunklParams, chi: &ClassFunction) -> Scalar {
    let deg = chi.degree(g).clone();
    let mut gamma = Scalar::zero(g.field());
    for (k, cls) in g.reflection_classes().iter().enumerate() {
        let rep = g.reflections()[cls[0]].element;
        let ratio = &Scalar::one(g.field()) - &(chi.at(g, rep) * &deg.inv());
        gamma += &(&params.c[k].scale(&crate::algebra::Rat::from_int(cls.len() as i64)) * &ratio);
    }
    gamma
}

/// γ with `δD_c(x) = γx`, checked against the closed form.
pub fn delta_d_eigenvalue(
    g: &ReflectionGroup,
    params: &DunklParams,
    chi: &ClassFunction,
    x: &WeilElement,
    h: Option<&CoinvariantBasis>,
) -> Result<Scalar> {
    let y = koszul_delta(g, &dunkl_d(g, params, x, h)?, h);
    let gamma = proportionality(x, &y).ok_or_else(|| Error::NotIsotypic("δD_c(x) is not a multiple of x".into()))?;
    let expect = delta_d_closed_form(g, params, chi);
    if gamma != expect {
        return Err(Error::NotIsotypic(format!("eigenvalue {gamma} differs from the closed form {expect}")));
    }
    Ok(gamma)
}

/// `γ` with `y = γx`, if any.
pub fn proportionality(x: &WeilElement, y: &WeilElement) -> Option<Scalar> {
    if x.is_zero() {
        return y.is_zero().then(|| Scalar::zero(y.field()));
    }
    let (m, p) = x.terms().next()?;
    let (mono, c) = p.leading()?;
    let gamma = match y.coeff(m).and_then(|q| q.coeff(mono)) {
        Some(v) => v * &c.inv(),
        None => Scalar::zero(x.field()),
    };
    (x.scale(&gamma) == *y).then_some(gamma)
}

/// A random element of ΛV ⊗ A: a few terms of exterior degree ≤ r and
/// polynomial degree ≤ 3 with small integer coordinates.
pub fn random_weil_element(g: &ReflectionGroup, rng: &mut impl Rng) -> WeilElement {
    let n = g.rank();
    let field = g.field();
    let mut w = WeilElement::zero(n, field, Ambient::FullWeil);
    for _ in 0..rng.gen_range(1..=3) {
        let mask = rng.gen_range(0..(1u32 << n));
        let mut p = Polynomial::zero(n, field);
        for _ in 0..rng.gen_range(1..=3) {
            let d = rng.gen_range(0..=3);
            let mut e = vec![0u16; n];
            for _ in 0..d {
                e[rng.gen_range(0..n)] += 1;
            }
            p.add_term(Monomial::from_exponents(&e), random_scalar(field, rng));
        }
        w.add_term(mask, p);
    }
    w
}

fn random_scalar(field: FieldId, rng: &mut impl Rng) -> Scalar {
    loop {
        let coords: Vec<Rat> = (0..field.degree()).map(|_| Rat::from_int(rng.gen_range(-4..=4))).collect();
        let x = Scalar::from_coords(field, coords);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Multiplicities with independent random nonzero rational values per class.
pub fn random_params(g: &ReflectionGroup, rng: &mut impl Rng) -> DunklParams {
    let c = g
        .reflection_classes()
        .iter()
        .map(|_| {
            let num = [-3, -2, -1, 1, 2, 3, 5][rng.gen_range(0..7)];
            Scalar::from_rat(g.field(), Rat::new(num, rng.gen_range(1..=4)))
        })
        .collect();
    DunklParams { c }
}

/// `d² = δ² = 0` and `D_c² = 0` (c ≡ 1 and `extra` random c) on `count`
/// seeded random elements of ΛV ⊗ A.
pub fn square_zero_check(g: &ReflectionGroup, seed: u64, count: usize, extra: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements: Vec<WeilElement> = (0..count).map(|_| random_weil_element(g, &mut rng)).collect();
    let mut params = vec![DunklParams::unit(g)];
    params.extend((0..extra).map(|_| random_params(g, &mut rng)));
    let mut d_bad = 0;
    let mut delta_bad = 0;
    let mut dunkl_bad = vec![0usize; params.len()];
    for w in &elements {
        if !de_rham_d(g, &de_rham_d(g, w)?)?.is_zero() {
            d_bad += 1;
        }
        if !koszul_delta(g, &koszul_delta(g, w, None), None).is_zero() {
            delta_bad += 1;
        }
        for (k, c) in params.iter().enumerate() {
            if !dunkl_d(g, c, &dunkl_d(g, c, w, None)?, None)?.is_zero() {
                dunkl_bad[k] += 1;
            }
        }
    }
    let cs: Vec<Vec<serde_json::Value>> = params.iter().map(|p| p.c.iter().map(Scalar::to_json).collect()).collect();
    Ok(vec![
        Check::new("d_squared", d_bad == 0, json!({ "samples": count, "nonzero": d_bad })),
        Check::new("delta_squared", delta_bad == 0, json!({ "samples": count, "nonzero": delta_bad })),
        Check::new(
            "dunkl_squared",
            dunkl_bad.iter().all(|&b| b == 0),
            json!({ "samples": count, "c": cs, "nonzero": dunkl_bad }),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldId;

    const Q: FieldId = FieldId::Rational;

    fn build(code: &str) -> ReflectionGroup {
        ReflectionGroup::build(code.parse().unwrap()).unwrap()
    }

    fn scalar(p: Polynomial) -> WeilElement {
        WeilElement::scalar(p, Ambient::FullWeil)
    }

    #[test]
    fn square_zero_random() {
        for code in ["A2", "B2", "I2(5)"] {
            for c in square_zero_check(&build(code), 3, 10, 2).unwrap() {
                assert!(c.passed, "{code}: {c:?}");
            }
        }
    }

    #[test]
    fn de_rham_examples() {
        let a1 = build("A1");
        let x = Polynomial::var(1, Q, 0);
        let d = de_rham_d(&a1, &scalar(x.pow(2))).unwrap();
        assert_eq!(d, WeilElement::from_term(1, x.scale(&Scalar::int(2)), Ambient::FullWeil));
        assert!(de_rham_d(&a1, &scalar(Polynomial::constant(1, Scalar::int(7)))).unwrap().is_zero());
        let q = scalar(x.clone()).with_ambient(Ambient::Quotient);
        assert!(matches!(de_rham_d(&a1, &q), Err(Error::DeRhamOnQuotient)));
        let b2 = build("A2");
        let xy = &Polynomial::var(2, Q, 0) * &Polynomial::var(2, Q, 1);
        let once = de_rham_d(&b2, &scalar(xy)).unwrap();
        assert!(!once.is_zero());
        assert!(de_rham_d(&b2, &once).unwrap().is_zero());
    }

    #[test]
    fn koszul_examples() {
        let b2 = build("B2");
        let x = WeilElement::vector(Q, &[Scalar::int(1), Scalar::int(0)], Ambient::FullWeil);
        let px = Polynomial::var(2, Q, 0);
        let py = Polynomial::var(2, Q, 1);
        assert_eq!(koszul_delta(&b2, &x, None), scalar(px.clone()));
        assert!(koszul_delta(&b2, &scalar(&px * &py), None).is_zero());
        let xy = WeilElement::from_term(0b11, Polynomial::one(2, Q), Ambient::FullWeil);
        let expect = WeilElement::from_term(0b10, px.clone(), Ambient::FullWeil).sub(&WeilElement::from_term(0b01, py.clone(), Ambient::FullWeil));
        assert_eq!(koszul_delta(&b2, &xy, None), expect);
        assert!(koszul_delta(&b2, &koszul_delta(&b2, &xy, None), None).is_zero());
    }

    #[test]
    fn cartan_homotopy_in_general_gram() {
        // (dδ + δd)(ω) = (ext degree + poly degree)·ω
        let g = build("G2");
        let p = Polynomial::from_int_terms(g.field(), 2, &[(3, &[2, 1]), (-2, &[0, 3])]);
        let w = WeilElement::from_term(0b01, p, Ambient::FullWeil);
        let lhs = de_rham_d(&g, &koszul_delta(&g, &w, None)).unwrap().add(&koszul_delta(&g, &de_rham_d(&g, &w).unwrap(), None));
        assert_eq!(lhs, w.scale(&Scalar::int(4)));
    }

    #[test]
    fn nabla_examples() {
        let a1 = build("A1");
        let s = &a1.reflections()[0];
        let x = Polynomial::var(1, Q, 0);
        let out = nabla_s(&a1, s, &scalar(x.clone()), None).unwrap();
        assert_eq!(out, WeilElement::from_term(1, Polynomial::constant(1, Scalar::int(2)), Ambient::FullWeil));
        let e = WeilElement::vector(Q, &[Scalar::int(1)], Ambient::FullWeil);
        assert!(nabla_s(&a1, s, &e, None).unwrap().is_zero());
        assert!(nabla_s(&a1, s, &scalar(x.pow(2)), None).unwrap().is_zero());
    }

    #[test]
    fn nabla_scaling_and_invariants() {
        let g = build("B3");
        let p = Polynomial::from_int_terms(Q, 3, &[(1, &[2, 1, 0]), (4, &[0, 0, 3])]);
        let w = WeilElement::from_term(0b101, p, Ambient::FullWeil);
        for s in g.reflections() {
            let three = Scalar::int(3);
            let root: Vec<Scalar> = s.root.iter().map(|x| x * &three).collect();
            let form: Vec<Scalar> = s.form.iter().map(|x| x * &three).collect();
            assert_eq!(nabla_with_root(&g, s, &root, &form, &w, None).unwrap(), nabla_s(&g, s, &w, None).unwrap());
            for psi in g.basic_invariants().unwrap() {
                assert!(nabla_s(&g, s, &scalar(psi.clone()), None).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn dunkl_squares_to_zero() {
        for code in ["A2", "B2", "G2", "I2(5)"] {
            let g = build(code);
            let n = g.rank();
            let c: Vec<Scalar> = (0..g.reflection_classes().len()).map(|k| Scalar::frac(2 + k as i64, 3)).collect();
            let params = DunklParams::new(&g, c).unwrap();
            let p = Polynomial::from_int_terms(g.field(), n, &[(1, &[3, 1]), (-5, &[1, 2]), (2, &[0, 4])]);
            let w = WeilElement::from_term(0b01, p, Ambient::FullWeil);
            let once = dunkl_d(&g, &params, &w, None).unwrap();
            assert!(!once.is_zero());
            assert!(dunkl_d(&g, &params, &once, None).unwrap().is_zero(), "{code}");
        }
    }

    #[test]
    fn eigenvalues_on_one_dimensional_characters() {
        let g = build("B2");
        let unit = DunklParams::unit(&g);
        let psi = g.basic_invariants().unwrap();
        let triv = ClassFunction::trivial(&g);
        let gamma = delta_d_eigenvalue(&g, &unit, &triv, &scalar(psi[1].clone()), None).unwrap();
        assert!(gamma.is_zero());
        let delta = crate::group::jacobian_delta(&g, psi).unwrap();
        let sign = ClassFunction::sign(&g);
        let gamma = delta_d_eigenvalue(&g, &unit, &sign, &scalar(delta), None).unwrap();
        assert_eq!(gamma, Scalar::int(2 * 4));
        let refl = ClassFunction::reflection(&g);
        assert_eq!(delta_d_closed_form(&g, &unit, &refl), Scalar::int(4));
    }
}
