//! The little adjoint side: for W with two reflection classes T_ℓ, T_p,
//! the splitting W = W_p ⋉ H_ℓ, the module V̄ = J_H/J_H², its summand U,
//! the invariants φ_i of K[U], and the maps g_i, v_i in Hom_W(U, ΛV ⊗ H).

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::algebra::linalg::{inverse, solve_combination, Echelon, Matrix, SparseRow};
use crate::algebra::{Ambient, FieldId, Monomial, Polynomial, Rat, Scalar, WeilElement};
use crate::coinvariants::CoinvariantBasis;
use crate::covariant::{free_span, CovariantMap};
use crate::differentials::{dunkl_d, koszul_delta, proportionality, DunklParams};
use crate::error::{Error, Result};
use crate::group::{find_invariants, jacobian, products_of_degree, ClassFunction, ReflectionGroup};
use crate::molien::{characteristic_polynomial, graded_multiplicity_series};
use crate::report::Check;

/// `W = W_p ⋉ H_ℓ` for one choice of which class plays T_ℓ.
#[derive(Debug, Clone)]
pub struct SplitGroupData {
    pub ell_class: usize,
    pub p_class: usize,
    /// Subgroup generated by all reflections in T_ℓ.
    pub h_ell: Vec<usize>,
    /// Subgroup generated by the simple reflections in T_p.
    pub w_p: Vec<usize>,
    pub r_ell: usize,
    pub r_p: usize,
    /// The image of each element of W under W → W_p.
    pub quotient: Vec<usize>,
}

impl SplitGroupData {
    pub fn to_json(&self) -> Value {
        json!({
            "ell_class": self.ell_class,
            "h_ell_order": self.h_ell.len(),
            "w_p_order": self.w_p.len(),
            "r_ell": self.r_ell,
            "r_p": self.r_p,
        })
    }
}

pub fn split_group(g: &ReflectionGroup, ell_class: usize) -> Result<SplitGroupData> {
    let classes = g.reflection_classes();
    if classes.len() != 2 {
        return Err(Error::NoLengthClasses(g.label().to_string()));
    }
    if ell_class > 1 {
        return Err(Error::Usage(format!("reflection class {ell_class} out of range")));
    }
    let p_class = 1 - ell_class;
    let t_ell: Vec<usize> = classes[ell_class].iter().map(|&i| g.reflections()[i].element).collect();
    let class_of_simple = |s: usize| g.reflection_for_element(s).expect("simple reflection").class;
    let s_p: Vec<usize> = g.simple_reflections().iter().copied().filter(|&s| class_of_simple(s) == p_class).collect();
    let r_ell = g.rank() - s_p.len();
    let h_ell = g.generated_subgroup(&t_ell);
    let w_p = g.generated_subgroup(&s_p);
    if h_ell.len() * w_p.len() != g.order() {
        return Err(Error::Internal(format!(
            "{}: |H_ℓ|·|W_p| = {}·{} ≠ {}",
            g.label(),
            h_ell.len(),
            w_p.len(),
            g.order()
        )));
    }
    let mut in_h = vec![false; g.order()];
    for &x in &h_ell {
        in_h[x] = true;
    }
    for &s in g.simple_reflections() {
        for &t in &t_ell {
            if !in_h[g.mul(g.mul(s, t), s)] {
                return Err(Error::Internal(format!("{}: H_ℓ is not normal", g.label())));
            }
        }
    }
    let mut quotient = vec![usize::MAX; g.order()];
    for &a in &w_p {
        for &b in &h_ell {
            let w = g.mul(a, b);
            if quotient[w] != usize::MAX {
                return Err(Error::Internal(format!("{}: H_ℓ ∩ W_p is nontrivial", g.label())));
            }
            quotient[w] = a;
        }
    }
    Ok(SplitGroupData {
        ell_class,
        p_class,
        h_ell,
        w_p,
        r_ell,
        r_p: s_p.len(),
        quotient,
    })
}

/// Degrees of a polynomial ring of invariants, read off the series
/// `|H|⁻¹ Σ_h 1/det(1 - t h)`.
pub fn invariant_degrees(g: &ReflectionGroup, h: &[usize]) -> Result<Vec<u32>> {
    let n = g.rank();
    let field = g.field();
    let reflections = h.iter().filter(|&&w| g.reflection_for_element(w).is_some()).count();
    let top = reflections + 2;
    let mut series = vec![Scalar::zero(field); top + 1];
    for &w in h {
        let c = characteristic_polynomial(g.element(w));
        // det(1 - t w) = Σ_k c_{n-k} t^k
        let mut b = vec![Scalar::zero(field); top + 1];
        b[0] = Scalar::one(field);
        for m in 1..=top {
            let mut acc = Scalar::zero(field);
            for k in 1..=m.min(n) {
                acc -= &(&c[n - k] * &b[m - k]);
            }
            b[m] = acc;
        }
        for (s, x) in series.iter_mut().zip(&b) {
            *s += x;
        }
    }
    let order = Rat::from_int(h.len() as i64);
    let mut coeffs: Vec<i64> = Vec::with_capacity(top + 1);
    for s in &series {
        let v = s
            .as_rational()
            .map(|r| r / &order)
            .filter(Rat::is_integer)
            .and_then(|r| r.to_i64())
            .ok_or_else(|| Error::Internal("invariant series is not integral".into()))?;
        coeffs.push(v);
    }
    let mut degrees = Vec::new();
    loop {
        let Some(e) = (1..=top).find(|&e| coeffs[e] != 0) else {
            break;
        };
        if coeffs[e] < 0 {
            return Err(Error::Internal(format!("invariant series has negative coefficient at {e}")));
        }
        for _ in 0..coeffs[e] {
            degrees.push(e as u32);
            for k in (e..=top).rev() {
                coeffs[k] -= coeffs[k - e];
            }
        }
    }
    if degrees.len() != n {
        return Err(Error::Internal(format!("found {} invariant degrees, expected {n}", degrees.len())));
    }
    Ok(degrees)
}

/// Basic invariants ψ̄ of H_ℓ.
pub fn subgroup_invariants(g: &ReflectionGroup, split: &SplitGroupData) -> Result<Vec<Polynomial>> {
    let degrees = invariant_degrees(g, &split.h_ell)?;
    let psi = find_invariants(g, &split.h_ell, &degrees, false)?;
    let jac = jacobian(&psi);
    let expected: u32 = degrees.iter().map(|d| d - 1).sum();
    let product: u64 = degrees.iter().map(|&d| d as u64).product();
    if jac.is_zero() || jac.degree() != Some(expected) || product != split.h_ell.len() as u64 {
        return Err(Error::InvariantsNotIndependent);
    }
    Ok(psi)
}

#[derive(Default)]
struct MonomialIndex(HashMap<Monomial, usize>);

impl MonomialIndex {
    fn row(&mut self, p: &Polynomial) -> SparseRow {
        let mut row = SparseRow::new();
        for (m, c) in p.terms() {
            let next = self.0.len();
            let k = *self.0.entry(m.clone()).or_insert(next);
            row.insert(k, c.clone());
        }
        row
    }
}

/// The members of `polys` that extend the span of the ones before them.
fn independent_subset(polys: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut ix = MonomialIndex::default();
    let mut e = Echelon::new();
    polys.into_iter().filter(|p| e.insert(&ix.row(p))).collect()
}

/// Matrix of `w` on the span of `basis`: `w·b_k = Σ_j M[j][k] b_j`.
fn action_matrix(g: &ReflectionGroup, w: usize, basis: &[Polynomial]) -> Result<Matrix> {
    let mut ix = MonomialIndex::default();
    let cols: Vec<SparseRow> = basis.iter().map(|b| ix.row(b)).collect();
    let mut m = vec![vec![Scalar::zero(g.field()); basis.len()]; basis.len()];
    for (k, b) in basis.iter().enumerate() {
        let image = ix.row(&g.act_poly(w, b));
        let (x, _) = solve_combination(&cols, &image).ok_or_else(|| Error::NotIsotypic("span is not W-stable".into()))?;
        for (j, v) in x.into_iter().enumerate() {
            m[j][k] = v;
        }
    }
    Ok(m)
}

fn trace(m: &Matrix) -> Scalar {
    let mut acc = Scalar::zero(m.first().map_or(FieldId::Rational, |r| r[0].field()));
    for (i, row) in m.iter().enumerate() {
        acc += &row[i];
    }
    acc
}

/// Gram matrix of the apolar pairing on `basis`.
fn apolar_gram(g: &ReflectionGroup, basis: &[Polynomial]) -> Matrix {
    basis.iter().map(|a| basis.iter().map(|b| a.apolar(b, g.gram_inv())).collect()).collect()
}

/// V̄ realized inside A^{H_ℓ} and split as U ⊕ V̄^W.
#[derive(Debug, Clone)]
pub struct UbarDecomposition {
    /// ψ̄'_k: ψ̄_k minus its apolar projection to J²; their span is W-stable.
    pub vbar_basis: Vec<Polynomial>,
    pub u_part: Vec<Polynomial>,
    pub invariant_part: Vec<Polynomial>,
    /// Polynomial degree of U, when homogeneous.
    pub u_degree: Option<u32>,
    /// `d_n/2 - (r_p - 1) r_ℓ`.
    pub expected_u_degree: u32,
    pub subgroup_degrees: Vec<u32>,
    /// Matrices of the elements of W_p on `u_part`, keyed by element index.
    pub u_action: HashMap<usize, Matrix>,
    pub checks: Vec<Check>,
}

pub fn ubar_decomposition(g: &ReflectionGroup, split: &SplitGroupData, psibar: &[Polynomial]) -> Result<UbarDecomposition> {
    let degs: Vec<u32> = psibar.iter().map(|p| p.degree().unwrap_or(0)).collect();
    let tagged: Vec<(u32, Polynomial)> = degs.iter().copied().zip(psibar.iter().cloned()).collect();
    let mut vbar = Vec::with_capacity(psibar.len());
    for (k, psi) in psibar.iter().enumerate() {
        let d = degs[k];
        let mut j2 = Vec::new();
        for (dj, pj) in &tagged {
            if *dj < d {
                for q in products_of_degree(&tagged, d - dj) {
                    j2.push(&q * pj);
                }
            }
        }
        let j2 = independent_subset(j2);
        if j2.is_empty() {
            vbar.push(psi.clone());
            continue;
        }
        let gram = apolar_gram(g, &j2);
        let inv = inverse(&gram).ok_or_else(|| Error::Internal("apolar form degenerate on J²".into()))?;
        let rhs: Vec<Scalar> = j2.iter().map(|b| psi.apolar(b, g.gram_inv())).collect();
        let mut out = psi.clone();
        for (i, b) in j2.iter().enumerate() {
            let mut a = Scalar::zero(g.field());
            for (j, r) in rhs.iter().enumerate() {
                a += &(&inv[i][j] * r);
            }
            out.add_scaled(b, &-a);
        }
        vbar.push(out);
    }
    let averaged: Vec<Polynomial> = vbar.iter().map(|p| g.reynolds_over(&split.w_p, p)).collect();
    let invariant_part = independent_subset(averaged.iter().filter(|p| !p.is_zero()).cloned().collect());
    let u_part = independent_subset(vbar.iter().zip(&averaged).map(|(p, a)| p - a).filter(|p| !p.is_zero()).collect());

    let u_degrees: Vec<u32> = u_part.iter().map(|p| p.degree().unwrap_or(0)).collect();
    let u_degree = u_degrees.first().copied().filter(|d| u_degrees.iter().all(|x| x == d) && u_part.iter().all(Polynomial::is_homogeneous));
    let dn = *g.degrees().last().unwrap();
    let expected_u_degree = (dn / 2).saturating_sub(((split.r_p as u32).saturating_sub(1)) * split.r_ell as u32);

    let mut u_action = HashMap::new();
    for &w in &split.w_p {
        u_action.insert(w, action_matrix(g, w, &u_part)?);
    }
    let extra = Scalar::from_int(g.field(), (g.rank() - split.r_p) as i64);
    let character_ok = split.w_p.iter().all(|w| trace(&u_action[w]) == &g.trace(*w) - &extra);
    let trivial_on_h = g
        .simple_reflections()
        .iter()
        .filter(|&&s| g.reflection_for_element(s).unwrap().class == split.ell_class)
        .all(|&s| u_part.iter().all(|p| &g.act_poly(s, p) == p));

    let checks = vec![
        Check::new(
            "vbar_split",
            u_part.len() + invariant_part.len() == psibar.len(),
            json!({ "dim_u": u_part.len(), "dim_invariant": invariant_part.len(), "rank": psibar.len() }),
        ),
        Check::new(
            "vbar_invariant_dim",
            invariant_part.len() == split.r_ell,
            json!({ "dim": invariant_part.len(), "r_ell": split.r_ell }),
        ),
        Check::new(
            "u_reflection_rep",
            u_part.len() == split.r_p && character_ok && trivial_on_h,
            json!({ "dim_u": u_part.len(), "r_p": split.r_p, "character_matches": character_ok }),
        ),
        Check::new(
            "u_degree",
            u_degree == Some(expected_u_degree),
            json!({ "u_degree": u_degree, "expected": expected_u_degree }),
        ),
    ];
    Ok(UbarDecomposition {
        vbar_basis: vbar,
        u_part,
        invariant_part,
        u_degree,
        expected_u_degree,
        subgroup_degrees: degs,
        u_action,
        checks,
    })
}

/// Generators φ̂_i of K[y]^{W_p} (y_k ↔ the basis of U) and φ_i = φ̂_i(U).
#[derive(Debug, Clone)]
pub struct TildeInvariants {
    pub phi_hat: Vec<Polynomial>,
    pub phi: Vec<Polynomial>,
    /// Degrees of φ̂_i in y.
    pub y_degrees: Vec<u32>,
    /// Polynomial degrees of φ_i in x.
    pub x_degrees: Vec<u32>,
    /// Apolar Gram matrix of the basis of U.
    pub form: Matrix,
    pub form_inv: Matrix,
    pub checks: Vec<Check>,
}

fn matrix_reynolds(mats: &[Matrix], p: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero(p.nvars(), p.field());
    for m in mats {
        let rows: Matrix = (0..m.len()).map(|k| m.iter().map(|row| row[k].clone()).collect()).collect();
        acc = &acc + &p.substitute_linear(&rows);
    }
    acc.scale(&Scalar::frac(1, mats.len() as i64))
}

pub fn tilde_invariants(
    g: &ReflectionGroup,
    h: &CoinvariantBasis,
    split: &SplitGroupData,
    dec: &UbarDecomposition,
) -> Result<TildeInvariants> {
    let field = g.field();
    let rp = dec.u_part.len();
    let q = dec.u_degree.ok_or_else(|| Error::NotIsotypic("U is not homogeneous".into()))?;
    let mats: Vec<Matrix> = split.w_p.iter().map(|w| dec.u_action[w].clone()).collect();
    let y_degrees: Vec<u32> = (2..=rp as u32 + 1).collect();
    let mut found: Vec<(u32, Polynomial)> = Vec::new();
    for &e in &y_degrees {
        let mut ix = MonomialIndex::default();
        let mut span = Echelon::new();
        for p in products_of_degree(&found, e) {
            span.insert(&ix.row(&p));
        }
        let mut accepted = None;
        for m in Monomial::all_of_degree(rp, e).into_iter().rev() {
            let avg = matrix_reynolds(&mats, &Polynomial::monomial(m, Scalar::one(field)));
            if !avg.is_zero() && span.insert(&ix.row(&avg)) {
                accepted = Some(avg.primitive());
                break;
            }
        }
        found.push((e, accepted.ok_or(Error::SeedsExhausted(e))?));
    }
    let phi_hat: Vec<Polynomial> = found.into_iter().map(|(_, p)| p).collect();
    let basic = !jacobian(&phi_hat).is_zero() && y_degrees.iter().map(|&d| d as usize).product::<usize>() == split.w_p.len();
    let phi: Vec<Polynomial> = phi_hat.iter().map(|p| p.compose(&dec.u_part)).collect();
    let x_degrees: Vec<u32> = y_degrees.iter().map(|e| e * q).collect();

    let invariant = phi.iter().all(|p| g.simple_reflections().iter().all(|&s| &g.act_poly(s, p) == p));
    let in_j = phi.iter().all(|p| h.in_ideal(p));
    let dn = *g.degrees().last().unwrap();
    let top = x_degrees.last().copied().unwrap_or(0);

    // J̃_e = ker(K[y]_e → H) against the ideal (φ̂)_e
    let tagged: Vec<(u32, Polynomial)> = y_degrees.iter().copied().zip(phi_hat.iter().cloned()).collect();
    let mut per_degree = Vec::new();
    let mut ideal_ok = true;
    for e in 1..=y_degrees.last().copied().unwrap_or(1) {
        let monos = Monomial::all_of_degree(rp, e);
        let image_rank = if e * q > h.top_degree() {
            0
        } else {
            let mut ech = Echelon::new();
            for m in &monos {
                let p = Polynomial::monomial(m.clone(), Scalar::one(field)).compose(&dec.u_part);
                ech.insert(&h.coords(&p, e * q));
            }
            ech.rank()
        };
        let kernel = monos.len() - image_rank;
        let mut ix = MonomialIndex::default();
        let mut ech = Echelon::new();
        for (d, f) in &tagged {
            if *d <= e {
                for m in Monomial::all_of_degree(rp, e - d) {
                    ech.insert(&ix.row(&(f * &Polynomial::monomial(m, Scalar::one(field)))));
                }
            }
        }
        ideal_ok &= kernel == ech.rank();
        per_degree.push(json!({ "degree": e, "kernel": kernel, "ideal": ech.rank() }));
    }

    let form = apolar_gram(g, &dec.u_part);
    let form_inv = inverse(&form).ok_or_else(|| Error::Internal("apolar form degenerate on U".into()))?;
    let checks = vec![
        Check::new("phi_basic", basic && invariant, json!({ "y_degrees": y_degrees })),
        Check::new("phi_in_J", in_j, Value::Null),
        Check::new("phi_ideal", ideal_ok, json!(per_degree)),
        Check::new("phi_top_degree", top == dn, json!({ "x_degrees": x_degrees, "doubled_top": 2 * top, "d_n": dn })),
    ];
    Ok(TildeInvariants {
        phi_hat,
        phi,
        y_degrees,
        x_degrees,
        form,
        form_inv,
        checks,
    })
}

/// `g_i(y_j) = Σ_k (y_j, y_k) π(∂φ̂_i/∂y_k (U))`.
pub fn make_g(g: &ReflectionGroup, h: &CoinvariantBasis, dec: &UbarDecomposition, tilde: &TildeInvariants, i: usize) -> CovariantMap {
    let rp = dec.u_part.len();
    let partials: Vec<Polynomial> = (0..rp).map(|k| tilde.phi_hat[i].partial(k).compose(&dec.u_part)).collect();
    let components = (0..rp)
        .map(|j| {
            let mut acc = Polynomial::zero(g.rank(), g.field());
            for (k, d) in partials.iter().enumerate() {
                acc.add_scaled(d, &tilde.form[j][k]);
            }
            WeilElement::scalar(h.normal_form(&acc), Ambient::Quotient)
        })
        .collect();
    CovariantMap { components }
}

/// `c = 1` on T_p and 0 on T_ℓ.
pub fn p_params(g: &ReflectionGroup, split: &SplitGroupData) -> DunklParams {
    let mut c = vec![Scalar::zero(g.field()); 2];
    c[split.p_class] = Scalar::one(g.field());
    DunklParams { c }
}

/// `v_i = (r_p / 2|T_p|) D_(p) g_i`.
pub fn make_v(g: &ReflectionGroup, h: &CoinvariantBasis, split: &SplitGroupData, gi: &CovariantMap) -> Result<CovariantMap> {
    let params = p_params(g, split);
    let tp = g.reflection_classes()[split.p_class].len() as i64;
    let factor = Scalar::frac(split.r_p as i64, 2 * tp);
    let components = gi
        .components
        .iter()
        .map(|x| Ok(dunkl_d(g, &params, x, Some(h))?.scale(&factor)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CovariantMap { components })
}

/// `E(a, b) = Σ_{jk} B⁻¹_{jk} a(y_j) ∧ b(y_k)` for the apolar form B on U.
pub fn form_e_u(h: &CoinvariantBasis, form_inv: &Matrix, a: &CovariantMap, b: &CovariantMap) -> WeilElement {
    let n = h.nvars();
    let mut acc = WeilElement::zero(n, h.field(), Ambient::FullWeil);
    for (j, aj) in a.components.iter().enumerate() {
        if aj.is_zero() {
            continue;
        }
        let aj = aj.clone().with_ambient(Ambient::FullWeil);
        for (k, bk) in b.components.iter().enumerate() {
            if form_inv[j][k].is_zero() || bk.is_zero() {
                continue;
            }
            let bk = bk.clone().with_ambient(Ambient::FullWeil);
            acc.add_scaled(&aj.wedge(&bk).expect("same rank"), &form_inv[j][k]);
        }
    }
    h.weil_normal_form(&acc)
}

/// `F(w·y_k) = w·F(y_k)` for the simple reflections of W.
fn is_u_equivariant(g: &ReflectionGroup, h: &CoinvariantBasis, split: &SplitGroupData, dec: &UbarDecomposition, f: &CovariantMap) -> bool {
    g.simple_reflections().iter().all(|&s| {
        let m = &dec.u_action[&split.quotient[s]];
        (0..f.components.len()).all(|k| {
            let mut lhs = WeilElement::zero(g.rank(), g.field(), Ambient::Quotient);
            for (j, fj) in f.components.iter().enumerate() {
                lhs.add_scaled(fj, &m[j][k]);
            }
            lhs == h.act(g, s, &f.components[k])
        })
    })
}

/// Character of U as a class function on W.
pub fn u_character(g: &ReflectionGroup, split: &SplitGroupData, dec: &UbarDecomposition) -> ClassFunction {
    ClassFunction::from_fn(g, |w| trace(&dec.u_action[&split.quotient[w]]))
}

/// Everything for one orientation.
pub struct LittleAdjoint<'a> {
    pub group: &'a ReflectionGroup,
    pub basis: &'a CoinvariantBasis,
    pub split: SplitGroupData,
    pub psibar: Vec<Polynomial>,
    pub dec: UbarDecomposition,
    pub tilde: TildeInvariants,
    pub g: Vec<CovariantMap>,
    pub v: Vec<CovariantMap>,
}

impl<'a> LittleAdjoint<'a> {
    pub fn build(g: &'a ReflectionGroup, h: &'a CoinvariantBasis, ell_class: usize) -> Result<Self> {
        let split = split_group(g, ell_class)?;
        let psibar = subgroup_invariants(g, &split)?;
        let dec = ubar_decomposition(g, &split, &psibar)?;
        let tilde = tilde_invariants(g, h, &split, &dec)?;
        let gs: Vec<CovariantMap> = (0..tilde.phi.len()).map(|i| make_g(g, h, &dec, &tilde, i)).collect();
        let vs = gs.iter().map(|x| make_v(g, h, &split, x)).collect::<Result<Vec<_>>>()?;
        Ok(LittleAdjoint {
            group: g,
            basis: h,
            split,
            psibar,
            dec,
            tilde,
            g: gs,
            v: vs,
        })
    }

    pub fn e(&self, a: &CovariantMap, b: &CovariantMap) -> WeilElement {
        form_e_u(self.basis, &self.tilde.form_inv, a, b)
    }

    /// `q`: the polynomial degree of U.
    pub fn q(&self) -> u32 {
        self.dec.u_degree.unwrap_or(0)
    }

    pub fn generator_checks(&self) -> Vec<Check> {
        let (g, h) = (self.group, self.basis);
        let equivariant = self.g.iter().chain(&self.v).all(|f| is_u_equivariant(g, h, &self.split, &self.dec, f));
        let intertwines = self.g.iter().zip(&self.v).all(|(gi, vi)| {
            gi.components.iter().zip(&vi.components).all(|(a, b)| &koszul_delta(g, b, Some(h)) == a)
        });
        let q = self.q();
        let degrees: Vec<Option<u32>> = self.g.iter().map(CovariantMap::total_degree).collect();
        let expect: Vec<Option<u32>> = self.tilde.x_degrees.iter().map(|d| Some(2 * (d - q))).collect();
        let nonzero = self.g.iter().chain(&self.v).all(|f| !f.is_zero());
        vec![
            Check::new("gv_equivariant", equivariant && nonzero, Value::Null),
            Check::new("delta_v_equals_g", intertwines, Value::Null),
            Check::new("g_degrees", degrees == expect, json!({ "total_degrees": degrees, "expected": expect })),
        ]
    }

    pub fn orthogonality_checks(&self) -> Vec<Check> {
        let k = self.g.len();
        let pairs = |xs: &[CovariantMap]| -> Vec<(usize, usize)> {
            let mut bad = Vec::new();
            for i in 0..k {
                for j in 0..k {
                    if !self.e(&xs[i], &xs[j]).is_zero() {
                        bad.push((i + 1, j + 1));
                    }
                }
            }
            bad
        };
        let gg = pairs(&self.g);
        let vv = pairs(&self.v);
        vec![
            Check::new("E_gg_zero", gg.is_empty(), json!({ "nonzero": gg })),
            Check::new("E_vv_zero", vv.is_empty(), json!({ "nonzero": vv })),
        ]
    }

    /// `E(v_i, g_j) = m_{ij} p_k` with `d_k = deg φ_i + deg φ_j - 2q`, else 0.
    pub fn m_table(&self, p: &[WeilElement]) -> (Vec<Vec<Option<Scalar>>>, Vec<(usize, usize)>) {
        let k = self.g.len();
        let q = self.q();
        let d = self.group.degrees();
        let mut m = vec![vec![None; k]; k];
        let mut failures = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let e = self.e(&self.v[i], &self.g[j]);
                let target = (self.tilde.x_degrees[i] + self.tilde.x_degrees[j])
                    .checked_sub(2 * q)
                    .and_then(|t| d.iter().position(|&ds| ds == t));
                match target {
                    Some(s) => match proportionality(&p[s], &e) {
                        Some(c) if !c.is_zero() => m[i][j] = Some(c),
                        _ => failures.push((i + 1, j + 1)),
                    },
                    None if !e.is_zero() => failures.push((i + 1, j + 1)),
                    None => {}
                }
            }
        }
        (m, failures)
    }

    pub fn m_check(&self, p: &[WeilElement]) -> Check {
        let (m, failures) = self.m_table(p);
        Check::new(
            "m_pattern",
            failures.is_empty(),
            json!({
                "m": m.iter().map(|row| row.iter().map(|x| x.as_ref().map_or(json!(0), Scalar::to_json)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "failures": failures,
            }),
        )
    }

    /// `p_r x_i = -Σ_{j≠i} m_j⁻¹ E(g_i, v_{r_p-j+1}) x_j` for x = g, v, with
    /// `E(g_j, v_{r_p-j+1}) = m_j p_r`.
    pub fn pr_check(&self, p: &[WeilElement]) -> Check {
        let h = self.basis;
        let k = self.g.len();
        let pr = p.last().expect("rank ≥ 1");
        let mj: Vec<Option<Scalar>> = (0..k)
            .map(|j| proportionality(pr, &self.e(&self.g[j], &self.v[k - 1 - j])).filter(|c| !c.is_zero()))
            .collect();
        if mj.iter().any(Option::is_none) {
            return Check::fail("pr_residuals", json!({ "error": "E(g_j, v_{r_p-j+1}) is not a nonzero multiple of p_r" }));
        }
        let mut residual = Vec::new();
        for i in 0..k {
            let mut rg = self.g[i].left_mul(pr, h);
            let mut rv = self.v[i].left_mul(pr, h);
            for j in 0..k {
                if j == i {
                    continue;
                }
                let coeff = self.e(&self.g[i], &self.v[k - 1 - j]).scale(&mj[j].as_ref().unwrap().inv());
                rg = rg.add(&self.g[j].left_mul(&coeff, h));
                rv = rv.add(&self.v[j].left_mul(&coeff, h));
            }
            if !rg.is_zero() {
                residual.push(format!("g{}", i + 1));
            }
            if !rv.is_zero() {
                residual.push(format!("v{}", i + 1));
            }
        }
        Check::new(
            "pr_residuals",
            residual.is_empty(),
            json!({ "m": mj.iter().map(|x| x.as_ref().unwrap().to_json()).collect::<Vec<_>>(), "nonzero_residual": residual }),
        )
    }

    /// Tries every exterior subalgebra on r - 1 of the p_i and records which
    /// ones make `{p_S g_i, p_S v_i}` a basis with the Molien series of
    /// Hom_W(U, ℬ).
    pub fn freeness_check(&self, p: &[WeilElement]) -> Check {
        let g = self.group;
        let r = g.rank();
        let chi = u_character(g, &self.split, &self.dec);
        let molien = match graded_multiplicity_series(g, &chi) {
            Ok(m) => m,
            Err(e) => return Check::error("freeness", &e),
        };
        let gens: Vec<&CovariantMap> = self.g.iter().chain(&self.v).collect();
        let full = (1u32 << r) - 1;
        let mut free_over = Vec::new();
        let mut tried = Vec::new();
        for omit in (0..r).rev() {
            let mask = full & !(1 << omit);
            let (series, defects) = free_span(self.basis, p, mask, &gens);
            let ok = defects.is_empty() && series == molien;
            let subalgebra: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            if ok {
                free_over.push(subalgebra.clone());
            }
            tried.push(json!({ "p": subalgebra, "series": series.coeffs(), "rank_defect_degrees": defects }));
        }
        Check::new(
            "freeness",
            !free_over.is_empty(),
            json!({ "molien": molien.coeffs(), "dim": molien.total(), "free_over": free_over, "tried": tried }),
        )
    }

    pub fn checks(&self, p: &[WeilElement]) -> Vec<Check> {
        let mut out = vec![Check::pass(
            "split",
            json!({ "split": self.split.to_json(), "subgroup_degrees": self.dec.subgroup_degrees }),
        )];
        out.extend(self.dec.checks.iter().cloned());
        out.extend(self.tilde.checks.iter().cloned());
        out.extend(self.generator_checks());
        out.extend(self.orthogonality_checks());
        out.push(self.m_check(p));
        out.push(self.pr_check(p));
        out.push(self.freeness_check(p));
        out
    }
}

/// All little-adjoint checks for both choices of T_ℓ, names suffixed with
/// the class index playing T_ℓ.
pub fn little_adjoint_suite(g: &ReflectionGroup, h: &CoinvariantBasis, p: &[WeilElement]) -> Vec<Check> {
    let mut out = Vec::new();
    for ell in 0..2 {
        let tag = |c: Check| Check::new(format!("{}[ell={ell}]", c.name), c.passed, c.details);
        match LittleAdjoint::build(g, h, ell) {
            Ok(la) => out.extend(la.checks(p).into_iter().map(tag)),
            Err(e) => out.push(Check::error(format!("little_adjoint[ell={ell}]"), &e)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariant::make_p;

    fn setup(code: &str) -> (ReflectionGroup, CoinvariantBasis) {
        let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
        let h = CoinvariantBasis::build(&g).unwrap();
        (g, h)
    }

    #[test]
    fn one_class_rejected() {
        let (g, _) = setup("A2");
        assert!(matches!(split_group(&g, 0), Err(Error::NoLengthClasses(_))));
    }

    #[test]
    fn b2_split_and_invariants() {
        let (g, _) = setup("B2");
        // the classes tie on simple reflections; class 1 holds the coordinate reflections
        let split = split_group(&g, 1).unwrap();
        assert_eq!((split.h_ell.len(), split.w_p.len()), (4, 2));
        let psibar = subgroup_invariants(&g, &split).unwrap();
        let x = Polynomial::var(2, FieldId::Rational, 0);
        let y = Polynomial::var(2, FieldId::Rational, 1);
        assert_eq!(psibar, vec![x.pow(2), y.pow(2)]);
        let dec = ubar_decomposition(&g, &split, &psibar).unwrap();
        assert!(dec.checks.iter().all(|c| c.passed), "{:?}", dec.checks);
        assert_eq!(dec.u_part.len(), 1);
        assert_eq!(dec.u_part[0].primitive(), (&x.pow(2) - &y.pow(2)).primitive());
    }

    #[test]
    fn i2_6_subgroup_degrees() {
        let (g, _) = setup("I2(6)");
        for ell in 0..2 {
            let split = split_group(&g, ell).unwrap();
            assert_eq!((split.h_ell.len(), split.w_p.len()), (6, 2));
            let psibar = subgroup_invariants(&g, &split).unwrap();
            let degs: Vec<u32> = psibar.iter().map(|p| p.degree().unwrap()).collect();
            assert_eq!(degs, vec![2, 3]);
            // Reynolds oracle: each ψ̄ is fixed by every element of H_ℓ.
            for p in &psibar {
                assert!(split.h_ell.iter().all(|&w| &g.act_poly(w, p) == p));
            }
        }
    }

    #[test]
    fn b2_suite() {
        let (g, h) = setup("B2");
        let p: Vec<WeilElement> = g.basic_invariants().unwrap().iter().map(|x| make_p(&g, &h, x).unwrap()).collect();
        let checks = little_adjoint_suite(&g, &h, &p);
        for c in &checks {
            assert!(c.passed, "{} {}", c.name, c.details);
        }
        let la = LittleAdjoint::build(&g, &h, 0).unwrap();
        assert_eq!(la.tilde.x_degrees, vec![4]);
        let (m, _) = la.m_table(&p);
        assert!(m[0][0].as_ref().is_some_and(|c| !c.is_zero()));
    }

    #[test]
    fn b3_phi_degrees() {
        let (g, h) = setup("B3");
        let la = LittleAdjoint::build(&g, &h, 0).unwrap();
        assert_eq!(la.tilde.x_degrees, vec![4, 6]);
    }
}
