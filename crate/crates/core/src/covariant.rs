//! The covariants p_i, f_i, u_i, the form E, and the structure checks of
//! Hom_W(V, ΛV ⊗ H).

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::linalg::{Echelon, SparseRow};
use crate::algebra::{Ambient, ExtMask, Monomial, Polynomial, Rat, Scalar, WeilElement};
use crate::coinvariants::CoinvariantBasis;
use crate::differentials::{de_rham_d, dunkl_d, koszul_delta, proportionality, DunklParams};
use crate::error::{Error, Result};
use crate::group::{ClassFunction, ReflectionGroup};
use crate::molien::{covariant_series_product_formula, graded_multiplicity_series, invariant_series_product_formula, GradedSeries};
use crate::report::Check;

/// An element of ΛV ⊗ H ⊗ V given by its values `F(e_j)` on the basis of V.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantMap {
    pub components: Vec<WeilElement>,
}

impl CovariantMap {
    pub fn zero(n: usize, field: crate::algebra::FieldId) -> Self {
        CovariantMap {
            components: (0..n).map(|_| WeilElement::zero(n, field, Ambient::Quotient)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(WeilElement::is_zero)
    }

    /// Total degree, when homogeneous.
    pub fn total_degree(&self) -> Option<u32> {
        let mut out = None;
        for c in &self.components {
            if c.is_zero() {
                continue;
            }
            let d = c.total_degree()?;
            if out.is_some_and(|o| o != d) {
                return None;
            }
            out = Some(d);
        }
        out
    }

    pub fn map(&self, f: impl Fn(&WeilElement) -> WeilElement) -> Self {
        CovariantMap {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CovariantMap {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|x| x.scale(c))
    }

    /// `a·F` for `a` in ΛV ⊗ H, reduced.
    pub fn left_mul(&self, a: &WeilElement, h: &CoinvariantBasis) -> Self {
        self.map(|x| h.mul(a, x).expect("same rank"))
    }

    /// `F(w·e_j) = w·F(e_j)` for the simple reflections.
    pub fn is_equivariant(&self, g: &ReflectionGroup, h: &CoinvariantBasis) -> bool {
        let n = g.rank();
        g.simple_reflections().iter().all(|&s| {
            let m = g.element(s);
            (0..n).all(|j| {
                let mut lhs = WeilElement::zero(n, g.field(), Ambient::Quotient);
                for k in 0..n {
                    lhs.add_scaled(&self.components[k], &m[k][j]);
                }
                lhs == h.act(g, s, &self.components[j])
            })
        })
    }
}

/// Assigns coordinates to (component, exterior mask, monomial) triples.
#[derive(Default)]
pub struct Indexer {
    map: HashMap<(usize, ExtMask, Monomial), usize>,
}

impl Indexer {
    pub fn row_of_element(&mut self, slot: usize, w: &WeilElement) -> SparseRow {
        let mut row = SparseRow::new();
        for (m, p) in w.terms() {
            for (mono, c) in p.terms() {
                let next = self.map.len();
                let k = *self.map.entry((slot, m, mono.clone())).or_insert(next);
                row.insert(k, c.clone());
            }
        }
        row
    }

    pub fn row_of_map(&mut self, f: &CovariantMap) -> SparseRow {
        let mut row = SparseRow::new();
        for (j, c) in f.components.iter().enumerate() {
            row.extend(self.row_of_element(j, c));
        }
        row
    }
}

/// `∧_{i∈S} p_i` in increasing index order.
pub fn p_product(p: &[WeilElement], s: u32, h: &CoinvariantBasis) -> WeilElement {
    let n = h.nvars();
    let mut acc = WeilElement::scalar(Polynomial::one(n, h.field()), Ambient::Quotient);
    for (i, pi) in p.iter().enumerate() {
        if s & (1 << i) != 0 {
            acc = h.mul(&acc, pi).expect("same rank");
        }
    }
    acc
}

/// `E(a, b) = Σ_{jk} G⁻¹_{jk} a_j ∧ b_k`.
pub fn form_e(g: &ReflectionGroup, h: &CoinvariantBasis, a: &CovariantMap, b: &CovariantMap) -> WeilElement {
    let n = g.rank();
    let ginv = g.gram_inv();
    let mut acc = WeilElement::zero(n, g.field(), Ambient::FullWeil);
    for j in 0..n {
        if a.components[j].is_zero() {
            continue;
        }
        let aj = a.components[j].clone().with_ambient(Ambient::FullWeil);
        for k in 0..n {
            if ginv[j][k].is_zero() || b.components[k].is_zero() {
                continue;
            }
            let bk = b.components[k].clone().with_ambient(Ambient::FullWeil);
            acc.add_scaled(&aj.wedge(&bk).expect("same rank"), &ginv[j][k]);
        }
    }
    h.weil_normal_form(&acc)
}

/// Everything built from one choice of basic invariants and multiplicities.
pub struct Covariants<'a> {
    pub group: &'a ReflectionGroup,
    pub basis: &'a CoinvariantBasis,
    pub params: DunklParams,
    pub psi: Vec<Polynomial>,
    pub p: Vec<WeilElement>,
    pub f: Vec<CovariantMap>,
    pub u: Vec<CovariantMap>,
}

/// `π(d(1⊗ψ))`.
pub fn make_p(g: &ReflectionGroup, h: &CoinvariantBasis, psi: &Polynomial) -> Result<WeilElement> {
    let d = de_rham_d(g, &WeilElement::scalar(psi.clone(), Ambient::FullWeil))?;
    Ok(h.weil_normal_form(&d))
}

/// `f(e_j) = π(1 ⊗ ∂ψ/∂x_j)`.
pub fn make_f(g: &ReflectionGroup, h: &CoinvariantBasis, psi: &Polynomial) -> CovariantMap {
    CovariantMap {
        components: (0..g.rank())
            .map(|j| WeilElement::scalar(h.normal_form(&psi.partial(j)), Ambient::Quotient))
            .collect(),
    }
}

/// `u = (r / 2|T|_c) D_c f`.
pub fn make_u(g: &ReflectionGroup, h: &CoinvariantBasis, params: &DunklParams, f: &CovariantMap) -> Result<CovariantMap> {
    let tc = params.weighted_count(g);
    if tc.is_zero() {
        return Err(Error::DegenerateMultiplicity);
    }
    let factor = &Scalar::from_int(g.field(), g.rank() as i64) * &(&tc * &Scalar::int(2)).inv();
    let comps = f
        .components
        .iter()
        .map(|x| Ok(dunkl_d(g, params, x, Some(h))?.scale(&factor)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CovariantMap { components: comps })
}

impl<'a> Covariants<'a> {
    pub fn build(g: &'a ReflectionGroup, h: &'a CoinvariantBasis, params: DunklParams) -> Result<Self> {
        let psi = g.basic_invariants()?.to_vec();
        Self::with_invariants(g, h, params, psi)
    }

    pub fn with_invariants(g: &'a ReflectionGroup, h: &'a CoinvariantBasis, params: DunklParams, psi: Vec<Polynomial>) -> Result<Self> {
        let p = psi.iter().map(|x| make_p(g, h, x)).collect::<Result<Vec<_>>>()?;
        let f: Vec<CovariantMap> = psi.iter().map(|x| make_f(g, h, x)).collect();
        let u = f.iter().map(|x| make_u(g, h, &params, x)).collect::<Result<Vec<_>>>()?;
        Ok(Covariants {
            group: g,
            basis: h,
            params,
            psi,
            p,
            f,
            u,
        })
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn e(&self, a: &CovariantMap, b: &CovariantMap) -> WeilElement {
        form_e(self.group, self.basis, a, b)
    }

    pub fn p_product(&self, s: u32) -> WeilElement {
        p_product(&self.p, s, self.basis)
    }

    fn degrees(&self) -> &[u32] {
        self.group.degrees()
    }

    fn is_invariant(&self, x: &WeilElement) -> bool {
        let (g, h) = (self.group, self.basis);
        g.simple_reflections().iter().all(|&s| &h.act(g, s, x) == x)
    }

    /// Invariance, degrees, anticommutation and the top product of the p_i.
    pub fn p_checks(&self) -> Vec<Check> {
        let (g, h) = (self.group, self.basis);
        let r = self.rank();
        let mut out = Vec::new();
        let invariant = self.p.iter().all(|x| self.is_invariant(x));
        let degrees: Vec<Option<u32>> = self.p.iter().map(|x| x.total_degree()).collect();
        let expect: Vec<Option<u32>> = self.degrees().iter().map(|d| Some(2 * d - 1)).collect();
        out.push(Check::new("p_invariant", invariant, Value::Null));
        out.push(Check::new("p_total_degree", degrees == expect, json!({ "degrees": degrees })));
        let mut anti = true;
        for i in 0..r {
            for j in i..r {
                let a = h.mul(&self.p[i], &self.p[j]).unwrap();
                let b = h.mul(&self.p[j], &self.p[i]).unwrap();
                anti &= a.add(&b).is_zero();
            }
        }
        out.push(Check::new("p_anticommute", anti, Value::Null));
        // ∏ p_j = det(G)⁻¹ e_1∧…∧e_r ⊗ π(Δ)
        let top = self.p_product((1 << r) - 1);
        let delta = crate::group::jacobian_delta(g, &self.psi);
        let ok = match delta {
            Ok(delta) => {
                let c = crate::algebra::linalg::determinant(g.gram()).inv();
                let expect = WeilElement::from_term((1 << r) - 1, h.normal_form(&delta).scale(&c), Ambient::Quotient);
                !top.is_zero() && top == expect
            }
            Err(_) => false,
        };
        out.push(Check::new("p_top_product", ok, Value::Null));
        out
    }

    /// The 2^r products p_S are independent and have the Molien series of ℬ^W.
    pub fn solomon_check(&self) -> Check {
        let g = self.group;
        let r = self.rank();
        let mut ix = Indexer::default();
        let mut by_degree: HashMap<u32, Echelon> = HashMap::new();
        let mut counts = vec![0i64; 1];
        let mut independent = true;
        for s in 0..(1u32 << r) {
            let x = self.p_product(s);
            let Some(d) = x.total_degree() else {
                independent = false;
                continue;
            };
            independent &= by_degree.entry(d).or_default().insert(&ix.row_of_element(0, &x));
            if counts.len() <= d as usize {
                counts.resize(d as usize + 1, 0);
            }
            counts[d as usize] += 1;
        }
        let spanned = GradedSeries::new(counts);
        let product = invariant_series_product_formula(self.degrees());
        let molien = graded_multiplicity_series(g, &ClassFunction::trivial(g));
        let passed = independent && spanned == product && molien.as_ref().is_ok_and(|m| m == &spanned);
        Check::new(
            "solomon",
            passed,
            json!({
                "independent": independent,
                "series": spanned.coeffs(),
                "molien": molien.map(|m| m.coeffs().to_vec()).unwrap_or_default(),
                "dim": spanned.total(),
            }),
        )
    }

    /// Equivariance, degrees and δ-intertwining of f_i and u_i.
    pub fn generator_checks(&self) -> Vec<Check> {
        let (g, h) = (self.group, self.basis);
        let mut out = Vec::new();
        let equi = self.f.iter().chain(&self.u).all(|m| m.is_equivariant(g, h));
        out.push(Check::new("fu_equivariant", equi, Value::Null));
        let fdeg: Vec<Option<u32>> = self.f.iter().map(CovariantMap::total_degree).collect();
        let udeg: Vec<Option<u32>> = self.u.iter().map(CovariantMap::total_degree).collect();
        let ok = self.degrees().iter().zip(&fdeg).zip(&udeg).all(|((d, f), u)| *f == Some(2 * d - 2) && *u == Some(2 * d - 3));
        out.push(Check::new("fu_total_degree", ok, json!({ "f": fdeg, "u": udeg })));
        let delta_f = self.f.iter().all(|m| m.map(|x| koszul_delta(g, x, Some(h))).is_zero());
        out.push(Check::new("delta_f_zero", delta_f, Value::Null));
        let delta_u = self.u.iter().zip(&self.f).all(|(u, f)| &u.map(|x| koszul_delta(g, x, Some(h))) == f);
        out.push(Check::new("delta_u_equals_f", delta_u, Value::Null));
        out
    }

    /// E(f_i,f_j) = 0 and E(u_i,u_j) = 0.
    pub fn orthogonality_checks(&self) -> Vec<Check> {
        let r = self.rank();
        let mut ff = true;
        let mut uu = true;
        let mut witnesses = Vec::new();
        for i in 0..r {
            for j in 0..r {
                if !self.e(&self.f[i], &self.f[j]).is_zero() {
                    ff = false;
                    witnesses.push(json!({ "form": "ff", "i": i + 1, "j": j + 1 }));
                }
                if !self.e(&self.u[i], &self.u[j]).is_zero() {
                    uu = false;
                    witnesses.push(json!({ "form": "uu", "i": i + 1, "j": j + 1 }));
                }
            }
        }
        vec![
            Check::new("E_ff_zero", ff, if ff { Value::Null } else { json!(witnesses) }),
            Check::new("E_uu_zero", uu, if uu { Value::Null } else { json!(witnesses) }),
        ]
    }

    /// `E(u_i, f_j) = k_{ij} p_s` when `d_i + d_j - 2 = d_s`, else 0.
    pub fn constants_table(&self) -> Result<ConstantsTable> {
        if self.group.spec().is_some_and(|s| s.has_repeated_degrees()) {
            return Err(Error::RepeatedDegrees(self.group.label().to_string()));
        }
        let r = self.rank();
        let d = self.degrees();
        let mut k = vec![vec![None; r]; r];
        let mut pattern = vec![vec![None; r]; r];
        let mut failures = Vec::new();
        for i in 0..r {
            for j in 0..r {
                let e = self.e(&self.u[i], &self.f[j]);
                let target = d.iter().position(|&ds| ds + 2 == d[i] + d[j]);
                pattern[i][j] = target.map(|s| s + 1);
                match target {
                    Some(s) => match proportionality(&self.p[s], &e) {
                        Some(c) if !c.is_zero() => k[i][j] = Some(c),
                        _ => failures.push((i + 1, j + 1)),
                    },
                    None => {
                        if !e.is_zero() {
                            failures.push((i + 1, j + 1));
                        }
                    }
                }
            }
        }
        let symmetric = (0..r).all(|i| (0..r).all(|j| k[i][j] == k[j][i]));
        Ok(ConstantsTable {
            k,
            pattern,
            symmetric,
            failures,
        })
    }

    /// `E(f_i, u_{r-i+1}) = k_i p_r` and the p_r-multiplication formulas.
    pub fn pr_structure_check(&self, table: &ConstantsTable) -> Vec<Check> {
        let (h, r) = (self.basis, self.rank());
        let pr = &self.p[r - 1];
        let ki: Vec<Option<Scalar>> = (0..r).map(|i| table.k[i][r - 1 - i].clone()).collect();
        let mut out = Vec::new();
        let mut ok = true;
        for i in 0..r {
            let e = self.e(&self.f[i], &self.u[r - 1 - i]);
            ok &= ki[i].as_ref().is_some_and(|k| e == pr.scale(k));
        }
        out.push(Check::new(
            "E_f_u_complementary",
            ok,
            json!({ "k": ki.iter().map(|k| k.as_ref().map(|x| x.to_json())).collect::<Vec<_>>() }),
        ));
        if ki.iter().any(Option::is_none) {
            out.push(Check::fail("pr_formulas", json!({ "error": "missing k_i" })));
            return out;
        }
        let mut residual_f = Vec::new();
        let mut residual_u = Vec::new();
        for i in 0..r {
            let mut rf = self.f[i].left_mul(pr, h);
            let mut ru = self.u[i].left_mul(pr, h);
            for j in 0..r {
                if j == i {
                    continue;
                }
                let coeff = self.e(&self.f[i], &self.u[r - 1 - j]).scale(&ki[j].as_ref().unwrap().inv());
                rf = rf.add(&self.f[j].left_mul(&coeff, h));
                ru = ru.add(&self.u[j].left_mul(&coeff, h));
            }
            if !rf.is_zero() {
                residual_f.push(i + 1);
            }
            if !ru.is_zero() {
                residual_u.push(i + 1);
            }
        }
        out.push(Check::new("pr_times_f", residual_f.is_empty(), json!({ "nonzero_residual": residual_f })));
        out.push(Check::new("pr_times_u", residual_u.is_empty(), json!({ "nonzero_residual": residual_u })));
        // E(p_r a, b) = ±E(a, p_r b)
        let gens: Vec<&CovariantMap> = self.f.iter().chain(&self.u).collect();
        let mut adjoint = true;
        for a in &gens {
            for b in &gens {
                let lhs = self.e(&a.left_mul(pr, h), b);
                let rhs = self.e(a, &b.left_mul(pr, h));
                adjoint &= lhs == rhs || lhs == rhs.neg();
            }
        }
        out.push(Check::new("pr_self_adjoint", adjoint, Value::Null));
        out
    }

    /// The maps p_S f_i, p_S u_i (S ⊆ {1..r-1}) are independent and their
    /// graded count equals the Molien series of Hom_W(V, ℬ).
    pub fn freeness_check(&self) -> Check {
        let g = self.group;
        let r = self.rank();
        let gens: Vec<&CovariantMap> = self.f.iter().chain(&self.u).collect();
        let (series, defects) = free_span(self.basis, &self.p, (1u32 << (r - 1)) - 1, &gens);
        let molien = graded_multiplicity_series(g, &ClassFunction::reflection(g));
        let product = covariant_series_product_formula(self.degrees());
        let passed = defects.is_empty() && series == product && molien.as_ref().is_ok_and(|m| m == &series);
        Check::new(
            "freeness",
            passed,
            json!({
                "series": series.coeffs(),
                "product": product.coeffs(),
                "molien": molien.map(|m| m.coeffs().to_vec()).unwrap_or_default(),
                "rank_defect_degrees": defects,
                "dim": series.total(),
            }),
        )
    }

    /// Recomputes p_i from ψ_i + (random element of J² of degree d_i).
    pub fn j2_invariance_check(&self, seed: u64) -> Check {
        let (g, h) = (self.group, self.basis);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perturbed = Vec::new();
        let mut same = true;
        for (i, psi) in self.psi.iter().enumerate() {
            let z = random_j2_element(&self.psi, psi.degree().unwrap(), &mut rng);
            let vacuous = z.is_zero();
            let p2 = make_p(g, h, &(psi + &z));
            let ok = p2.as_ref().is_ok_and(|x| x == &self.p[i]);
            same &= ok;
            perturbed.push(json!({ "i": i + 1, "vacuous": vacuous, "unchanged": ok }));
        }
        Check::new("j2_invariance", same, json!(perturbed))
    }

    /// `δD_c` acts on each f_i by the closed-form eigenvalue `2|T|_c/r`.
    pub fn eigenvalue_check(&self) -> Check {
        let g = self.group;
        let chi = ClassFunction::reflection(g);
        let expect = crate::differentials::delta_d_closed_form(g, &self.params, &chi);
        let tc = self.params.weighted_count(g);
        let closed = &(&tc * &Scalar::int(2)) * &Scalar::frac(1, g.rank() as i64);
        let ok = expect == closed
            && self.f.iter().all(|f| {
                f.components.iter().all(|x| {
                    crate::differentials::delta_d_eigenvalue(g, &self.params, &chi, x, Some(self.basis)).is_ok_and(|v| v == expect)
                })
            });
        Check::new("delta_D_eigenvalue", ok, json!({ "gamma": expect.to_json() }))
    }
}

/// Graded count of `{p_S · x : S ⊆ mask, x ∈ gens}` and the degrees where
/// they fail to be independent.
pub fn free_span(h: &CoinvariantBasis, p: &[WeilElement], mask: u32, gens: &[&CovariantMap]) -> (GradedSeries, Vec<u32>) {
    let mut ix = Indexer::default();
    let mut by_degree: HashMap<u32, Echelon> = HashMap::new();
    let mut counts: Vec<i64> = Vec::new();
    let mut defects = Vec::new();
    for s in 0..=mask {
        if s & !mask != 0 {
            continue;
        }
        let ps = p_product(p, s, h);
        for x in gens {
            let y = x.left_mul(&ps, h);
            let deg = ps.total_degree().unwrap_or(0) + x.total_degree().unwrap_or(0);
            if counts.len() <= deg as usize {
                counts.resize(deg as usize + 1, 0);
            }
            counts[deg as usize] += 1;
            if !by_degree.entry(deg).or_default().insert(&ix.row_of_map(&y)) && !defects.contains(&deg) {
                defects.push(deg);
            }
        }
    }
    defects.sort_unstable();
    (GradedSeries::new(counts), defects)
}

/// A random homogeneous element of J² of degree `d` (zero if J²_d = 0).
pub fn random_j2_element(psi: &[Polynomial], d: u32, rng: &mut impl Rng) -> Polynomial {
    let n = psi[0].nvars();
    let field = psi[0].field();
    let mut z = Polynomial::zero(n, field);
    for a in 0..psi.len() {
        for b in a..psi.len() {
            let da = psi[a].degree().unwrap();
            let db = psi[b].degree().unwrap();
            if da + db > d {
                continue;
            }
            let prod = &psi[a] * &psi[b];
            for m in Monomial::all_of_degree(n, d - da - db) {
                let c = Rat::new(rng.gen_range(-5..=5), rng.gen_range(1..=4));
                z = &z + &(&prod * &Polynomial::monomial(m, Scalar::from_rat(field, c)));
            }
        }
    }
    z
}

/// `k_{ij}` with `E(u_i, f_j) = k_{ij} p_s`.
#[derive(Debug, Clone)]
pub struct ConstantsTable {
    pub k: Vec<Vec<Option<Scalar>>>,
    /// 1-based index s with `d_i + d_j - 2 = d_s`.
    pub pattern: Vec<Vec<Option<usize>>>,
    pub symmetric: bool,
    /// 1-based pairs where the pattern rule failed.
    pub failures: Vec<(usize, usize)>,
}

impl ConstantsTable {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k.iter().map(|row| row.iter().map(|x| x.as_ref().map_or(json!(0), |v| v.to_json())).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "pattern": self.pattern,
            "symmetric": self.symmetric,
            "failures": self.failures,
        })
    }

    pub fn check(&self) -> Check {
        Check::new("constants_pattern", self.failures.is_empty() && self.symmetric, self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldId;

    fn setup(code: &str) -> (ReflectionGroup, CoinvariantBasis) {
        let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
        let h = CoinvariantBasis::build(&g).unwrap();
        (g, h)
    }

    #[test]
    fn a1_generators() {
        let (g, h) = setup("A1");
        let cov = Covariants::build(&g, &h, DunklParams::unit(&g)).unwrap();
        let x = Polynomial::var(1, FieldId::Rational, 0);
        let two = Scalar::int(2);
        assert_eq!(cov.p[0], WeilElement::from_term(1, x.scale(&two), Ambient::Quotient));
        assert_eq!(cov.f[0].components[0], WeilElement::scalar(x.scale(&two), Ambient::Quotient));
        assert_eq!(cov.u[0].components[0], WeilElement::from_term(1, Polynomial::constant(1, two.clone()), Ambient::Quotient));
        let e = cov.e(&cov.u[0], &cov.f[0]);
        assert_eq!(e, cov.p[0].scale(&two));
        assert!(cov.f[0].left_mul(&cov.p[0], &h).is_zero());
    }

    #[test]
    fn b2_full_structure() {
        let (g, h) = setup("B2");
        let cov = Covariants::build(&g, &h, DunklParams::unit(&g)).unwrap();
        for c in cov.p_checks().into_iter().chain(cov.generator_checks()).chain(cov.orthogonality_checks()) {
            assert!(c.passed, "{c:?}");
        }
        assert!(cov.solomon_check().passed);
        let t = cov.constants_table().unwrap();
        assert!(t.failures.is_empty() && t.symmetric);
        assert_eq!(t.k[0][0], Some(Scalar::int(2)));
        assert!(t.k[0][1].is_some());
        assert_eq!(t.pattern[1][1], None);
        for c in cov.pr_structure_check(&t) {
            assert!(c.passed, "{c:?}");
        }
        let free = cov.freeness_check();
        assert!(free.passed, "{free:?}");
        assert!(cov.j2_invariance_check(7).passed);
        assert!(cov.eigenvalue_check().passed);
    }

    #[test]
    fn generic_multiplicities() {
        let (g, h) = setup("G2");
        let params = DunklParams::new(&g, vec![Scalar::frac(1, 3), Scalar::int(2)]).unwrap();
        let cov = Covariants::build(&g, &h, params).unwrap();
        for c in cov.generator_checks() {
            assert!(c.passed, "{c:?}");
        }
        assert!(cov.eigenvalue_check().passed);
    }
}
