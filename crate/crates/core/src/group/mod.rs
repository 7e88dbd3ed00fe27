//! Finite real reflection groups realized over exact catalogue fields.
//!
//! Elements are dense r×r matrices acting on V in the working basis
//! `e_1..e_r`; the polynomial variables `x_j` are the coordinate functions of
//! that basis. W acts on polynomials by `(w·p)(x) = p(w⁻¹x)` and on ΛV by the
//! induced action on wedge products.

mod invariants;
mod realization;
mod spec;

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use crate::algebra::linalg::{self, bilinear, determinant, identity, inverse, mat_mul, mat_vec, Matrix};
use crate::algebra::weil::mask_indices;
use crate::algebra::{Ambient, ExtMask, FieldId, Polynomial, Rat, Scalar, WeilElement};
use crate::error::{Error, Result};

pub use invariants::{find_invariants, jacobian, jacobian_delta, products_of_degree, root_product};
pub use realization::{realize, two_cos_pi_over, Realization};
pub use spec::{GroupSpec, GroupType};

/// A reflection of W with its chosen positive root.
#[derive(Debug, Clone)]
pub struct Reflection {
    /// Index into `elements`.
    pub element: usize,
    /// α_s in the working basis.
    pub root: Vec<Scalar>,
    /// Coefficients of the linear form `x ↦ (α_s, x)`, i.e. `Gα_s`.
    pub form: Vec<Scalar>,
    /// `(α_s, α_s)`.
    pub norm: Scalar,
    /// Position in `reflection_classes`.
    pub class: usize,
}

/// Exterior action of one element: for every subset S, `w·e_S = Σ c_T e_T`.
type ExtTable = Vec<Vec<(ExtMask, Scalar)>>;

pub struct ReflectionGroup {
    label: String,
    spec: Option<GroupSpec>,
    field: FieldId,
    rank: usize,
    gram: Matrix,
    gram_inv: Matrix,
    simple_roots: Vec<Vec<Scalar>>,
    simple_root_coords: Matrix,
    elements: Vec<Matrix>,
    index: HashMap<Vec<Scalar>, usize>,
    inverse: Vec<usize>,
    simple: Vec<usize>,
    reflections: Vec<Reflection>,
    reflection_of_element: HashMap<usize, usize>,
    reflection_classes: Vec<Vec<usize>>,
    conj_class_of: Vec<usize>,
    conj_classes: Vec<Vec<usize>>,
    degrees: Vec<u32>,
    ext_tables: Vec<OnceLock<ExtTable>>,
    invariants: OnceLock<Vec<Polynomial>>,
}

impl std::fmt::Debug for ReflectionGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReflectionGroup")
            .field("label", &self.label)
            .field("order", &self.elements.len())
            .field("degrees", &self.degrees)
            .finish()
    }
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    m.iter().flatten().cloned().collect()
}

/// `s = I - 2 α (Gα)ᵀ / (α,α)`.
pub fn reflection_matrix(gram: &Matrix, alpha: &[Scalar]) -> Matrix {
    let n = alpha.len();
    let form = mat_vec(gram, alpha);
    let norm = linalg::dot(alpha, &form);
    let f = &Scalar::int(2) * &norm.inv();
    let field = norm.field();
    let mut s = identity(field, n);
    for i in 0..n {
        for j in 0..n {
            let t = &(&alpha[i] * &form[j]) * &f;
            s[i][j] -= &t;
        }
    }
    s
}

impl ReflectionGroup {
    /// Builds a catalogue group.
    pub fn build(spec: GroupSpec) -> Result<Self> {
        let real = realize(spec.ty);
        if real.field != spec.field {
            return Err(Error::WrongField {
                group: spec.code(),
                required: real.field.name(),
                given: spec.field.name(),
            });
        }
        let g = Self::from_realization(spec.code(), Some(spec), real, spec.ty.degrees())?;
        if g.elements.len() as u64 != g.degrees.iter().map(|&d| d as u64).product::<u64>() {
            return Err(Error::Internal(format!("{}: |W| = {} does not match degrees", spec, g.elements.len())));
        }
        Ok(g)
    }

    /// Builds the group generated by the simple reflections of a realization.
    pub fn from_realization(label: String, spec: Option<GroupSpec>, real: Realization, degrees: Vec<u32>) -> Result<Self> {
        let Realization {
            field,
            gram,
            simple_roots,
        } = real;
        let rank = gram.len();
        for (k, minor) in linalg::leading_minors(&gram).iter().enumerate() {
            if minor.sign() <= 0 {
                return Err(Error::Internal(format!("{label}: Gram matrix not positive definite (minor {})", k + 1)));
            }
        }
        let gram_inv = inverse(&gram).ok_or_else(|| Error::Internal("singular Gram matrix".into()))?;
        let root_matrix: Matrix = (0..rank).map(|i| simple_roots.iter().map(|a| a[i].clone()).collect()).collect();
        let simple_root_coords = inverse(&root_matrix).ok_or_else(|| Error::Internal("simple roots not a basis".into()))?;
        let gens: Vec<Matrix> = simple_roots.iter().map(|a| reflection_matrix(&gram, a)).collect();

        // Breadth-first enumeration by right multiplication with the generators.
        let mut elements = vec![identity(field, rank)];
        let mut index: HashMap<Vec<Scalar>, usize> = HashMap::new();
        index.insert(flatten(&elements[0]), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let m = mat_mul(&elements[w], g);
                let key = flatten(&m);
                if !index.contains_key(&key) {
                    index.insert(key, elements.len());
                    queue.push_back(elements.len());
                    elements.push(m);
                }
            }
            if elements.len() > 20_000 {
                return Err(Error::Internal(format!("{label}: group too large")));
            }
        }
        let lookup = |m: &Matrix, index: &HashMap<Vec<Scalar>, usize>| -> usize { index[&flatten(m)] };
        let inverse_idx: Vec<usize> = elements
            .iter()
            .map(|w| {
                // w⁻¹ = G⁻¹ wᵀ G
                let wt = linalg::transpose(w);
                lookup(&mat_mul(&mat_mul(&gram_inv, &wt), &gram), &index)
            })
            .collect();
        let simple: Vec<usize> = gens.iter().map(|g| lookup(g, &index)).collect();

        // Reflections as conjugates of simple reflections, roots transported along.
        let mut reflections: Vec<Reflection> = Vec::new();
        let mut reflection_of_element: HashMap<usize, usize> = HashMap::new();
        for (w_idx, w) in elements.iter().enumerate() {
            let w_inv = &elements[inverse_idx[w_idx]];
            for (i, g) in gens.iter().enumerate() {
                let t = lookup(&mat_mul(&mat_mul(w, g), w_inv), &index);
                if reflection_of_element.contains_key(&t) {
                    continue;
                }
                let mut root = mat_vec(w, &simple_roots[i]);
                let coords = mat_vec(&simple_root_coords, &root);
                let first = coords.iter().find(|c| !c.is_zero()).unwrap();
                if first.sign() < 0 {
                    root = root.iter().map(|x| -x).collect();
                }
                let form = mat_vec(&gram, &root);
                let norm = linalg::dot(&root, &form);
                reflection_of_element.insert(t, reflections.len());
                reflections.push(Reflection {
                    element: t,
                    root,
                    form,
                    norm,
                    class: usize::MAX,
                });
            }
        }

        // Conjugacy classes of all elements via generator conjugation.
        let n = elements.len();
        let mut conj_class_of = vec![usize::MAX; n];
        let mut conj_classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if conj_class_of[start] != usize::MAX {
                continue;
            }
            let c = conj_classes.len();
            let mut members = vec![start];
            conj_class_of[start] = c;
            let mut k = 0;
            while k < members.len() {
                let x = &elements[members[k]];
                for g in &gens {
                    let y = lookup(&mat_mul(&mat_mul(g, x), g), &index);
                    if conj_class_of[y] == usize::MAX {
                        conj_class_of[y] = c;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            conj_classes.push(members);
        }

        // Reflection classes: the class with fewer simple reflections first,
        // ties broken by the class of the first simple reflection.
        let mut by_conj: Vec<(usize, Vec<usize>)> = Vec::new();
        for (ri, r) in reflections.iter().enumerate() {
            let c = conj_class_of[r.element];
            match by_conj.iter_mut().find(|(cc, _)| *cc == c) {
                Some((_, v)) => v.push(ri),
                None => by_conj.push((c, vec![ri])),
            }
        }
        let simple_count = |c: usize| simple.iter().filter(|&&s| conj_class_of[s] == c).count();
        let first_simple_pos = |c: usize| simple.iter().position(|&s| conj_class_of[s] == c).unwrap_or(usize::MAX);
        by_conj.sort_by_key(|(c, _)| (simple_count(*c), first_simple_pos(*c)));
        let reflection_classes: Vec<Vec<usize>> = by_conj.into_iter().map(|(_, v)| v).collect();
        for (k, cls) in reflection_classes.iter().enumerate() {
            for &ri in cls {
                reflections[ri].class = k;
            }
        }

        let ext_tables = (0..n).map(|_| OnceLock::new()).collect();
        Ok(ReflectionGroup {
            label,
            spec,
            field,
            rank,
            gram,
            gram_inv,
            simple_roots,
            simple_root_coords,
            elements,
            index,
            inverse: inverse_idx,
            simple,
            reflections,
            reflection_of_element,
            reflection_classes,
            conj_class_of,
            conj_classes,
            degrees,
            ext_tables,
            invariants: OnceLock::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn spec(&self) -> Option<GroupSpec> {
        self.spec
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn simple_roots(&self) -> &[Vec<Scalar>] {
        &self.simple_roots
    }

    /// Coordinates of a vector in the simple-root basis.
    pub fn simple_root_coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        mat_vec(&self.simple_root_coords, v)
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn simple_reflections(&self) -> &[usize] {
        &self.simple
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&flatten(m)).copied()
    }

    /// Index of the product `elements[a]·elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&mat_mul(&self.elements[a], &self.elements[b])).expect("closure")
    }

    pub fn reflections(&self) -> &[Reflection] {
        &self.reflections
    }

    pub fn reflection_for_element(&self, e: usize) -> Option<&Reflection> {
        self.reflection_of_element.get(&e).map(|&i| &self.reflections[i])
    }

    /// One or two classes `T_ℓ`, `T_p` of reflection indices.
    pub fn reflection_classes(&self) -> &[Vec<usize>] {
        &self.reflection_classes
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.conj_classes
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.conj_class_of[e]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn num_reflections(&self) -> usize {
        self.reflections.len()
    }

    /// Positive roots, one per reflection.
    pub fn positive_roots(&self) -> Vec<Vec<Scalar>> {
        self.reflections.iter().map(|r| r.root.clone()).collect()
    }

    /// `(a, b)` under the invariant form.
    pub fn inner(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        bilinear(&self.gram, a, b)
    }

    /// The linear form `x ↦ (v, x)` as a polynomial.
    pub fn linear_form(&self, v: &[Scalar]) -> Polynomial {
        Polynomial::linear(self.field, &mat_vec(&self.gram, v))
    }

    /// The invariant quadratic form `(x, x)`.
    pub fn gram_quadratic(&self) -> Polynomial {
        let n = self.rank;
        let mut p = Polynomial::zero(n, self.field);
        for i in 0..n {
            for j in 0..n {
                let m = crate::algebra::Monomial::var(n, i).times_var(j);
                p.add_term(m, self.gram[i][j].clone());
            }
        }
        p
    }

    /// `w·p`, i.e. `x ↦ p(w⁻¹x)`.
    pub fn act_poly(&self, w: usize, p: &Polynomial) -> Polynomial {
        if w == 0 || p.is_zero() {
            return p.clone();
        }
        p.substitute_linear(&self.elements[self.inverse[w]])
    }

    /// `s·p` for a reflection, by Taylor expansion along α:
    /// `p(x - λ(x)α) = Σ_k (-λ)^k/k! ∂_α^k p` with `λ = 2(α,x)/(α,α)`.
    pub fn reflect_poly(&self, s: &Reflection, p: &Polynomial) -> Polynomial {
        let n = self.rank;
        let lambda = Polynomial::linear(self.field, &s.form).scale(&(&Scalar::int(-2) * &s.norm.inv()));
        let mut out = p.clone();
        let mut deriv = p.clone();
        let mut lam_pow = Polynomial::one(n, self.field);
        let mut k = 1i64;
        loop {
            deriv = deriv.directional_derivative(&s.root);
            if deriv.is_zero() {
                break;
            }
            lam_pow = &lam_pow * &lambda;
            let coeff = Scalar::rational(Rat::one() / Rat::from_int(factorial(k)));
            out = &out + &(&lam_pow * &deriv).scale(&coeff);
            k += 1;
        }
        out
    }

    /// Matrix of the exterior action of element `w`.
    fn ext_table(&self, w: usize) -> &ExtTable {
        self.ext_tables[w].get_or_init(|| {
            let n = self.rank;
            let m = &self.elements[w];
            (0..(1u32 << n))
                .map(|s| {
                    let cols: Vec<usize> = mask_indices(s).collect();
                    let mut out = Vec::new();
                    for t in 0..(1u32 << n) {
                        if t.count_ones() != s.count_ones() {
                            continue;
                        }
                        let rows: Vec<usize> = mask_indices(t).collect();
                        let minor: Matrix = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
                        let d = if cols.is_empty() { Scalar::one(self.field) } else { determinant(&minor) };
                        if !d.is_zero() {
                            out.push((t, d));
                        }
                    }
                    out
                })
                .collect()
        })
    }

    /// `w·x` on Weil elements. For quotient inputs the polynomial parts are
    /// transformed but not renormalized; the result is returned as a lift.
    pub fn act_weil(&self, w: usize, x: &WeilElement) -> WeilElement {
        let mut out = WeilElement::zero(x.nvars(), x.field(), Ambient::FullWeil);
        let table = self.ext_table(w);
        for (s, p) in x.terms() {
            let wp = self.act_poly(w, p);
            for (t, c) in &table[s as usize] {
                out.add_term(*t, wp.scale(c));
            }
        }
        out.with_ambient(x.ambient())
    }

    /// Same as `act_weil` for a reflection, using the Taylor expansion.
    pub fn reflect_weil(&self, s: &Reflection, x: &WeilElement) -> WeilElement {
        let mut out = WeilElement::zero(x.nvars(), x.field(), Ambient::FullWeil);
        let table = self.ext_table(s.element);
        for (m, p) in x.terms() {
            let sp = self.reflect_poly(s, p);
            for (t, c) in &table[m as usize] {
                out.add_term(*t, sp.scale(c));
            }
        }
        out
    }

    /// Action on V: `w·v`.
    pub fn act_vector(&self, w: usize, v: &[Scalar]) -> Vec<Scalar> {
        mat_vec(&self.elements[w], v)
    }

    /// `|W|⁻¹ Σ_w w·p`.
    pub fn reynolds(&self, p: &Polynomial) -> Polynomial {
        let all: Vec<usize> = (0..self.order()).collect();
        self.reynolds_over(&all, p)
    }

    /// Average of `w·p` over the listed elements (a subgroup).
    ///
    /// Elements that agree on the rows of `w⁻¹` for the variables occurring
    /// in `p` give the same image, so images are computed once per such class.
    pub fn reynolds_over(&self, subgroup: &[usize], p: &Polynomial) -> Polynomial {
        let n = self.rank;
        let used: Vec<usize> = (0..n).filter(|&i| p.terms().any(|(m, _)| m.exponents()[i] > 0)).collect();
        let mut buckets: HashMap<Vec<Scalar>, (usize, usize)> = HashMap::new();
        let mut order: Vec<Vec<Scalar>> = Vec::new();
        for &w in subgroup {
            let inv = &self.elements[self.inverse[w]];
            let key: Vec<Scalar> = used.iter().flat_map(|&i| inv[i].iter().cloned()).collect();
            match buckets.get_mut(&key) {
                Some(e) => e.1 += 1,
                None => {
                    order.push(key.clone());
                    buckets.insert(key, (w, 1));
                }
            }
        }
        let mut acc = Polynomial::zero(n, self.field);
        for key in order {
            let (w, count) = buckets[&key];
            acc.add_scaled(&self.act_poly(w, p), &Scalar::int(count as i64));
        }
        acc.scale(&Scalar::frac(1, subgroup.len() as i64))
    }

    /// The basic invariants ψ_1..ψ_r (computed once).
    pub fn basic_invariants(&self) -> Result<&[Polynomial]> {
        if let Some(v) = self.invariants.get() {
            return Ok(v);
        }
        let v = invariants::basic_invariants(self)?;
        Ok(self.invariants.get_or_init(|| v))
    }

    /// Installs externally chosen invariants (cache load or perturbation runs).
    pub fn with_invariants(self, psi: Vec<Polynomial>) -> Self {
        let _ = self.invariants.set(psi);
        self
    }

    pub fn trace(&self, w: usize) -> Scalar {
        let m = &self.elements[w];
        let mut acc = Scalar::zero(self.field);
        for (i, row) in m.iter().enumerate() {
            acc += &row[i];
        }
        acc
    }

    pub fn det(&self, w: usize) -> Scalar {
        determinant(&self.elements[w])
    }

    /// Indices of the elements generated by the given ones.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }
}

pub(crate) fn factorial(k: i64) -> i64 {
    (1..=k).product()
}

/// A class function on W, one value per conjugacy class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    pub values: Vec<Scalar>,
}

impl ClassFunction {
    pub fn from_fn(w: &ReflectionGroup, f: impl Fn(usize) -> Scalar) -> Self {
        ClassFunction {
            values: w.conjugacy_classes().iter().map(|c| f(c[0])).collect(),
        }
    }

    pub fn trivial(w: &ReflectionGroup) -> Self {
        Self::from_fn(w, |_| Scalar::one(w.field()))
    }

    pub fn sign(w: &ReflectionGroup) -> Self {
        Self::from_fn(w, |e| w.det(e))
    }

    /// Character of the reflection representation V.
    pub fn reflection(w: &ReflectionGroup) -> Self {
        Self::from_fn(w, |e| w.trace(e))
    }

    pub fn at(&self, w: &ReflectionGroup, e: usize) -> &Scalar {
        &self.values[w.class_of(e)]
    }

    pub fn degree(&self, w: &ReflectionGroup) -> &Scalar {
        self.at(w, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(code: &str) -> ReflectionGroup {
        ReflectionGroup::build(code.parse().unwrap()).unwrap()
    }

    #[test]
    fn orders_and_reflection_counts() {
        for (code, order, refl) in [
            ("A1", 2, 1),
            ("A2", 6, 3),
            ("A3", 24, 6),
            ("B2", 8, 4),
            ("B3", 48, 9),
            ("G2", 12, 6),
            ("I2(5)", 10, 5),
            ("I2(8)", 16, 8),
            ("H3", 120, 15),
        ] {
            let g = build(code);
            assert_eq!(g.order(), order, "{code}");
            assert_eq!(g.num_reflections(), refl, "{code}");
            let sum: u32 = g.degrees().iter().map(|d| d - 1).sum();
            assert_eq!(sum as usize, refl, "{code}");
        }
    }

    #[test]
    fn reflection_class_sizes() {
        let sizes = |code: &str| -> Vec<usize> { build(code).reflection_classes().iter().map(|c| c.len()).collect() };
        assert_eq!(sizes("A2"), vec![3]);
        assert_eq!(sizes("B2"), vec![2, 2]);
        assert_eq!(sizes("B3"), vec![3, 6]);
        assert_eq!(sizes("G2"), vec![3, 3]);
        assert_eq!(sizes("I2(5)"), vec![5]);
        assert_eq!(sizes("I2(8)"), vec![4, 4]);
        assert_eq!(sizes("F4"), vec![12, 12]);
    }

    #[test]
    fn elements_preserve_gram_and_roots_flip() {
        for code in ["A3", "B3", "G2", "H3", "I2(8)"] {
            let g = build(code);
            for w in g.elements() {
                let wt = linalg::transpose(w);
                assert_eq!(&mat_mul(&mat_mul(&wt, g.gram()), w), g.gram(), "{code}");
            }
            for s in g.reflections() {
                let img = g.act_vector(s.element, &s.root);
                assert_eq!(img, s.root.iter().map(|x| -x).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn b2_reflection_swaps_coordinates() {
        let g = build("B2");
        let swap = g.simple_reflections()[0];
        let x = Polynomial::var(2, FieldId::Rational, 0);
        let y = Polynomial::var(2, FieldId::Rational, 1);
        let p = &x.pow(2) * &y;
        assert_eq!(g.act_poly(swap, &p), &y.pow(2) * &x);
        assert_eq!(g.act_poly(0, &p), p);
        let a1 = build("A1");
        let x1 = Polynomial::var(1, FieldId::Rational, 0);
        assert_eq!(a1.act_poly(1, &x1), -&x1);
    }

    #[test]
    fn taylor_reflection_matches_substitution() {
        let g = build("H3");
        let x = Polynomial::var(3, g.field(), 0);
        let y = Polynomial::var(3, g.field(), 1);
        let z = Polynomial::var(3, g.field(), 2);
        let p = &(&(&x.pow(3) * &y) + &z.pow(2)) + &(&x * &z);
        for s in g.reflections() {
            assert_eq!(g.reflect_poly(s, &p), g.act_poly(s.element, &p));
        }
    }

    #[test]
    fn reynolds_examples() {
        let a1 = build("A1");
        let x = Polynomial::var(1, FieldId::Rational, 0);
        assert!(a1.reynolds(&x).is_zero());
        assert_eq!(a1.reynolds(&x.pow(2)), x.pow(2));
        let b2 = build("B2");
        let x = Polynomial::var(2, FieldId::Rational, 0);
        let y = Polynomial::var(2, FieldId::Rational, 1);
        let expect = (&x.pow(4) + &y.pow(4)).scale(&Scalar::frac(1, 2));
        assert_eq!(b2.reynolds(&x.pow(4)), expect);
    }
}
