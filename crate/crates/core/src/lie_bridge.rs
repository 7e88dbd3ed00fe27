//! Small simple Lie algebras and the maps τ: S(h) → Λ^even g,
//! φ: Λ^even g → H and Φ: Λg → Λh ⊗ H, with brute-force covariant counts
//! in Λg.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::algebra::linalg::{determinant, inverse, mat_mul, nullspace, solve_combination, Echelon, Matrix, SparseRow};
use crate::algebra::{merge_sign, Ambient, ExtMask, FieldId, Monomial, Polynomial, Rat, Scalar, WeilElement};
use crate::coinvariants::CoinvariantBasis;
use crate::covariant::Indexer;
use crate::error::{Error, Result};
use crate::group::{products_of_degree, root_product, ClassFunction, GroupSpec, GroupType, ReflectionGroup};
use crate::molien::{graded_multiplicity_series, GradedSeries};
use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LieType {
    /// sl(r+1).
    A(usize),
    /// so(5).
    B2,
}

impl LieType {
    pub fn weyl_group(self) -> GroupSpec {
        let ty = match self {
            LieType::A(r) => GroupType::A(r),
            LieType::B2 => GroupType::B(2),
        };
        GroupSpec {
            ty,
            field: FieldId::Rational,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieType::A(r) => write!(f, "A{r}"),
            LieType::B2 => write!(f, "B2"),
        }
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B2" => Ok(LieType::B2),
            t if t.starts_with('A') => match t[1..].parse::<usize>() {
                Ok(r) if (1..=3).contains(&r) => Ok(LieType::A(r)),
                _ => Err(Error::UnknownGroup(s.to_string())),
            },
            _ => Err(Error::UnknownGroup(s.to_string())),
        }
    }
}

/// Modules V with a catalogued zero-weight character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LieModule {
    Trivial,
    Adjoint,
    /// S³ℂ³ for sl(3); zero weight space is the sign representation of S_3.
    Sym3,
}

impl LieModule {
    pub fn name(self) -> &'static str {
        match self {
            LieModule::Trivial => "trivial",
            LieModule::Adjoint => "adjoint",
            LieModule::Sym3 => "sym3",
        }
    }

    /// Character of the zero weight space as a W-module.
    pub fn zero_weight_character(self, g: &ReflectionGroup) -> ClassFunction {
        match self {
            LieModule::Trivial => ClassFunction::trivial(g),
            LieModule::Adjoint => ClassFunction::reflection(g),
            LieModule::Sym3 => ClassFunction::sign(g),
        }
    }
}

fn q(n: i64) -> Scalar {
    Scalar::int(n)
}

fn zeros(n: usize) -> Matrix {
    vec![vec![q(0); n]; n]
}

fn unit_matrix(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = zeros(n);
    m[i][j] = q(1);
    m
}

fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
}

fn mat_scale(a: &Matrix, c: &Scalar) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

fn mat_trace(a: &Matrix) -> Scalar {
    let mut acc = q(0);
    for (i, r) in a.iter().enumerate() {
        acc += &r[i];
    }
    acc
}

fn flatten(a: &Matrix) -> SparseRow {
    let n = a.len();
    let mut row = SparseRow::new();
    for (i, r) in a.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if !x.is_zero() {
                row.insert(i * n + j, x.clone());
            }
        }
    }
    row
}

fn bracket(a: &Matrix, b: &Matrix) -> Matrix {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

/// `c` with `[h, x] = c·x`.
fn eigenvalue(h: &Matrix, x: &Matrix) -> Option<Scalar> {
    let hx = bracket(h, x);
    let (i, j) = (0..x.len()).flat_map(|i| (0..x.len()).map(move |j| (i, j))).find(|&(i, j)| !x[i][j].is_zero())?;
    let c = &hx[i][j] * &x[i][j].inv();
    (mat_scale(x, &c) == hx).then_some(c)
}

struct MatrixModel {
    size: usize,
    cartan: Vec<Matrix>,
    /// Root vectors, one per root.
    roots: Vec<Matrix>,
    /// Indices into `roots` of the simple roots, in Weyl group order.
    simple: Vec<usize>,
}

fn sl_model(r: usize) -> MatrixModel {
    let n = r + 1;
    let cartan = (0..r).map(|k| mat_sub(&unit_matrix(n, k, k), &unit_matrix(n, k + 1, k + 1))).collect();
    let mut roots = Vec::new();
    let mut simple = vec![0; r];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if j == i + 1 {
                    simple[i] = roots.len();
                }
                roots.push(unit_matrix(n, i, j));
            }
        }
    }
    MatrixModel {
        size: n,
        cartan,
        roots,
        simple,
    }
}

/// so(5) preserving the antidiagonal form.
fn so5_model() -> MatrixModel {
    let n = 5;
    let prime = |i: usize| n - 1 - i;
    let a = |i: usize, j: usize| mat_sub(&unit_matrix(n, i, j), &unit_matrix(n, prime(j), prime(i)));
    let cartan = vec![a(0, 0), a(1, 1)];
    let mut roots = Vec::new();
    let mut simple = vec![0; 2];
    for i in 0..n {
        for j in 0..n {
            if i == j || j == prime(i) || (i, j) > (prime(j), prime(i)) {
                continue;
            }
            if (i, j) == (0, 1) {
                simple[0] = roots.len();
            }
            if (i, j) == (1, 2) {
                simple[1] = roots.len();
            }
            roots.push(a(i, j));
        }
    }
    MatrixModel {
        size: n,
        cartan,
        roots,
        simple,
    }
}

/// A simple Lie algebra with basis `X_1..X_r, e_β1, e_-β1, e_β2, e_-β2, …`,
/// the Cartan part identified with the reflection representation of its
/// Weyl group: `X_i = t_{e_i}`, i.e. `λ(X_i) = (e_i, λ)`.
#[derive(Debug, Clone)]
pub struct LieAlgebraData {
    pub ty: LieType,
    pub rank: usize,
    pub dim: usize,
    pub matrices: Vec<Matrix>,
    /// `[x_i, x_j] = Σ_k brackets[i][j][k] x_k`.
    pub brackets: Vec<Vec<SparseRow>>,
    pub form: Matrix,
    pub form_inv: Matrix,
    /// `λ(X_1..X_r)` for the weight λ of each basis vector.
    pub weights: Vec<Vec<Scalar>>,
    /// `(index of e_β, index of e_-β, β in the coordinates of V)`.
    pub positive: Vec<(usize, usize, Vec<Scalar>)>,
    /// Basis indices of `e_{α_i}` for the simple roots.
    pub simple_raising: Vec<usize>,
    pub simple_lowering: Vec<usize>,
    /// `ρ` in the coordinates of V.
    pub rho: Vec<Scalar>,
    /// Gram matrix of V, equal to the form on the Cartan part.
    pub gram: Matrix,
}

pub fn build_lie(ty: LieType, g: &ReflectionGroup) -> Result<LieAlgebraData> {
    let model = match ty {
        LieType::A(r) => sl_model(r),
        LieType::B2 => so5_model(),
    };
    let r = model.cartan.len();
    if g.rank() != r || g.field() != FieldId::Rational {
        return Err(Error::LieTable(format!("{ty} does not match the Weyl group {}", g.label())));
    }
    // c_k(root) = root(H_k)
    let root_h: Vec<Vec<Scalar>> = model
        .roots
        .iter()
        .map(|x| model.cartan.iter().map(|h| eigenvalue(h, x).ok_or_else(|| Error::LieTable("not a root vector".into()))).collect())
        .collect::<Result<_>>()?;
    let c: Matrix = (0..r).map(|k| model.simple.iter().map(|&s| root_h[s][k].clone()).collect()).collect();
    let gram = g.gram().clone();
    let rmat: Matrix = (0..r)
        .map(|i| {
            g.simple_roots()
                .iter()
                .map(|a| {
                    let mut acc = q(0);
                    for (k, ak) in a.iter().enumerate() {
                        acc += &(&gram[i][k] * ak);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let cinv = inverse(&c).ok_or_else(|| Error::LieTable("Cartan matrix singular".into()))?;
    let m = mat_mul(&rmat, &cinv);
    let xs: Vec<Matrix> = (0..r)
        .map(|i| {
            let mut acc = zeros(model.size);
            for (k, h) in model.cartan.iter().enumerate() {
                acc = mat_sub(&acc, &mat_scale(h, &-&m[i][k]));
            }
            acc
        })
        .collect();
    let weight_of = |ch: &[Scalar]| -> Vec<Scalar> {
        (0..r)
            .map(|i| {
                let mut acc = q(0);
                for k in 0..r {
                    acc += &(&m[i][k] * &ch[k]);
                }
                acc
            })
            .collect()
    };
    let ginv = g.gram_inv().clone();
    let to_v = |w: &[Scalar]| -> Vec<Scalar> {
        (0..r)
            .map(|i| {
                let mut acc = q(0);
                for k in 0..r {
                    acc += &(&ginv[i][k] * &w[k]);
                }
                acc
            })
            .collect()
    };
    // positivity via simple-root coefficients
    let simple_w: Vec<Vec<Scalar>> = model.simple.iter().map(|&s| weight_of(&root_h[s])).collect();
    let simple_cols: Vec<SparseRow> = simple_w.iter().map(|w| w.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect()).collect();
    let mut pos: Vec<(Vec<Scalar>, usize, Vec<Scalar>)> = Vec::new();
    for (idx, ch) in root_h.iter().enumerate() {
        let w = weight_of(ch);
        let target: SparseRow = w.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        let (coef, _) = solve_combination(&simple_cols, &target).ok_or_else(|| Error::LieTable("root outside the root lattice".into()))?;
        if coef.iter().all(|x| x.sign() >= 0) {
            pos.push((coef, idx, w));
        }
    }
    pos.sort_by(|a, b| {
        let ha: Rat = a.0.iter().map(|x| x.as_rational().unwrap().clone()).fold(Rat::from_int(0), |s, x| &s + &x);
        let hb: Rat = b.0.iter().map(|x| x.as_rational().unwrap().clone()).fold(Rat::from_int(0), |s, x| &s + &x);
        ha.cmp(&hb).then_with(|| {
            let ka: Vec<Rat> = a.0.iter().rev().map(|x| x.as_rational().unwrap().clone()).collect();
            let kb: Vec<Rat> = b.0.iter().rev().map(|x| x.as_rational().unwrap().clone()).collect();
            ka.cmp(&kb)
        })
    });

    let mut matrices = xs.clone();
    let mut weights: Vec<Vec<Scalar>> = vec![vec![q(0); r]; r];
    let mut positive = Vec::new();
    for (_, idx, w) in &pos {
        let neg_w: Vec<Scalar> = w.iter().map(|x| -x).collect();
        let neg = root_h
            .iter()
            .position(|ch| weight_of(ch) == neg_w)
            .ok_or_else(|| Error::LieTable("negative root missing".into()))?;
        let e = model.roots[*idx].clone();
        let f = model.roots[neg].clone();
        positive.push((matrices.len(), matrices.len() + 1, to_v(w)));
        matrices.push(e);
        matrices.push(f);
        weights.push(w.clone());
        weights.push(neg_w);
    }
    let scale = &gram[0][0] * &mat_trace(&mat_mul(&xs[0], &xs[0])).inv();
    let pair = |a: &Matrix, b: &Matrix| &scale * &mat_trace(&mat_mul(a, b));
    for (ei, fi, _) in &positive {
        let k = pair(&matrices[*ei], &matrices[*fi]);
        matrices[*fi] = mat_scale(&matrices[*fi], &k.inv());
    }
    let dim = matrices.len();
    let form: Matrix = matrices.iter().map(|a| matrices.iter().map(|b| pair(a, b)).collect()).collect();
    for i in 0..r {
        for j in 0..r {
            if form[i][j] != gram[i][j] {
                return Err(Error::LieTable("form on h differs from the Gram matrix".into()));
            }
        }
    }
    let form_inv = inverse(&form).ok_or_else(|| Error::LieTable("form degenerate".into()))?;
    let cols: Vec<SparseRow> = matrices.iter().map(flatten).collect();
    let mut brackets = vec![vec![SparseRow::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let t = flatten(&bracket(&matrices[i], &matrices[j]));
            let (x, _) = solve_combination(&cols, &t).ok_or_else(|| Error::LieTable("bracket leaves the algebra".into()))?;
            brackets[i][j] = x.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }
    }
    let w_roots = g.positive_roots();
    for (_, _, beta) in &positive {
        let neg: Vec<Scalar> = beta.iter().map(|x| -x).collect();
        if !w_roots.iter().any(|a| a == beta || *a == neg) {
            return Err(Error::LieTable(format!("root {beta:?} is not a root of {}", g.label())));
        }
    }
    let mut rho = vec![q(0); r];
    for (_, _, beta) in &positive {
        for (x, b) in rho.iter_mut().zip(beta) {
            *x += &b.scale(&Rat::new(1, 2));
        }
    }
    let simple_raising: Vec<usize> = positive[..r].iter().map(|p| p.0).collect();
    let simple_lowering: Vec<usize> = positive[..r].iter().map(|p| p.1).collect();
    let lie = LieAlgebraData {
        ty,
        rank: r,
        dim,
        matrices,
        brackets,
        form,
        form_inv,
        weights,
        positive,
        simple_raising,
        simple_lowering,
        rho,
        gram,
    };
    lie.verify()?;
    Ok(lie)
}

impl LieAlgebraData {
    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Jacobi identity and invariance of the form on all basis triples.
    pub fn verify(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // [x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]]
                    let mut acc = SparseRow::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = &self.brackets[b][c];
                        let mut t = SparseRow::new();
                        t.insert(a, q(1));
                        let mut outer = SparseRow::new();
                        for (l, v) in inner {
                            for (m, w) in &self.brackets[a][*l] {
                                let e = outer.entry(*m).or_insert_with(|| q(0));
                                *e += &(v * w);
                            }
                        }
                        for (m, w) in outer {
                            let e = acc.entry(m).or_insert_with(|| q(0));
                            *e += &w;
                        }
                    }
                    if acc.values().any(|v| !v.is_zero()) {
                        return Err(Error::LieTable(format!("Jacobi fails on ({i},{j},{k})")));
                    }
                    // ([x_i,x_j],x_k) + (x_j,[x_i,x_k])
                    let mut s = q(0);
                    for (l, v) in &self.brackets[i][j] {
                        s += &(v * &self.form[*l][k]);
                    }
                    for (l, v) in &self.brackets[i][k] {
                        s += &(v * &self.form[j][*l]);
                    }
                    if !s.is_zero() {
                        return Err(Error::LieTable(format!("form not invariant on ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `s(x_k) = ½ Σ_{ij} B⁻¹_{ij} x_i ∧ [x_j, x_k]`.
    pub fn s_of_basis(&self, k: usize) -> ExteriorGElement {
        let mut out = ExteriorGElement::zero(self.dim);
        let half = Scalar::frac(1, 2);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = &self.form_inv[i][j];
                if b.is_zero() {
                    continue;
                }
                for (l, v) in &self.brackets[j][k] {
                    let sign = merge_sign(1 << i, 1 << l);
                    if sign != 0 {
                        out.add_term((1 << i) | (1 << l), &(&(b * v) * &half) * &q(sign as i64));
                    }
                }
            }
        }
        out
    }

    /// `τ(x_i)` for the coordinate functions x_i of V, identified with
    /// `Σ_k G⁻¹_{ik} X_k ∈ h`.
    pub fn tau_generators(&self) -> Vec<ExteriorGElement> {
        let s: Vec<ExteriorGElement> = (0..self.rank).map(|k| self.s_of_basis(k)).collect();
        (0..self.rank)
            .map(|i| {
                let ginv = inverse(&self.gram).expect("gram invertible");
                let mut acc = ExteriorGElement::zero(self.dim);
                for (k, sk) in s.iter().enumerate() {
                    acc.add_scaled(sk, &ginv[i][k]);
                }
                acc
            })
            .collect()
    }

    /// `Σ_{β>0} (β, α) e_β ∧ e_-β`.
    pub fn tau_root_formula(&self, alpha: &[Scalar]) -> ExteriorGElement {
        let mut out = ExteriorGElement::zero(self.dim);
        for (e, f, beta) in &self.positive {
            let mut ip = q(0);
            for i in 0..self.rank {
                for j in 0..self.rank {
                    ip += &(&(&beta[i] * &self.gram[i][j]) * &alpha[j]);
                }
            }
            out.add_term((1 << e) | (1 << f), &ip * &q(merge_sign(1 << e, 1 << f) as i64));
        }
        out
    }

    /// `∏_{β>0} e_β ∧ e_-β`.
    pub fn top_root_product(&self) -> ExteriorGElement {
        let mut acc = ExteriorGElement::one(self.dim);
        for (e, f, _) in &self.positive {
            acc = acc.wedge(&ExteriorGElement::basis(self.dim, *e).wedge(&ExteriorGElement::basis(self.dim, *f)));
        }
        acc
    }

    /// `x_j · ω` for the derivation extending ad.
    pub fn ad(&self, j: usize, w: &ExteriorGElement) -> ExteriorGElement {
        let mut out = ExteriorGElement::zero(self.dim);
        for (&s, c) in &w.terms {
            let mut rest = s;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let without = s & !(1 << i);
                let eps = merge_sign(1 << i, without);
                for (l, v) in &self.brackets[j][i] {
                    let sign = merge_sign(1 << l, without);
                    if sign != 0 {
                        out.add_term(without | (1 << l), &(c * v) * &q((eps * sign) as i64));
                    }
                }
            }
        }
        out
    }

    /// Weight of `x_S`.
    pub fn weight_of_mask(&self, s: ExtMask) -> Vec<Scalar> {
        let mut w = vec![q(0); self.rank];
        let mut rest = s;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for (x, y) in w.iter_mut().zip(&self.weights[i]) {
                *x += y;
            }
        }
        w
    }

    /// Highest weight of a catalogued module, as `λ(X_1..X_r)`.
    pub fn highest_weight(&self, v: LieModule) -> Result<Vec<Scalar>> {
        match v {
            LieModule::Trivial => Ok(vec![q(0); self.rank]),
            LieModule::Adjoint => Ok(self.weights[self.positive.last().unwrap().0].clone()),
            LieModule::Sym3 => {
                if self.ty != LieType::A(2) {
                    return Err(Error::Usage("S³ℂ³ is only catalogued for A2".into()));
                }
                let a1 = &self.weights[self.simple_raising[0]];
                let a2 = &self.weights[self.simple_raising[1]];
                Ok(a1.iter().zip(a2).map(|(x, y)| &(x * &q(2)) + y).collect())
            }
        }
    }

    /// Basis of the highest weight vectors of weight λ in `Λ^n g`.
    pub fn highest_weight_vectors(&self, lambda: &[Scalar], n: u32) -> Vec<ExteriorGElement> {
        let masks: Vec<ExtMask> = (0..(1u32 << self.dim)).filter(|s| s.count_ones() == n && self.weight_of_mask(*s) == lambda).collect();
        if masks.is_empty() {
            return Vec::new();
        }
        let index: HashMap<ExtMask, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        // one constraint row per (raising operator, image mask)
        let mut constraints: BTreeMap<(usize, ExtMask), SparseRow> = BTreeMap::new();
        for &m in &masks {
            let x = ExteriorGElement::from_term(self.dim, m, q(1));
            for (k, &e) in self.simple_raising.iter().enumerate() {
                for (&t, c) in &self.ad(e, &x).terms {
                    constraints.entry((k, t)).or_default().insert(index[&m], c.clone());
                }
            }
        }
        let rows: Vec<SparseRow> = constraints.into_values().collect();
        nullspace(&rows, masks.len(), FieldId::Rational)
            .into_iter()
            .map(|v| {
                let mut w = ExteriorGElement::zero(self.dim);
                for (i, c) in v.into_iter().enumerate() {
                    w.add_term(masks[i], c);
                }
                w
            })
            .collect()
    }
}

/// An element of Λg: subsets of the basis (as bit masks) with coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorGElement {
    pub dim: usize,
    pub terms: BTreeMap<ExtMask, Scalar>,
}

impl ExteriorGElement {
    pub fn zero(dim: usize) -> Self {
        ExteriorGElement { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::from_term(dim, 0, q(1))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        Self::from_term(dim, 1 << i, q(1))
    }

    pub fn from_term(dim: usize, m: ExtMask, c: Scalar) -> Self {
        let mut out = Self::zero(dim);
        out.add_term(m, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: ExtMask, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        for (&m, x) in &other.terms {
            self.add_term(m, x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        out.add_scaled(self, c);
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (&s, a) in &self.terms {
            for (&t, b) in &other.terms {
                let sign = merge_sign(s, t);
                if sign != 0 {
                    out.add_term(s | t, &(a * b) * &q(sign as i64));
                }
            }
        }
        out
    }

    /// Degree when homogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.count_ones());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn row(&self) -> SparseRow {
        self.terms.iter().map(|(&m, c)| (m as usize, c.clone())).collect()
    }

    /// `c` with `other = c·self`.
    pub fn ratio(&self, other: &Self) -> Option<Scalar> {
        let (&m, c) = self.terms.iter().next()?;
        let k = other.terms.get(&m).map_or(q(0), |v| v * &c.inv());
        (self.scale(&k) == *other).then_some(k)
    }
}

/// `τ(p)`: the variables go to `τ(x_i)` and products to wedge products.
pub fn tau(lie: &LieAlgebraData, gens: &[ExteriorGElement], p: &Polynomial) -> ExteriorGElement {
    let mut powers: Vec<Vec<ExteriorGElement>> = gens.iter().map(|x| vec![ExteriorGElement::one(lie.dim), x.clone()]).collect();
    let mut out = ExteriorGElement::zero(lie.dim);
    for (m, c) in p.terms() {
        let mut t = ExteriorGElement::from_term(lie.dim, 0, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().wedge(&gens[i]);
                powers[i].push(next);
            }
            t = t.wedge(&powers[i][e as usize]);
        }
        out.add_scaled(&t, &q(1));
    }
    out
}

/// Permanent of a square matrix by expansion along the first row.
pub fn permanent(a: &[Vec<Scalar>]) -> Scalar {
    fn rec(a: &[Vec<Scalar>], row: usize, used: u32) -> Scalar {
        if row == a.len() {
            return q(1);
        }
        let mut acc = q(0);
        for j in 0..a.len() {
            if used & (1 << j) == 0 && !a[row][j].is_zero() {
                acc += &(&a[row][j] * &rec(a, row + 1, used | (1 << j)));
            }
        }
        acc
    }
    rec(a, 0, 0)
}

/// Harmonic polynomials of degree m: the apolar complement of J_m.
pub fn harmonics(g: &ReflectionGroup, m: u32) -> Result<Vec<Polynomial>> {
    let n = g.rank();
    let psi = g.basic_invariants()?;
    let tagged: Vec<(u32, Polynomial)> = psi.iter().map(|p| (p.degree().unwrap(), p.clone())).collect();
    let monos = Monomial::all_of_degree(n, m);
    let mut j = Vec::new();
    for (d, p) in &tagged {
        if *d <= m {
            for mono in Monomial::all_of_degree(n, m - d) {
                j.push(p * &Polynomial::monomial(mono, Scalar::one(g.field())));
            }
        }
    }
    let _ = products_of_degree;
    let rows: Vec<SparseRow> = j
        .iter()
        .map(|jp| {
            monos
                .iter()
                .enumerate()
                .map(|(i, mono)| (i, Polynomial::monomial(mono.clone(), Scalar::one(g.field())).apolar(jp, g.gram_inv())))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    Ok(nullspace(&rows, monos.len(), g.field())
        .into_iter()
        .map(|v| {
            let mut p = Polynomial::zero(n, g.field());
            for (i, c) in v.into_iter().enumerate() {
                p.add_term(monos[i].clone(), c);
            }
            p
        })
        .collect())
}

/// The Lie side and its Weyl group side, with the data for φ and Φ.
pub struct LieBridge<'a> {
    pub lie: LieAlgebraData,
    pub group: &'a ReflectionGroup,
    pub basis: &'a CoinvariantBasis,
    pub tau_gens: Vec<ExteriorGElement>,
    /// Per degree m: τ of a basis of 𝒜_m and the dual basis of H_m.
    pub phi_data: Vec<(Vec<ExteriorGElement>, Vec<Polynomial>)>,
}

impl<'a> LieBridge<'a> {
    pub fn build(ty: LieType, g: &'a ReflectionGroup, h: &'a CoinvariantBasis) -> Result<Self> {
        let lie = build_lie(ty, g)?;
        let tau_gens = lie.tau_generators();
        let mut phi_data = Vec::new();
        for m in 0..=h.top_degree() {
            let a = harmonics(g, m)?;
            let std: Vec<Polynomial> = h.standard(m).iter().map(|x| Polynomial::monomial(x.clone(), Scalar::one(g.field()))).collect();
            if a.len() != std.len() {
                return Err(Error::Internal(format!("dim 𝒜_{m} = {} but dim H_{m} = {}", a.len(), std.len())));
            }
            let p: Matrix = std.iter().map(|b| a.iter().map(|x| b.apolar(x, g.gram_inv())).collect()).collect();
            let c = inverse(&p).ok_or_else(|| Error::Internal(format!("apolar pairing H_{m} × 𝒜_{m} degenerate")))?;
            // h^k = Σ_l C[k][l] b_l
            let dual: Vec<Polynomial> = (0..a.len())
                .map(|k| {
                    let mut acc = Polynomial::zero(g.rank(), g.field());
                    for (l, b) in std.iter().enumerate() {
                        acc.add_scaled(b, &c[k][l]);
                    }
                    acc
                })
                .collect();
            let taus: Vec<ExteriorGElement> = a.iter().map(|x| tau(&lie, &tau_gens, x)).collect();
            phi_data.push((taus, dual));
        }
        Ok(LieBridge {
            lie,
            group: g,
            basis: h,
            tau_gens,
            phi_data,
        })
    }

    pub fn tau(&self, p: &Polynomial) -> ExteriorGElement {
        tau(&self.lie, &self.tau_gens, p)
    }

    /// `⟨x_S, x_T⟩ = det(B(x_s, x_t))`.
    fn pair_masks(&self, s: ExtMask, t: ExtMask) -> Scalar {
        if s.count_ones() != t.count_ones() {
            return q(0);
        }
        let si: Vec<usize> = (0..self.lie.dim).filter(|i| s & (1 << i) != 0).collect();
        let ti: Vec<usize> = (0..self.lie.dim).filter(|i| t & (1 << i) != 0).collect();
        if si.is_empty() {
            return q(1);
        }
        let m: Matrix = si.iter().map(|&a| ti.iter().map(|&b| self.lie.form[a][b].clone()).collect()).collect();
        if m.iter().any(|row| row.iter().all(Scalar::is_zero)) {
            return q(0);
        }
        determinant(&m)
    }

    pub fn pair(&self, a: &ExteriorGElement, b: &ExteriorGElement) -> Scalar {
        let mut acc = q(0);
        for (&s, x) in &a.terms {
            for (&t, y) in &b.terms {
                let p = self.pair_masks(s, t);
                if !p.is_zero() {
                    acc += &(&(x * y) * &p);
                }
            }
        }
        acc
    }

    /// `φ(x_S) ∈ H`, defined by `⟨φ(ω), a⟩ = ⟨ω, τ(a)⟩` for harmonic a.
    pub fn phi_mask(&self, s: ExtMask) -> Polynomial {
        let n = s.count_ones();
        let zero = Polynomial::zero(self.group.rank(), self.group.field());
        if n % 2 == 1 || (n / 2) as usize >= self.phi_data.len() {
            return zero;
        }
        let (taus, dual) = &self.phi_data[(n / 2) as usize];
        let x = ExteriorGElement::from_term(self.lie.dim, s, q(1));
        let mut acc = zero;
        for (t, d) in taus.iter().zip(dual) {
            let c = self.pair(&x, t);
            if !c.is_zero() {
                acc.add_scaled(d, &c);
            }
        }
        acc
    }

    /// `Φ = (p ⊗ φ) ∘ (Id ⊗ π_even) ∘ Δ`.
    pub fn big_phi(&self, w: &ExteriorGElement, cache: &mut HashMap<ExtMask, Polynomial>) -> WeilElement {
        let r = self.lie.rank;
        let cartan: ExtMask = (1 << r) - 1;
        let mut out = WeilElement::zero(r, self.group.field(), Ambient::Quotient);
        for (&s, c) in &w.terms {
            let part = s & cartan;
            // T ranges over the subsets of the Cartan part of S
            let mut t = part;
            loop {
                let rest = s & !t;
                if rest.count_ones() % 2 == 0 {
                    let sign = merge_sign(t, rest);
                    let img = cache.entry(rest).or_insert_with(|| self.phi_mask(rest)).clone();
                    if !img.is_zero() {
                        let mut term = WeilElement::from_term(t, img, Ambient::Quotient);
                        term = term.scale(&(c * &q(sign as i64)));
                        out = out.add(&term);
                    }
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & part;
            }
        }
        out
    }

    /// `P(V, Λg, u)` by counting highest weight vectors.
    pub fn lie_covariant_series(&self, v: LieModule) -> Result<GradedSeries> {
        let lambda = self.lie.highest_weight(v)?;
        Ok(GradedSeries::new(
            (0..=self.lie.dim as u32).map(|n| self.lie.highest_weight_vectors(&lambda, n).len() as i64).collect(),
        ))
    }

    /// Lowering words spanning `V⁰` inside the module generated by `omega`.
    fn zero_weight_words(&self, lambda: &[Scalar], omega: &ExteriorGElement) -> Result<Vec<Vec<usize>>> {
        let r = self.lie.rank;
        let cols: Vec<SparseRow> = self
            .lie
            .simple_raising
            .iter()
            .map(|&e| self.lie.weights[e].iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let target: SparseRow = lambda.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        let (coef, _) = solve_combination(&cols, &target).ok_or_else(|| Error::Usage("weight not in the root lattice".into()))?;
        let counts: Vec<usize> = coef
            .iter()
            .map(|c| c.as_rational().and_then(Rat::to_i64).filter(|&x| x >= 0).map(|x| x as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Usage("weight is not a nonnegative root combination".into()))?;
        let mut words = Vec::new();
        fn perms(counts: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if counts.iter().all(|&c| c == 0) {
                out.push(cur.clone());
                return;
            }
            for i in 0..counts.len() {
                if counts[i] > 0 {
                    counts[i] -= 1;
                    cur.push(i);
                    perms(counts, cur, out);
                    cur.pop();
                    counts[i] += 1;
                }
            }
        }
        perms(&mut counts.clone(), &mut Vec::new(), &mut words);
        let mut ech = Echelon::new();
        let mut basis = Vec::new();
        for w in words {
            let y = self.apply_word(&w, omega);
            if ech.insert(&y.row()) {
                basis.push(w);
            }
        }
        let _ = r;
        Ok(basis)
    }

    fn apply_word(&self, word: &[usize], omega: &ExteriorGElement) -> ExteriorGElement {
        let mut y = omega.clone();
        for &i in word.iter().rev() {
            y = self.lie.ad(self.lie.simple_lowering[i], &y);
        }
        y
    }

    /// Rank of `Φ^V` on `Hom_g(V, Λg)` in each exterior degree, and the
    /// graded source and target dimensions.
    pub fn phi_injectivity_test(&self, v: LieModule) -> Check {
        let name = format!("phi_injective[{}:{}]", self.lie.ty, v.name());
        let lambda = match self.lie.highest_weight(v) {
            Ok(l) => l,
            Err(e) => return Check::error(name, &e),
        };
        let mut cache = HashMap::new();
        let mut source = Vec::new();
        let mut ranks = Vec::new();
        let mut words: Option<Vec<Vec<usize>>> = None;
        for n in 0..=self.lie.dim as u32 {
            let hw = self.lie.highest_weight_vectors(&lambda, n);
            source.push(hw.len() as i64);
            if hw.is_empty() {
                ranks.push(0);
                continue;
            }
            if words.is_none() {
                match self.zero_weight_words(&lambda, &hw[0]) {
                    Ok(w) => words = Some(w),
                    Err(e) => return Check::error(name, &e),
                }
            }
            let ws = words.as_ref().unwrap();
            let mut ix = Indexer::default();
            let mut ech = Echelon::new();
            for omega in &hw {
                let mut row = SparseRow::new();
                for (slot, w) in ws.iter().enumerate() {
                    let img = self.big_phi(&self.apply_word(w, omega), &mut cache);
                    row.extend(ix.row_of_element(slot, &img));
                }
                ech.insert(&row);
            }
            ranks.push(ech.rank() as i64);
        }
        let source = GradedSeries::new(source);
        let rank_series = GradedSeries::new(ranks);
        let chi = v.zero_weight_character(self.group);
        let target = graded_multiplicity_series(self.group, &chi);
        let injective = source == rank_series;
        Check::new(
            name,
            injective,
            json!({
                "source": source.coeffs(),
                "rank": rank_series.coeffs(),
                "target": target.as_ref().map(|t| t.coeffs().to_vec()).unwrap_or_default(),
                "dims_match": target.is_ok_and(|t| t == source),
                "injective": injective,
                "zero_weight_dim": words.map_or(0, |w| w.len()),
            }),
        )
    }

    /// `τ(∏ t_α) = per(A) ∏ e_β ∧ e_-β` and the lower bound on per(A).
    pub fn weyl_denominator_check(&self) -> Check {
        let lie = &self.lie;
        let g = self.group;
        let tp = self.tau(&root_product(g));
        let top = lie.top_root_product();
        let coeff = top.ratio(&tp);
        let roots: Vec<&Vec<Scalar>> = lie.positive.iter().map(|p| &p.2).collect();
        let a: Matrix = roots.iter().map(|b| roots.iter().map(|c| g.inner(b, c)).collect()).collect();
        let per = permanent(&a);
        let nn = roots.len() as i64;
        let rr = g.inner(&lie.rho, &lie.rho);
        let mut prod = q(1);
        for b in &roots {
            let x = g.inner(b, &lie.rho);
            prod = &prod * &(&x * &x);
        }
        let fact = Scalar::int((1..=nn).product());
        let bound = &(&fact * &rr.pow(nn as u32).inv()) * &prod;
        let per_r = per.as_rational().cloned();
        let bound_r = bound.as_rational().cloned();
        let holds = matches!((&per_r, &bound_r), (Some(p), Some(b)) if p >= b && b > &Rat::from_int(0));
        let equal = per_r == bound_r;
        let identity = coeff.as_ref() == Some(&per);
        Check::new(
            format!("weyl_denominator[{}]", lie.ty),
            identity && holds,
            json!({
                "coefficient": coeff.map(|c| c.to_json()),
                "permanent": per.to_json(),
                "bound": bound.to_json(),
                "bound_attained": equal,
            }),
        )
    }

    /// τ is injective on each 𝒜_m, m ≤ N.
    pub fn tau_harmonic_injectivity(&self) -> Check {
        let n = self.lie.num_positive();
        let mut dims = Vec::new();
        let mut ok = true;
        for (m, (taus, _)) in self.phi_data.iter().enumerate().take(n + 1) {
            let mut ech = Echelon::new();
            for t in taus {
                ech.insert(&t.row());
            }
            ok &= ech.rank() == taus.len();
            dims.push(json!({ "m": m, "dim": taus.len(), "rank": ech.rank() }));
        }
        Check::new(format!("tau_harmonic_injective[{}]", self.lie.ty), ok, json!(dims))
    }

    /// `τ(ℓ_α)` from the bracket agrees with the root formula for all α > 0.
    pub fn tau_formula_check(&self) -> Check {
        let g = self.group;
        let ok = self.lie.positive.iter().all(|(_, _, beta)| self.tau(&g.linear_form(beta)) == self.lie.tau_root_formula(beta));
        Check::new(format!("tau_root_formula[{}]", self.lie.ty), ok, Value::Null)
    }

    pub fn checks(&self, modules: &[LieModule]) -> Vec<Check> {
        let mut out = vec![self.tau_formula_check(), self.weyl_denominator_check(), self.tau_harmonic_injectivity()];
        for &v in modules {
            out.push(self.phi_injectivity_test(v));
            match self.lie_covariant_series(v) {
                Ok(s) => out.push(crate::molien::reeder_series_check(
                    self.group,
                    &v.zero_weight_character(self.group),
                    &s,
                    &format!("{}:{}", self.lie.ty, v.name()),
                )),
                Err(e) => out.push(Check::error(format!("reeder_series[{}:{}]", self.lie.ty, v.name()), &e)),
            }
        }
        out
    }
}

/// Default module catalogue for a Lie type.
pub fn catalogue_modules(ty: LieType) -> Vec<LieModule> {
    match ty {
        LieType::A(2) => vec![LieModule::Trivial, LieModule::Adjoint, LieModule::Sym3],
        _ => vec![LieModule::Trivial, LieModule::Adjoint],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(code: &str) -> (ReflectionGroup, CoinvariantBasis) {
        let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
        let h = CoinvariantBasis::build(&g).unwrap();
        (g, h)
    }

    #[test]
    fn dimensions() {
        for (ty, code, dim, n) in [(LieType::A(1), "A1", 3, 1), (LieType::A(2), "A2", 8, 3), (LieType::B2, "B2", 10, 4)] {
            let (g, _) = setup(code);
            let lie = build_lie(ty, &g).unwrap();
            assert_eq!((lie.dim, lie.num_positive()), (dim, n));
        }
    }

    #[test]
    fn a1_tau() {
        let (g, h) = setup("A1");
        let b = LieBridge::build(LieType::A(1), &g, &h).unwrap();
        let alpha = &b.lie.positive[0].2;
        let t = b.tau(&g.linear_form(alpha));
        let (e, f, _) = b.lie.positive[0];
        let ef = ExteriorGElement::basis(3, e).wedge(&ExteriorGElement::basis(3, f));
        assert_eq!(t, ef.scale(&g.inner(alpha, alpha)));
        assert_eq!(b.tau(&Polynomial::one(1, FieldId::Rational)), ExteriorGElement::one(3));
    }

    #[test]
    fn a1_denominator_bound_is_equality() {
        let (g, h) = setup("A1");
        let b = LieBridge::build(LieType::A(1), &g, &h).unwrap();
        let c = b.weyl_denominator_check();
        assert!(c.passed);
        assert_eq!(c.details["bound_attained"], json!(true));
    }

    #[test]
    fn a2_permanent_and_bound() {
        let (g, h) = setup("A2");
        let b = LieBridge::build(LieType::A(2), &g, &h).unwrap();
        let c = b.weyl_denominator_check();
        assert!(c.passed, "{}", c.details);
        assert_eq!(c.details["bound_attained"], json!(false));
        // Gram matrix of α1, α2, α1+α2 is [[2,-1,1],[-1,2,1],[1,1,2]]
        let a = vec![vec![q(2), q(-1), q(1)], vec![q(-1), q(2), q(1)], vec![q(1), q(1), q(2)]];
        assert_eq!(c.details["permanent"], permanent(&a).to_json());
    }

    #[test]
    fn a1_phi() {
        let (g, h) = setup("A1");
        let b = LieBridge::build(LieType::A(1), &g, &h).unwrap();
        let mut cache = HashMap::new();
        let one = b.big_phi(&ExteriorGElement::one(3), &mut cache);
        assert_eq!(one, WeilElement::scalar(Polynomial::one(1, FieldId::Rational), Ambient::Quotient));
        let top = ExteriorGElement::from_term(3, 0b111, q(1));
        let img = b.big_phi(&top, &mut cache);
        let x = Polynomial::var(1, FieldId::Rational, 0);
        let xx = WeilElement::from_term(1, x, Ambient::Quotient);
        assert!(xx.scale(&q(1)).terms().count() == 1);
        let c = crate::differentials::proportionality(&xx, &img).unwrap();
        assert!(!c.is_zero());
    }

    #[test]
    fn series_a1() {
        let (g, h) = setup("A1");
        let b = LieBridge::build(LieType::A(1), &g, &h).unwrap();
        assert_eq!(b.lie_covariant_series(LieModule::Adjoint).unwrap(), GradedSeries::new(vec![0, 1, 1]));
        assert_eq!(b.lie_covariant_series(LieModule::Trivial).unwrap(), GradedSeries::new(vec![1, 0, 0, 1]));
    }

    #[test]
    fn harmonic_dims() {
        let (g, h) = setup("A2");
        for m in 0..=h.top_degree() + 1 {
            assert_eq!(harmonics(&g, m).unwrap().len(), h.standard(m).len());
        }
    }
}
