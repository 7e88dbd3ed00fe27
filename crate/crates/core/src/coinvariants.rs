//! The coinvariant algebra H = A/J with exact per-degree normal forms.
//!
//! H is built one degree at a time from the presentation
//! `H_d = (V ⊗ H_{d-1}) / (commutation relations + ψ_k with d_k = d)`,
//! so no Gröbner basis is needed. Columns are ordered by decreasing
//! grevlex monomial; pivots fall on the largest monomials and the free
//! columns are the standard monomials of degree d.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::algebra::linalg::{axpy, Echelon, SparseRow};
use crate::algebra::{Ambient, FieldId, Monomial, Polynomial, Scalar, WeilElement};
use crate::error::{Error, Result};
use crate::group::ReflectionGroup;

pub struct CoinvariantBasis {
    nvars: usize,
    field: FieldId,
    degrees: Vec<u32>,
    invariants: Vec<Polynomial>,
    standard: Vec<Vec<Monomial>>,
    std_index: Vec<HashMap<Monomial, usize>>,
    /// `image[d][i][u]` = coordinates in H_d of `x_i · standard[d-1][u]`.
    image: Vec<Vec<Vec<SparseRow>>>,
    memo: RwLock<HashMap<Monomial, SparseRow>>,
}

impl std::fmt::Debug for CoinvariantBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoinvariantBasis").field("dims", &self.dims()).finish()
    }
}

/// Coefficients of `∏ (1 + t + … + t^{d_i - 1})`.
pub fn expected_hilbert_series(degrees: &[u32]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &d in degrees {
        let mut next = vec![0u64; out.len() + d as usize - 1];
        for (i, &c) in out.iter().enumerate() {
            for k in 0..d as usize {
                next[i + k] += c;
            }
        }
        out = next;
    }
    out
}

impl CoinvariantBasis {
    pub fn build(g: &ReflectionGroup) -> Result<Self> {
        let psi = g.basic_invariants()?.to_vec();
        Self::from_invariants(g.rank(), g.field(), &psi)
    }

    /// Builds H for the ideal generated by the given homogeneous invariants.
    pub fn from_invariants(nvars: usize, field: FieldId, psi: &[Polynomial]) -> Result<Self> {
        let degrees: Vec<u32> = psi.iter().map(|p| p.degree().unwrap_or(0)).collect();
        let expected = expected_hilbert_series(&degrees);
        let top = expected.len() - 1;
        let mut b = CoinvariantBasis {
            nvars,
            field,
            degrees,
            invariants: psi.to_vec(),
            standard: vec![vec![Monomial::one(nvars)]],
            std_index: vec![HashMap::from([(Monomial::one(nvars), 0)])],
            image: vec![Vec::new()],
            memo: RwLock::new(HashMap::new()),
        };
        for d in 1..=top + 1 {
            b.extend_degree(d as u32)?;
            let got = b.standard[d].len() as u64;
            let want = expected.get(d).copied().unwrap_or(0);
            if got != want {
                return Err(Error::NotRegularSequence(format!("dim H_{d} = {got}, expected {want}")));
            }
        }
        b.standard.pop();
        b.std_index.pop();
        b.image.pop();
        Ok(b)
    }

    /// Standard monomials and reduction images per degree.
    pub fn parts(&self) -> (&[Vec<Monomial>], &[Vec<Vec<SparseRow>>]) {
        (&self.standard, &self.image)
    }

    /// Reassembles a basis from `parts`, checking shapes and dimensions.
    pub fn from_parts(
        nvars: usize,
        field: FieldId,
        psi: &[Polynomial],
        standard: Vec<Vec<Monomial>>,
        image: Vec<Vec<Vec<SparseRow>>>,
    ) -> Result<Self> {
        let degrees: Vec<u32> = psi.iter().map(|p| p.degree().unwrap_or(0)).collect();
        let expected = expected_hilbert_series(&degrees);
        let dims: Vec<u64> = standard.iter().map(|v| v.len() as u64).collect();
        if dims != expected || image.len() != standard.len() {
            return Err(Error::Internal(format!("stored coinvariant dimensions {dims:?} differ from {expected:?}")));
        }
        for d in 1..standard.len() {
            let h_prev = standard[d - 1].len();
            let h = standard[d].len();
            let shape_ok = image[d].len() == nvars
                && image[d].iter().all(|rows| rows.len() == h_prev && rows.iter().all(|r| r.keys().all(|&k| k < h)));
            if !shape_ok {
                return Err(Error::Internal(format!("stored reduction table for degree {d} has the wrong shape")));
            }
        }
        let std_index = standard.iter().map(|v| v.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()).collect();
        Ok(CoinvariantBasis {
            nvars,
            field,
            degrees,
            invariants: psi.to_vec(),
            standard,
            std_index,
            image,
            memo: RwLock::new(HashMap::new()),
        })
    }

    fn extend_degree(&mut self, d: u32) -> Result<()> {
        let n = self.nvars;
        let du = d as usize;
        let prev = &self.standard[du - 1];
        let h = prev.len();
        // column (i, u) ↦ i * h + u
        let col_mono: Vec<Monomial> = (0..n).flat_map(|i| prev.iter().map(move |u| u.times_var(i))).collect();
        let mut order: Vec<usize> = (0..n * h).collect();
        order.sort_by(|&a, &b| col_mono[b].cmp(&col_mono[a]).then(a.cmp(&b)));
        let mut pos = vec![0usize; n * h];
        for (p, &c) in order.iter().enumerate() {
            pos[c] = p;
        }
        let mut ech = Echelon::new();
        let embed = |i: usize, row: &SparseRow, c: &Scalar, out: &mut SparseRow| {
            let mut shifted = SparseRow::new();
            for (u, x) in row {
                shifted.insert(pos[i * h + u], x.clone());
            }
            axpy(out, &shifted, c);
        };
        let one = Scalar::one(self.field);
        if du >= 2 {
            for s in 0..self.standard[du - 2].len() {
                for i in 0..n {
                    for j in i + 1..n {
                        let mut rel = SparseRow::new();
                        embed(i, &self.image[du - 1][j][s], &one, &mut rel);
                        embed(j, &self.image[du - 1][i][s], &-&one, &mut rel);
                        ech.insert(&rel);
                    }
                }
            }
        }
        for (k, psi) in self.invariants.iter().enumerate() {
            if self.degrees[k] != d {
                continue;
            }
            let mut rel = SparseRow::new();
            for (m, c) in psi.terms() {
                let (i, rest) = m.split_first().expect("positive degree");
                embed(i, &self.coords_of_monomial(&rest), c, &mut rel);
            }
            ech.insert(&rel);
        }
        let pivots: std::collections::BTreeSet<usize> = ech.pivots().collect();
        let free: Vec<usize> = (0..n * h).filter(|p| !pivots.contains(p)).collect();
        // free columns sorted by position = decreasing monomial; store ascending
        let mut std_mono: Vec<Monomial> = free.iter().map(|&p| col_mono[order[p]].clone()).collect();
        std_mono.reverse();
        let std_index: HashMap<Monomial, usize> = std_mono.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let free_to_std: HashMap<usize, usize> = free.iter().map(|&p| (p, std_index[&col_mono[order[p]]])).collect();
        let mut image = vec![vec![SparseRow::new(); h]; n];
        for i in 0..n {
            for u in 0..h {
                let p = pos[i * h + u];
                let row = if let Some(&s) = free_to_std.get(&p) {
                    SparseRow::from([(s, one.clone())])
                } else {
                    ech.row(p)
                        .expect("pivot row")
                        .iter()
                        .filter(|(&c, _)| c != p)
                        .map(|(c, x)| (free_to_std[c], -x))
                        .collect()
                };
                image[i][u] = row;
            }
        }
        self.standard.push(std_mono);
        self.std_index.push(std_index);
        self.image.push(image);
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn invariants(&self) -> &[Polynomial] {
        &self.invariants
    }

    /// Top nonzero degree, equal to |T|.
    pub fn top_degree(&self) -> u32 {
        self.standard.len() as u32 - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.standard.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.standard.iter().map(Vec::len).sum()
    }

    /// Standard monomials of degree `d`, ascending.
    pub fn standard(&self, d: u32) -> &[Monomial] {
        self.standard.get(d as usize).map_or(&[], |v| v.as_slice())
    }

    /// Coordinates in H_d of a monomial of degree d.
    pub fn coords_of_monomial(&self, m: &Monomial) -> SparseRow {
        let d = m.degree() as usize;
        if d >= self.standard.len() {
            return SparseRow::new();
        }
        if let Some(&s) = self.std_index[d].get(m) {
            return SparseRow::from([(s, Scalar::one(self.field))]);
        }
        if let Some(r) = self.memo.read().unwrap().get(m) {
            return r.clone();
        }
        let (i, rest) = m.split_first().expect("degree zero is standard");
        let mut out = SparseRow::new();
        for (u, c) in self.coords_of_monomial(&rest) {
            axpy(&mut out, &self.image[d][i][u], &c);
        }
        self.memo.write().unwrap().insert(m.clone(), out.clone());
        out
    }

    /// Coordinates of the degree-`d` part of `p`.
    pub fn coords(&self, p: &Polynomial, d: u32) -> SparseRow {
        let mut out = SparseRow::new();
        for (m, c) in p.terms() {
            if m.degree() == d {
                axpy(&mut out, &self.coords_of_monomial(m), c);
            }
        }
        out
    }

    pub fn from_coords(&self, d: u32, row: &SparseRow) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars, self.field);
        for (u, c) in row {
            p.add_term(self.standard[d as usize][*u].clone(), c.clone());
        }
        p
    }

    /// π(p), supported on standard monomials.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let mut by_degree: HashMap<u32, SparseRow> = HashMap::new();
        for (m, c) in p.terms() {
            let row = by_degree.entry(m.degree()).or_default();
            axpy(row, &self.coords_of_monomial(m), c);
        }
        let mut out = Polynomial::zero(self.nvars, self.field.join(p.field()));
        for (d, row) in by_degree {
            if (d as usize) < self.standard.len() {
                for (u, c) in row {
                    out.add_term(self.standard[d as usize][u].clone(), c);
                }
            }
        }
        out
    }

    pub fn in_ideal(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Normal form of every coefficient; the result lives in ΛV ⊗ H.
    pub fn weil_normal_form(&self, w: &WeilElement) -> WeilElement {
        let mut out = WeilElement::zero(w.nvars(), w.field(), Ambient::Quotient);
        for (m, p) in w.terms() {
            out.add_term(m, self.normal_form(p));
        }
        out
    }

    /// Product in ΛV ⊗ H.
    pub fn mul(&self, a: &WeilElement, b: &WeilElement) -> Result<WeilElement> {
        let a = a.clone().with_ambient(Ambient::FullWeil);
        let b = b.clone().with_ambient(Ambient::FullWeil);
        Ok(self.weil_normal_form(&a.wedge(&b)?))
    }

    /// `w·x` in ΛV ⊗ H.
    pub fn act(&self, g: &ReflectionGroup, w: usize, x: &WeilElement) -> WeilElement {
        self.weil_normal_form(&g.act_weil(w, x))
    }

    /// Basis of the bigraded piece Λ^k V ⊗ H_d as (mask, standard monomial).
    pub fn bigraded_basis(&self, k: u32, d: u32) -> Vec<(u32, Monomial)> {
        let masks: Vec<u32> = (0..1u32 << self.nvars).filter(|m| m.count_ones() == k).collect();
        masks
            .iter()
            .flat_map(|&m| self.standard(d).iter().map(move |u| (m, u.clone())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rat;

    fn build(code: &str) -> (ReflectionGroup, CoinvariantBasis) {
        let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
        let h = CoinvariantBasis::build(&g).unwrap();
        (g, h)
    }

    #[test]
    fn product_formula() {
        assert_eq!(expected_hilbert_series(&[2, 4]), vec![1, 2, 2, 2, 1]);
        assert_eq!(expected_hilbert_series(&[2, 3]), vec![1, 2, 2, 1]);
    }

    #[test]
    fn dimensions_match_group_order() {
        for code in ["A1", "A2", "A3", "B2", "B3", "G2", "I2(5)", "I2(8)", "H3"] {
            let (g, h) = build(code);
            assert_eq!(h.total_dim(), g.order(), "{code}");
            assert_eq!(h.top_degree() as usize, g.num_reflections(), "{code}");
        }
        let (_, h) = build("B2");
        assert_eq!(h.dims(), vec![1, 2, 2, 2, 1]);
        let (_, h) = build("A1");
        assert_eq!(h.standard(0), &[Monomial::one(1)]);
        assert_eq!(h.standard(1), &[Monomial::var(1, 0)]);
    }

    #[test]
    fn normal_form_examples() {
        let (g, h) = build("A1");
        let x = Polynomial::var(1, FieldId::Rational, 0);
        assert!(h.normal_form(&x.pow(2)).is_zero());
        let one = Polynomial::one(1, FieldId::Rational);
        assert_eq!(h.normal_form(&one), one);
        let w = WeilElement::from_term(1, x.pow(2), Ambient::FullWeil);
        assert!(h.weil_normal_form(&w).is_zero());
        let (_, b2) = build("B2");
        let x = Polynomial::var(2, FieldId::Rational, 0);
        let y = Polynomial::var(2, FieldId::Rational, 1);
        let w = WeilElement::from_term(0b11, &x.pow(2) + &y.pow(2), Ambient::FullWeil);
        assert!(b2.weil_normal_form(&w).is_zero());
        assert!(b2.in_ideal(&x.pow(4)));
        let nf = b2.normal_form(&x.pow(3));
        assert!(b2.in_ideal(&(&x.pow(3) - &nf)));
        let _ = g;
    }

    #[test]
    fn invariants_vanish_and_delta_survives() {
        for code in ["A2", "B3", "G2", "H3"] {
            let (g, h) = build(code);
            for p in g.basic_invariants().unwrap() {
                assert!(h.in_ideal(p));
            }
            let delta = crate::group::jacobian_delta(&g, g.basic_invariants().unwrap()).unwrap();
            let nf = h.normal_form(&delta);
            assert!(!nf.is_zero(), "{code}");
            assert_eq!(h.standard(h.top_degree()).len(), 1);
        }
    }

    #[test]
    fn normal_form_multiplicative_and_equivariant() {
        let (g, h) = build("B3");
        let n = 3;
        let f = FieldId::Rational;
        let p = Polynomial::from_int_terms(f, n, &[(3, &[2, 1, 0]), (-1, &[0, 1, 2]), (2, &[1, 0, 0])]);
        let q = Polynomial::from_int_terms(f, n, &[(1, &[1, 1, 1]), (5, &[0, 0, 2])]);
        assert_eq!(h.normal_form(&(&p * &q)), h.normal_form(&(&h.normal_form(&p) * &h.normal_form(&q))));
        for w in [1, 7, 20, 47] {
            assert_eq!(h.normal_form(&g.act_poly(w, &p)), h.normal_form(&g.act_poly(w, &h.normal_form(&p))));
        }
        let half = Scalar::rational(Rat::new(1, 2));
        assert_eq!(h.normal_form(&p.scale(&half)), h.normal_form(&p).scale(&half));
    }
}
