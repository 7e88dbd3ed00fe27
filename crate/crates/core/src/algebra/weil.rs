//! Elements of the Weil algebra ΛV ⊗ A and of its quotient ΛV ⊗ H.
//!
//! Exterior basis monomials `e_S` are stored as bitmasks over the basis
//! `e_1..e_r` of V, always read in increasing index order:
//! `e_S = e_{s_1} ∧ e_{s_2} ∧ …` with `s_1 < s_2 < …`.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{FieldId, Scalar};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Subset of `{0..r-1}` as a bitmask.
pub type ExtMask = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// ΛV ⊗ A.
    FullWeil,
    /// ΛV ⊗ H, coefficients in coinvariant normal form.
    Quotient,
}

/// Sign of `e_S ∧ e_T` relative to `e_{S∪T}`; zero when `S ∩ T ≠ ∅`.
pub fn merge_sign(s: ExtMask, t: ExtMask) -> i32 {
    if s & t != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut tt = t;
    while tt != 0 {
        let j = tt.trailing_zeros();
        // elements of S above j
        inversions += (s >> (j + 1)).count_ones();
        tt &= tt - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mask_indices(s: ExtMask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| s & (1 << i) != 0)
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeilElement {
    nvars: usize,
    field: FieldId,
    ambient: Ambient,
    terms: BTreeMap<ExtMask, Polynomial>,
}

impl WeilElement {
    pub fn zero(nvars: usize, field: FieldId, ambient: Ambient) -> Self {
        WeilElement {
            nvars,
            field,
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(mask: ExtMask, p: Polynomial, ambient: Ambient) -> Self {
        let mut w = Self::zero(p.nvars(), p.field(), ambient);
        w.add_term(mask, p);
        w
    }

    /// `1 ⊗ p`.
    pub fn scalar(p: Polynomial, ambient: Ambient) -> Self {
        Self::from_term(0, p, ambient)
    }

    /// `Σ_j v_j e_j ⊗ 1`.
    pub fn vector(field: FieldId, v: &[Scalar], ambient: Ambient) -> Self {
        let n = v.len();
        let mut w = Self::zero(n, field, ambient);
        for (j, c) in v.iter().enumerate() {
            w.add_term(1 << j, Polynomial::constant(n, c.clone()));
        }
        w
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn with_ambient(mut self, ambient: Ambient) -> Self {
        self.ambient = ambient;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ExtMask, &Polynomial)> {
        self.terms.iter().map(|(m, p)| (*m, p))
    }

    pub fn coeff(&self, mask: ExtMask) -> Option<&Polynomial> {
        self.terms.get(&mask)
    }

    pub fn add_term(&mut self, mask: ExtMask, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        debug_assert_eq!(p.nvars(), self.nvars);
        self.field = self.field.join(p.field());
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &WeilElement, c: &Scalar) {
        for (m, p) in &other.terms {
            self.add_term(*m, p.scale(c));
        }
    }

    pub fn checked_add(&self, other: &WeilElement) -> Result<WeilElement> {
        if self.ambient != other.ambient {
            return Err(Error::MismatchedAmbient);
        }
        if self.nvars != other.nvars {
            return Err(Error::MismatchedVars(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(*m, p.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &WeilElement) -> WeilElement {
        self.checked_add(other).expect("Weil element add")
    }

    pub fn sub(&self, other: &WeilElement) -> WeilElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeilElement {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> WeilElement {
        let mut out = Self::zero(self.nvars, self.field.join(c.field()), self.ambient);
        for (m, p) in &self.terms {
            out.add_term(*m, p.scale(c));
        }
        out
    }

    /// Exterior-times-polynomial product. Products of quotient elements are
    /// returned as their full-Weil lift; reduce them with the coinvariant
    /// basis to get back into ΛV ⊗ H.
    pub fn wedge(&self, other: &WeilElement) -> Result<WeilElement> {
        if self.ambient != other.ambient {
            return Err(Error::MismatchedAmbient);
        }
        if self.nvars != other.nvars {
            return Err(Error::MismatchedVars(self.nvars, other.nvars));
        }
        let mut out = Self::zero(self.nvars, self.field.join(other.field), Ambient::FullWeil);
        for (s, p) in &self.terms {
            for (t, q) in &other.terms {
                let sign = merge_sign(*s, *t);
                if sign == 0 {
                    continue;
                }
                let prod = p * q;
                out.add_term(s | t, if sign > 0 { prod } else { -&prod });
            }
        }
        Ok(out)
    }

    pub fn map_polys(&self, f: impl Fn(&Polynomial) -> Polynomial) -> WeilElement {
        let mut out = Self::zero(self.nvars, self.field, self.ambient);
        for (m, p) in &self.terms {
            out.add_term(*m, f(p));
        }
        out
    }

    /// `(exterior degree, polynomial degree)` when homogeneous in both.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut out: Option<(u32, u32)> = None;
        for (m, p) in &self.terms {
            if !p.is_homogeneous() {
                return None;
            }
            let bd = (m.count_ones(), p.degree().unwrap());
            match out {
                None => out = Some(bd),
                Some(o) if o != bd => return None,
                _ => {}
            }
        }
        out
    }

    /// Total degree `ext + 2·poly` when homogeneous for it.
    pub fn total_degree(&self) -> Option<u32> {
        let mut out: Option<u32> = None;
        for (m, p) in &self.terms {
            for (mono, _) in p.terms() {
                let d = m.count_ones() + 2 * mono.degree();
                match out {
                    None => out = Some(d),
                    Some(o) if o != d => return None,
                    _ => {}
                }
            }
        }
        out
    }

    /// Exterior degree when every term has the same one.
    pub fn exterior_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.count_ones());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Component of exterior degree `k`.
    pub fn exterior_part(&self, k: u32) -> WeilElement {
        let mut out = Self::zero(self.nvars, self.field, self.ambient);
        for (m, p) in &self.terms {
            if m.count_ones() == k {
                out.terms.insert(*m, p.clone());
            }
        }
        out
    }
}

impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let idx: Vec<String> = mask_indices(*m).map(|i| format!("e{}", i + 1)).collect();
            let ext = if idx.is_empty() { "1".to_string() } else { idx.join("∧") };
            write!(f, "{ext}⊗({p})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
