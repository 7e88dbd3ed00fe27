//! Exact dense and sparse linear algebra over catalogue fields.

use std::collections::BTreeMap;

use super::field::{FieldId, Scalar};
use super::rational::Rat;

pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(field: FieldId, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one(field) } else { Scalar::zero(field) }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let field = a[0][0].field().join(b[0][0].field());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Scalar::zero(field);
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            acc += &(&a[i][t] * &b[t][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    let field = v.iter().fold(a[0][0].field(), |f, x| f.join(x.field()));
    a.iter()
        .map(|row| {
            let mut acc = Scalar::zero(field);
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x * y);
                }
            }
            acc
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let field = a.iter().chain(b).fold(FieldId::Rational, |f, x| f.join(x.field()));
    let mut acc = Scalar::zero(field);
    for (x, y) in a.iter().zip(b) {
        acc += &(x * y);
    }
    acc
}

/// `aᵀ G b`.
pub fn bilinear(g: &Matrix, a: &[Scalar], b: &[Scalar]) -> Scalar {
    dot(a, &mat_vec(g, b))
}

/// Determinant by Gaussian elimination with exact pivots.
pub fn determinant(a: &Matrix) -> Scalar {
    let n = a.len();
    if n == 0 {
        return Scalar::int(1);
    }
    let field = a[0][0].field();
    let mut m = a.clone();
    let mut det = Scalar::one(field);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero(field);
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].inv();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for k in col..n {
                let t = &m[col][k] * &f;
                m[r][k] -= &t;
            }
        }
    }
    det
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let field = a[0][0].field();
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one(field) } else { Scalar::zero(field) }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(piv, col);
        let inv = m[col][col].inv();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..2 * n {
                    let t = &m[col][k] * &f;
                    m[r][k] -= &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Leading principal minors, top-left 1×1 up to the whole matrix.
pub fn leading_minors(a: &Matrix) -> Vec<Scalar> {
    (1..=a.len())
        .map(|k| determinant(&a[..k].iter().map(|r| r[..k].to_vec()).collect()))
        .collect()
}

/// Fraction-free (Bareiss) determinant of an integer matrix; every
/// intermediate division is exact.
pub fn bareiss_determinant(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    if n == 0 {
        return Rat::one();
    }
    let mut m = a.to_vec();
    let mut prev = Rat::one();
    let mut sign = 1i64;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Rat::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = &v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    &m[n - 1][n - 1] * &Rat::from_int(sign)
}

/// Sparse row vector keyed by column index.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incremental row-echelon basis over sparse rows.
///
/// Rows are reduced on insertion against the stored pivots; each stored row
/// has its pivot coefficient normalized to one and is the only stored row
/// with a nonzero entry in its pivot column (reduced echelon form).
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    /// pivot column -> normalized row
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseRow> {
        self.rows.get(&pivot)
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &SparseRow) -> SparseRow {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = v.get(p).cloned() {
                axpy(&mut v, row, &-c);
            }
        }
        v
    }

    /// Inserts `v`; returns `true` when it increased the rank. The pivot is
    /// the smallest column index of the reduced row.
    pub fn insert(&mut self, v: &SparseRow) -> bool {
        let mut v = self.reduce(v);
        let Some((&p, c)) = v.iter().next() else {
            return false;
        };
        let inv = c.inv();
        for x in v.values_mut() {
            *x = &*x * &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &v, &-c);
            }
        }
        self.rows.insert(p, v);
        true
    }

    pub fn contains(&self, v: &SparseRow) -> bool {
        self.reduce(v).is_empty()
    }

    /// Writes `v` (which must lie in the row span) as a combination of the
    /// stored rows, keyed by their pivot columns.
    pub fn express(&self, v: &SparseRow) -> Option<BTreeMap<usize, Scalar>> {
        let mut out = BTreeMap::new();
        let mut rest = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = rest.get(p).cloned() {
                axpy(&mut rest, row, &-&c);
                out.insert(*p, c);
            }
        }
        rest.is_empty().then_some(out)
    }
}

/// `v += c·w`.
pub fn axpy(v: &mut SparseRow, w: &SparseRow, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let t = x * c;
        match v.entry(*k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &t;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

/// Basis of `{v ∈ K^ncols : row·v = 0 for every row}`.
pub fn nullspace(rows: &[SparseRow], ncols: usize, field: FieldId) -> Vec<Vec<Scalar>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let pivots: Vec<usize> = e.pivots().collect();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Scalar::zero(field); ncols];
            v[f] = Scalar::one(field);
            for &p in &pivots {
                if let Some(x) = e.row(p).and_then(|row| row.get(&f)) {
                    v[p] = -x;
                }
            }
            v
        })
        .collect()
}

/// Rank of a family of sparse rows.
pub fn rank(rows: &[SparseRow]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Solves `Σ_i x_i·columns[i] = target` exactly; `None` when inconsistent.
/// Returns one solution (free variables set to zero) and whether it is unique.
pub fn solve_combination(columns: &[SparseRow], target: &SparseRow) -> Option<(Vec<Scalar>, bool)> {
    // Augment each column with a tag entry identifying it, placed after all
    // data indices, and reduce the target against the echelon of the columns.
    let offset = columns
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|r| r.keys().next_back().copied())
        .max()
        .map_or(0, |m| m + 1);
    let field = columns
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|r| r.values())
        .fold(FieldId::Rational, |f, x| f.join(x.field()));
    let mut e = Echelon::new();
    let mut independent = true;
    for (i, c) in columns.iter().enumerate() {
        let mut row = c.clone();
        row.insert(offset + i, Scalar::one(field));
        let reduced = e.reduce(&row);
        if reduced.keys().next().is_none_or(|&k| k >= offset) {
            independent = false;
        }
        e.insert(&row);
    }
    let reduced = e.reduce(target);
    if reduced.keys().next().is_some_and(|&k| k < offset) {
        return None;
    }
    // target - Σ x_i c_i has only tag entries: reduced = -Σ x_i tag_i.
    let mut x = vec![Scalar::zero(field); columns.len()];
    for (k, v) in reduced {
        x[k - offset] = -v;
    }
    Some((x, independent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::int(n)
    }

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(k, v)| (k, q(v))).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(determinant(&a), q(5));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(FieldId::Rational, 2));
        let ints: Vec<Vec<Rat>> = vec![
            vec![Rat::from_int(2), Rat::from_int(-1), Rat::from_int(0)],
            vec![Rat::from_int(-1), Rat::from_int(2), Rat::from_int(-1)],
            vec![Rat::from_int(0), Rat::from_int(-1), Rat::from_int(2)],
        ];
        assert_eq!(bareiss_determinant(&ints), Rat::from_int(4));
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&row(&[(0, 1), (1, 2)])));
        assert!(e.insert(&row(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&row(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&row(&[(0, 2), (1, 4)])));
        assert!(!e.contains(&row(&[(2, 1)])));
    }

    #[test]
    fn combination_solve() {
        let cols = vec![row(&[(0, 1), (1, 1)]), row(&[(1, 1)])];
        let (x, unique) = solve_combination(&cols, &row(&[(0, 2), (1, 5)])).unwrap();
        assert!(unique);
        assert_eq!(x, vec![q(2), q(3)]);
        assert!(solve_combination(&cols, &row(&[(2, 1)])).is_none());
        let dup = vec![row(&[(0, 1)]), row(&[(0, 2)])];
        let (_, unique) = solve_combination(&dup, &row(&[(0, 4)])).unwrap();
        assert!(!unique);
    }
}
