//! Catalogue realizations: Gram matrix and simple roots in the working basis.

use super::spec::GroupType;
use crate::algebra::linalg::{identity, Matrix};
use crate::algebra::{FieldId, Rat, Scalar};

pub struct Realization {
    pub field: FieldId,
    pub gram: Matrix,
    pub simple_roots: Vec<Vec<Scalar>>,
}

fn q(n: i64) -> Scalar {
    Scalar::int(n)
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|j| q((i == j) as i64)).collect()
}

fn promote(field: FieldId, m: Matrix) -> Matrix {
    m.into_iter().map(|r| r.into_iter().map(|x| x.promote(field)).collect()).collect()
}

/// Simple-root basis with Gram entries `(α_i, α_j)` given explicitly.
fn simple_root_basis(field: FieldId, gram: Matrix) -> Realization {
    let n = gram.len();
    Realization {
        field,
        gram: promote(field, gram),
        simple_roots: (0..n).map(|i| unit(n, i).into_iter().map(|x| x.promote(field)).collect()).collect(),
    }
}

/// `2cos(π/m)` in the realization field of I₂(m).
pub fn two_cos_pi_over(m: u32) -> Scalar {
    match m {
        2 => q(0),
        3 => q(1),
        4 => Scalar::theta(FieldId::Sqrt2),
        5 => {
            // (1 + √5)/2
            Scalar::from_coords(FieldId::Sqrt5, vec![Rat::new(1, 2), Rat::new(1, 2)])
        }
        6 => Scalar::theta(FieldId::Sqrt3),
        7 => Scalar::theta(FieldId::TwoCosPi7),
        8 => Scalar::theta(FieldId::TwoCosPi8),
        _ => panic!("2cos(π/{m}) not in the catalogue"),
    }
}

pub fn realize(ty: GroupType) -> Realization {
    let field = ty.required_field();
    match ty {
        GroupType::A(1) => Realization {
            field,
            gram: vec![vec![q(1)]],
            simple_roots: vec![vec![q(1)]],
        },
        GroupType::A(r) => {
            // Basis e_i - e_{i+1} of the complement of (1,…,1); Gram = Cartan matrix.
            let gram = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| match i.abs_diff(j) {
                            0 => q(2),
                            1 => q(-1),
                            _ => q(0),
                        })
                        .collect()
                })
                .collect();
            simple_root_basis(field, gram)
        }
        GroupType::B(r) => hyperoctahedral(field, r),
        GroupType::I2(4) => hyperoctahedral(field, 2),
        GroupType::D4 => {
            // e1-e2, e2-e3, e3-e4, e3+e4
            let mut roots: Vec<Vec<Scalar>> = (0..3)
                .map(|i| {
                    let mut v = unit(4, i);
                    v[i + 1] = q(-1);
                    v
                })
                .collect();
            let mut last = unit(4, 2);
            last[3] = q(1);
            roots.push(last);
            Realization {
                field,
                gram: identity(field, 4),
                simple_roots: roots,
            }
        }
        GroupType::I2(3) => realize(GroupType::A(2)),
        GroupType::I2(6) | GroupType::G2 => {
            // Hexagonal lattice: short α₁ with (α₁,α₁)=2, long α₂ with (α₂,α₂)=6.
            simple_root_basis(field, vec![vec![q(2), q(-3)], vec![q(-3), q(6)]])
        }
        GroupType::I2(m) => {
            let c = -two_cos_pi_over(m);
            let two = Scalar::from_int(field, 2);
            simple_root_basis(field, vec![vec![two.clone(), c.clone()], vec![c, two]])
        }
        GroupType::F4 => {
            let h = Scalar::frac(1, 2);
            let roots = vec![
                vec![q(0), q(1), q(-1), q(0)],
                vec![q(0), q(0), q(1), q(-1)],
                vec![q(0), q(0), q(0), q(1)],
                vec![h.clone(), -&h, -&h, -&h],
            ];
            Realization {
                field,
                gram: identity(field, 4),
                simple_roots: roots,
            }
        }
        GroupType::H3 | GroupType::H4 => {
            let n = ty.rank();
            let phi = -two_cos_pi_over(5);
            let gram = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match (i, j) {
                            _ if i == j => Scalar::from_int(field, 2),
                            (0, 1) | (1, 0) => phi.clone(),
                            _ if i.abs_diff(j) == 1 => Scalar::from_int(field, -1),
                            _ => Scalar::zero(field),
                        })
                        .collect()
                })
                .collect();
            simple_root_basis(field, gram)
        }
    }
}

/// Bₙ in standard orthonormal coordinates: roots e_i - e_{i+1} and e_n.
fn hyperoctahedral(field: FieldId, r: usize) -> Realization {
    let mut roots: Vec<Vec<Scalar>> = (0..r - 1)
        .map(|i| {
            let mut v = unit(r, i);
            v[i + 1] = q(-1);
            v
        })
        .collect();
    roots.push(unit(r, r - 1));
    Realization {
        field,
        gram: identity(field, r),
        simple_roots: roots,
    }
}
