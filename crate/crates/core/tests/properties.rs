use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use refcov::algebra::linalg::{nullspace, SparseRow};
use refcov::algebra::{merge_sign, Ambient, FieldId, Monomial, Polynomial, Rat, Scalar};
use refcov::differentials::{de_rham_d, koszul_delta, random_weil_element};
use refcov::group::ReflectionGroup;
use refcov::lie_bridge::{build_lie, tau, ExteriorGElement, LieType};

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_of(r: &BigRational) -> Rat {
    Rat::from(r.clone())
}

fn poly(nvars: usize, terms: &[(Vec<u16>, i64)]) -> Polynomial {
    let mut p = Polynomial::zero(nvars, FieldId::Rational);
    for (e, c) in terms {
        p.add_term(Monomial::from_exponents(e), Scalar::int(*c));
    }
    p
}

fn poly_strategy(nvars: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u16..3, nvars), -5i64..6), 0..5).prop_map(move |t| poly(nvars, &t))
}

proptest! {
    #[test]
    fn rat_matches_bigrational(a in -10_000i64..10_000, b in 1i64..500, c in -10_000i64..10_000, d in 1i64..500) {
        let (x, y) = (big(a, b), big(c, d));
        let (p, q) = (Rat::new(a, b), Rat::new(c, d));
        prop_assert_eq!(&p + &q, rat_of(&(&x + &y)));
        prop_assert_eq!(&p - &q, rat_of(&(&x - &y)));
        prop_assert_eq!(&p * &q, rat_of(&(&x * &y)));
        if c != 0 {
            prop_assert_eq!(&p / &q, rat_of(&(&x / &y)));
        }
        prop_assert_eq!(p.cmp(&q), x.cmp(&y));
    }

    #[test]
    fn rat_overflow_promotes(a in (i64::MAX / 4)..i64::MAX, b in 2i64..1000) {
        let p = Rat::new(a, 1);
        let sq = &p * &p;
        prop_assert_eq!(sq.to_big(), big(a, 1) * big(a, 1));
        let q = &sq / &Rat::new(b, 1);
        prop_assert_eq!(&q * &Rat::new(b, 1), sq);
    }

    #[test]
    fn polynomial_ring_laws(p in poly_strategy(3), q in poly_strategy(3), r in poly_strategy(3)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        for i in 0..3 {
            // Leibniz rule
            prop_assert_eq!((&p * &q).partial(i), &(&p.partial(i) * &q) + &(&p * &q.partial(i)));
        }
    }

    #[test]
    fn merge_sign_is_antisymmetric(s in 0u32..64, t in 0u32..64) {
        let a = merge_sign(s, t);
        let b = merge_sign(t, s);
        if s & t != 0 {
            prop_assert_eq!((a, b), (0, 0));
        } else {
            let k = (s.count_ones() * t.count_ones()) % 2;
            prop_assert_eq!(a * b, if k == 0 { 1 } else { -1 });
            prop_assert!(a == 1 || a == -1);
        }
    }

    #[test]
    fn nullspace_is_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 1..5)) {
        let sparse: Vec<SparseRow> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, Scalar::int(x))).collect())
            .collect();
        let ns = nullspace(&sparse, 5, FieldId::Rational);
        let rank = refcov::algebra::linalg::rank(&sparse);
        prop_assert_eq!(ns.len() + rank, 5);
        for v in &ns {
            for r in &rows {
                let mut acc = Scalar::int(0);
                for (x, y) in r.iter().zip(v) {
                    acc += &(&Scalar::int(*x) * y);
                }
                prop_assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn exterior_wedge_associative(a in prop::collection::vec((0u32..64, -3i64..4), 0..4),
                                  b in prop::collection::vec((0u32..64, -3i64..4), 0..4),
                                  c in prop::collection::vec((0u32..64, -3i64..4), 0..4)) {
        let mk = |t: &[(u32, i64)]| {
            let mut e = ExteriorGElement::zero(6);
            for &(m, x) in t {
                e.add_term(m, Scalar::int(x));
            }
            e
        };
        let (x, y, z) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(x.wedge(&y).wedge(&z), x.wedge(&y.wedge(&z)));
    }
}

#[test]
fn group_action_spot_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let groups: Vec<ReflectionGroup> = ["B3", "H3", "I2(5)", "A3", "G2"].iter().map(|c| ReflectionGroup::build(c.parse().unwrap()).unwrap()).collect();
    for k in 0..200 {
        let g = &groups[k % groups.len()];
        let a = rng.gen_range(0..g.order());
        let b = rng.gen_range(0..g.order());
        let w = random_weil_element(g, &mut rng);
        let p = w.terms().next().map(|(_, p)| p.clone()).unwrap();
        let ab = g.mul(a, b);
        assert_eq!(g.act_poly(ab, &p), g.act_poly(a, &g.act_poly(b, &p)), "{} triple {k}", g.label());
        assert_eq!(g.act_weil(ab, &w), g.act_weil(a, &g.act_weil(b, &w)), "{} triple {k}", g.label());
        // the Gram form is invariant
        let q = g.gram_quadratic();
        assert_eq!(g.act_poly(a, &q), q);
    }
}

#[test]
fn square_zero_detector_sees_nonzero_operators() {
    // (dδ + δd) multiplies by total degree, so d∘δ alone is usually nonzero.
    let g = ReflectionGroup::build("B2".parse().unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut nonzero = 0;
    for _ in 0..20 {
        let w = random_weil_element(&g, &mut rng);
        let x = de_rham_d(&g, &koszul_delta(&g, &w, None)).unwrap();
        let y = koszul_delta(&g, &de_rham_d(&g, &w).unwrap(), None);
        if !x.is_zero() {
            nonzero += 1;
        }
        let mut sum = x.add(&y);
        let mut expect = refcov::algebra::WeilElement::zero(2, FieldId::Rational, Ambient::FullWeil);
        for (m, p) in w.terms() {
            for (mono, c) in p.terms() {
                let deg = m.count_ones() + mono.degree();
                let term = Polynomial::monomial(mono.clone(), c * &Scalar::int(deg as i64));
                expect.add_term(m, term);
            }
        }
        sum = sum.sub(&expect);
        assert!(sum.is_zero());
    }
    assert!(nonzero > 10);
}

#[test]
fn tau_is_multiplicative() {
    for (code, ty) in [("A1", LieType::A(1)), ("A2", LieType::A(2)), ("B2", LieType::B2)] {
        let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
        let lie = build_lie(ty, &g).unwrap();
        let gens = lie.tau_generators();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let mk = |rng: &mut ChaCha8Rng| {
                let t: Vec<(Vec<u16>, i64)> = (0..3).map(|_| ((0..g.rank()).map(|_| rng.gen_range(0..2)).collect(), rng.gen_range(-3..4))).collect();
                poly(g.rank(), &t)
            };
            let (p, q) = (mk(&mut rng), mk(&mut rng));
            assert_eq!(tau(&lie, &gens, &(&p * &q)), tau(&lie, &gens, &p).wedge(&tau(&lie, &gens, &q)), "{code}");
        }
        // degree m lands in Λ^{2m} g
        let x = Polynomial::var(g.rank(), FieldId::Rational, 0);
        assert_eq!(tau(&lie, &gens, &x).degree(), Some(2));
        let past = (lie.dim / 2 + 1) as u32;
        assert!(tau(&lie, &gens, &x.pow(past)).is_zero());
    }
}
