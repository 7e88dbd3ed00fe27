use refcov::algebra::WeilElement;
use refcov::coinvariants::CoinvariantBasis;
use refcov::covariant::make_p;
use refcov::group::ReflectionGroup;
use refcov::little_adjoint::{little_adjoint_suite, LittleAdjoint};

fn run(code: &str) -> Vec<refcov::report::Check> {
    let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
    let h = CoinvariantBasis::build(&g).unwrap();
    let p: Vec<WeilElement> = g.basic_invariants().unwrap().iter().map(|x| make_p(&g, &h, x).unwrap()).collect();
    little_adjoint_suite(&g, &h, &p)
}

fn assert_all(code: &str) {
    let checks = run(code);
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.details)).collect();
    assert!(failed.is_empty(), "{code}: {failed:#?}");
}

#[test]
fn b3_b4() {
    assert_all("B3");
    assert_all("B4");
}

#[test]
fn dihedral_even() {
    for code in ["I2(4)", "G2", "I2(6)", "I2(8)"] {
        assert_all(code);
    }
}

#[test]
fn f4() {
    assert_all("F4");
}

#[test]
fn f4_subgroup_and_u() {
    let g = ReflectionGroup::build("F4".parse().unwrap()).unwrap();
    let h = CoinvariantBasis::build(&g).unwrap();
    let la = LittleAdjoint::build(&g, &h, 0).unwrap();
    assert_eq!(la.split.h_ell.len(), 192);
    assert_eq!(la.split.w_p.len(), 6);
    let mut degs = la.dec.subgroup_degrees.clone();
    degs.sort_unstable();
    assert_eq!(degs, vec![2, 4, 4, 6]);
    assert_eq!(la.dec.u_degree, Some(4));
    assert_eq!(la.tilde.x_degrees, vec![8, 12]);
}

