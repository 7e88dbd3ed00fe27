use refcov::coinvariants::CoinvariantBasis;
use refcov::group::ReflectionGroup;
use refcov::lie_bridge::{catalogue_modules, LieBridge, LieType};

fn run(code: &str, ty: LieType) {
    let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
    let h = CoinvariantBasis::build(&g).unwrap();
    let b = LieBridge::build(ty, &g, &h).unwrap();
    for c in b.checks(&catalogue_modules(ty)) {
        println!("{} {} {}", c.name, c.passed, c.details);
        assert!(c.passed, "{} {}", c.name, c.details);
    }
}

#[test]
fn a1() {
    run("A1", LieType::A(1));
}

#[test]
fn a2() {
    run("A2", LieType::A(2));
}

#[test]
fn b2() {
    run("B2", LieType::B2);
}
