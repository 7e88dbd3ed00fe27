use refcov::coinvariants::CoinvariantBasis;
use refcov::covariant::Covariants;
use refcov::differentials::DunklParams;
use refcov::group::ReflectionGroup;

fn run(code: &str) {
    let t = std::time::Instant::now();
    let g = ReflectionGroup::build(code.parse().unwrap()).unwrap();
    let h = CoinvariantBasis::build(&g).unwrap();
    let t_h = t.elapsed();
    let cov = Covariants::build(&g, &h, DunklParams::unit(&g)).unwrap();
    let t_c = t.elapsed();
    let mut checks = cov.p_checks();
    checks.extend(cov.generator_checks());
    checks.extend(cov.orthogonality_checks());
    checks.push(cov.solomon_check());
    let table = cov.constants_table().unwrap();
    checks.push(table.check());
    checks.extend(cov.pr_structure_check(&table));
    let t_s = t.elapsed();
    checks.push(cov.freeness_check());
    checks.push(cov.j2_invariance_check(11));
    eprintln!("{code}: basis {t_h:?} build {t_c:?} structure {t_s:?} total {:?}", t.elapsed());
    for c in &checks {
        assert!(c.passed, "{code}: {c:?}");
    }
}

#[test]
fn rank_three() {
    for code in ["A3", "B3", "H3"] {
        run(code);
    }
}

#[test]
fn rank_four() {
    for code in ["A4", "B4", "F4"] {
        run(code);
    }
}
