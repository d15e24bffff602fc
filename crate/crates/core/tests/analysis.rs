mod common;

use common::{c, random_point};
use polydisc::analysis::{
    approx_polynomial, identity_certify, riemann_extend, ApproxOptions, ExtendOptions, ThinSetSpec,
};
use polydisc::expr::{Expr, ExprFn};
use polydisc::{CPoint, Complex64, Integrand, Polydisc, Seminorm, SpaceDescriptor};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scalar() -> SpaceDescriptor {
    SpaceDescriptor::scalar()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Points on the diagonal of `(z1^2 - z2^2) / (z1 - z2)` extend to `2 s`.
    #[test]
    fn diagonal_extension(r in 0.0f64..0.8, theta in 0.0f64..std::f64::consts::TAU) {
        let f = ExprFn::parse("(z1^2 - z2^2) / (z1 - z2)", 2).unwrap();
        let thin = ThinSetSpec::parse("z1 - z2", 2, None).unwrap();
        let s = Complex64::from_polar(r, theta);
        let target = CPoint::new(vec![s, s]).unwrap();
        let disc = Polydisc::new(target.clone(), vec![0.25, 0.25]).unwrap();
        let e = riemann_extend(&f, &scalar(), &thin, &target, &[disc], &ExtendOptions::default()).unwrap();
        prop_assert!((e.value.as_scalar().unwrap() - 2.0 * s).norm() < 1e-9);
    }

    /// The certificate does not depend on argument order.
    #[test]
    fn identity_is_symmetric(a in -1.0f64..1.0, b in -1.0f64..1.0, k in 1u32..5) {
        let f = ExprFn::parse(&format!("exp(z1) + ({a}) * z1^{k}"), 1).unwrap();
        let g = ExprFn::parse(&format!("exp(z1) + ({b}) * z1^{k}"), 1).unwrap();
        let disc = Polydisc::centered(1, 1.0).unwrap();
        let fg = identity_certify(&f, &g, &scalar(), &disc, 8, 1e-10, 64).unwrap();
        let gf = identity_certify(&g, &f, &scalar(), &disc, 8, 1e-10, 64).unwrap();
        prop_assert_eq!(&fg.witness, &gf.witness);
        prop_assert!((fg.max_coeff_gap - gf.max_coeff_gap).abs() < 1e-15);
        prop_assert!((fg.max_coeff_gap - (a - b).abs()).abs() < 1e-12);
    }
}

#[test]
fn trigonometric_identity_is_certified() {
    let f = ExprFn::parse("sin(z1 + z2)", 2).unwrap();
    let g = ExprFn::parse("sin(z1) * cos(z2) + cos(z1) * sin(z2)", 2).unwrap();
    let disc = Polydisc::centered(2, 1.0).unwrap();
    let cert = identity_certify(&f, &g, &scalar(), &disc, 10, 1e-12, 64).unwrap();
    assert!(cert.equal_on_disc, "{cert:?}");
    assert_eq!(cert.witness, None);
}

#[test]
fn off_set_targets_evaluate_directly() {
    let f = ExprFn::parse("sin(z1 * z2) / (z1 * z2)", 2).unwrap();
    let thin = ThinSetSpec::parse("z1 * z2", 2, None).unwrap();
    let target = CPoint::new(vec![c(0.5, 0.1), c(-0.2, 0.3)]).unwrap();
    let disc = Polydisc::new(target.clone(), vec![0.1, 0.1]).unwrap();
    let e = riemann_extend(
        &f,
        &scalar(),
        &thin,
        &target,
        &[disc],
        &ExtendOptions::default(),
    )
    .unwrap();
    let p = target[0] * target[1];
    assert!((e.value.as_scalar().unwrap() - p.sin() / p).norm() < 1e-12);
}

#[test]
fn thin_set_must_be_a_nonzero_polynomial() {
    assert!(ThinSetSpec::parse("exp(z1)", 2, None).is_err());
    assert!(ThinSetSpec::parse("z1 - z1", 2, None).is_err());
    assert!(ThinSetSpec::parse("z1^2 - z2", 2, Some(-1.0)).is_err());
    assert!(ThinSetSpec::parse("z1^2 - z2", 2, None).is_ok());
}

#[test]
fn certified_error_bounds_true_error() {
    let f = ExprFn::parse("exp(z1) * cos(z2)", 2).unwrap();
    let disc = Polydisc::centered(2, 1.0).unwrap();
    let a = approx_polynomial(
        &f,
        &scalar(),
        &disc,
        1e-3,
        Seminorm::Sup,
        &ApproxOptions::default(),
    )
    .unwrap();
    let p = ExprFn::new(Expr::from_series(&a.polynomial), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let z = random_point(&mut rng, disc.center().coords(), disc.radii(), 1.0);
        let err = (p.eval(&z).unwrap().as_scalar().unwrap() - z[0].exp() * z[1].cos()).norm();
        assert!(
            err <= a.certified_error * (1.0 + 1e-9),
            "{err} > {}",
            a.certified_error
        );
    }
    assert!(a.r_used < 1.0 && a.r_used > 0.5);
}

#[test]
fn approximating_a_polynomial_reproduces_it() {
    let f = ExprFn::parse("exp(z1 - z2)", 2).unwrap();
    let disc = Polydisc::centered(2, 1.0).unwrap();
    let options = ApproxOptions::default();
    let first = approx_polynomial(&f, &scalar(), &disc, 1e-2, Seminorm::Sup, &options).unwrap();
    let p = ExprFn::new(Expr::from_series(&first.polynomial), 2).unwrap();
    let second = approx_polynomial(&p, &scalar(), &disc, 1e-2, Seminorm::Sup, &options).unwrap();
    assert!(second.degree_used <= first.degree_used);
    assert!(second.certified_error <= 2e-2);
}

#[test]
fn approximation_requires_positive_eps() {
    let f = ExprFn::parse("z1", 1).unwrap();
    let disc = Polydisc::centered(1, 1.0).unwrap();
    assert!(approx_polynomial(
        &f,
        &scalar(),
        &disc,
        0.0,
        Seminorm::Sup,
        &ApproxOptions::default()
    )
    .is_err());
    assert!(approx_polynomial(
        &f,
        &scalar(),
        &disc,
        f64::NAN,
        Seminorm::Sup,
        &ApproxOptions::default()
    )
    .is_err());
}
