mod common;

use common::c;
use num_complex::Complex64;
use polydisc::expr::{parse, CompiledExpr, Expr, Func};
use polydisc::{CPoint, Error};
use proptest::prelude::*;

const D: usize = 3;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (1..=D).prop_map(Expr::var),
        (-4i32..=4).prop_map(|n| Expr::real(f64::from(n) / 2.0)),
        (-3i32..=3, -3i32..=3).prop_map(|(a, b)| Expr::num(c(f64::from(a), f64::from(b)))),
    ]
}

/// Scalar expressions built through the smart constructors. Division and
/// `log`/`sqrt` are kept away from their singular sets by construction.
fn scalar_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), 1..=D)
                .prop_map(|(a, j)| Expr::div(a, Expr::add(Expr::var(j), Expr::real(3.0)))),
            (inner.clone(), -2i32..=3)
                .prop_map(|(a, n)| Expr::pow(Expr::add(a, Expr::real(4.0)), n)),
            (inner.clone(), 0usize..4)
                .prop_map(|(a, k)| Expr::call([Func::Exp, Func::Sin, Func::Cos, Func::Conj][k], a)),
            (1..=D).prop_map(|j| Expr::call(Func::Log, Expr::add(Expr::var(j), Expr::real(2.0)))),
            (1..=D).prop_map(|j| Expr::call(Func::Sqrt, Expr::add(Expr::var(j), Expr::real(2.0)))),
        ]
    })
}

/// Direct recursive interpretation, independent of the compiled evaluator.
fn reference_eval(e: &Expr, z: &[Complex64]) -> Complex64 {
    match e {
        Expr::Num(v) => *v,
        Expr::Var(j) => z[j - 1],
        Expr::Neg(a) => -reference_eval(a, z),
        Expr::Add(a, b) => reference_eval(a, z) + reference_eval(b, z),
        Expr::Sub(a, b) => reference_eval(a, z) - reference_eval(b, z),
        Expr::Mul(a, b) => reference_eval(a, z) * reference_eval(b, z),
        Expr::Div(a, b) => reference_eval(a, z) / reference_eval(b, z),
        Expr::Pow(a, n) => reference_eval(a, z).powi(*n),
        Expr::Call(f, a) => {
            let v = reference_eval(a, z);
            match f {
                Func::Exp => v.exp(),
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Log => v.ln(),
                Func::Sqrt => v.sqrt(),
                Func::Conj => v.conj(),
            }
        }
        Expr::Vector(_) | Expr::Matrix(_) => unreachable!("scalar corpus"),
    }
}

fn point() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-0.9f64..0.9, -0.9f64..0.9).prop_map(|(a, b)| c(a, b)), D)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(e in scalar_expr()) {
        let printed = e.to_string();
        let back = parse(&printed, D).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn compiled_matches_reference(e in scalar_expr(), z in point()) {
        let want = reference_eval(&e, &z);
        prop_assume!(want.is_finite() && want.norm() < 1e12);
        let compiled = CompiledExpr::new(e.clone(), D).unwrap();
        let got = compiled.eval(&CPoint::new(z).unwrap()).unwrap().as_scalar().unwrap();
        prop_assert!((got - want).norm() <= 1e-14 * want.norm().max(1.0), "{} : {} vs {}", e, got, want);
    }

    #[test]
    fn taint_iff_conj_reachable(e in scalar_expr()) {
        prop_assert_eq!(e.is_tainted(), e.to_string().contains("conj"));
    }
}

#[test]
fn precedence_and_associativity() {
    let z = CPoint::new(vec![c(0.7, 0.2), c(-0.3, 0.5)]).unwrap();
    let eval = |s: &str| {
        CompiledExpr::new(parse(s, 2).unwrap(), 2)
            .unwrap()
            .eval(&z)
            .unwrap()
            .as_scalar()
            .unwrap()
    };
    let (a, b) = (z[0], z[1]);
    let cases = [
        ("-z1^2", -(a * a)),
        ("z1 - z2 - 1", a - b - 1.0),
        ("z1 / z2 * 2", a / b * 2.0),
        ("2^3^2", c(512.0, 0.0)),
        ("z1^-2", a.powi(-2)),
        ("z1^(-2)", a.powi(-2)),
        ("-z1 * z2", -a * b),
        ("1 + 2i * z1", 1.0 + c(0.0, 2.0) * a),
    ];
    for (src, want) in cases {
        let got = eval(src);
        assert!((got - want).norm() < 1e-14, "{src}: {got} vs {want}");
    }
}

#[test]
fn syntax_errors_carry_positions() {
    for (src, line, column) in [
        ("z1 +", 1, 5),
        ("exp(z1", 1, 7),
        ("z1 +\n  * z2", 2, 3),
        ("foo(z1)", 1, 1),
    ] {
        match parse(src, 2) {
            Err(Error::Syntax {
                line: l,
                column: col,
                ..
            }) => {
                assert_eq!((l, col), (line, column), "{src:?}");
            }
            other => panic!("{src:?}: {other:?}"),
        }
    }
    assert!(parse("z3", 2).is_err());
    assert!(parse("z1^1.5", 2).is_err());
}

#[test]
fn array_shapes() {
    let z = CPoint::new(vec![c(0.5, 0.0), c(0.0, 1.0)]).unwrap();
    let m = CompiledExpr::new(
        parse("[[1, z1], [z2, 0]] * [[1, z1], [z2, 0]]", 2).unwrap(),
        2,
    )
    .unwrap();
    let v = m.eval(&z).unwrap();
    // [[1 + z1 z2, z1], [z2, z1 z2]]
    let p = z[0] * z[1];
    assert_eq!(v.entries(), &[1.0 + p, z[0], z[1], p]);

    let mv = CompiledExpr::new(parse("[[0, 1], [1, 0]] * [z1, z2] + 2", 2).unwrap(), 2).unwrap();
    assert_eq!(mv.eval(&z).unwrap().entries(), &[z[1] + 2.0, z[0] + 2.0]);

    assert!(CompiledExpr::new(parse("[z1, z2] * [[1, 0], [0, 1]]", 2).unwrap(), 2).is_err());
    assert!(CompiledExpr::new(parse("1 / [z1, z2]", 2).unwrap(), 2).is_err());
    assert!(CompiledExpr::new(parse("exp([z1, z2])", 2).unwrap(), 2).is_err());
}

#[test]
fn division_by_zero_is_an_evaluation_error() {
    let f = CompiledExpr::new(parse("1 / z1", 1).unwrap(), 1).unwrap();
    let err = f.eval(&CPoint::origin(1).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Evaluation { .. }), "{err:?}");
}
