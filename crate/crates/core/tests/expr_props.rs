use std::collections::BTreeMap;

use gg_core::expr::{eval_interval, eval_rat, parse, Bindings, Expr, Func, Var};
use gg_core::{CBox, RInt, Rat};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![Just(Var::X), Just(Var::Y), Just(Var::Z)]
}

/// Raw (non-canonical) trees, built directly from variants.
fn raw_expr(with_funcs: bool) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![small_rat().prop_map(Expr::Num), var().prop_map(Expr::Var)];
    leaf.prop_recursive(4, 24, 3, move |inner| {
        let base = prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Expr::Mul),
            (inner.clone(), -3i64..=3).prop_map(|(b, k)| Expr::Pow(Box::new(b), k)),
        ];
        if with_funcs {
            prop_oneof![
                4 => base,
                1 => (prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp)], inner)
                    .prop_map(|(f, a)| Expr::Func(f, Box::new(a))),
            ]
            .boxed()
        } else {
            base.boxed()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn canonicalize_is_idempotent(e in raw_expr(true)) {
        let c = e.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        // printing and re-parsing lands on the same canonical tree
        let printed = c.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), c, "printed {}", printed);
    }

    #[test]
    fn derivative_is_linear(e1 in raw_expr(true), e2 in raw_expr(true),
                            a in small_rat(), b in small_rat(), v in var()) {
        let (e1, e2) = (e1.canonicalize(), e2.canonicalize());
        let lhs = Expr::sum(vec![e1.clone().scale(&a), e2.clone().scale(&b)]).differentiate(v);
        let rhs = Expr::sum(vec![e1.differentiate(v).scale(&a), e2.differentiate(v).scale(&b)]);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ratfun_agrees_with_interval_evaluation(e in raw_expr(false)) {
        let e = e.canonicalize().subst(Var::X, &Expr::int(2)).subst(Var::Z, &Expr::int(-1));
        let Ok(r) = e.to_ratfun(Var::Y) else { return Ok(()); };
        for k in 0..10i64 {
            let y = Rat::new((3 * k - 13).into(), 7.into());
            let Some(exact) = r.eval(&y) else { continue };
            let bind: Bindings = [(Var::Y, CBox::from_rat(&y, 200))].into_iter().collect();
            let Ok(enc) = eval_interval(&e, &bind, 128) else { continue };
            prop_assert!(enc.re.lo.to_rat() <= exact && exact <= enc.re.hi.to_rat());
            prop_assert!(enc.im.contains_zero());
            let rb: BTreeMap<Var, Rat> = [(Var::Y, y.clone())].into_iter().collect();
            if let Some(direct) = eval_rat(&e, &rb) {
                prop_assert_eq!(direct, exact);
            }
        }
    }
}

#[test]
fn interval_width_shrinks_with_precision() {
    let e = parse("exp(x)/(3+x^2)").unwrap();
    let third = Rat::new(1.into(), 3.into());
    let widths: Vec<f64> = [32u32, 64, 128]
        .iter()
        .map(|&p| {
            let b: Bindings = [(Var::X, CBox::real(RInt::from_rat(&third, p)))].into_iter().collect();
            eval_interval(&e, &b, p).unwrap().re.width().to_f64()
        })
        .collect();
    assert!(widths[0] > widths[1] && widths[1] > widths[2], "{widths:?}");
}

#[test]
fn derivative_matches_central_differences() {
    use gg_core::expr::eval_real;
    let e = parse("1/(x^2-y^2)").unwrap();
    let d = e.differentiate(Var::X);
    let pts = [(3.0, 1.0), (2.5, -0.5), (-4.0, 1.5), (1.25, 0.75), (5.0, 2.0)];
    for (x, y) in pts {
        let h = 1e-5;
        let fd = (eval_real(&e, [x + h, y, 0.0]) - eval_real(&e, [x - h, y, 0.0])) / (2.0 * h);
        let an = eval_real(&d, [x, y, 0.0f64]);
        assert!(((fd - an) / an).abs() < 1e-8, "{x} {y}: {fd} vs {an}");
    }
}
