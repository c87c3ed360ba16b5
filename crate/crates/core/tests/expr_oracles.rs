use proptest::prelude::*;
use skewcurv::expr::{Point4, ScalarField};
use skewcurv::sampling;
use skewcurv::Error;

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_source(coeffs: &[f64], var: &str) -> String {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| format!("({c})*{var}^{n}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn fd(f: &ScalarField, p: &Point4, axis: usize) -> f64 {
    let h = 1e-5;
    let mut lo = *p;
    let mut hi = *p;
    lo.0[axis - 1] -= h;
    hi.0[axis - 1] += h;
    (f.evaluate(&hi).unwrap() - f.evaluate(&lo).unwrap()) / (2.0 * h)
}

#[test]
fn known_values() {
    let f = ScalarField::parse("2+0.1*sin(x1+x4)").unwrap();
    let p = Point4::new(0.1, 0.2, 0.3, 0.4);
    assert!((f.evaluate(&p).unwrap() - (2.0 + 0.1 * 0.5f64.sin())).abs() < 1e-15);
    let d = f.derivative(4).unwrap();
    assert!((d.evaluate(&p).unwrap() - 0.1 * 0.5f64.cos()).abs() < 1e-15);
    assert_eq!(f.derivative(2).unwrap().as_constant(), Some(0.0));
    assert_eq!(ScalarField::parse("x3").unwrap().evaluate(&p).unwrap(), 0.3);
    assert_eq!(ScalarField::parse("2^-2").unwrap().evaluate(&p).unwrap(), 0.25);
}

#[test]
fn domain_errors() {
    let o = Point4::ORIGIN;
    for src in ["1/x1", "ln(x2)", "sqrt(x3 - 1)", "x1^-1", "exp(1000)"] {
        let r = ScalarField::parse(src).unwrap().evaluate(&o);
        assert!(matches!(r, Err(Error::Domain(_))), "{src}: {r:?}");
    }
}

#[test]
fn parse_errors_report_offset() {
    let e = ScalarField::parse("1 + * x1").unwrap_err();
    assert_eq!(e.offset, 4);
    assert!(ScalarField::parse("x5").is_err());
    assert!(ScalarField::parse("sin(x1").is_err());
    assert!(ScalarField::parse("").is_err());
    assert!(ScalarField::parse("x1 x2").is_err());
}

#[test]
fn derivative_axis_range() {
    let f = ScalarField::parse("x1").unwrap();
    assert!(f.derivative(0).is_err());
    assert!(f.derivative(5).is_err());
}

proptest! {
    #[test]
    fn polynomial_matches_horner(coeffs in prop::collection::vec(-3.0f64..3.0, 1..7), x in -2.0f64..2.0, axis in 1usize..=4) {
        let f = ScalarField::parse(&poly_source(&coeffs, &format!("x{axis}"))).unwrap();
        let mut p = Point4::ORIGIN;
        p.0[axis - 1] = x;
        let expected = horner(&coeffs, x);
        prop_assert!((f.evaluate(&p).unwrap() - expected).abs() < 1e-12 * expected.abs().max(1.0));
        let dcoeffs: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(n, c)| n as f64 * c).collect();
        let dexp = horner(&dcoeffs, x);
        let got = f.derivative(axis).unwrap().evaluate(&p).unwrap();
        prop_assert!((got - dexp).abs() < 1e-11 * dexp.abs().max(1.0));
    }

    #[test]
    fn derivative_matches_finite_differences(seed in any::<u64>(), axis in 1usize..=4) {
        let mut rng = sampling::rng(seed);
        let f = ScalarField::parse(&sampling::random_expression(&mut rng, 3)).unwrap();
        let p = Point4(sampling::random_point(&mut rng, 1.0));
        let exact = f.derivative(axis).unwrap().evaluate(&p).unwrap();
        let approx = fd(&f, &p, axis);
        prop_assert!((exact - approx).abs() < 1e-5 * exact.abs().max(1.0), "{f}: {exact} vs {approx}");
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>(), i in 1usize..=4, j in 1usize..=4) {
        let mut rng = sampling::rng(seed);
        let f = ScalarField::parse(&sampling::random_expression(&mut rng, 4)).unwrap();
        let p = Point4(sampling::random_point(&mut rng, 1.5));
        let a = f.derivative(i).unwrap().derivative(j).unwrap().evaluate(&p).unwrap();
        let b = f.derivative(j).unwrap().derivative(i).unwrap().evaluate(&p).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let f = ScalarField::parse(&sampling::random_expression(&mut rng, 4)).unwrap();
        let printed = f.to_string();
        let g: ScalarField = printed.parse().unwrap();
        prop_assert_eq!(g.to_string(), printed);
        let p = Point4(sampling::random_point(&mut rng, 1.5));
        prop_assert_eq!(f.evaluate(&p).unwrap(), g.evaluate(&p).unwrap());
    }
}
