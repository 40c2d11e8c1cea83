use natlift_core::Jet;
use proptest::prelude::*;

/// Coefficients of a polynomial of degree <= 4 in t.
fn poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 5)
}

fn eval(coeffs: &[i64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + *c as f64)
}

fn differentiate(coeffs: &[i64]) -> Vec<i64> {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| i as i64 * c).collect()
}

fn multiply(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact derivatives of a polynomial at `t`, orders 0..=4.
fn exact_derivs(coeffs: &[i64], t: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    let mut c = coeffs.to_vec();
    for slot in out.iter_mut() {
        *slot = eval(&c, t);
        c = differentiate(&c);
        if c.is_empty() {
            c.push(0);
        }
    }
    out
}

fn jet_of(coeffs: &[i64], t: f64) -> Jet {
    let tj = Jet::variable(t);
    coeffs.iter().rev().fold(Jet::constant(0.0), |acc, c| acc * tj + *c as f64)
}

proptest! {
    #[test]
    fn product_derivatives_are_exact(a in poly(), b in poly(), t in -3i64..=3) {
        let t = t as f64;
        let prod = jet_of(&a, t) * jet_of(&b, t);
        let expected = exact_derivs(&multiply(&a, &b), t);
        for k in 0..5 {
            prop_assert_eq!(prod.deriv(k), expected[k]);
        }
    }

    #[test]
    fn sum_and_horner_jets_are_exact(a in poly(), t in -3i64..=3) {
        let t = t as f64;
        let j = jet_of(&a, t);
        let expected = exact_derivs(&a, t);
        for k in 0..5 {
            prop_assert_eq!(j.deriv(k), expected[k]);
        }
    }

    #[test]
    fn quotient_recovers_factor(a in poly(), b in poly(), t in -3i64..=3) {
        let t = t as f64;
        let jb = jet_of(&b, t);
        prop_assume!(jb.value().abs() >= 1.0);
        let q = jet_of(&multiply(&a, &b), t) / jb;
        let expected = exact_derivs(&a, t);
        for k in 0..5 {
            let scale = expected[k].abs().max(1.0);
            prop_assert!((q.deriv(k) - expected[k]).abs() <= 1e-9 * scale,
                "order {}: {} vs {}", k, q.deriv(k), expected[k]);
        }
    }
}
