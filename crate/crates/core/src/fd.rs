//! Central finite differences with one Richardson extrapolation level.
//!
//! Both stencils take the second-order central difference at steps `h` and
//! `h/2` and combine them as `(4 D(h/2) - D(h)) / 3`, which cancels the
//! leading `h^2` error term. Steps are scaled per coordinate by
//! `max(1, |z_a|)`.
//!
//! These routines are the numerical backbone of the independent oracle and
//! of the Nijenhuis / exterior-derivative checks. They know nothing about
//! jets or closed-form derivative formulas.

use crate::error::Result;

/// Default base step.
pub const DEFAULT_STEP: f64 = 1e-4;

fn step(h: f64, z: f64) -> f64 {
    h * z.abs().max(1.0)
}

/// `out[a][m] = d f_m / d z_a` for a vector-valued `f`.
pub fn gradient<F>(f: F, z: &[f64], h: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut out = Vec::with_capacity(z.len());
    let mut probe = z.to_vec();
    for a in 0..z.len() {
        let ha = step(h, z[a]);
        let mut central = |s: f64| -> Result<Vec<f64>> {
            probe[a] = z[a] + s;
            let fp = f(&probe)?;
            probe[a] = z[a] - s;
            let fm = f(&probe)?;
            probe[a] = z[a];
            Ok(fp.iter().zip(&fm).map(|(x, y)| (x - y) / (2.0 * s)).collect())
        };
        let coarse = central(ha)?;
        let fine = central(0.5 * ha)?;
        out.push(richardson(&coarse, &fine));
    }
    Ok(out)
}

/// `out[a][b][m] = d^2 f_m / d z_a d z_b`, symmetric in `a, b`.
pub fn hessian<F>(f: F, z: &[f64], h: f64) -> Result<Vec<Vec<Vec<f64>>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let dim = z.len();
    let mut out = vec![vec![Vec::new(); dim]; dim];
    let mut probe = z.to_vec();
    for a in 0..dim {
        for b in a..dim {
            let (ha, hb) = (step(h, z[a]), step(h, z[b]));
            let mut mixed = |sa: f64, sb: f64| -> Result<Vec<f64>> {
                let mut eval = |da: f64, db: f64| -> Result<Vec<f64>> {
                    probe[a] = z[a];
                    probe[b] = z[b];
                    probe[a] += da;
                    probe[b] += db;
                    let v = f(&probe);
                    probe[a] = z[a];
                    probe[b] = z[b];
                    v
                };
                let pp = eval(sa, sb)?;
                let pm = eval(sa, -sb)?;
                let mp = eval(-sa, sb)?;
                let mm = eval(-sa, -sb)?;
                Ok((0..pp.len())
                    .map(|m| (pp[m] - pm[m] - mp[m] + mm[m]) / (4.0 * sa * sb))
                    .collect())
            };
            let coarse = mixed(ha, hb)?;
            let fine = mixed(0.5 * ha, 0.5 * hb)?;
            let v = richardson(&coarse, &fine);
            out[b][a] = v.clone();
            out[a][b] = v;
        }
    }
    Ok(out)
}

/// Scalar derivative of order 1 or 2.
pub fn derivative_1d<F>(f: F, x: f64, h: f64, order: u8) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let g = |z: &[f64]| f(z[0]).map(|v| vec![v]);
    match order {
        1 => Ok(gradient(g, &[x], h)?[0][0]),
        2 => Ok(hessian(g, &[x], h)?[0][0][0]),
        _ => panic!("derivative_1d supports orders 1 and 2"),
    }
}

fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_polynomial() {
        let f = |z: &[f64]| Ok(vec![z[0] * z[0] * z[1], z[1].powi(3)]);
        let g = gradient(f, &[1.5, -2.0], 1e-3).unwrap();
        assert!((g[0][0] - 2.0 * 1.5 * -2.0).abs() < 1e-10);
        assert!((g[1][0] - 2.25).abs() < 1e-10);
        assert!((g[1][1] - 12.0).abs() < 1e-9);
    }

    #[test]
    fn hessian_of_product() {
        let f = |z: &[f64]| Ok(vec![z[0].sin() * z[1].exp()]);
        let (x, y) = (0.4, -0.3);
        let h = hessian(f, &[x, y], 1e-3).unwrap();
        assert!((h[0][0][0] + x.sin() * y.exp()).abs() < 1e-8);
        assert!((h[0][1][0] - x.cos() * y.exp()).abs() < 1e-8);
        assert_eq!(h[0][1], h[1][0]);
        assert!((h[1][1][0] - x.sin() * y.exp()).abs() < 1e-8);
    }

    #[test]
    fn scalar_derivatives() {
        let d1 = derivative_1d(|x| Ok(1.0 / (1.0 + 2.0 * x)), 0.25, 1e-4, 1).unwrap();
        assert!((d1 + 8.0 / 9.0).abs() < 1e-9);
    }
}
