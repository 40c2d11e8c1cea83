//! Truncated Taylor jets in one variable.
//!
//! A [`Jet`] carries a value and its first four derivatives with respect to
//! the energy density `t`. Arithmetic propagates the derivatives exactly
//! (Leibniz rule for products, the standard recurrences for reciprocals and
//! exponentials), so polynomial and rational inputs come out exact up to
//! floating-point rounding.
//!
//! Each jet also records the highest derivative order that is actually
//! meaningful. Taking [`Jet::derivative`] shifts the slots down and loses the
//! top one, and binary operations keep the smaller of the two orders.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of stored derivative slots (orders 0 through 4).
pub const JET_LEN: usize = 5;

/// Highest derivative order a jet can carry.
pub const MAX_ORDER: usize = JET_LEN - 1;

const BINOM: [[f64; JET_LEN]; JET_LEN] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// Value and derivatives `d[0..=4]` of a scalar function of `t`.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    d: [f64; JET_LEN],
    order: usize,
}

impl Jet {
    /// Jet from explicit derivatives, valid to [`MAX_ORDER`].
    pub const fn new(d: [f64; JET_LEN]) -> Self {
        Self { d, order: MAX_ORDER }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new([value, 0.0, 0.0, 0.0, 0.0])
    }

    /// The independent variable `t` itself, evaluated at `t`.
    pub const fn variable(t: f64) -> Self {
        Self::new([t, 1.0, 0.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    /// `k`-th derivative. Panics if `k` exceeds the jet's valid order.
    pub fn deriv(&self, k: usize) -> f64 {
        assert!(
            k <= self.order,
            "derivative of order {k} requested from a jet valid to order {}",
            self.order
        );
        self.d[k]
    }

    pub fn derivs(&self) -> &[f64; JET_LEN] {
        &self.d
    }

    /// Highest derivative order carried exactly.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Zeroes every slot above `order` and caps the valid order.
    pub fn truncate(mut self, order: usize) -> Self {
        let order = order.min(self.order);
        for slot in self.d.iter_mut().skip(order + 1) {
            *slot = 0.0;
        }
        self.order = order;
        self
    }

    /// Jet of the derivative function. The top slot is lost.
    pub fn derivative(&self) -> Self {
        let mut d = [0.0; JET_LEN];
        d[..MAX_ORDER].copy_from_slice(&self.d[1..]);
        Self {
            d,
            order: self.order.saturating_sub(1),
        }
    }

    pub fn recip(&self) -> Self {
        let s0 = self.d[0];
        let mut q = [0.0; JET_LEN];
        q[0] = 1.0 / s0;
        for n in 1..JET_LEN {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += BINOM[n][k] * self.d[k] * q[n - k];
            }
            q[n] = -acc / s0;
        }
        Self {
            d: q,
            order: self.order,
        }
    }

    pub fn exp(&self) -> Self {
        // y' = u' y
        let mut y = [0.0; JET_LEN];
        y[0] = self.d[0].exp();
        for n in 1..JET_LEN {
            let mut acc = 0.0;
            for k in 0..n {
                acc += BINOM[n - 1][k] * self.d[k + 1] * y[n - 1 - k];
            }
            y[n] = acc;
        }
        Self {
            d: y,
            order: self.order,
        }
    }

    pub fn powi(&self, exponent: i32) -> Self {
        let mut acc = Jet {
            d: [1.0, 0.0, 0.0, 0.0, 0.0],
            order: self.order,
        };
        for _ in 0..exponent.unsigned_abs() {
            acc = acc * *self;
        }
        if exponent < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut d = self.d;
        for v in d.iter_mut() {
            *v *= s;
        }
        Self {
            d,
            order: self.order,
        }
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}@{}", &self.d[..=self.order], self.order)
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(rhs.d) {
            *a += b;
        }
        Jet {
            d,
            order: self.order.min(rhs.order),
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut d = [0.0; JET_LEN];
        for (n, slot) in d.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..=n {
                acc += BINOM[n][k] * self.d[k] * rhs.d[n - k];
            }
            *slot = acc;
        }
        Jet {
            d,
            order: self.order.min(rhs.order),
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet { $tr::$m(self, Jet::constant(rhs)) }
        }
        impl $tr<Jet> for f64 {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { $tr::$m(Jet::constant(self), rhs) }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);
