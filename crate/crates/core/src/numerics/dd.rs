//! Double-double arithmetic and accurate trigonometry of large phases.
//!
//! Phonon phases `omega * t` routinely reach 1e10..1e16 rad. A plain `f64`
//! product already carries an absolute error of order `ulp(omega * t)`, which
//! at 1e12 rad is 1e-4 rad. Every `sin`/`cos` of a phase in this crate goes
//! through [`Angle`], which keeps the product exact and reduces modulo 2π with
//! a triple-double constant, so the result is the correctly rounded function
//! of the (exact) double inputs up to a few ulp.

use std::ops::{Add, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two doubles.
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Multiply by a double.
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    /// Multiply by a small integer or a power of two; exact for powers of two.
    pub fn scale(self, k: f64) -> Self {
        self.mul_f64(k)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, o: f64) -> Dd {
        self + Dd::new(o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, o: f64) -> Dd {
        self + (-o)
    }
}

// 2π split into three doubles; C1 + C2 + C3 agrees with 2π to ~1e-48.
const TWO_PI_1: f64 = std::f64::consts::TAU;
const TWO_PI_2: f64 = 2.449_293_598_294_706_4e-16;
const TWO_PI_3: f64 = -5.989_539_619_436_679e-33;

/// A phase in radians held as a double-double.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Angle(pub Dd);

impl Angle {
    /// `omega * t` for an exactly known time.
    pub fn of(omega: f64, t: Dd) -> Self {
        Angle(t.mul_f64(omega))
    }

    pub fn from_f64(x: f64) -> Self {
        Angle(Dd::new(x))
    }

    /// Reduce to a double-double in roughly `[-π, π]`.
    pub fn reduced(self) -> Dd {
        let x = self.0;
        if !x.is_finite() {
            return Dd::new(f64::NAN);
        }
        if x.hi.abs() <= std::f64::consts::PI {
            return x;
        }
        let k = (x.hi / TWO_PI_1).round();
        // k * (C1 + C2 + C3) carried exactly in the first two products.
        let (p1, e1) = two_prod(k, TWO_PI_1);
        let (p2, e2) = two_prod(k, TWO_PI_2);
        let p3 = k * TWO_PI_3;
        let head = x.hi - p1; // exact: x.hi and p1 agree to within a few units of 2π
        let mut r = Dd::sum(head, x.lo);
        r = r - Dd::new(e1);
        r = r - Dd::new(p2);
        r = r - Dd::new(e2);
        r = r - Dd::new(p3);
        r
    }

    pub fn sin_cos(self) -> (f64, f64) {
        let r = self.reduced();
        let (s, c) = r.hi.sin_cos();
        // first-order correction for the low word (|lo| < 1e-16)
        (s + c * r.lo, c - s * r.lo)
    }

    pub fn sin(self) -> f64 {
        self.sin_cos().0
    }

    pub fn cos(self) -> f64 {
        self.sin_cos().1
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, o: Angle) -> Angle {
        Angle(self.0 + o.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, o: Angle) -> Angle {
        Angle(self.0 - o.0)
    }
}
