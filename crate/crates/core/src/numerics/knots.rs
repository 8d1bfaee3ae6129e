//! Piecewise-quadratic signals stored as sums of truncated powers.
//!
//! A signal is zero before its first knot; at every knot the value and its
//! first two derivatives jump by the stored amounts, and between knots the
//! third derivative vanishes. Derivative jumps that are zero by construction
//! (continuity) are stored as exact zeros, which is what makes the Fourier and
//! Duhamel sums below usable at `omega * duration ~ 1e10`: nothing relies on
//! two rounded polynomial evaluations cancelling across a knot.

use super::dd::{Angle, Dd};

/// Jumps `[value, first derivative, second derivative]` (after minus before) at `at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub at: Dd,
    pub jumps: [f64; 3],
}

impl Knot {
    pub fn new(at: Dd, jumps: [f64; 3]) -> Self {
        Knot { at, jumps }
    }
}

/// Ordered knot list. When `closed`, the signal is identically zero after the
/// last knot (the jumps there return every derivative to zero).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KnotSeries {
    knots: Vec<Knot>,
    closed: bool,
}

impl KnotSeries {
    /// Knots must be sorted by time (ties allowed).
    pub fn new(knots: Vec<Knot>, closed: bool) -> Self {
        debug_assert!(knots
            .windows(2)
            .all(|w| w[0].at.to_f64() <= w[1].at.to_f64()));
        KnotSeries { knots, closed }
    }

    /// Sort the knots and add up the jumps of knots at identical times.
    pub fn merged(mut knots: Vec<Knot>, closed: bool) -> Self {
        knots.sort_by(|a, b| {
            a.at.hi
                .total_cmp(&b.at.hi)
                .then(a.at.lo.total_cmp(&b.at.lo))
        });
        let mut out: Vec<Knot> = Vec::with_capacity(knots.len());
        for k in knots {
            match out.last_mut() {
                Some(last) if last.at == k.at => {
                    for (j, d) in last.jumps.iter_mut().zip(k.jumps) {
                        *j += d;
                    }
                }
                _ => out.push(k),
            }
        }
        KnotSeries { knots: out, closed }
    }

    /// `Σ w_i s_i`, closed when every term is closed.
    pub fn combine(terms: &[(&KnotSeries, f64)]) -> Self {
        let closed = terms.iter().all(|(s, _)| s.closed);
        let knots = terms
            .iter()
            .flat_map(|(s, w)| {
                s.knots
                    .iter()
                    .map(move |k| Knot::new(k.at, k.jumps.map(|j| j * w)))
            })
            .collect();
        Self::merged(knots, closed)
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_zero(&self) -> bool {
        self.knots.iter().all(|k| k.jumps == [0.0; 3])
    }

    pub fn start(&self) -> Option<Dd> {
        self.knots.first().map(|k| k.at)
    }

    pub fn end(&self) -> Option<Dd> {
        self.knots.last().map(|k| k.at)
    }

    /// Multiply the whole signal by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        KnotSeries {
            knots: self
                .knots
                .iter()
                .map(|kn| Knot::new(kn.at, kn.jumps.map(|j| j * k)))
                .collect(),
            closed: self.closed,
        }
    }

    /// Translate in time by `dt`.
    pub fn shifted(&self, dt: f64) -> Self {
        self.shifted_dd(Dd::new(dt))
    }

    pub fn shifted_dd(&self, dt: Dd) -> Self {
        KnotSeries {
            knots: self
                .knots
                .iter()
                .map(|kn| Knot::new(kn.at + dt, kn.jumps))
                .collect(),
            closed: self.closed,
        }
    }

    /// Value and first two derivatives at `t` (right-continuous).
    pub fn eval(&self, t: f64) -> [f64; 3] {
        if self.closed {
            if let Some(end) = self.end() {
                if t >= end.to_f64() {
                    return [0.0; 3];
                }
            }
        }
        let mut out = [0.0; 3];
        for k in &self.knots {
            if k.at.to_f64() > t {
                break;
            }
            let s = (Dd::new(t) - k.at).to_f64();
            let [j0, j1, j2] = k.jumps;
            out[0] += j0 + s * (j1 + 0.5 * s * j2);
            out[1] += j1 + s * j2;
            out[2] += j2;
        }
        out
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t)[0]
    }

    /// `∫ p(t) e^{i omega t} dt` over the support, `omega > 0`; requires a
    /// closed series. Returns `(re, im)`.
    pub fn fourier(&self, omega: f64) -> (f64, f64) {
        debug_assert!(self.closed, "Fourier sum needs a closed series");
        let (w1, w2, w3) = (omega, omega * omega, omega * omega * omega);
        let mut re = super::NeumaierSum::default();
        let mut im = super::NeumaierSum::default();
        for k in &self.knots {
            let [j0, j1, j2] = k.jumps;
            if j0 == 0.0 && j1 == 0.0 && j2 == 0.0 {
                continue;
            }
            // Σ_j (-1)^j J_j / (iω)^{j+1} = a + i b
            let a = j1 / w2;
            let b = -j0 / w1 + j2 / w3;
            let (s, c) = Angle::of(omega, k.at).sin_cos();
            // -(c + i s)(a + i b)
            re.add(-(c * a - s * b));
            im.add(-(c * b + s * a));
        }
        (re.value(), im.value())
    }

    /// `|∫ p e^{i omega t} dt|^2`.
    pub fn fourier_sq(&self, omega: f64) -> f64 {
        let (re, im) = self.fourier(omega);
        re * re + im * im
    }

    /// Response `(u, u_dot)` at `t` of `u'' + omega^2 u = p(t)` starting from
    /// rest before the first knot.
    pub fn duhamel(&self, omega: f64, t: f64) -> (f64, f64) {
        self.duhamel_dd(omega, Dd::new(t))
    }

    /// As [`KnotSeries::duhamel`] at an extended-precision time.
    pub fn duhamel_dd(&self, omega: f64, td: Dd) -> (f64, f64) {
        let t = td.to_f64();
        let w2 = omega * omega;
        let w3 = w2 * omega;
        let w4 = w2 * w2;
        // particular (quasi-static) part: p/w^2 - p''/w^4, derivative p'/w^2
        let [p, dp, ddp] = self.eval(t);
        let mut u = super::NeumaierSum::default();
        let mut v = super::NeumaierSum::default();
        u.add(p / w2 - ddp / w4);
        v.add(dp / w2);
        for k in &self.knots {
            if (td - k.at).to_f64() < 0.0 {
                break;
            }
            let [j0, j1, j2] = k.jumps;
            if j0 == 0.0 && j1 == 0.0 && j2 == 0.0 {
                continue;
            }
            let (s, c) = Angle::of(omega, td - k.at).sin_cos();
            u.add(-j0 * c / w2 - j1 * s / w3 + j2 * c / w4);
            v.add(j0 * s / omega - j1 * c / w2 - j2 * s / w3);
        }
        (u.value(), v.value())
    }
}
