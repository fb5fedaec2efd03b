//! Chebyshev polynomials of the second kind on the whole real line.
//!
//! Values come from the forward three-term recurrence
//! `U_n(x) = 2x U_{n-1}(x) - U_{n-2}(x)` with `U_0 = 1`, `U_1 = 2x`.
//! Inside `[-1, 1]` the recurrence is stable; outside it grows monotonically
//! and stays benign. Relative error is around `n * 10` ulps for `n <= 10^4`.

/// Argument of a Chebyshev polynomial, typically `cosh(ln theta) * cos k`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ChebyshevArg(pub f64);

impl ChebyshevArg {
    /// Returns `None` for NaN or infinite input.
    pub fn new(value: f64) -> Option<Self> {
        value.is_finite().then_some(Self(value))
    }

    /// The comb argument `((1 + theta^2) / (2 theta)) cos k`.
    pub fn for_comb(theta: f64, k: f64) -> Self {
        Self((1.0 + theta * theta) / (2.0 * theta) * k.cos())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<ChebyshevArg> for f64 {
    fn from(a: ChebyshevArg) -> f64 {
        a.0
    }
}

/// The limit `U_m(x) -> ±inf` once the recurrence leaves the `f64` range.
///
/// Overflow is only possible for `|x| > 1`, where `U_m` has the sign of `x^m`.
fn overflowed(m: usize, x: f64) -> f64 {
    if x < 0.0 && m % 2 == 1 {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    }
}

/// `U_n(x)`, saturating to `±inf` on overflow.
pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    let two_x = 2.0 * x;
    let mut prev = 0.0; // U_{-1}
    let mut cur = 1.0; // U_0
    for _ in 0..n {
        let next = two_x * cur - prev;
        if !next.is_finite() && x.is_finite() {
            return overflowed(n, x);
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `(U_{n-1}(x), U_{n-2}(x))` from a single recurrence pass, with `U_{-1} = 0`.
///
/// Entries that overflow saturate to `±inf`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn chebyshev_u_pair(n: usize, x: f64) -> (f64, f64) {
    assert!(n >= 1, "chebyshev_u_pair requires n >= 1");
    let two_x = 2.0 * x;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 1..n {
        let next = two_x * cur - prev;
        if !next.is_finite() && x.is_finite() {
            let prev = if cur.is_finite() { cur } else { overflowed(m - 1, x) };
            return (overflowed(n - 1, x), prev);
        }
        prev = cur;
        cur = next;
    }
    (cur, prev)
}
