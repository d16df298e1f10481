//! Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series below `|x| = 12`, Hankel asymptotic expansion above.

use std::f64::consts::PI;

/// Argument at which evaluation switches from the series to the expansion.
pub const SWITCH: f64 = 12.0;

fn series(order: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    // (x/2)^n / n!
    let mut term = match order {
        0 => 1.0,
        _ => h,
    };
    let mut sum = term;
    let n = order as f64;
    for k in 1..200 {
        let kf = k as f64;
        term *= -h2 / (kf * (kf + n));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn asymptotic(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    // a_k = (mu - 1)(mu - 9)…(mu - (2k-1)^2) / (k! 8^k), with alternating
    // signs split between P (even k) and Q (odd k).
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= last || next == 0.0 {
            break;
        }
        last = next.abs();
        term = next;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J_0(x)`.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SWITCH {
        series(0, ax)
    } else {
        asymptotic(0, ax)
    }
}

/// `J_1(x)`.
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SWITCH {
        series(1, ax)
    } else {
        asymptotic(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}
