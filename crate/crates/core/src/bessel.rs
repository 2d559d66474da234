//! Bessel functions of the first kind for non-negative integer order.
//!
//! Small arguments use the ascending power series; everything else uses
//! Miller's backward recurrence normalised by `J0 + 2 * sum(J_2k) = 1`.

/// `J_order(x)` for integer `order >= 0` and any real `x`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = bessel_j(order, -x);
        return if order.is_multiple_of(2) { v } else { -v };
    }
    if x <= 6.0 || x <= f64::from(order) {
        ascending_series(order, x)
    } else {
        miller(order, x)
    }
}

fn ascending_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let n = f64::from(order);
    // (x/2)^n / n!, built incrementally to stay in range.
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / f64::from(k);
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (n + k));
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() || term == 0.0 {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

fn miller(order: u32, x: f64) -> f64 {
    const RESCALE: f64 = 1e250;
    let n = order as usize;
    let top = (x as usize).max(n);
    let mut m = top + 30 + (40.0 * top as f64).sqrt() as usize;
    if m % 2 == 1 {
        m += 1;
    }

    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k, arbitrary seed
    let mut wanted = 0.0;
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds J_{k-1}
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            wanted /= RESCALE;
            norm /= RESCALE;
        }
        let idx = k - 1;
        if idx == n {
            wanted = cur;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * cur;
        }
    }
    norm += cur;
    wanted / norm
}
