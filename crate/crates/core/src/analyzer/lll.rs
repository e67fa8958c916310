//! Integral LLL reduction (exact Gram–Schmidt data in integers) and the
//! row Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rounded quotient `round(a / b)` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// LLL-reduces linearly independent integer rows in place with Lovász
/// constant `3/4`. Uses the all-integer variant: `d_i` are the Gram
/// determinants and `λ_{k,j} = d_j · μ_{k,j}`.
pub fn lll_reduce(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    // d[0] = 1, d[i+1] for row i
    let mut d = vec![BigInt::one(); n + 1];
    let mut lambda = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&b[0], &b[0]);
    let mut k = 1usize;
    let mut kmax = 0usize;

    let red = |b: &mut [Vec<BigInt>], lambda: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize| {
        if (&lambda[k][l] * BigInt::from(2)).abs() > d[l + 1] {
            let q = round_div(&lambda[k][l], &d[l + 1]);
            let (lo, hi) = b.split_at_mut(k);
            for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
                *x -= &q * y;
            }
            lambda[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let t = &q * &lambda[l][i];
                lambda[k][i] -= t;
            }
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lambda[k][i] * &lambda[j][i]) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "LLL input rows must be independent");
                    d[k + 1] = u;
                }
            }
        }
        red(b, &mut lambda, &d, k, k - 1);
        // Lovász: 4 d_{k+1} d_{k-1} < 3 d_k^2 - 4 λ^2  ->  swap
        let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
        let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lambda[k][k - 1] * &lambda[k][k - 1];
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lambda[k][j].clone();
                lambda[k][j] = lambda[k - 1][j].clone();
                lambda[k - 1][j] = t;
            }
            let lam = lambda[k][k - 1].clone();
            let bb = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
            for i in k + 1..=kmax {
                let t = lambda[i][k].clone();
                lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
                lambda[i][k - 1] = (&bb * &t + &lam * &lambda[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                red(b, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: upper
/// echelon, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // gcd-combine every row below into row r
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            if m[r][c].is_zero() {
                m.swap(r, i);
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let (top, bottom): (Vec<BigInt>, Vec<BigInt>) =
                m[r].iter().zip(&m[i]).map(|(u, v)| (&x * u + &y * v, &ag * v - &bg * u)).unzip();
            m[r] = top;
            m[i] = bottom;
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in &mut m[r] {
                *x = -&*x;
            }
        }
        let p = m[r][c].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&p);
            if !q.is_zero() {
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}
