//! Complex roots of integer polynomials to a requested binary precision.
//!
//! The polynomial is first split into squarefree parts (Yun), so every root
//! being refined is simple. Roots are located with Aberth–Ehrlich iteration
//! in `f64`, then polished by Newton's method in multiprecision. The a
//! posteriori bound `n·|S(z)/S'(z)|` for a degree-`n` squarefree factor `S`
//! encloses a true root.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Dense polynomial over `Q`, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Rational>);

impl QPoly {
    pub fn from_ints_descending(c: &[BigInt]) -> QPoly {
        let mut v: Vec<Rational> = c.iter().rev().map(|x| Rational::from_integer(x.clone())).collect();
        trim(&mut v);
        QPoly(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn derivative(&self) -> QPoly {
        let mut v: Vec<Rational> =
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(i.into())).collect();
        trim(&mut v);
        QPoly(v)
    }

    fn monic(mut self) -> QPoly {
        if let Some(l) = self.0.last().cloned() {
            for c in &mut self.0 {
                *c = &*c / &l;
            }
        }
        self
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.0.is_empty(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        let lead = d.0.last().unwrap().clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &f * c;
            }
            q[shift] = f;
            r.pop();
            trim(&mut r);
        }
        trim(&mut q);
        (QPoly(q), QPoly(r))
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.0.is_empty() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let mut v: Vec<Rational> = (0..n)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                let b = o.0.get(i).cloned().unwrap_or_else(Rational::zero);
                a - b
            })
            .collect();
        trim(&mut v);
        QPoly(v)
    }
}

fn trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Yun's squarefree decomposition: `(factor, multiplicity)` with monic factors.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, usize)> {
    let f = f.clone().monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        let nb = b.div_rem(&a).0;
        let nc = d.div_rem(&a).0;
        if a.degree() > 0 {
            out.push((a, i));
        }
        d = nc.sub(&nb.derivative());
        b = nb;
        i += 1;
    }
    out
}

/// Complex number with multiprecision parts.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(p: usize) -> Self {
        BigComplex { re: BigFloat::from_f64(0.0, p), im: BigFloat::from_f64(0.0, p) }
    }

    pub fn from_c64(z: Complex64, p: usize) -> Self {
        BigComplex { re: BigFloat::from_f64(z.re, p), im: BigFloat::from_f64(z.im, p) }
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        BigComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        BigComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        BigComplex { re, im }
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        let n = o.norm_sqr(p);
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM).div(&n, p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM).div(&n, p, RM);
        BigComplex { re, im }
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.norm_sqr(p).sqrt(p, RM)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// Nearest `f64` (via the exact mantissa).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // the top two words carry more than f64 precision
    let top = words.len().min(2);
    let mut m = 0f64;
    for w in words.iter().rev().take(top) {
        m = m * 2f64.powi(64) + *w as f64;
    }
    let v = m * 2f64.powi(exp - 64 * top as i32);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `log2 |x|`, or `-inf` for zero.
pub fn log2_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let e = x.exponent().unwrap_or(0) as f64;
    let mut y = x.abs();
    y.set_exponent(0);
    e + to_f64(&y).log2()
}

/// `round(x · 2^k)` as an integer.
pub fn scaled_integer(x: &BigFloat, k: i64) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite");
    let mut m = BigInt::zero();
    for w in words.iter().rev() {
        m = (m << 64) + BigInt::from(*w);
    }
    // value = m · 2^(exp - bits)
    let shift = exp as i64 - 64 * words.len() as i64 + k;
    let v = if shift >= 0 {
        m << shift as usize
    } else {
        let s = (-shift) as usize;
        let half = BigInt::one() << (s - 1);
        (m + half) >> s
    };
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub fn bigfloat_from_rational(r: &Rational, p: usize, cc: &mut Consts) -> BigFloat {
    let n = bigfloat_from_int(r.numer(), p, cc);
    let d = bigfloat_from_int(r.denom(), p, cc);
    n.div(&d, p, RM)
}

pub fn bigfloat_from_int(n: &BigInt, p: usize, cc: &mut Consts) -> BigFloat {
    match n.to_i64() {
        Some(v) => BigFloat::from_i64(v, p),
        None => BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, cc),
    }
}

/// A root with its multiplicity in the input polynomial and an error bound.
#[derive(Clone, Debug)]
pub struct Root {
    pub z: BigComplex,
    pub multiplicity: usize,
    /// `log2` of the a posteriori error radius.
    pub error_log2: f64,
}

fn aberth_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    // coeffs ascending, monic
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let radius = coeffs[..n].iter().map(|c| c.norm()).fold(0.0f64, f64::max).powf(1.0 / n as f64).max(1.0);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Roots of a squarefree monic rational polynomial, polished to `prec` bits.
fn simple_roots(f: &QPoly, prec: usize, cc: &mut Consts) -> Result<Vec<(BigComplex, f64)>> {
    let n = f.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    let approx: Vec<Complex64> = {
        let c: Vec<Complex64> = f.0.iter().map(|r| Complex64::new(r.to_f64().unwrap_or(0.0), 0.0)).collect();
        aberth_f64(&c)
    };
    let wp = prec + 64;
    let coeffs: Vec<BigFloat> = f.0.iter().map(|r| bigfloat_from_rational(r, wp, cc)).collect();
    let eval = |z: &BigComplex| -> (BigComplex, BigComplex) {
        let mut p = BigComplex::zero(wp);
        let mut dp = BigComplex::zero(wp);
        for c in coeffs.iter().rev() {
            dp = dp.mul(z, wp).add(&p, wp);
            p = p.mul(z, wp);
            p.re = p.re.add(c, wp, RM);
        }
        (p, dp)
    };
    let mut out = Vec::with_capacity(n);
    for z0 in approx {
        let mut z = BigComplex::from_c64(z0, wp);
        let mut converged = false;
        for _ in 0..(2 * prec.ilog2() as usize + 60) {
            let (p, dp) = eval(&z);
            if dp.norm_sqr(wp).is_zero() {
                break;
            }
            let step = p.div(&dp, wp);
            z = z.sub(&step, wp);
            let s = log2_abs(&step.abs(wp));
            let m = log2_abs(&z.abs(wp)).max(0.0);
            if s < m - (prec as f64) - 8.0 {
                converged = true;
                break;
            }
        }
        let (p, dp) = eval(&z);
        let err =
            if p.norm_sqr(wp).is_zero() { -(wp as f64) } else { log2_abs(&p.div(&dp, wp).abs(wp)) + (n as f64).log2() };
        if !converged && err > -(prec as f64) + 8.0 {
            return Err(Error::Numerical(format!("root refinement did not converge at {prec} bits")));
        }
        out.push((z, err));
    }
    // distinct roots must be separated by more than their error radii
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let d = log2_abs(&out[i].0.sub(&out[j].0, wp).abs(wp));
            if d <= out[i].1.max(out[j].1) + 1.0 {
                return Err(Error::Numerical(format!("roots failed to separate at {prec} bits")));
            }
        }
    }
    Ok(out)
}

/// All roots of an integer polynomial (descending coefficients) with
/// multiplicities, sorted by argument in `(-π, π]` then modulus.
pub fn complex_roots(coeffs_desc: &[BigInt], prec: usize) -> Result<Vec<Root>> {
    if prec < 64 {
        return Err(Error::Input("precision must be at least 64 bits".into()));
    }
    let f = QPoly::from_ints_descending(coeffs_desc);
    if f.degree() == 0 {
        return Ok(vec![]);
    }
    let mut cc = Consts::new().map_err(|e| Error::Numerical(format!("{e:?}")))?;
    let mut roots = Vec::new();
    for (factor, mult) in squarefree_decomposition(&f) {
        for (z, err) in simple_roots(&factor, prec, &mut cc)? {
            roots.push(Root { z, multiplicity: mult, error_log2: err });
        }
    }
    roots.sort_by(|a, b| {
        let za = a.z.to_c64();
        let zb = b.z.to_c64();
        za.arg().partial_cmp(&zb.arg()).unwrap().then(za.norm().partial_cmp(&zb.norm()).unwrap())
    });
    Ok(roots)
}

/// Sign of a multiprecision value, treating `|x| < 2^-tol_bits` as zero.
pub fn sign_with_tolerance(x: &BigFloat, tol_bits: f64) -> i32 {
    if x.is_zero() || log2_abs(x) < -tol_bits {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn f64_of_wide_values() {
        let mut cc = Consts::new().unwrap();
        for prec in [128, 1024, 3136] {
            let x = bigfloat_from_rational(&Rational::new(1.into(), 3.into()), prec, &mut cc);
            assert!((to_f64(&x) - 1.0 / 3.0).abs() < 1e-16, "{prec}");
        }
    }

    #[test]
    fn quadratic_roots() {
        // T^2 - T + 2 -> (1 ± i√7)/2
        let r = complex_roots(&ints(&[1, -1, 2]), 128).unwrap();
        assert_eq!(r.len(), 2);
        for root in &r {
            let z = root.z.to_c64();
            assert!((z.re - 0.5).abs() < 1e-15);
            assert!((z.im.abs() - 7f64.sqrt() / 2.0).abs() < 1e-15);
            assert!((z.norm() - 2f64.sqrt()).abs() < 1e-15);
            assert!(root.error_log2 < -120.0);
        }
        let r = complex_roots(&ints(&[1, 0, 3]), 128).unwrap();
        assert!((r[1].z.to_c64().im - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn repeated_factors() {
        // (T^2 + 2)^2 = T^4 + 4T^2 + 4
        let r = complex_roots(&ints(&[1, 0, 4, 0, 4]), 100).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.multiplicity == 2));
        let sq = squarefree_decomposition(&QPoly::from_ints_descending(&ints(&[1, 0, 4, 0, 4])));
        assert_eq!(sq.len(), 1);
        assert_eq!(sq[0].1, 2);
    }

    #[test]
    fn scaled_integers() {
        let x = BigFloat::from_f64(1.25, 128);
        assert_eq!(scaled_integer(&x, 4), BigInt::from(20));
        assert_eq!(scaled_integer(&x.neg(), 1), BigInt::from(-3));
        assert!((to_f64(&BigFloat::from_f64(-3.5, 64)) + 3.5).abs() < 1e-15);
        assert!((log2_abs(&BigFloat::from_f64(8.0, 64)) - 3.0).abs() < 1e-12);
    }
}
