//! LMFDB isogeny-class labels `g.q.c_1_..._c_g`.
//!
//! Each `a_i` is written in base 26 with digits `a..z`; zero is `"a"` and a
//! leading `a` on a longer word marks a negative number (`ae` = −4).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyLabel {
    pub g: usize,
    pub q: u64,
    /// `a_1 … a_g` of the Frobenius polynomial.
    pub coefficients: Vec<BigInt>,
}

pub fn decode_coefficient(word: &str) -> Result<BigInt> {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(Error::Parse(format!("bad label coefficient {word:?}")));
    }
    let (neg, digits) = if word.len() > 1 && word.starts_with('a') { (true, &word[1..]) } else { (false, word) };
    let mut n = BigInt::zero();
    for b in digits.bytes() {
        n = n * 26 + (b - b'a');
    }
    if neg && n.is_zero() {
        return Err(Error::Parse(format!("bad label coefficient {word:?}")));
    }
    Ok(if neg { -n } else { n })
}

pub fn encode_coefficient(n: &BigInt) -> String {
    if n.is_zero() {
        return "a".into();
    }
    let mut m = n.abs();
    let mut digits = Vec::new();
    let base = BigInt::from(26);
    while !m.is_zero() {
        let d = (&m % &base).to_u32_digits().1.first().copied().unwrap_or(0) as u8;
        digits.push(b'a' + d);
        m /= &base;
    }
    if n.is_negative() {
        digits.push(b'a');
    }
    digits.reverse();
    String::from_utf8(digits).expect("ascii")
}

impl FromStr for IsogenyLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad isogeny label {s:?}; expected g.q.coeffs"));
        let mut parts = s.trim().splitn(3, '.');
        let g: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let q: u64 = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let coeffs = parts.next().ok_or_else(bad)?;
        let coefficients = coeffs.split('_').map(decode_coefficient).collect::<Result<Vec<_>>>()?;
        if g == 0 || coefficients.len() != g {
            return Err(Error::Parse(format!("label {s:?} has {} coefficients for g = {g}", coefficients.len())));
        }
        Ok(IsogenyLabel { g, q, coefficients })
    }
}

impl fmt::Display for IsogenyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.coefficients.iter().map(encode_coefficient).collect();
        write!(f, "{}.{}.{}", self.g, self.q, words.join("_"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_words() {
        assert_eq!(decode_coefficient("ae").unwrap(), BigInt::from(-4));
        assert_eq!(decode_coefficient("bw").unwrap(), BigInt::from(48));
        assert_eq!(decode_coefficient("a").unwrap(), BigInt::from(0));
        assert_eq!(decode_coefficient("ca").unwrap(), BigInt::from(52));
        assert!(decode_coefficient("aa").is_err());
        assert!(decode_coefficient("A").is_err());
    }

    #[test]
    fn label_round_trip() {
        let l: IsogenyLabel = "3.2.ac_b_a".parse().unwrap();
        assert_eq!((l.g, l.q), (3, 2));
        assert_eq!(l.coefficients, vec![BigInt::from(-2), BigInt::from(1), BigInt::from(0)]);
        assert_eq!(l.to_string(), "3.2.ac_b_a");
        assert!("3.2.ac_b".parse::<IsogenyLabel>().is_err());
    }
}
