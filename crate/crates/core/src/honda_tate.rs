//! Ideal exponent vectors and the Honda–Tate dimension `g · lcm(ε_π, k_π)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{PermGroup, SignedPermutation};
use crate::linalg::Rational;
use crate::wpr::WeightedPermRep;

/// Exponent `w(σ⁻¹(1))` on each left coset `σD`, up to the global scalar
/// `v(q)` which needs an actual field to pin down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector {
    /// Each coset with its least-rank representative first.
    pub cosets: Vec<Vec<SignedPermutation>>,
    pub exponents: Vec<Rational>,
    /// Least positive integer making every exponent integral.
    pub c: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentVectorJson {
    pub cosets: Vec<Vec<String>>,
    pub exponents: Vec<String>,
    pub c: u64,
}

impl ExponentVector {
    pub fn to_json(&self) -> ExponentVectorJson {
        ExponentVectorJson {
            cosets: self.cosets.iter().map(|c| c.iter().map(|s| s.to_cycles()).collect()).collect(),
            exponents: self.exponents.iter().map(|e| e.to_string()).collect(),
            c: self.c,
        }
    }
}

fn check_inside(rho: &WeightedPermRep, d: &PermGroup) -> Result<()> {
    if !d.is_subgroup_of(rho.group()) {
        return Err(Error::Precondition("D is not a subgroup of G".into()));
    }
    let w = rho.weight();
    if !d.elements().iter().all(|s| (0..2 * rho.g()).all(|x| w.value_at(s.apply(x)) == w.value_at(x))) {
        return Err(Error::Precondition("D is not contained in Stab(w)".into()));
    }
    Ok(())
}

/// Exponents per left coset of `D` in `G`, cosets ordered by least representative.
pub fn ideal_exponents(rho: &WeightedPermRep, d: &PermGroup) -> Result<ExponentVector> {
    check_inside(rho, d)?;
    let w = rho.weight();
    let mut seen = std::collections::HashSet::new();
    let mut cosets = Vec::new();
    let mut exponents = Vec::new();
    for s in rho.group().elements() {
        if seen.contains(s) {
            continue;
        }
        let mut coset: Vec<SignedPermutation> = d.elements().iter().map(|x| s.mul(x)).collect();
        coset.sort_by_key(|x| x.rank());
        let value = w.value_at(s.inverse().apply(0)).clone();
        for x in &coset {
            if w.value_at(x.inverse().apply(0)) != &value {
                return Err(Error::Precondition("weight is not constant on a coset of D".into()));
            }
            seen.insert(*x);
        }
        cosets.push(coset);
        exponents.push(value);
    }
    let c = exponents.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let c = c.to_u64().ok_or_else(|| Error::Input("exponent denominators too large".into()))?;
    Ok(ExponentVector { cosets, exponents, c })
}

/// `ε_π`: 1 for a positive trailing coefficient, 2 for a negative one.
pub fn epsilon_pi(trailing_sign: i32) -> Result<u64> {
    match trailing_sign.signum() {
        1 => Ok(1),
        -1 => Ok(2),
        _ => Err(Error::Input("the trailing coefficient of a Weil polynomial cannot be zero".into())),
    }
}

/// `k_π`: lcm over `D`-orbits of the denominator of the orbit weight sum.
pub fn k_pi(rho: &WeightedPermRep, d: &PermGroup) -> Result<u64> {
    check_inside(rho, d)?;
    let w = rho.weight();
    let k = d.orbits().iter().fold(BigInt::one(), |acc, o| {
        let sum = o.iter().fold(Rational::zero(), |s, &x| s + w.value_at(x));
        acc.lcm(sum.denom())
    });
    k.to_u64().ok_or_else(|| Error::Input("orbit denominators too large".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub epsilon: u64,
    pub k: u64,
    pub dimension: u64,
    /// `k_π = 1`: the orbit sums are integral, so dimension `g` is reached by `π` or `π²`.
    pub strongly_admissible: bool,
}

pub fn honda_tate_dimension(rho: &WeightedPermRep, d: &PermGroup, trailing_sign: i32) -> Result<DimensionReport> {
    let epsilon = epsilon_pi(trailing_sign)?;
    let k = k_pi(rho, d)?;
    Ok(DimensionReport { epsilon, k, dimension: rho.g() as u64 * epsilon.lcm(&k), strongly_admissible: k == 1 })
}
