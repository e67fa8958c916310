//! Newton polygons, weight functions and weighted permutation representations.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{conj_slot, PermGroup, SignedPermutation};
use crate::linalg::{bareiss_rank, parse_rational, RatMatrix, Rational};

/// A symmetric slope multiset in `[0, 1]`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPolygon {
    slopes: Vec<Rational>,
}

impl NewtonPolygon {
    /// Validates and sorts `slopes`.
    pub fn new(mut slopes: Vec<Rational>) -> Result<Self> {
        if slopes.is_empty() || !slopes.len().is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "a Newton polygon needs an even, positive number of slopes, got {}",
                slopes.len()
            )));
        }
        slopes.sort();
        let one = Rational::one();
        if let Some(s) = slopes.iter().find(|s| s.is_negative() || **s > one) {
            return Err(Error::Validation(format!("range: slope {s} lies outside [0, 1]")));
        }
        let mut counts: HashMap<&Rational, usize> = HashMap::new();
        for s in &slopes {
            *counts.entry(s).or_default() += 1;
        }
        for (s, &n) in &counts {
            let partner = &one - *s;
            let m = counts.get(&partner).copied().unwrap_or(0);
            if m != n {
                return Err(Error::Validation(format!(
                    "symmetry: slope {s} occurs {n} times but {partner} occurs {m} times"
                )));
            }
        }
        for s in &slopes {
            let n = counts[s];
            let d = s.denom().to_usize().unwrap_or(usize::MAX);
            if !n.is_multiple_of(d) {
                return Err(Error::Validation(format!(
                    "integrality: slope {s} has multiplicity {n}, not divisible by its denominator {d}"
                )));
            }
        }
        Ok(NewtonPolygon { slopes })
    }

    /// Parses a comma-separated slope list such as `"0,0,1/2,1/2,1,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let slopes = s
            .split(',')
            .map(|t| parse_rational(t).ok_or_else(|| Error::Parse(format!("bad slope {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(slopes)
    }

    pub fn g(&self) -> usize {
        self.slopes.len() / 2
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    /// Distinct slopes with their multiplicities (segment horizontal lengths).
    pub fn segments(&self) -> Vec<(Rational, usize)> {
        let mut out: Vec<(Rational, usize)> = Vec::new();
        for s in &self.slopes {
            match out.last_mut() {
                Some((t, n)) if t == s => *n += 1,
                _ => out.push((s.clone(), 1)),
            }
        }
        out
    }

    pub fn is_supersingular(&self) -> bool {
        let half = Rational::new(1.into(), 2.into());
        self.slopes.iter().all(|s| *s == half)
    }

    pub fn is_ordinary(&self) -> bool {
        self.slopes.iter().all(|s| s.is_integer())
    }

    /// Every valid polygon of dimension `g`, in lexicographic slope order.
    pub fn all(g: usize) -> Vec<NewtonPolygon> {
        // slopes strictly below 1/2 that can occur: a/b with b <= g
        let mut lower: Vec<Rational> = Vec::new();
        for b in 1..=g.max(1) {
            for a in 0..b {
                let s = Rational::new(a.into(), b.into());
                if s.denom() == &BigInt::from(b) && s < Rational::new(1.into(), 2.into()) {
                    lower.push(s);
                }
            }
        }
        lower.sort();
        lower.dedup();
        let mut out = Vec::new();
        let mut chosen: Vec<(Rational, usize)> = Vec::new();
        fill(&lower, 0, g, &mut chosen, &mut out);
        out.sort();
        out
    }

    /// Compact form such as `[0^2,1/2^2,1^2]`.
    pub fn short(&self) -> String {
        let parts: Vec<String> =
            self.segments().iter().map(|(s, n)| if *n == 1 { s.to_string() } else { format!("{s}^{n}") }).collect();
        format!("[{}]", parts.join(","))
    }
}

fn fill(
    lower: &[Rational],
    idx: usize,
    remaining: usize,
    chosen: &mut Vec<(Rational, usize)>,
    out: &mut Vec<NewtonPolygon>,
) {
    if idx == lower.len() {
        // what is left goes to slope 1/2, which needs even multiplicity 2*remaining
        let mut slopes = Vec::new();
        for (s, n) in chosen.iter() {
            for _ in 0..*n {
                slopes.push(s.clone());
                slopes.push(Rational::one() - s);
            }
        }
        for _ in 0..2 * remaining {
            slopes.push(Rational::new(1.into(), 2.into()));
        }
        out.push(NewtonPolygon::new(slopes).expect("constructed valid"));
        return;
    }
    let d = lower[idx].denom().to_usize().expect("small");
    let mut n = 0;
    while n <= remaining {
        if n > 0 {
            chosen.push((lower[idx].clone(), n));
        }
        fill(lower, idx + 1, remaining - n, chosen, out);
        if n > 0 {
            chosen.pop();
        }
        n += d;
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.slopes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `w : X_{2g} → Q≥0`, stored by slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    g: usize,
    values: Vec<Rational>,
    newton: NewtonPolygon,
}

impl WeightFunction {
    /// The lower half of the slopes goes to `1..g` in ascending order and the
    /// complements to the barred symbols.
    pub fn from_newton(np: &NewtonPolygon) -> WeightFunction {
        let g = np.g();
        let mut values = vec![Rational::zero(); 2 * g];
        for i in 0..g {
            values[i] = np.slopes[i].clone();
            values[conj_slot(i, g)] = Rational::one() - &np.slopes[i];
        }
        WeightFunction { g, values, newton: np.clone() }
    }

    pub fn from_slopes_str(s: &str) -> Result<WeightFunction> {
        Ok(Self::from_newton(&NewtonPolygon::parse(s)?))
    }

    /// Builds from explicit values per slot, checking monotonicity on
    /// `1..g`, the pairing `w(i) + w(ī) = 1`, and the induced polygon.
    pub fn from_values(values: Vec<Rational>) -> Result<WeightFunction> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::Validation("a weight function needs 2g values".into()));
        }
        let g = values.len() / 2;
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::Validation(format!("range: weight {v} is negative")));
        }
        for i in 1..g {
            if values[i] < values[i - 1] {
                return Err(Error::Validation(format!(
                    "monotonicity: w({}) = {} exceeds w({}) = {}",
                    i,
                    values[i - 1],
                    i + 1,
                    values[i]
                )));
            }
        }
        for i in 0..g {
            if &values[i] + &values[conj_slot(i, g)] != Rational::one() {
                return Err(Error::Validation(format!("pairing: w({0}) + w({0}~) != 1", i + 1)));
            }
        }
        let newton = NewtonPolygon::new(values.clone())?;
        Ok(WeightFunction { g, values, newton })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    #[inline]
    pub fn value_at(&self, slot: usize) -> &Rational {
        &self.values[slot]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn newton(&self) -> &NewtonPolygon {
        &self.newton
    }

    /// Least common multiple of the value denominators.
    pub fn denominator(&self) -> BigInt {
        self.values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }
}

/// Disjoint `T⁺, T⁻ ⊆ {1..g}` (1-based) realizing an exceptional relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExceptionalWitness {
    pub t_plus: Vec<usize>,
    pub t_minus: Vec<usize>,
    /// Smallest `r` with `2r ≥ |T⁺| + |T⁻|`.
    pub codim_bound: usize,
}

impl ExceptionalWitness {
    pub fn new(mut t_plus: Vec<usize>, mut t_minus: Vec<usize>) -> Self {
        t_plus.sort_unstable();
        t_minus.sort_unstable();
        let codim_bound = (t_plus.len() + t_minus.len()).div_ceil(2);
        ExceptionalWitness { t_plus, t_minus, codim_bound }
    }

    pub fn size(&self) -> usize {
        self.t_plus.len() + self.t_minus.len()
    }

    /// Signed indicator on `1..g`.
    pub fn signs(&self, g: usize) -> Vec<i8> {
        let mut c = vec![0i8; g];
        for &i in &self.t_plus {
            c[i - 1] = 1;
        }
        for &i in &self.t_minus {
            c[i - 1] = -1;
        }
        c
    }

    pub fn from_signs(c: &[i8]) -> Self {
        let plus = (0..c.len()).filter(|&i| c[i] > 0).map(|i| i + 1).collect();
        let minus = (0..c.len()).filter(|&i| c[i] < 0).map(|i| i + 1).collect();
        Self::new(plus, minus)
    }
}

/// Sorts witnesses by total size, then lexicographically on `(T⁺, T⁻)`.
pub fn sort_witnesses(ws: &mut [ExceptionalWitness]) {
    ws.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| (&a.t_plus, &a.t_minus).cmp(&(&b.t_plus, &b.t_minus))));
}

/// A weighted permutation representation `ρ = (w, G)`.
pub struct WeightedPermRep {
    w: WeightFunction,
    group: PermGroup,
    /// `L` with `L·w` integral.
    scale: i64,
    /// Distinct rows of `L·Φ`, in order of first occurrence over the sorted elements.
    rows: Vec<Vec<i64>>,
    phi: OnceLock<RatMatrix>,
}

impl Clone for WeightedPermRep {
    fn clone(&self) -> Self {
        WeightedPermRep {
            w: self.w.clone(),
            group: self.group.clone(),
            scale: self.scale,
            rows: self.rows.clone(),
            phi: OnceLock::new(),
        }
    }
}

impl fmt::Debug for WeightedPermRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedPermRep({}, {:?})", self.w.newton.short(), self.group)
    }
}

impl WeightedPermRep {
    pub fn new(w: WeightFunction, group: PermGroup) -> Result<Self> {
        if w.g() != group.g() {
            return Err(Error::SizeMismatch { expected: w.g(), found: group.g() });
        }
        if !group.contains_conjugation() {
            return Err(Error::Validation("the group does not contain the conjugation element".into()));
        }
        if !group.is_transitive() {
            return Err(Error::Validation("the group is not transitive".into()));
        }
        let scale = w.denominator().to_i64().ok_or_else(|| Error::Input("weight denominators too large".into()))?;
        let g = w.g();
        let scaled: Vec<i64> = w
            .values
            .iter()
            .map(|v| (v * Rational::from_integer(scale.into())).to_integer().to_i64().unwrap())
            .collect();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut rows = Vec::new();
        for s in group.elements() {
            let inv = s.inverse();
            let row: Vec<i64> = (0..2 * g).map(|x| scaled[inv.apply(x)]).collect();
            if seen.insert(row.clone()) {
                rows.push(row);
            }
        }
        Ok(WeightedPermRep { w, group, scale, rows, phi: OnceLock::new() })
    }

    pub fn from_strings(slopes: &str, generators: &str) -> Result<Self> {
        let w = WeightFunction::from_slopes_str(slopes)?;
        let group = PermGroup::parse(w.g(), generators)?;
        Self::new(w, group)
    }

    pub fn g(&self) -> usize {
        self.w.g()
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.w
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// `|G| × 2g` matrix with entry `w(σ⁻¹(x))` at `(σ, x)`, rows in the
    /// group's element order. Built once.
    pub fn phi_matrix(&self) -> &RatMatrix {
        self.phi.get_or_init(|| {
            let g = self.g();
            let rows = self
                .group
                .elements()
                .iter()
                .map(|s| {
                    let inv = s.inverse();
                    (0..2 * g).map(|x| self.w.value_at(inv.apply(x)).clone()).collect()
                })
                .collect();
            RatMatrix::from_rows(rows)
        })
    }

    /// Column `x` of `Φ` as a function of `σ` (same row order as [`Self::phi_matrix`]).
    pub fn phi_column(&self, slot: usize) -> Vec<Rational> {
        self.group.elements().iter().map(|s| self.w.value_at(s.inverse().apply(slot)).clone()).collect()
    }

    /// Distinct rows of `L·Φ` and the scale `L`.
    pub fn distinct_scaled_rows(&self) -> (&[Vec<i64>], i64) {
        (&self.rows, self.scale)
    }

    /// All `2g` columns of `Φ` pairwise distinct.
    pub fn is_geometrically_simple(&self) -> bool {
        let g = self.g();
        let cols: HashSet<Vec<i64>> = (0..2 * g).map(|x| self.rows.iter().map(|r| r[x]).collect()).collect();
        cols.len() == 2 * g
    }

    pub fn phi_rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        bareiss_rank(&mut m, 2 * self.g())
    }

    /// `δ_ρ = rank Φ − 1`.
    pub fn angle_rank(&self) -> usize {
        self.phi_rank() - 1
    }

    /// The coarsest partition of `1..g` on which every flip pattern of
    /// `C = ker(G → G⁺)` is constant, with its part count.
    pub fn level_set_partition(&self) -> (Vec<Vec<usize>>, usize) {
        let g = self.g();
        let patterns: Vec<u32> = self.group.flip_kernel().iter().map(|c| c.flips()).collect();
        let sig = |i: usize| -> Vec<bool> { patterns.iter().map(|p| p >> i & 1 == 1).collect() };
        let mut parts: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
        for i in 0..g {
            let s = sig(i);
            match parts.iter_mut().find(|(k, _)| *k == s) {
                Some((_, p)) => p.push(i + 1),
                None => parts.push((s, vec![i + 1])),
            }
        }
        let m = parts.len();
        (parts.into_iter().map(|(_, p)| p).collect(), m)
    }

    fn balanced(&self, c: &[i8]) -> bool {
        let plus = c.iter().filter(|&&x| x > 0).count() as i64;
        let minus = c.iter().filter(|&&x| x < 0).count() as i64;
        let target = self.scale * (plus - minus);
        self.rows.iter().all(|r| 2 * c.iter().enumerate().map(|(i, &ci)| ci as i64 * r[i]).sum::<i64>() == target)
    }

    /// All `(T⁺, T⁻)` with `|T⁺| + |T⁻|` even and positive such that
    /// `Σ_{T⁺} Φ(i) − Σ_{T⁻} Φ(j) = ((|T⁺| − |T⁻|)/2) · Σ_σ σ`.
    pub fn exceptional_witnesses(&self) -> Result<Vec<ExceptionalWitness>> {
        if !self.is_geometrically_simple() {
            return Err(Error::Precondition(
                "exceptionality is only defined for geometrically simple representations".into(),
            ));
        }
        Ok(self.balanced_sign_vectors())
    }

    /// The signed-subset search without the simplicity precondition.
    pub fn balanced_sign_vectors(&self) -> Vec<ExceptionalWitness> {
        let g = self.g();
        let mut out = Vec::new();
        let mut c = vec![0i8; g];
        for code in 0..3usize.pow(g as u32) {
            let mut k = code;
            for x in c.iter_mut() {
                *x = (k % 3) as i8 - 1;
                k /= 3;
            }
            let support = c.iter().filter(|&&x| x != 0).count();
            if support == 0 || support % 2 == 1 {
                continue;
            }
            if self.balanced(&c) {
                out.push(ExceptionalWitness::from_signs(&c));
            }
        }
        sort_witnesses(&mut out);
        out
    }

    pub fn is_exceptional(&self) -> Result<bool> {
        Ok(!self.exceptional_witnesses()?.is_empty())
    }

    pub fn to_json(&self) -> WprJson {
        WprJson {
            g: self.g(),
            slopes: self.w.newton.to_string(),
            generators: self.group.generators_to_cycles(),
            order: self.group.order(),
        }
    }

    pub fn from_json(j: &WprJson) -> Result<Self> {
        let w = WeightFunction::from_slopes_str(&j.slopes)?;
        if w.g() != j.g {
            return Err(Error::SizeMismatch { expected: j.g, found: w.g() });
        }
        let gens = j.generators.iter().map(|s| SignedPermutation::parse_cycles(s, j.g)).collect::<Result<Vec<_>>>()?;
        let group = PermGroup::generate(j.g, &gens)?;
        if group.order() != j.order {
            return Err(Error::Validation(format!("generators give order {}, expected {}", group.order(), j.order)));
        }
        Self::new(w, group)
    }
}

/// JSON form of a representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WprJson {
    pub g: usize,
    pub slopes: String,
    pub generators: Vec<String>,
    pub order: usize,
}

/// True iff the segment lengths of the polygon have gcd 1.
pub fn gcd_simplicity_criterion(np: &NewtonPolygon) -> bool {
    np.segments().iter().fold(0usize, |acc, (_, n)| acc.gcd(n)) == 1
}
