//! Weak and strong p-admissible filtrations `G ⊇ D ⊇ G0 ⊇ G1`.
//!
//! Only the group-theoretic necessary conditions are checked: `G0, G1` normal
//! in `D`, `G1` a p-group, `G0/G1` cyclic of order prime to `p`, `D/G0`
//! cyclic, and a presentation `D/G1 = ⟨σ, τ⟩` with `⟨τ⟩ = G0/G1` and
//! `στσ⁻¹ = τ^p`. Passing them means "admissible", never "realized".

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::small::{CayleyTable, Subgroup};
use crate::group::{stabilizer_of_weight, BitSet, PermGroup, SignedPermutation};
use crate::linalg::Rational;
use crate::wpr::WeightedPermRep;

/// Largest `|G ∩ Stab(w)|` for which the subgroup lattice is searched.
pub const MAX_SEARCH_ORDER: usize = 5000;

/// A residue characteristic: a specific prime, or a "generic" prime not
/// dividing `|G|` whose residue modulo the group exponent is unconstrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Finite(u64),
    Generic,
}

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime::Finite(p))
        } else {
            Err(Error::Input(format!("{p} is not prime")))
        }
    }

    /// Parses `"5"` or `"generic"`.
    pub fn parse(s: &str) -> Result<Prime> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("generic") {
            return Ok(Prime::Generic);
        }
        let p: u64 = s.parse().map_err(|_| Error::Parse(format!("bad prime {s:?}")))?;
        Prime::new(p)
    }

    /// The default sweep `{2, 3, 5, 7, generic}`.
    pub fn default_sweep() -> Vec<Prime> {
        vec![Prime::Finite(2), Prime::Finite(3), Prime::Finite(5), Prime::Finite(7), Prime::Generic]
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Finite(p) => write!(f, "{p}"),
            Prime::Generic => write!(f, "generic"),
        }
    }
}

impl Serialize for Prime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Prime::Finite(p) => s.serialize_u64(*p),
            Prime::Generic => s.serialize_str("generic"),
        }
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let parsed = match &v {
            serde_json::Value::Number(n) => {
                n.as_u64().ok_or_else(|| Error::Parse("bad prime".into())).and_then(Prime::new)
            }
            serde_json::Value::String(s) => Prime::parse(s),
            _ => Err(Error::Parse("bad prime".into())),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn is_power_of(n: usize, p: u64) -> bool {
    let mut n = n as u64;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// A chain `D ⊇ G0 ⊇ G1` at a prime.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub d: PermGroup,
    pub g0: PermGroup,
    pub g1: PermGroup,
    pub p: Prime,
}

/// Conditions on abstract subgroups `g1 ⊆ g0 ⊆ d` of a table.
fn local_conditions(t: &CayleyTable, d: &Subgroup, g0: &BitSet, g1: &BitSet, p: Prime) -> bool {
    if !g1.is_subset(g0) || !g0.is_subset(&d.elements) {
        return false;
    }
    if !t.is_normal(g0, d) || !t.is_normal(g1, d) {
        return false;
    }
    let (n_d, n0, n1) = (d.order(), g0.len(), g1.len());
    let tame = n0 / n1;
    match p {
        Prime::Finite(p) => {
            if !is_power_of(n1, p) || (tame as u64).is_multiple_of(p) {
                return false;
            }
        }
        Prime::Generic => {
            if n1 != 1 {
                return false;
            }
        }
    }
    // quotient D/G1 on least coset representatives
    let rep = |x: usize| g1.iter().map(|h| t.mul(x, h)).min().expect("nonempty");
    let mut reps: Vec<usize> = d.elements.iter().map(rep).collect();
    reps.sort_unstable();
    reps.dedup();
    let q = CayleyTable::from_elements(&reps, |&a, &b| rep(t.mul(a, b)));
    let index = |x: usize| reps.binary_search(&rep(x)).expect("in D");
    let mut q0 = BitSet::new(q.order());
    for x in g0.iter() {
        q0.insert(index(x));
    }
    // G0/G1 cyclic, D/G0 cyclic
    let taus: Vec<usize> = q0.iter().filter(|&x| q.element_order(x) == tame).collect();
    if taus.is_empty() {
        return false;
    }
    let wild_free = n_d / n1;
    let cyclic_top = (0..q.order()).any(|s| {
        let mut gens: Vec<usize> = q0.iter().collect();
        gens.push(s);
        q.closure(&gens).len() == wild_free
    });
    if !cyclic_top {
        return false;
    }
    let exponents: Vec<usize> = match p {
        Prime::Finite(p) => vec![(p % tame as u64) as usize],
        Prime::Generic => (0..tame.max(1)).filter(|r| r.gcd(&tame) == 1).collect(),
    };
    for &tau in &taus {
        for s in 0..q.order() {
            if q.closure(&[s, tau]).len() != wild_free {
                continue;
            }
            let lhs = q.conj(s, tau);
            if exponents.iter().any(|&r| q.pow(tau, r) == lhs) {
                return true;
            }
        }
    }
    false
}

fn table_of(group: &PermGroup) -> CayleyTable {
    CayleyTable::from_elements(group.elements(), |a, b| a.mul(b))
}

fn subset_of(group: &PermGroup, sub: &PermGroup) -> Option<BitSet> {
    let mut b = BitSet::new(group.order());
    for e in sub.elements() {
        let i = group.elements().binary_search_by_key(&e.rank(), |x| x.rank()).ok()?;
        b.insert(i);
    }
    Some(b)
}

/// Checks every condition on the chain (normality, orders, cyclic quotients
/// and the `στσ⁻¹ = τ^p` presentation, by exhaustive search in `D/G1`).
pub fn check_local_galois_conditions(f: &Filtration) -> Result<bool> {
    if let Prime::Finite(p) = f.p {
        Prime::new(p)?;
    }
    let t = table_of(&f.d);
    let (Some(g0), Some(g1)) = (subset_of(&f.d, &f.g0), subset_of(&f.d, &f.g1)) else {
        return Ok(false);
    };
    let all = BitSet::from_iter_with_capacity(f.d.order(), 0..f.d.order());
    let d = Subgroup { generators: t.generating_set(&all), elements: all };
    Ok(local_conditions(&t, &d, &g0, &g1, f.p))
}

fn orbit_sums_integral(rho: &WeightedPermRep, gens: &[SignedPermutation]) -> bool {
    let d = PermGroup::generate(rho.g(), gens).expect("same g");
    d.orbits().iter().all(|o| o.iter().fold(Rational::zero(), |acc, &x| acc + rho.weight().value_at(x)).is_integer())
}

/// Every `D`-orbit on `X_{2g}` has integral weight sum.
pub fn strong_orbit_condition(rho: &WeightedPermRep, d: &PermGroup) -> Result<bool> {
    let w = rho.weight();
    let inside = d.elements().iter().all(|s| (0..2 * rho.g()).all(|x| w.value_at(s.apply(x)) == w.value_at(x)));
    if !inside {
        return Err(Error::Precondition("D is not contained in Stab(w)".into()));
    }
    Ok(orbit_sums_integral(rho, d.generators()))
}

/// Outcome of a filtration search.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub weak: bool,
    pub strong: bool,
    pub witnesses: Vec<Filtration>,
    pub checked_p: Vec<Prime>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationJson {
    #[serde(rename = "D")]
    pub d: Vec<String>,
    #[serde(rename = "G0")]
    pub g0: Vec<String>,
    #[serde(rename = "G1")]
    pub g1: Vec<String>,
    pub p: Prime,
    pub strong: bool,
    pub orders: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityJson {
    pub weak: bool,
    pub strong: bool,
    pub checked_p: Vec<Prime>,
    pub witnesses: Vec<FiltrationJson>,
}

impl AdmissibilityReport {
    pub fn to_json(&self, rho: &WeightedPermRep) -> AdmissibilityJson {
        AdmissibilityJson {
            weak: self.weak,
            strong: self.strong,
            checked_p: self.checked_p.clone(),
            witnesses: self
                .witnesses
                .iter()
                .map(|f| FiltrationJson {
                    d: f.d.generators_to_cycles(),
                    g0: f.g0.generators_to_cycles(),
                    g1: f.g1.generators_to_cycles(),
                    p: f.p,
                    strong: orbit_sums_integral(rho, f.d.generators()),
                    orders: [f.d.order(), f.g0.order(), f.g1.order()],
                })
                .collect(),
        }
    }
}

/// Search context: the table of `H = G ∩ Stab(w)` and its subgroup lattice.
pub struct FiltrationSearch<'a> {
    rho: &'a WeightedPermRep,
    h: PermGroup,
    table: CayleyTable,
    subgroups: Vec<Subgroup>,
}

impl<'a> FiltrationSearch<'a> {
    pub fn new(rho: &'a WeightedPermRep) -> Result<Self> {
        let stab = stabilizer_of_weight(rho.weight());
        let h = rho.group().intersection(&stab);
        if h.order() > MAX_SEARCH_ORDER {
            return Err(Error::ResourceLimit(format!(
                "G ∩ Stab(w) has order {} (limit {MAX_SEARCH_ORDER})",
                h.order()
            )));
        }
        let table = table_of(&h);
        let subgroups = table.all_subgroups();
        Ok(FiltrationSearch { rho, h, table, subgroups })
    }

    fn to_group(&self, s: &BitSet) -> PermGroup {
        let elements: Vec<SignedPermutation> = s.iter().map(|i| self.h.elements()[i]).collect();
        let gens = self.table.generating_set(s).iter().map(|&i| self.h.elements()[i]).collect();
        PermGroup::from_parts(self.rho.g(), gens, elements)
    }

    fn is_strong(&self, d: &Subgroup) -> bool {
        let gens: Vec<SignedPermutation> = d.generators.iter().map(|&i| self.h.elements()[i]).collect();
        orbit_sums_integral(self.rho, &gens)
    }

    /// Chains `(G0, G1)` inside `d` passing the local conditions at `p`.
    fn chains(&self, d: &Subgroup, p: Prime, first_only: bool) -> Vec<(usize, usize)> {
        let normal: Vec<usize> = (0..self.subgroups.len())
            .filter(|&i| {
                let s = &self.subgroups[i].elements;
                s.is_subset(&d.elements) && self.table.is_normal(s, d)
            })
            .collect();
        let mut out = Vec::new();
        for &i0 in &normal {
            for &i1 in &normal {
                let (g0, g1) = (&self.subgroups[i0].elements, &self.subgroups[i1].elements);
                if local_conditions(&self.table, d, g0, g1, p) {
                    out.push((i0, i1));
                    if first_only {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// All witnesses at `p` (strong ones only if `strong_only`).
    pub fn filtrations(&self, p: Prime, strong_only: bool) -> Vec<Filtration> {
        let found: Vec<Vec<Filtration>> = self
            .subgroups
            .par_iter()
            .map(|d| {
                if strong_only && !self.is_strong(d) {
                    return vec![];
                }
                self.chains(d, p, false)
                    .into_iter()
                    .map(|(i0, i1)| Filtration {
                        d: self.to_group(&d.elements),
                        g0: self.to_group(&self.subgroups[i0].elements),
                        g1: self.to_group(&self.subgroups[i1].elements),
                        p,
                    })
                    .collect()
            })
            .collect();
        found.into_iter().flatten().collect()
    }

    /// Existence only, with early exit.
    pub fn exists(&self, p: Prime, strong: bool) -> bool {
        self.subgroups.iter().any(|d| (!strong || self.is_strong(d)) && !self.chains(d, p, true).is_empty())
    }
}

/// Enumerates `D ⊆ G ∩ Stab(w)` and normal chains `(G0, G1)` in `D` passing
/// the local conditions at `p`.
pub fn find_admissible_filtrations(rho: &WeightedPermRep, p: Prime, strong_only: bool) -> Result<AdmissibilityReport> {
    let search = FiltrationSearch::new(rho)?;
    let all = search.filtrations(p, false);
    let strong = all.iter().any(|f| orbit_sums_integral(rho, f.d.generators()));
    let witnesses = if strong_only {
        all.into_iter().filter(|f| orbit_sums_integral(rho, f.d.generators())).collect()
    } else {
        all
    };
    let weak = strong || !witnesses.is_empty();
    Ok(AdmissibilityReport { weak, strong, witnesses, checked_p: vec![p] })
}

/// Primes from `sweep` at which a (strong, if requested) filtration exists.
pub fn admissible_primes(rho: &WeightedPermRep, sweep: &[Prime]) -> Result<Vec<(Prime, bool)>> {
    let search = FiltrationSearch::new(rho)?;
    Ok(sweep.iter().filter(|&&p| search.exists(p, false)).map(|&p| (p, search.exists(p, true))).collect())
}
