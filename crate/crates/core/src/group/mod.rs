//! Arithmetic and search in the hyperoctahedral group `W_{2g}`.

mod bitset;
pub mod enumerate;
mod perm;
pub mod small;

use std::collections::{HashSet, VecDeque};
use std::fmt;

pub use bitset::BitSet;
pub use perm::{conj_slot, parse_generator_list, PairedSymbol, SignedPermutation, MAX_G};
pub(crate) use perm::{factorial, lehmer_rank, lehmer_unrank};

use crate::error::{Error, Result};
use crate::wpr::WeightFunction;

/// Order of `W_{2g}`, i.e. `2^g · g!`.
pub fn hyperoctahedral_order(g: usize) -> usize {
    factorial(g) << g
}

/// A finite subgroup of `W_{2g}` with its elements materialized, sorted by rank.
#[derive(Clone)]
pub struct PermGroup {
    g: usize,
    generators: Vec<SignedPermutation>,
    elements: Vec<SignedPermutation>,
}

impl PermGroup {
    /// Closure of `gens` under composition (breadth-first products).
    pub fn generate(g: usize, gens: &[SignedPermutation]) -> Result<PermGroup> {
        if g == 0 || g > MAX_G {
            return Err(Error::Input(format!("dimension {g} outside 1..={MAX_G}")));
        }
        if let Some(bad) = gens.iter().find(|s| s.g() != g) {
            return Err(Error::SizeMismatch { expected: g, found: bad.g() });
        }
        let gens: Vec<SignedPermutation> = gens.iter().copied().filter(|s| !s.is_identity()).collect();
        let mut seen = BitSet::new(hyperoctahedral_order(g));
        let id = SignedPermutation::identity(g);
        seen.insert(0);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = s.mul(&x);
                if seen.insert(y.rank() as usize) {
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        elements.sort_by_key(|e| e.rank());
        Ok(PermGroup { g, generators: gens, elements })
    }

    /// Closure of `gens`, abandoned (returning `None`) as soon as it exceeds `limit` elements.
    pub fn generate_bounded(g: usize, gens: &[SignedPermutation], limit: usize) -> Option<PermGroup> {
        let gens: Vec<SignedPermutation> = gens.iter().copied().filter(|s| !s.is_identity()).collect();
        let mut seen = BitSet::new(hyperoctahedral_order(g));
        let id = SignedPermutation::identity(g);
        seen.insert(0);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &gens {
                let y = s.mul(&x);
                if seen.insert(y.rank() as usize) {
                    if elements.len() == limit {
                        return None;
                    }
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        elements.sort_by_key(|e| e.rank());
        Some(PermGroup { g, generators: gens, elements })
    }

    /// Like [`PermGroup::generate`] but starting from raw slot images, so that
    /// non-pairing-preserving input is reported as an invalid generator.
    pub fn generate_from_slots(g: usize, gens: &[Vec<usize>]) -> Result<PermGroup> {
        let gens: Vec<SignedPermutation> =
            gens.iter().map(|s| SignedPermutation::from_slots(g, s)).collect::<Result<_>>()?;
        Self::generate(g, &gens)
    }

    /// Parses generators in cycle notation, separated by commas.
    pub fn parse(g: usize, gens: &str) -> Result<PermGroup> {
        Self::generate(g, &parse_generator_list(gens, g)?)
    }

    /// As [`PermGroup::parse`], with `ι` adjoined: generators of `G/⟨ι⟩` suffice.
    pub fn parse_with_conjugation(g: usize, gens: &str) -> Result<PermGroup> {
        let mut list = parse_generator_list(gens, g)?;
        list.push(SignedPermutation::conjugation(g));
        Self::generate(g, &list)
    }

    pub(crate) fn from_parts(
        g: usize,
        generators: Vec<SignedPermutation>,
        mut elements: Vec<SignedPermutation>,
    ) -> PermGroup {
        elements.sort_by_key(|e| e.rank());
        PermGroup { g, generators, elements }
    }

    pub fn trivial(g: usize) -> PermGroup {
        PermGroup { g, generators: vec![], elements: vec![SignedPermutation::identity(g)] }
    }

    /// The full group `W_{2g}`.
    pub fn full(g: usize) -> PermGroup {
        let mut gens = vec![SignedPermutation::parse_cycles("(1 1~)", g).expect("valid")];
        if g >= 2 {
            let swap: Vec<u8> = (0..g as u8).map(|i| if i < 2 { 1 - i } else { i }).collect();
            let cycle: Vec<u8> = (0..g as u8).map(|i| (i + 1) % g as u8).collect();
            gens.push(SignedPermutation::from_perm_and_flips(g, &swap, 0));
            gens.push(SignedPermutation::from_perm_and_flips(g, &cycle, 0));
        }
        let n = hyperoctahedral_order(g) as u32;
        let elements = (0..n).map(|r| SignedPermutation::unrank(g, r)).collect();
        PermGroup { g, generators: gens, elements }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[SignedPermutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    pub fn ranks(&self) -> Vec<u32> {
        self.elements.iter().map(|e| e.rank()).collect()
    }

    pub fn rank_set(&self) -> BitSet {
        let mut b = BitSet::new(hyperoctahedral_order(self.g));
        for e in &self.elements {
            b.insert(e.rank() as usize);
        }
        b
    }

    pub fn contains(&self, x: &SignedPermutation) -> bool {
        x.g() == self.g && self.elements.binary_search_by_key(&x.rank(), |e| e.rank()).is_ok()
    }

    pub fn contains_conjugation(&self) -> bool {
        self.contains(&SignedPermutation::conjugation(self.g))
    }

    /// Orbit of a slot under the group.
    pub fn orbit(&self, slot: usize) -> Vec<usize> {
        let mut seen = vec![false; 2 * self.g];
        seen[slot] = true;
        let mut orbit = vec![slot];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for s in &self.generators {
                let y = s.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// All orbits on `X_{2g}`, each sorted, in order of least slot.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; 2 * self.g];
        let mut out = Vec::new();
        for s in 0..2 * self.g {
            if !done[s] {
                let o = self.orbit(s);
                for &x in &o {
                    done[x] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// True iff the orbit of the symbol `1` is all of `X_{2g}`.
    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == 2 * self.g
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.g == other.g && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn is_normal_in(&self, other: &PermGroup) -> bool {
        other.generators.iter().all(|t| self.generators.iter().all(|h| self.contains(&t.conjugate_of(h))))
    }

    pub fn intersection(&self, other: &PermGroup) -> PermGroup {
        let elements: Vec<SignedPermutation> = self.elements.iter().copied().filter(|e| other.contains(e)).collect();
        let generators = small_generating_set(self.g, &elements);
        PermGroup { g: self.g, generators, elements }
    }

    /// `τ G τ⁻¹`.
    pub fn conjugate_by(&self, tau: &SignedPermutation) -> PermGroup {
        let generators = self.generators.iter().map(|h| tau.conjugate_of(h)).collect();
        let elements = self.elements.iter().map(|h| tau.conjugate_of(h)).collect();
        PermGroup::from_parts(self.g, generators, elements)
    }

    /// The subgroup of elements acting trivially on the pairs `{i, ī}`.
    pub fn flip_kernel(&self) -> Vec<SignedPermutation> {
        self.elements.iter().copied().filter(|e| e.is_pure_flip()).collect()
    }

    pub fn generators_to_cycles(&self) -> Vec<String> {
        self.generators.iter().map(|s| s.to_cycles()).collect()
    }

    /// Generators of `G/⟨ι⟩`: a small generating set of the group modulo the
    /// conjugation element (omitting generators that become trivial).
    pub fn generators_mod_conjugation(&self) -> Vec<SignedPermutation> {
        let iota = SignedPermutation::conjugation(self.g);
        let quotient_rep = |x: &SignedPermutation| {
            let y = iota.mul(x);
            if y.rank() < x.rank() {
                y
            } else {
                *x
            }
        };
        let base = PermGroup::generate(self.g, &[iota]).expect("valid");
        let mut gens: Vec<SignedPermutation> = Vec::new();
        let mut current = base;
        for e in &self.elements {
            if current.order() == self.order() {
                break;
            }
            if !current.contains(e) {
                let mut all = current.generators.clone();
                all.push(*e);
                current = PermGroup::generate(self.g, &all).expect("same g");
                gens.push(quotient_rep(e));
            }
        }
        gens
    }
}

/// Greedy generating set: scan elements in order, keeping those not yet generated.
pub fn small_generating_set(g: usize, elements: &[SignedPermutation]) -> Vec<SignedPermutation> {
    let mut gens = Vec::new();
    let mut current = PermGroup::trivial(g);
    for e in elements {
        if current.order() == elements.len() {
            break;
        }
        if !current.contains(e) {
            gens.push(*e);
            current = PermGroup::generate(g, &gens).expect("same g");
        }
    }
    gens
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.elements == other.elements
    }
}
impl Eq for PermGroup {}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(g={}, order={}, gens=[{}])", self.g, self.order(), self.generators_to_cycles().join(", "))
    }
}

/// `Stab(w) = {σ ∈ W_{2g} : w(σ(x)) = w(x) for all x}`, by filtering `W_{2g}`.
pub fn stabilizer_of_weight(w: &WeightFunction) -> PermGroup {
    let g = w.g();
    let n = hyperoctahedral_order(g) as u32;
    let elements: Vec<SignedPermutation> = (0..n)
        .map(|r| SignedPermutation::unrank(g, r))
        .filter(|s| (0..2 * g).all(|x| w.value_at(s.apply(x)) == w.value_at(x)))
        .collect();
    let generators = small_generating_set(g, &elements);
    PermGroup { g, generators, elements }
}

/// Canonical representative of a subgroup up to conjugation by `by`: the
/// lexicographically least sorted list of element ranks over the conjugation
/// orbit. Two groups get equal keys iff they are conjugate by an element of `by`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<u32>);

pub fn canonical_key(group: &PermGroup, by: &PermGroup) -> CanonicalKey {
    let g = group.g;
    let start = group.rank_set();
    let mut best = start.clone();
    let mut seen: HashSet<BitSet> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for t in &by.generators {
            let ti = t.inverse();
            let mut next = BitSet::new(hyperoctahedral_order(g));
            for r in cur.iter() {
                let x = SignedPermutation::unrank(g, r as u32);
                next.insert(t.mul(&x).mul(&ti).rank() as usize);
            }
            if seen.insert(next.clone()) {
                if next.cmp_as_sorted_lists(&best).is_lt() {
                    best = next.clone();
                }
                queue.push_back(next);
            }
        }
    }
    CanonicalKey(best.iter().map(|r| r as u32).collect())
}
