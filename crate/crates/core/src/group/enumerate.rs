//! Enumeration of transitive subgroups of `W_{2g}` containing `ι`, up to
//! conjugation by `Stab(w)`.
//!
//! A transitive `G ∋ ι` is an extension of its image `G⁺ ⊆ S_g` (transitive on
//! the pairs) by its flip kernel `C = G ∩ (Z/2)^g`, a `G⁺`-submodule containing
//! the all-ones vector. So we run over transitive `P ⊆ S_g` up to conjugacy,
//! over `P`-submodules `C ∋ (1,…,1)`, and over the lifts of a generating set of
//! `P` modulo `C`; the groups with `G ∩ (Z/2)^g = C` are kept and deduplicated
//! up to `W_{2g}`-conjugacy. Each `W_{2g}`-class then splits into
//! `Stab(w)`-classes indexed by the double cosets `Stab(w) \ W_{2g} / N(H)`.
//!
//! [`enumerate_by_quotient_search`] is an independent, much slower route that
//! enumerates every subgroup of `W_{2g}/⟨ι⟩` and pulls back; it is kept as a
//! cross-check for small `g`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::small::CayleyTable;
use super::{
    canonical_key, factorial, hyperoctahedral_order, lehmer_rank, lehmer_unrank, stabilizer_of_weight, BitSet,
    CanonicalKey, PermGroup, SignedPermutation, MAX_G,
};
use crate::error::{Error, Result};
use crate::wpr::WeightFunction;

/// Default largest `g` accepted by the enumerator.
pub const DEFAULT_MAX_G: usize = 6;

/// Position of a `Stab(w)`-class inside the enumeration: the index of its
/// `W_{2g}`-class and the least rank of its double coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub wclass: usize,
    pub coset_rank: u32,
}

/// One `Stab(w)`-conjugacy class of transitive subgroups containing `ι`.
#[derive(Clone, Debug)]
pub struct TransitiveClass {
    pub group: PermGroup,
    pub key: ClassKey,
    /// Stable label `"{2g}W.{order}.{wclass}.{coset}"`.
    pub label: String,
}

/// The `W_{2g}`-conjugacy classes of transitive subgroups containing `ι`.
pub struct TransitiveCatalog {
    g: usize,
    classes: Vec<WClass>,
}

struct WClass {
    group: PermGroup,
    normalizer_gens: Vec<SignedPermutation>,
}

impl TransitiveCatalog {
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &PermGroup> {
        self.classes.iter().map(|c| &c.group)
    }

    /// Index of the `W_{2g}`-class containing `group`, if it is transitive and contains `ι`.
    pub fn locate(&self, group: &PermGroup) -> Option<usize> {
        let full = PermGroup::full(self.g);
        let key = canonical_key(group, &full);
        self.classes.iter().position(|c| c.group.order() == group.order() && canonical_key(&c.group, &full) == key)
    }
}

fn catalog_cache() -> &'static Mutex<HashMap<usize, Arc<TransitiveCatalog>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TransitiveCatalog>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the process-wide cache) the catalog for `g`.
pub fn transitive_catalog(g: usize, max_g: usize) -> Result<Arc<TransitiveCatalog>> {
    if g == 0 {
        return Err(Error::Input("g must be positive".into()));
    }
    if g > max_g || g > MAX_G {
        return Err(Error::ResourceLimit(format!(
            "subgroup enumeration for g = {g} exceeds the configured limit {}",
            max_g.min(MAX_G)
        )));
    }
    if let Some(c) = catalog_cache().lock().expect("cache poisoned").get(&g) {
        return Ok(c.clone());
    }
    let built = Arc::new(build_catalog(g));
    catalog_cache().lock().expect("cache poisoned").entry(g).or_insert_with(|| built.clone());
    Ok(built)
}

/// One representative per `Stab(w)`-conjugacy class of transitive subgroups of
/// `W_{2g}` containing `ι`, sorted by order and then by [`ClassKey`].
pub fn enumerate_transitive_subgroups(g: usize, w: &WeightFunction) -> Result<Vec<TransitiveClass>> {
    enumerate_transitive_subgroups_with_limit(g, w, DEFAULT_MAX_G)
}

pub fn enumerate_transitive_subgroups_with_limit(
    g: usize,
    w: &WeightFunction,
    max_g: usize,
) -> Result<Vec<TransitiveClass>> {
    if w.g() != g {
        return Err(Error::SizeMismatch { expected: g, found: w.g() });
    }
    let catalog = transitive_catalog(g, max_g)?;
    let stab = stabilizer_of_weight(w);
    let mut out: Vec<TransitiveClass> =
        catalog.classes.par_iter().enumerate().flat_map_iter(|(k, wc)| split_by_stabilizer(g, k, wc, &stab)).collect();
    out.sort_by(|a, b| a.group.order().cmp(&b.group.order()).then(a.key.cmp(&b.key)));
    Ok(out)
}

fn split_by_stabilizer(g: usize, wclass: usize, wc: &WClass, stab: &PermGroup) -> Vec<TransitiveClass> {
    let n = hyperoctahedral_order(g);
    let mut visited = BitSet::new(n);
    let mut out = Vec::new();
    for t in 0..n {
        if visited.contains(t) {
            continue;
        }
        visited.insert(t);
        let mut queue = VecDeque::from([t as u32]);
        while let Some(r) = queue.pop_front() {
            let x = SignedPermutation::unrank(g, r);
            for s in stab.generators() {
                let y = s.mul(&x).rank();
                if visited.insert(y as usize) {
                    queue.push_back(y);
                }
            }
            for m in &wc.normalizer_gens {
                let y = x.mul(m).rank();
                if visited.insert(y as usize) {
                    queue.push_back(y);
                }
            }
        }
        let tau = SignedPermutation::unrank(g, t as u32);
        let group = wc.group.conjugate_by(&tau);
        let label = format!("{}W.{}.{}.{}", 2 * g, group.order(), wclass + 1, t);
        out.push(TransitiveClass { group, key: ClassKey { wclass, coset_rank: t as u32 }, label });
    }
    out
}

type Perm = [u8; MAX_G];

fn perm_mul(a: &Perm, b: &Perm, g: usize) -> Perm {
    let mut c = [0u8; MAX_G];
    for i in 0..g {
        c[i] = a[b[i] as usize];
    }
    c
}

/// Permutes the coordinates of a flip vector: `(p·v)_{p(i)} = v_i`.
fn act_on_vector(p: &Perm, v: u32, g: usize) -> u32 {
    (0..g).fold(0, |acc, i| if v >> i & 1 == 1 { acc | 1 << p[i] } else { acc })
}

fn is_transitive_perm_group(t: &CayleyTable, elems: &[Perm], sub: &BitSet, g: usize) -> bool {
    let _ = t;
    let mut reach = 1u32;
    for x in sub.iter() {
        reach |= 1 << elems[x][0];
    }
    reach == (1u32 << g) - 1
}

fn build_catalog(g: usize) -> TransitiveCatalog {
    let sg_order = factorial(g);
    let perms: Vec<Perm> = (0..sg_order as u32).map(|r| lehmer_unrank(g, r)).collect();
    debug_assert!(perms.iter().enumerate().all(|(i, p)| lehmer_rank(&p[..g]) as usize == i));
    let table = CayleyTable::from_elements(&perms, |a, b| perm_mul(a, b, g));

    // transitive subgroups of S_g, up to conjugacy
    let subs = table.all_subgroups();
    let transitive: Vec<_> =
        subs.into_iter().filter(|s| is_transitive_perm_group(&table, &perms, &s.elements, g)).collect();
    let mut assigned: HashSet<BitSet> = HashSet::new();
    let mut reps = Vec::new();
    for s in &transitive {
        if assigned.contains(&s.elements) {
            continue;
        }
        let mut normalizer = Vec::new();
        for t in 0..sg_order {
            let mut conj = BitSet::new(sg_order);
            for x in s.elements.iter() {
                conj.insert(table.conj(t, x));
            }
            if conj == s.elements {
                normalizer.push(t);
            }
            assigned.insert(conj);
        }
        reps.push((s.clone(), normalizer));
    }

    let per_p: Vec<Vec<PermGroup>> = reps
        .par_iter()
        .map(|(p, normalizer)| {
            let p_elems: Vec<Perm> = p.elements.iter().map(|i| perms[i]).collect();
            let p_gens = two_generators(&table, &p.elements).unwrap_or_else(|| p.generators.clone());
            let p_gens: Vec<Perm> = p_gens.iter().map(|&i| perms[i]).collect();
            let n_gens: Vec<Perm> =
                table.generating_set(&index_set(sg_order, normalizer)).iter().map(|&i| perms[i]).collect();
            lifts_for(g, &p_elems, &p_gens, &n_gens)
        })
        .collect();

    let groups: Vec<PermGroup> = per_p.into_iter().flatten().collect();
    let full = PermGroup::full(g);
    let classes = groups
        .into_par_iter()
        .map(|group| {
            let normalizer: Vec<SignedPermutation> = full
                .elements()
                .iter()
                .copied()
                .filter(|t| group.generators().iter().all(|h| group.contains(&t.conjugate_of(h))))
                .collect();
            let normalizer_gens = super::small_generating_set(g, &normalizer);
            WClass { group, normalizer_gens }
        })
        .collect();
    TransitiveCatalog { g, classes }
}

fn index_set(n: usize, idx: &[usize]) -> BitSet {
    let mut b = BitSet::new(n);
    for &i in idx {
        b.insert(i);
    }
    b
}

/// A generating pair (or single generator) of the subgroup, if one exists.
fn two_generators(table: &CayleyTable, sub: &BitSet) -> Option<Vec<usize>> {
    let n = sub.len();
    if n == 1 {
        return Some(vec![]);
    }
    let elems: Vec<usize> = sub.iter().collect();
    if let Some(&x) = elems.iter().find(|&&x| table.element_order(x) == n) {
        return Some(vec![x]);
    }
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            if table.closure(&[a, b]).len() == n {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

/// All transitive `G ∋ ι` with image `P`, up to conjugation by the lift of
/// `N_{S_g}(P)` times the flips.
fn lifts_for(g: usize, p_elems: &[Perm], p_gens: &[Perm], n_gens: &[Perm]) -> Vec<PermGroup> {
    let all_ones = (1u32 << g) - 1;
    let flip = |v: u32| SignedPermutation::from_perm_and_flips(g, &identity_perm(g), v);
    let ident = identity_perm(g);

    // P-submodules of F_2^g containing the all-ones vector
    let span = |vectors: &[u32]| -> BitSet {
        let mut set = BitSet::new(1 << g);
        set.insert(0);
        let mut queue: VecDeque<u32> = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &b in vectors {
                for p in p_elems {
                    let u = v ^ act_on_vector(p, b, g);
                    if set.insert(u as usize) {
                        queue.push_back(u);
                    }
                }
            }
        }
        set
    };
    let mut modules: Vec<(BitSet, Vec<u32>)> = vec![(span(&[all_ones]), vec![all_ones])];
    let mut seen_mod: HashSet<BitSet> = modules.iter().map(|m| m.0.clone()).collect();
    let mut i = 0;
    while i < modules.len() {
        let (set, basis) = modules[i].clone();
        for v in 0..(1u32 << g) {
            if set.contains(v as usize) {
                continue;
            }
            let mut b = basis.clone();
            b.push(v);
            let s = span(&b);
            if seen_mod.insert(s.clone()) {
                modules.push((s, b));
            }
        }
        i += 1;
    }

    let p_order = p_elems.len();
    let mut conj_gens: Vec<SignedPermutation> =
        n_gens.iter().map(|p| SignedPermutation::from_perm_and_flips(g, &p[..g], 0)).collect();
    for i in 0..g {
        conj_gens.push(flip(1 << i));
    }
    let n = hyperoctahedral_order(g);
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut reps = Vec::new();
    for (cset, basis) in &modules {
        let c_order = cset.len();
        let coset_reps: Vec<u32> = (0..(1u32 << g)).filter(|&v| cset.iter().all(|c| v <= v ^ c as u32)).collect();
        let c_gens: Vec<SignedPermutation> = basis.iter().map(|&v| flip(v)).collect();
        let k = p_gens.len();
        let total = coset_reps.len().pow(k as u32);
        for idx in 0..total {
            let mut gens = c_gens.clone();
            let mut rest = idx;
            for pg in p_gens {
                let r = coset_reps[rest % coset_reps.len()];
                rest /= coset_reps.len();
                gens.push(SignedPermutation::from_perm_and_flips(g, &pg[..g], r));
            }
            if k == 0 {
                gens.push(SignedPermutation::from_perm_and_flips(g, &ident[..g], 0));
            }
            let Some(group) = PermGroup::generate_bounded(g, &gens, c_order * p_order) else {
                continue;
            };
            if group.order() != c_order * p_order {
                continue;
            }
            let set = group.rank_set();
            if seen.contains(&set) {
                continue;
            }
            // mark the whole conjugation orbit
            let mut queue = VecDeque::from([set.clone()]);
            seen.insert(set);
            while let Some(cur) = queue.pop_front() {
                for t in &conj_gens {
                    let ti = t.inverse();
                    let mut next = BitSet::new(n);
                    for r in cur.iter() {
                        let x = SignedPermutation::unrank(g, r as u32);
                        next.insert(t.mul(&x).mul(&ti).rank() as usize);
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            reps.push(group);
        }
    }
    reps
}

fn identity_perm(g: usize) -> Perm {
    let mut p = [0u8; MAX_G];
    for (i, x) in p.iter_mut().enumerate().take(g) {
        *x = i as u8;
    }
    p
}

/// Reference enumeration: every subgroup of `W_{2g}/⟨ι⟩`, pulled back, filtered
/// to transitive ones, and grouped into `Stab(w)`-classes by [`canonical_key`].
/// Exponential in the group order; intended for `g ≤ 4`.
pub fn enumerate_by_quotient_search(g: usize, w: &WeightFunction) -> Result<Vec<(CanonicalKey, PermGroup)>> {
    if g > 4 {
        return Err(Error::ResourceLimit("quotient search is limited to g <= 4".into()));
    }
    let stab = stabilizer_of_weight(w);
    let (table, reps) = quotient_table(g);
    let iota = SignedPermutation::conjugation(g);
    let mut by_key: HashMap<CanonicalKey, PermGroup> = HashMap::new();
    for sub in table.all_subgroups() {
        let mut gens: Vec<SignedPermutation> = sub.generators.iter().map(|&i| reps[i]).collect();
        gens.push(iota);
        let group = PermGroup::generate(g, &gens)?;
        if group.is_transitive() {
            let key = canonical_key(&group, &stab);
            by_key.entry(key).or_insert(group);
        }
    }
    let mut out: Vec<_> = by_key.into_iter().collect();
    out.sort_by(|a, b| a.1.order().cmp(&b.1.order()).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Multiplication table of `W_{2g}/⟨ι⟩` with the least-rank coset representatives.
pub fn quotient_table(g: usize) -> (CayleyTable, Vec<SignedPermutation>) {
    let iota = SignedPermutation::conjugation(g);
    let canon = |x: &SignedPermutation| {
        let y = iota.mul(x);
        if y.rank() < x.rank() {
            y
        } else {
            *x
        }
    };
    let n = hyperoctahedral_order(g) as u32;
    let mut reps: Vec<SignedPermutation> =
        (0..n).map(|r| SignedPermutation::unrank(g, r)).filter(|x| canon(x) == *x).collect();
    reps.sort_by_key(|x| x.rank());
    let table = CayleyTable::from_elements(&reps, |a, b| canon(&a.mul(b)));
    (table, reps)
}
