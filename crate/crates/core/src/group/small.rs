//! Small abstract groups given by a multiplication table, with exhaustive
//! subgroup enumeration. Used for `S_g`, quotients of `W_{2g}` and the
//! subgroup lattices searched by the admissibility filter.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use super::BitSet;

/// A finite group on the indices `0..n` with identity `0`.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

/// A subgroup of a [`CayleyTable`]: its element set and a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: BitSet,
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

impl CayleyTable {
    /// Builds the table for `elements` (which must be closed under `mul` and
    /// have the identity at index 0).
    pub fn from_elements<T, F>(elements: &[T], mul: F) -> CayleyTable
    where
        T: Eq + Hash + Clone,
        F: Fn(&T, &T) -> T,
    {
        let n = elements.len();
        let index: HashMap<&T, u32> = elements.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = mul(&elements[a], &elements[b]);
                table[a * n + b] = *index.get(&c).expect("element set must be closed");
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        CayleyTable { n, table, inv }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn conj(&self, t: usize, x: usize) -> usize {
        self.mul(self.mul(t, x), self.inv(t))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> BitSet {
        let mut set = BitSet::new(self.n);
        set.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(s, x);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    pub fn full(&self) -> Subgroup {
        let mut elements = BitSet::new(self.n);
        for i in 0..self.n {
            elements.insert(i);
        }
        let gens = self.generating_set(&elements);
        Subgroup { elements, generators: gens }
    }

    /// Greedy generating set of a subgroup given by its elements.
    pub fn generating_set(&self, set: &BitSet) -> Vec<usize> {
        let target = set.len();
        let mut gens = Vec::new();
        let mut cur = self.closure(&[]);
        for x in set.iter() {
            if cur.len() == target {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_normal(&self, sub: &BitSet, within: &Subgroup) -> bool {
        within.generators.iter().all(|&t| sub.iter().all(|h| sub.contains(self.conj(t, h))))
    }

    pub fn is_cyclic(&self, sub: &BitSet) -> bool {
        let n = sub.len();
        sub.iter().any(|x| self.element_order(x) == n)
    }

    /// Every subgroup of `within` (all of them, not up to conjugacy), found by
    /// breadth-first adjoining of single elements. Output is sorted by order,
    /// then by element list.
    pub fn all_subgroups_of(&self, within: &Subgroup) -> Vec<Subgroup> {
        let trivial = Subgroup { elements: self.closure(&[]), generators: vec![] };
        let mut seen: HashSet<BitSet> = HashSet::from([trivial.elements.clone()]);
        let mut out = vec![trivial.clone()];
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            let mut covered = h.elements.clone();
            for x in within.elements.iter() {
                if covered.contains(x) {
                    continue;
                }
                // <H, x> only depends on the coset xH
                for y in h.elements.iter() {
                    covered.insert(self.mul(x, y));
                }
                let mut gens = h.generators.clone();
                gens.push(x);
                let k = self.closure(&gens);
                if seen.insert(k.clone()) {
                    let sub = Subgroup { elements: k, generators: gens };
                    out.push(sub.clone());
                    queue.push_back(sub);
                }
            }
        }
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp_as_sorted_lists(&b.elements)));
        out
    }

    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups_of(&self.full())
    }

    /// Normal subgroups of `within` (as element sets), sorted like `all_subgroups_of`.
    pub fn normal_subgroups_of(&self, within: &Subgroup, candidates: &[Subgroup]) -> Vec<Subgroup> {
        candidates
            .iter()
            .filter(|s| s.elements.is_subset(&within.elements) && self.is_normal(&s.elements, within))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> CayleyTable {
        let elems: Vec<usize> = (0..n).collect();
        CayleyTable::from_elements(&elems, |a, b| (a + b) % n)
    }

    fn s3() -> CayleyTable {
        let mut perms = vec![[0u8, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        perms.sort();
        CayleyTable::from_elements(&perms, |a, b| [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]])
    }

    #[test]
    fn subgroup_counts() {
        // divisors of 12
        assert_eq!(cyclic(12).all_subgroups().len(), 6);
        assert_eq!(s3().all_subgroups().len(), 6);
        let klein: Vec<u8> = (0..4).collect();
        let v4 = CayleyTable::from_elements(&klein, |a, b| a ^ b);
        assert_eq!(v4.all_subgroups().len(), 5);
    }

    #[test]
    fn normality_in_s3() {
        let t = s3();
        let full = t.full();
        let subs = t.all_subgroups();
        let normal = t.normal_subgroups_of(&full, &subs);
        assert_eq!(normal.iter().map(|s| s.order()).collect::<Vec<_>>(), vec![1, 3, 6]);
    }
}
