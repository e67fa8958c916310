//! Paired symbols and signed permutations of `X_{2g} = {1, ..., g, ḡ, ..., 1̄}`.
//!
//! Symbols are stored as slots `0..2g` in the canonical order `1, ..., g, ḡ, ..., 1̄`,
//! so the unbarred symbol `i` lives in slot `i - 1` and its partner `ī` in slot
//! `2g - i`. The conjugate of slot `s` is therefore `2g - 1 - s`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension representable by [`SignedPermutation`].
pub const MAX_G: usize = 8;
const MAX_SLOTS: usize = 2 * MAX_G;

/// One of the `2g` symbols `i` or `ī`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairedSymbol {
    pub index: u8,
    pub barred: bool,
}

impl PairedSymbol {
    pub fn new(index: u8, barred: bool) -> Self {
        PairedSymbol { index, barred }
    }

    pub fn conjugate(self) -> Self {
        PairedSymbol { index: self.index, barred: !self.barred }
    }

    /// Slot of this symbol in the canonical order for dimension `g`.
    pub fn slot(self, g: usize) -> usize {
        let i = self.index as usize;
        if self.barred {
            2 * g - i
        } else {
            i - 1
        }
    }

    pub fn from_slot(slot: usize, g: usize) -> Self {
        if slot < g {
            PairedSymbol::new(slot as u8 + 1, false)
        } else {
            PairedSymbol::new((2 * g - slot) as u8, true)
        }
    }
}

impl fmt::Display for PairedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "{}~", self.index)
        } else {
            write!(f, "{}", self.index)
        }
    }
}

#[inline]
pub fn conj_slot(slot: usize, g: usize) -> usize {
    2 * g - 1 - slot
}

/// A pairing-preserving permutation of `X_{2g}`: an element of `W_{2g}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    g: u8,
    images: [u8; MAX_SLOTS],
}

impl SignedPermutation {
    pub fn identity(g: usize) -> Self {
        assert!((1..=MAX_G).contains(&g), "dimension {g} out of range");
        let mut images = [0u8; MAX_SLOTS];
        for (s, im) in images.iter_mut().enumerate().take(2 * g) {
            *im = s as u8;
        }
        SignedPermutation { g: g as u8, images }
    }

    /// The complex conjugation element `ι = (1 1̄)(2 2̄)...(g ḡ)`.
    pub fn conjugation(g: usize) -> Self {
        let mut p = Self::identity(g);
        for s in 0..2 * g {
            p.images[s] = conj_slot(s, g) as u8;
        }
        p
    }

    /// Builds a permutation from slot images, checking bijectivity and that the
    /// pairing `{i, ī}` is preserved.
    pub fn from_slots(g: usize, slots: &[usize]) -> Result<Self> {
        if g == 0 || g > MAX_G {
            return Err(Error::Input(format!("dimension {g} outside 1..={MAX_G}")));
        }
        if slots.len() != 2 * g {
            return Err(Error::SizeMismatch { expected: g, found: slots.len() / 2 });
        }
        let mut seen = [false; MAX_SLOTS];
        let mut images = [0u8; MAX_SLOTS];
        for (s, &t) in slots.iter().enumerate() {
            if t >= 2 * g || seen[t] {
                return Err(Error::InvalidGenerator("images do not form a bijection".into()));
            }
            seen[t] = true;
            images[s] = t as u8;
        }
        let p = SignedPermutation { g: g as u8, images };
        if !p.preserves_pairing() {
            return Err(Error::InvalidGenerator(format!("{p} does not preserve the pairing {{i, i~}}")));
        }
        Ok(p)
    }

    pub fn from_symbols(g: usize, images: &[PairedSymbol]) -> Result<Self> {
        if images.iter().any(|s| s.index == 0 || s.index as usize > g) {
            return Err(Error::InvalidGenerator("symbol index outside 1..g".into()));
        }
        let slots: Vec<usize> = images.iter().map(|s| s.slot(g)).collect();
        Self::from_slots(g, &slots)
    }

    /// Builds the signed permutation sending `i` to `perm[i]` (0-based pair
    /// indices), barring the image when bit `i` of `flips` is set.
    pub fn from_perm_and_flips(g: usize, perm: &[u8], flips: u32) -> Self {
        let mut p = Self::identity(g);
        for i in 0..g {
            let target = perm[i] as usize;
            let flipped = flips >> i & 1 == 1;
            let (a, b) = if flipped { (conj_slot(target, g), target) } else { (target, conj_slot(target, g)) };
            p.images[i] = a as u8;
            p.images[conj_slot(i, g)] = b as u8;
        }
        p
    }

    #[inline]
    pub fn g(&self) -> usize {
        self.g as usize
    }

    #[inline]
    pub fn apply(&self, slot: usize) -> usize {
        self.images[slot] as usize
    }

    pub fn apply_symbol(&self, x: PairedSymbol) -> PairedSymbol {
        PairedSymbol::from_slot(self.apply(x.slot(self.g())), self.g())
    }

    pub fn images(&self) -> &[u8] {
        &self.images[..2 * self.g()]
    }

    fn preserves_pairing(&self) -> bool {
        let g = self.g();
        (0..2 * g).all(|s| self.apply(conj_slot(s, g)) == conj_slot(self.apply(s), g))
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &SignedPermutation) -> Result<SignedPermutation> {
        if self.g != other.g {
            return Err(Error::SizeMismatch { expected: self.g(), found: other.g() });
        }
        Ok(self.mul(other))
    }

    /// Unchecked composition `x ↦ self(other(x))`; both sides must share `g`.
    #[inline]
    pub fn mul(&self, other: &SignedPermutation) -> SignedPermutation {
        debug_assert_eq!(self.g, other.g);
        let mut images = [0u8; MAX_SLOTS];
        for s in 0..2 * self.g() {
            images[s] = self.images[other.images[s] as usize];
        }
        SignedPermutation { g: self.g, images }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut images = [0u8; MAX_SLOTS];
        for s in 0..2 * self.g() {
            images[self.images[s] as usize] = s as u8;
        }
        SignedPermutation { g: self.g, images }
    }

    /// `self · x · self⁻¹`.
    pub fn conjugate_of(&self, x: &SignedPermutation) -> SignedPermutation {
        self.mul(x).mul(&self.inverse())
    }

    pub fn is_identity(&self) -> bool {
        (0..2 * self.g()).all(|s| self.apply(s) == s)
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut k = 1;
        while !p.is_identity() {
            p = p.mul(self);
            k += 1;
        }
        k
    }

    pub fn pow(&self, mut e: usize) -> SignedPermutation {
        let mut base = *self;
        let mut acc = Self::identity(self.g());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Image of the pair `{i, ī}` (0-based pair index).
    #[inline]
    pub fn pair_image(&self, i: usize) -> usize {
        let t = self.apply(i);
        let g = self.g();
        if t < g {
            t
        } else {
            conj_slot(t, g)
        }
    }

    /// Bitmask of pairs whose unbarred symbol is sent to a barred one.
    #[inline]
    pub fn flips(&self) -> u32 {
        let g = self.g();
        (0..g).fold(0, |acc, i| if self.apply(i) >= g { acc | 1 << i } else { acc })
    }

    /// True when the element acts trivially on pairs, i.e. lies in `(Z/2)^g`.
    pub fn is_pure_flip(&self) -> bool {
        (0..self.g()).all(|i| self.pair_image(i) == i)
    }

    /// Dense index in `0..2^g·g!`; the identity has rank 0.
    pub fn rank(&self) -> u32 {
        let g = self.g();
        let mut perm = [0u8; MAX_G];
        for (i, p) in perm.iter_mut().enumerate().take(g) {
            *p = self.pair_image(i) as u8;
        }
        (lehmer_rank(&perm[..g]) << g) | self.flips()
    }

    pub fn unrank(g: usize, rank: u32) -> SignedPermutation {
        let flips = rank & ((1 << g) - 1);
        let perm = lehmer_unrank(g, rank >> g);
        Self::from_perm_and_flips(g, &perm[..g], flips)
    }

    /// Parses cycle notation such as `"(1 2)(1~ 2~)"`. The empty string and
    /// `"()"` denote the identity.
    pub fn parse_cycles(s: &str, g: usize) -> Result<SignedPermutation> {
        if g == 0 || g > MAX_G {
            return Err(Error::Input(format!("dimension {g} outside 1..={MAX_G}")));
        }
        let mut slots: Vec<usize> = (0..2 * g).collect();
        let mut used = vec![false; 2 * g];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body_start = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = body_start.find(')').ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let body = &body_start[..close];
            rest = body_start[close + 1..].trim_start();
            let cycle: Vec<usize> =
                body.split_whitespace().map(|tok| parse_symbol(tok, g).map(|x| x.slot(g))).collect::<Result<_>>()?;
            for &c in &cycle {
                if used[c] {
                    return Err(Error::Parse(format!("symbol repeated across cycles in {s:?}")));
                }
                used[c] = true;
            }
            for k in 0..cycle.len() {
                slots[cycle[k]] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_slots(g, &slots)
    }

    /// Cycle notation, each cycle starting at its least symbol under the order
    /// `1 < 2 < ... < g < 1~ < ... < g~`; fixed points are omitted.
    pub fn to_cycles(&self) -> String {
        let g = self.g();
        let key = |s: usize| {
            let x = PairedSymbol::from_slot(s, g);
            (x.barred, x.index)
        };
        let mut order: Vec<usize> = (0..2 * g).collect();
        order.sort_by_key(|&s| key(s));
        let mut seen = vec![false; 2 * g];
        let mut out = String::new();
        for &start in &order {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.apply(cur);
            }
            out.push('(');
            let parts: Vec<String> = cyc.iter().map(|&c| PairedSymbol::from_slot(c, g).to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn parse_symbol(tok: &str, g: usize) -> Result<PairedSymbol> {
    let (digits, barred) = match tok.strip_suffix('~') {
        Some(d) => (d, true),
        None => (tok, false),
    };
    let index: usize = digits.parse().map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))?;
    if index == 0 || index > g {
        return Err(Error::Parse(format!("symbol {tok:?} outside 1..{g}")));
    }
    Ok(PairedSymbol::new(index as u8, barred))
}

/// Parses a comma-separated list of generators in cycle notation, e.g.
/// `"(1 2)(1~ 2~), (1 2~ 1~ 2)"`.
pub fn parse_generator_list(s: &str, g: usize) -> Result<Vec<SignedPermutation>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| SignedPermutation::parse_cycles(t, g)).collect()
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycles())
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPermutation[g={}]{}", self.g, self.to_cycles())
    }
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub(crate) fn lehmer_rank(perm: &[u8]) -> u32 {
    let n = perm.len();
    let mut rank = 0u32;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count() as u32;
        rank = rank * (n - i) as u32 + smaller;
    }
    rank
}

pub(crate) fn lehmer_unrank(n: usize, mut rank: u32) -> [u8; MAX_G] {
    let mut digits = [0u32; MAX_G];
    for i in (0..n).rev() {
        let base = (n - i) as u32;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut avail: Vec<u8> = (0..n as u8).collect();
    let mut out = [0u8; MAX_G];
    for i in 0..n {
        out[i] = avail.remove(digits[i] as usize);
    }
    out
}
