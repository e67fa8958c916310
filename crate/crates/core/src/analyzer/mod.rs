//! Numerical analysis of a Frobenius polynomial: Newton polygon, angle rank
//! and exceptional multiplicative relations among normalized eigenvalues.
//!
//! Relations `Σ c_i θ_i + m·π = 0` are found by LLL on the integer-relation
//! embedding of `(θ_1/π, …, θ_g/π, 1)` and accepted only when the residual at
//! full precision is far below the embedding scale. Everything here is a
//! numerical certificate, not a proof.

pub mod lll;
pub mod roots;

use astro_float::{BigFloat, Consts};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::IsogenyLabel;
use crate::linalg::{RatMatrix, Rational};
use crate::wpr::{sort_witnesses, ExceptionalWitness, NewtonPolygon};

use self::lll::{hermite_normal_form, lll_reduce};
use self::roots::{bigfloat_from_int, complex_roots, log2_abs, scaled_integer, Root, RM};

pub const SCHEMA: &str = "weil-lab/1";
pub const DEFAULT_PRECISION: usize = 192;
pub const MAX_PRECISION: usize = 3072;

/// Monic integer polynomial `T^{2g} + a_1 T^{2g-1} + … + a_{2g}` with
/// `a_{2g-i} = q^{g-i} a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolynomial {
    g: usize,
    p: u64,
    q: u64,
    /// `q = p^k`
    k: u32,
    /// Descending, `coefficients[0] = 1`.
    coefficients: Vec<BigInt>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `k` with `q = p^k`, if any.
fn prime_power_exponent(p: u64, q: u64) -> Option<u32> {
    if !is_prime(p) || q < p {
        return None;
    }
    let (mut x, mut k) = (q, 0);
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some(k)
}

fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    Some((2..).take_while(|d| d * d <= n).find(|d| n.is_multiple_of(*d)).unwrap_or(n))
}

impl WeilPolynomial {
    /// Full descending coefficient list `1, a_1, …, a_{2g}`.
    pub fn from_coefficients(coefficients: Vec<BigInt>, p: u64, q: u64) -> Result<Self> {
        let k = prime_power_exponent(p, q)
            .ok_or_else(|| Error::Input(format!("q = {q} is not a power of the prime p = {p}")))?;
        if coefficients.len() < 3 || coefficients.len().is_multiple_of(2) {
            return Err(Error::Input(format!(
                "a Weil polynomial of dimension g has 2g+1 coefficients, got {}",
                coefficients.len()
            )));
        }
        if !coefficients[0].is_one() {
            return Err(Error::Input("polynomial is not monic".into()));
        }
        let g = coefficients.len() / 2;
        let qb = BigInt::from(q);
        for i in 0..g {
            let expected = &coefficients[i] * qb.pow((g - i) as u32);
            if coefficients[2 * g - i] != expected {
                return Err(Error::Validation(format!(
                    "functional equation fails: a_{} = {} but q^{}·a_{} = {}",
                    2 * g - i,
                    coefficients[2 * g - i],
                    g - i,
                    i,
                    expected
                )));
            }
        }
        Ok(WeilPolynomial { g, p, q, k, coefficients })
    }

    /// Completes `a_1 … a_g` through the functional equation.
    pub fn from_partial(a: &[BigInt], p: u64, q: u64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Input("need at least a_1".into()));
        }
        let g = a.len();
        let mut c = Vec::with_capacity(2 * g + 1);
        c.push(BigInt::one());
        c.extend(a.iter().cloned());
        let qb = BigInt::from(q);
        for j in (0..g).rev() {
            c.push(&c[j] * qb.pow((g - j) as u32));
        }
        Self::from_coefficients(c, p, q)
    }

    pub fn from_label(label: &IsogenyLabel) -> Result<Self> {
        let p = smallest_prime_factor(label.q)
            .ok_or_else(|| Error::Input(format!("q = {} is not a prime power", label.q)))?;
        Self::from_partial(&label.coefficients, p, label.q)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Sign of `a_{2g} = q^g`·(sign of the middle-symmetric data); always ±1.
    pub fn trailing_sign(&self) -> i32 {
        if self.coefficients[2 * self.g].is_negative() {
            -1
        } else {
            1
        }
    }

    /// Lower convex hull of `(i, v_p(a_i)/k)`, zero coefficients omitted.
    pub fn newton_polygon(&self) -> NewtonPolygon {
        let p = BigInt::from(self.p);
        let pts: Vec<(i64, Rational)> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| {
                let mut v = 0i64;
                let mut x = a.abs();
                while (&x % &p).is_zero() {
                    x /= &p;
                    v += 1;
                }
                (i as i64, Rational::new(BigInt::from(v), BigInt::from(self.k)))
            })
            .collect();
        let mut hull: Vec<(i64, Rational)> = Vec::new();
        for pt in pts {
            while hull.len() >= 2 {
                let (o, a) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
                // drop `a` unless o → a → pt is a strict left turn
                let cross = Rational::from_integer(BigInt::from(a.0 - o.0)) * (&pt.1 - &o.1)
                    - Rational::from_integer(BigInt::from(pt.0 - o.0)) * (&a.1 - &o.1);
                if cross.is_positive() {
                    break;
                }
                hull.pop();
            }
            hull.push(pt);
        }
        let mut slopes = Vec::with_capacity(2 * self.g);
        for w in hull.windows(2) {
            let dx = w[1].0 - w[0].0;
            let s = (&w[1].1 - &w[0].1) / Rational::from_integer(BigInt::from(dx));
            slopes.extend(std::iter::repeat_n(s, dx as usize));
        }
        NewtonPolygon::new(slopes).expect("the Newton polygon of a Weil polynomial is symmetric")
    }

    pub fn roots(&self, precision_bits: usize) -> Result<Vec<Root>> {
        complex_roots(&self.coefficients, precision_bits)
    }

    /// `θ_i/π` for one eigenvalue per conjugate pair, with multiplicity,
    /// sorted ascending in `[0, 1]`. Errors if some root is off the circle
    /// `|z| = √q` by more than `2^(-precision/2)` relative.
    pub fn normalized_angles(&self, precision_bits: usize) -> Result<Vec<BigFloat>> {
        let roots = self.roots(precision_bits)?;
        let wp = precision_bits + 64;
        let mut cc = Consts::new().map_err(|e| Error::Numerical(format!("{e:?}")))?;
        let q = BigFloat::from_u64(self.q, wp);
        let tol = -(precision_bits as f64) / 2.0;
        let pi = cc.pi(wp, RM);
        let half = BigFloat::from_f64(0.5, wp);
        let mut angles = Vec::with_capacity(self.g);
        let mut real = [0usize; 2];
        for r in &roots {
            let modulus = r.z.norm_sqr(wp).div(&q, wp, RM).sub(&BigFloat::from_u64(1, wp), wp, RM);
            if !modulus.is_zero() && log2_abs(&modulus) > tol {
                return Err(Error::Validation(format!(
                    "not a Weil polynomial: a root has |z|^2 = {:.6} instead of q = {}",
                    r.z.to_c64().norm_sqr(),
                    self.q
                )));
            }
            let is_real = r.z.im.is_zero() || log2_abs(&r.z.im) < r.error_log2 + 4.0;
            if is_real {
                real[usize::from(r.z.re.is_negative())] += r.multiplicity;
            } else if r.z.im.is_positive() {
                // θ = π/2 − atan(x/y) for y > 0
                let t = r.z.re.div(&r.z.im, wp, RM).atan(wp, RM, &mut cc).div(&pi, wp, RM);
                let theta = half.sub(&t, wp, RM);
                for _ in 0..r.multiplicity {
                    angles.push(theta.clone());
                }
            }
        }
        for (idx, &m) in real.iter().enumerate() {
            if m % 2 != 0 {
                return Err(Error::Input(format!(
                    "real root {}√q has odd multiplicity {m}; not the Frobenius polynomial of an abelian variety",
                    if idx == 0 { "+" } else { "−" }
                )));
            }
            let theta = if idx == 0 { BigFloat::from_u64(0, wp) } else { BigFloat::from_u64(1, wp) };
            angles.extend(std::iter::repeat_n(theta, m / 2));
        }
        if angles.len() != self.g {
            return Err(Error::Numerical("roots do not pair up into g conjugate pairs".into()));
        }
        angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
        Ok(angles)
    }
}

/// Relations `(c_1, …, c_g, m)` with `Σ c_i θ_i + m π = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationLattice {
    pub g: usize,
    /// Hermite normal form basis.
    pub basis: Vec<Vec<i64>>,
    pub precision_bits: usize,
    /// Accepted relations satisfy `|residual| < 2^residual_bound_log2 · (1 + ‖c‖)`.
    pub residual_bound_log2: i64,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Numeric,
    StableAcrossPrecisions,
}

fn to_i64_rows(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Numerical("relation coefficient overflows i64".into())))
                .collect()
        })
        .collect()
}

/// Relation lattice at a single precision.
pub fn relation_lattice_at(angles: &[BigFloat], precision_bits: usize) -> Result<RelationLattice> {
    let g = angles.len();
    let n = g + 1;
    let wp = precision_bits + 64;
    let scale = (precision_bits / 2) as i64;
    let mut cc = Consts::new().map_err(|e| Error::Numerical(format!("{e:?}")))?;
    let mut x: Vec<BigFloat> = angles.to_vec();
    x.push(BigFloat::from_u64(1, wp));
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut r = vec![BigInt::zero(); n + 1];
            r[j] = BigInt::one();
            r[n] = scaled_integer(&x[j], scale);
            r
        })
        .collect();
    lll_reduce(&mut rows);
    let bound = -(3 * precision_bits as i64) / 4;
    let mut found = Vec::new();
    for r in &rows {
        let c = &r[..n];
        if c.iter().all(|v| v.is_zero()) {
            continue;
        }
        let mut residual = BigFloat::from_u64(0, wp);
        for (cj, xj) in c.iter().zip(&x) {
            residual = residual.add(&bigfloat_from_int(cj, wp, &mut cc).mul(xj, wp, RM), wp, RM);
        }
        let norm = c.iter().map(|v| v.to_f64().unwrap_or(f64::MAX).powi(2)).sum::<f64>().sqrt();
        if residual.is_zero() || log2_abs(&residual) < bound as f64 + (1.0 + norm).log2() {
            found.push(c.to_vec());
        }
    }
    let basis = hermite_normal_form(&found);
    let rank = basis.len();
    Ok(RelationLattice { g, basis: to_i64_rows(&basis)?, precision_bits, residual_bound_log2: bound, rank })
}

fn rat_rows(basis: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    basis.iter().map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect()).collect()
}

/// Integral HNF of `span_Q(a) ∩ span_Q(b) ∩ Z^n`.
fn span_intersection(a: &[Vec<i64>], b: &[Vec<i64>], n: usize) -> Vec<Vec<BigInt>> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    // columns: a_1..a_r, -b_1..-b_s; kernel vectors (s, t) give Σ s_i a_i
    let mut m = vec![vec![Rational::zero(); a.len() + b.len()]; n];
    for (j, r) in a.iter().enumerate() {
        for i in 0..n {
            m[i][j] = Rational::from_integer(BigInt::from(r[i]));
        }
    }
    for (j, r) in b.iter().enumerate() {
        for i in 0..n {
            m[i][a.len() + j] = Rational::from_integer(BigInt::from(-r[i]));
        }
    }
    let ar = rat_rows(a);
    let vecs: Vec<Vec<BigInt>> = RatMatrix::from_rows(m)
        .kernel_basis()
        .into_iter()
        .map(|k| {
            let v: Vec<Rational> =
                (0..n).map(|i| (0..a.len()).fold(Rational::zero(), |s, j| s + &k[j] * &ar[j][i])).collect();
            let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    hermite_normal_form(&vecs)
}

/// Relation lattice at `precision_bits`, re-run at doubled precision until
/// two consecutive runs agree (up to [`MAX_PRECISION`]).
pub fn relation_lattice(p: &WeilPolynomial, precision_bits: usize) -> Result<(RelationLattice, Certification)> {
    let mut prec = precision_bits;
    let mut prev = relation_lattice_at(&p.normalized_angles(prec)?, prec)?;
    loop {
        let next_prec = prec * 2;
        let next = relation_lattice_at(&p.normalized_angles(next_prec)?, next_prec)?;
        if next.basis == prev.basis {
            return Ok((prev, Certification::StableAcrossPrecisions));
        }
        if next_prec * 2 > MAX_PRECISION.max(precision_bits * 2) {
            let basis = span_intersection(&prev.basis, &next.basis, p.g() + 1);
            let rank = basis.len();
            let lattice = RelationLattice { basis: to_i64_rows(&basis)?, rank, ..next };
            return Ok((lattice, Certification::Numeric));
        }
        prev = next;
        prec = next_prec;
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Bound on the orders of roots of unity accepted in a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnityBound {
    /// Order must divide this number.
    Divides(BigInt),
    /// Order at most this number.
    AtMost(u64),
}

impl UnityBound {
    /// `lcm{n : φ(n) ≤ 24g}`.
    pub fn default_for(g: usize) -> Self {
        let cap = 24 * g as u64;
        // φ(n) ≥ √(n/2), so n ≤ 2·cap² suffices
        let l = (1..=2 * cap * cap + 2)
            .filter(|&n| euler_phi(n) <= cap)
            .fold(BigInt::one(), |acc, n| acc.lcm(&BigInt::from(n)));
        UnityBound::Divides(l)
    }

    pub fn admits(&self, order: &BigInt) -> bool {
        match self {
            UnityBound::Divides(b) => (b % order).is_zero(),
            UnityBound::AtMost(n) => *order <= BigInt::from(*n),
        }
    }
}

/// `(c, m)` in the rational span of the lattice with the given `c`, if any.
struct SpanSolver {
    rref: RatMatrix,
    pivots: Vec<usize>,
    g: usize,
}

impl SpanSolver {
    fn new(lattice: &RelationLattice) -> Self {
        let (rref, pivots) = if lattice.basis.is_empty() {
            (RatMatrix::zeros(0, lattice.g + 1), vec![])
        } else {
            RatMatrix::from_rows(rat_rows(&lattice.basis)).rref()
        };
        SpanSolver { rref, pivots, g: lattice.g }
    }

    /// The `m` with `(c, m)` in the span.
    fn solve(&self, c: &[i8]) -> Option<Rational> {
        let mut v = vec![Rational::zero(); self.g + 1];
        for (row, &col) in self.pivots.iter().enumerate() {
            if col >= self.g {
                continue;
            }
            let t = Rational::from_integer(BigInt::from(c[col]));
            if t.is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate() {
                *x += &t * self.rref.get(row, j);
            }
        }
        (0..self.g).all(|i| v[i] == Rational::from_integer(BigInt::from(c[i]))).then(|| v[self.g].clone())
    }
}

fn sign_vectors(g: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..3usize.pow(g as u32)).map(move |mut code| {
        (0..g)
            .map(|_| {
                let d = (code % 3) as i8 - 1;
                code /= 3;
                d
            })
            .collect()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRelation {
    #[serde(flatten)]
    pub witness: ExceptionalWitness,
    /// Order of the root of unity `∏ λ_i^{c_i}`.
    pub unity_order: u64,
}

/// Sign vectors with even positive support whose eigenvalue product is a
/// root of unity admitted by `bound`.
pub fn exceptional_relations(lattice: &RelationLattice, bound: &UnityBound) -> Vec<ExceptionalRelation> {
    let solver = SpanSolver::new(lattice);
    let mut out: Vec<ExceptionalRelation> = sign_vectors(lattice.g)
        .filter(|c| {
            let s = c.iter().filter(|&&x| x != 0).count();
            s > 0 && s % 2 == 0
        })
        .filter_map(|c| {
            let m = solver.solve(&c)?;
            // ∏ λ^c = exp(−iπm), of order denom(m/2)
            let order = (m / Rational::from_integer(BigInt::from(2))).denom().clone();
            bound.admits(&order).then(|| ExceptionalRelation {
                witness: ExceptionalWitness::from_signs(&c),
                unity_order: order.to_u64().unwrap_or(u64::MAX),
            })
        })
        .collect();
    let mut ws: Vec<ExceptionalWitness> = out.iter().map(|r| r.witness.clone()).collect();
    sort_witnesses(&mut ws);
    out.sort_by_key(|r| ws.iter().position(|w| *w == r.witness));
    out
}

/// True when some `λ_i` or `λ_i^{±1} λ_j^{±1}` is a root of unity: the
/// eigenvalue data then does not come from a geometrically simple variety
/// with commutative endomorphism algebra.
fn has_short_relation(lattice: &RelationLattice) -> bool {
    let solver = SpanSolver::new(lattice);
    sign_vectors(lattice.g).any(|c| {
        let s = c.iter().filter(|&&x| x != 0).count();
        (s == 1 || s == 2) && solver.solve(&c).is_some()
    })
}

#[derive(Clone, Debug)]
pub struct AnalyzerOptions {
    pub precision_bits: usize,
    pub max_unity_order: Option<u64>,
}

impl Default for AnalyzerOptions {
    fn default() -> Self {
        AnalyzerOptions { precision_bits: DEFAULT_PRECISION, max_unity_order: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerReport {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    pub g: usize,
    pub p: u64,
    pub q: u64,
    pub coefficients: Vec<String>,
    pub newton: String,
    pub newton_slopes: Vec<String>,
    pub is_weil: bool,
    pub angle_rank: usize,
    pub relations: RelationLattice,
    pub exceptional: Vec<ExceptionalRelation>,
    pub certification: Certification,
    /// Set when the relations cannot be read as statements about Tate classes.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interpretation: Option<String>,
}

pub const INTERPRETATION_NOT_LICENSED: &str = "interpretation not licensed";

pub fn analyze(p: &WeilPolynomial, opts: &AnalyzerOptions) -> Result<AnalyzerReport> {
    let np = p.newton_polygon();
    let (lattice, certification) = relation_lattice(p, opts.precision_bits)?;
    let bound = match opts.max_unity_order {
        Some(n) => UnityBound::AtMost(n),
        None => UnityBound::default_for(p.g()),
    };
    let exceptional = exceptional_relations(&lattice, &bound);
    let squarefree = roots::squarefree_decomposition(&roots::QPoly::from_ints_descending(p.coefficients())).len() == 1
        && roots::squarefree_decomposition(&roots::QPoly::from_ints_descending(p.coefficients()))[0].1 == 1;
    let interpretation = (!squarefree || has_short_relation(&lattice)).then(|| {
        format!(
            "{INTERPRETATION_NOT_LICENSED}: the polynomial is not squarefree or has a root-of-unity relation \
             of support at most 2, so relations are reported raw"
        )
    });
    Ok(AnalyzerReport {
        schema: SCHEMA.into(),
        label: None,
        g: p.g(),
        p: p.p(),
        q: p.q(),
        coefficients: p.coefficients().iter().map(|c| c.to_string()).collect(),
        newton: np.short(),
        newton_slopes: np.slopes().iter().map(|s| s.to_string()).collect(),
        is_weil: true,
        angle_rank: p.g() - lattice.rank,
        relations: lattice,
        exceptional,
        certification,
        interpretation,
    })
}

pub fn analyze_label(label: &str, opts: &AnalyzerOptions) -> Result<AnalyzerReport> {
    let l: IsogenyLabel = label.parse()?;
    let mut report = analyze(&WeilPolynomial::from_label(&l)?, opts)?;
    report.label = Some(l.to_string());
    Ok(report)
}

/// One line of batch input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchInput {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub coefficients: Option<Vec<i64>>,
    #[serde(default)]
    pub p: Option<u64>,
    #[serde(default)]
    pub q: Option<u64>,
}

impl BatchInput {
    pub fn run(&self, opts: &AnalyzerOptions) -> Result<AnalyzerReport> {
        if let Some(l) = &self.label {
            return analyze_label(l, opts);
        }
        let coeffs = self.coefficients.as_ref().ok_or_else(|| Error::Input("need label or coefficients".into()))?;
        let (p, q) = match (self.p, self.q) {
            (Some(p), Some(q)) => (p, q),
            (None, Some(q)) => (smallest_prime_factor(q).unwrap_or(q), q),
            (Some(p), None) => (p, p),
            _ => return Err(Error::Input("need p or q".into())),
        };
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        let wp = if c.len() % 2 == 1 && c.first().is_some_and(|x| x.is_one()) && c.len() > 2 {
            WeilPolynomial::from_coefficients(c, p, q)?
        } else {
            WeilPolynomial::from_partial(&c, p, q)?
        };
        analyze(&wp, opts)
    }
}
