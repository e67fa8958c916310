//! Property checks shared by the `properties` suite and the acceptance run.
//! Each returns the number of cases checked, or the first counterexample.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weil_lab::admissibility::{check_local_galois_conditions, Filtration, Prime};
use weil_lab::analyzer::{exceptional_relations, relation_lattice_at, UnityBound, WeilPolynomial};
use weil_lab::group::enumerate::enumerate_transitive_subgroups;
use weil_lab::group::{stabilizer_of_weight, PermGroup, SignedPermutation};
use weil_lab::linalg::{RatMatrix, Rational};
use weil_lab::wpr::{gcd_simplicity_criterion, ExceptionalWitness, NewtonPolygon, WeightFunction, WeightedPermRep};

pub type Outcome = Result<usize, String>;

/// Every `(ρ = (w, G))` with `G` running over the enumerated classes.
pub fn all_wprs(g: usize) -> Vec<WeightedPermRep> {
    let mut out = Vec::new();
    for np in NewtonPolygon::all(g) {
        let w = WeightFunction::from_newton(&np);
        for c in enumerate_transitive_subgroups(g, &w).unwrap() {
            out.push(WeightedPermRep::new(w.clone(), c.group).unwrap());
        }
    }
    out
}

/// `Φ` computed straight from the definition: row `σ`, column `x`, entry `w(σ⁻¹ x)`.
pub fn phi_by_definition(rho: &WeightedPermRep) -> Vec<Vec<Rational>> {
    let w = rho.weight();
    rho.group()
        .elements()
        .iter()
        .map(|s| {
            let inv = s.inverse();
            (0..2 * rho.g()).map(|x| w.value_at(inv.apply(x)).clone()).collect()
        })
        .collect()
}

/// `Φ(τx)[σ] = Φ(x)[τ⁻¹σ]` on random `(ρ, τ, x)`.
pub fn equivariance(cases: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pools: Vec<Vec<WeightedPermRep>> = (1..=4).map(all_wprs).collect();
    for _ in 0..cases {
        let pool = &pools[rng.gen_range(0..pools.len())];
        let rho = &pool[rng.gen_range(0..pool.len())];
        let els = rho.group().elements();
        let tau = els[rng.gen_range(0..els.len())];
        let x = rng.gen_range(0..2 * rho.g());
        let lhs = rho.phi_column(tau.apply(x));
        let col = rho.phi_column(x);
        let tinv = tau.inverse();
        for (i, s) in els.iter().enumerate() {
            let j = els.iter().position(|e| *e == tinv.mul(s)).unwrap();
            if lhs[i] != col[j] {
                return Err(format!("equivariance fails for {rho:?}, τ = {tau}, x = {x}"));
            }
        }
        // and the stored matrix matches the definition
        let def = phi_by_definition(rho);
        if (0..els.len()).any(|i| def[i][x] != col[i]) {
            return Err(format!("Φ column {x} differs from the definition for {rho:?}"));
        }
    }
    Ok(cases)
}

/// Every exceptional witness has both parts nonempty.
pub fn witnesses_two_sided(max_g: usize) -> Outcome {
    let mut n = 0;
    for g in 1..=max_g {
        for rho in all_wprs(g).iter().filter(|r| r.is_geometrically_simple()) {
            for w in rho.exceptional_witnesses().unwrap() {
                n += 1;
                if w.t_plus.is_empty() || w.t_minus.is_empty() {
                    return Err(format!("one-sided witness {w:?} for {rho:?}"));
                }
            }
        }
    }
    Ok(n)
}

/// No geometrically simple exceptional ρ in dimensions 2, 3, 5.
pub fn prime_dimension_sweep() -> Outcome {
    let mut n = 0;
    for g in [2, 3, 5] {
        for rho in all_wprs(g).iter().filter(|r| r.is_geometrically_simple()) {
            n += 1;
            if rho.is_exceptional().unwrap() {
                return Err(format!("exceptional simple WPR in prime dimension: {rho:?}"));
            }
        }
    }
    Ok(n)
}

fn all_two_adic(rho: &WeightedPermRep) -> bool {
    rho.weight().values().iter().all(|v| v.denom() % BigInt::from(2) != BigInt::zero())
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).all(|d| !n.is_multiple_of(d))
}

/// Angle rank in `{m, g−m, g}` when `g/m` is prime, plus the odd-prime refinements.
pub fn angle_rank_membership(max_g: usize) -> Outcome {
    let mut n = 0;
    for g in 1..=max_g {
        for rho in all_wprs(g) {
            if rho.weight().newton().is_supersingular() {
                continue;
            }
            let (_, m) = rho.level_set_partition();
            if g % m != 0 || !is_prime(g / m) {
                continue;
            }
            n += 1;
            let d = rho.angle_rank();
            if ![m, g - m, g].contains(&d) {
                return Err(format!("δ = {d} ∉ {{{m}, {}, {g}}} for {rho:?}", g - m));
            }
            if (g / m) % 2 == 1 {
                if (d == m && m < g) != !rho.is_geometrically_simple() {
                    return Err(format!("δ = m < g does not match non-simplicity for {rho:?}"));
                }
                if all_two_adic(&rho) && d != m && d != g {
                    return Err(format!("δ = {d} ∉ {{m, g}} with 2-integral weights for {rho:?}"));
                }
            }
        }
    }
    Ok(n)
}

/// Coprime segment lengths force geometric simplicity.
pub fn gcd_implies_simple(max_g: usize) -> Outcome {
    let mut n = 0;
    for g in 1..=max_g {
        for rho in all_wprs(g) {
            if gcd_simplicity_criterion(rho.weight().newton()) {
                n += 1;
                if !rho.is_geometrically_simple() {
                    return Err(format!("gcd criterion holds but ρ is not simple: {rho:?}"));
                }
            }
        }
    }
    Ok(n)
}

fn signed_grid(g: usize) -> Vec<Vec<i8>> {
    (0..3usize.pow(g as u32))
        .map(|mut k| {
            (0..g)
                .map(|_| {
                    let d = (k % 3) as i8 - 1;
                    k /= 3;
                    d
                })
                .collect()
        })
        .filter(|c: &Vec<i8>| {
            let s = c.iter().filter(|&&x| x != 0).count();
            s > 0 && s % 2 == 0
        })
        .collect()
}

/// Witnesses from the row scan equal the grid points on the solution space
/// of `Φ t = c·1` computed through a kernel basis.
pub fn exceptionality_oracle(max_g: usize) -> Outcome {
    let mut n = 0;
    for g in 1..=max_g {
        for rho in all_wprs(g).iter().filter(|r| r.is_geometrically_simple()) {
            n += 1;
            let phi = phi_by_definition(rho);
            // unknowns (t_1..t_g, c): Σ_i Φ[σ][i] t_i − c = 0
            let m = RatMatrix::from_rows(
                phi.iter()
                    .map(|row| {
                        let mut r: Vec<Rational> = row[..g].to_vec();
                        r.push(-Rational::one());
                        r
                    })
                    .collect(),
            );
            let kernel = m.kernel_basis();
            let k_rank = if kernel.is_empty() { 0 } else { RatMatrix::from_rows(kernel.clone()).rank() };
            let mut oracle: Vec<ExceptionalWitness> = signed_grid(g)
                .into_iter()
                .filter(|c| {
                    let plus = c.iter().filter(|&&x| x > 0).count() as i64;
                    let minus = c.iter().filter(|&&x| x < 0).count() as i64;
                    let mut v: Vec<Rational> = c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
                    v.push(Rational::new(BigInt::from(plus - minus), BigInt::from(2)));
                    let mut rows = kernel.clone();
                    rows.push(v);
                    RatMatrix::from_rows(rows).rank() == k_rank
                })
                .map(|c| ExceptionalWitness::from_signs(&c))
                .collect();
            weil_lab::wpr::sort_witnesses(&mut oracle);
            let found = rho.exceptional_witnesses().unwrap();
            if found != oracle {
                return Err(format!("witness sets differ for {rho:?}: {found:?} vs {oracle:?}"));
            }
        }
    }
    Ok(n)
}

/// Small corpus of Weil polynomials with g ≤ 3, found by filtering a box of
/// coefficient vectors through the root-modulus check.
pub fn weil_corpus() -> Vec<WeilPolynomial> {
    let mut out = Vec::new();
    let mut push_box = |g: usize, p: u64, q: u64, bounds: &[i64]| {
        let mut idx = vec![0i64; g];
        let mut a: Vec<i64> = bounds.iter().map(|b| -b).collect();
        loop {
            let coeffs: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
            if let Ok(wp) = WeilPolynomial::from_partial(&coeffs, p, q) {
                if wp.normalized_angles(96).is_ok() {
                    out.push(wp);
                }
            }
            // odometer
            let mut i = 0;
            loop {
                if i == g {
                    return;
                }
                if a[i] < bounds[i] {
                    a[i] += 1;
                    idx[i] += 1;
                    break;
                }
                a[i] = -bounds[i];
                idx[i] = 0;
                i += 1;
            }
        }
    };
    for (p, q) in [(2, 2), (3, 3), (2, 4), (5, 5)] {
        push_box(1, p, q, &[4]);
    }
    for (p, q) in [(2, 2), (3, 3)] {
        push_box(2, p, q, &[5, 12]);
    }
    push_box(3, 2, 2, &[3, 5, 7]);
    out
}

/// Analyzer witnesses equal a brute-force search over all signed subset
/// products for closeness to a root of unity of order ≤ `max_order`.
pub fn analyzer_oracle(precision: usize, max_order: u64) -> Outcome {
    let corpus = weil_corpus();
    let bound = UnityBound::AtMost(max_order);
    for wp in &corpus {
        let angles = wp.normalized_angles(precision).map_err(|e| e.to_string())?;
        let lattice = relation_lattice_at(&angles, precision).map_err(|e| e.to_string())?;
        let mut found: Vec<ExceptionalWitness> =
            exceptional_relations(&lattice, &bound).into_iter().map(|r| r.witness).collect();
        weil_lab::wpr::sort_witnesses(&mut found);
        let x: Vec<f64> = angles.iter().map(|a| a.to_string().parse::<f64>().unwrap()).collect();
        let tol = 2f64.powi(-(precision as i32) / 4);
        let mut brute: Vec<ExceptionalWitness> = signed_grid(wp.g())
            .into_iter()
            .filter(|c| {
                // ∏ λ^c = exp(iπ s) has order n iff n·s/2 ∈ Z
                let s: f64 = c.iter().zip(&x).map(|(&ci, xi)| ci as f64 * xi).sum();
                (1..=max_order).any(|n| {
                    let t = n as f64 * s / 2.0;
                    (t - t.round()).abs() < tol
                })
            })
            .map(|c| ExceptionalWitness::from_signs(&c))
            .collect();
        weil_lab::wpr::sort_witnesses(&mut brute);
        if found != brute {
            return Err(format!("{:?}: analyzer {found:?} vs brute force {brute:?}", wp.coefficients()));
        }
    }
    Ok(corpus.len())
}

fn power_of(n: usize, p: usize) -> bool {
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Least `k ≥ 1` with `x^k ∈ sub`.
fn order_mod(x: &SignedPermutation, sub: &PermGroup) -> usize {
    let mut y = *x;
    let mut k = 1;
    while !sub.contains(&y) {
        y = y.mul(x);
        k += 1;
    }
    k
}

/// For abelian `D`, the exhaustive local-condition search agrees with the
/// closed form: structure conditions plus `|G0/G1|` dividing `p − 1`.
pub fn abelian_filtration_oracle(limit: usize) -> Outcome {
    let mut n = 0;
    let samples: Vec<(&str, &str)> = vec![
        ("0,0,1,1", "(1 2 1~ 2~)"),
        ("0,0,0,1,1,1", "(1 2 3)(1~ 2~ 3~)"),
        ("0,0,0,0,1,1,1,1", "(1 2)(3 4)(1~ 2~)(3~ 4~), (1 3)(2 4)(1~ 3~)(2~ 4~), (1 1~)(2 2~)"),
        ("0,0,0,0,1,1,1,1", "(1 2 3 4)(1~ 2~ 3~ 4~), (1 1~)(3 3~)"),
        ("0,1/2,1/2,1", "(1 2)(1~ 2~)"),
    ];
    for (slopes, gens) in samples {
        let w = WeightFunction::from_slopes_str(slopes).unwrap();
        let g = w.g();
        let group = PermGroup::parse_with_conjugation(g, gens).unwrap();
        let h = group.intersection(&stabilizer_of_weight(&w));
        let els = h.elements().to_vec();
        let mut subgroups: Vec<PermGroup> = Vec::new();
        for a in &els {
            for b in &els {
                let s = PermGroup::generate(g, &[*a, *b]).unwrap();
                if !subgroups.iter().any(|t| t.elements() == s.elements()) {
                    subgroups.push(s);
                }
            }
        }
        for d in
            subgroups.iter().filter(|d| d.elements().iter().all(|x| d.elements().iter().all(|y| x.mul(y) == y.mul(x))))
        {
            let inside: Vec<&PermGroup> = subgroups.iter().filter(|s| s.is_subgroup_of(d)).collect();
            for g0 in &inside {
                for g1 in inside.iter().filter(|s| s.is_subgroup_of(g0)) {
                    for p in [2u64, 3, 5, 7] {
                        if n >= limit {
                            return Ok(n);
                        }
                        n += 1;
                        let tame = g0.order() / g1.order();
                        let (pu, tu) = (p as usize, tame);
                        let quotient_cyclic_top = d.elements().iter().any(|x| {
                            let mut gens = g0.generators().to_vec();
                            gens.push(*x);
                            PermGroup::generate(g, &gens).unwrap().order() == d.order()
                        });
                        let tame_cyclic = g0.elements().iter().any(|x| order_mod(x, g1) == tame);
                        let structure = power_of(g1.order(), pu) && tu % pu != 0 && tame_cyclic && quotient_cyclic_top;
                        let expected = structure && (pu - 1) % tu == 0;
                        let f = Filtration { d: d.clone(), g0: (*g0).clone(), g1: (*g1).clone(), p: Prime::Finite(p) };
                        let got = check_local_galois_conditions(&f).unwrap();
                        if got != expected {
                            return Err(format!(
                                "local conditions at p = {p} disagree ({got} vs {expected}): D = {:?}, G0 = {:?}, G1 = {:?}",
                                d, g0, g1
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}
