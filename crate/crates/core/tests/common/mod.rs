//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use polylike::gmodule::{Additive, FloquetElement};
use polylike::scalar::Qi;
use rand::Rng;

/// Random periodic polynomial with at most `max_terms` terms, frequencies in
/// `[-2, 2]` and total degree at most `max_degree`.
pub fn random_floquet<R: Rng>(rng: &mut R, rank: usize, max_degree: u32, max_terms: usize) -> FloquetElement {
    let mut e = FloquetElement::zero(rank);
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let k: Vec<i64> = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
        let mut nu = vec![0u32; rank];
        if rank > 0 {
            for _ in 0..rng.gen_range(0..=max_degree) {
                nu[rng.gen_range(0..rank)] += 1;
            }
        }
        let re = BigRational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=3).into());
        let im = BigRational::from_integer(rng.gen_range(-3..=3).into());
        if !(re.is_zero() && im.is_zero()) {
            e = e.add(&FloquetElement::term(k, nu, Qi::new(re, im)));
        }
    }
    e
}

/// Groups the terms of `p` by exponent: the expected decomposition, read
/// directly off the term list.
pub fn coefficients_by_exponent(p: &FloquetElement) -> BTreeMap<Vec<u32>, FloquetElement> {
    let mut out: BTreeMap<Vec<u32>, FloquetElement> = BTreeMap::new();
    for (key, c) in p.terms() {
        let t = FloquetElement::term(key.k.clone(), vec![0; p.rank()], c.clone());
        let slot = out.entry(key.nu.clone()).or_insert_with(|| FloquetElement::zero(p.rank()));
        *slot = slot.add(&t);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Rank of a set of sparse rational rows, by incremental elimination on
/// leading columns.
pub fn sparse_rank(rows: Vec<BTreeMap<usize, BigRational>>) -> usize {
    let mut basis: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for mut row in rows {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, v)) = row.iter().next() else {
                break;
            };
            let v = v.clone();
            match basis.get(&lead) {
                None => {
                    basis.insert(lead, row);
                    break;
                }
                Some(b) => {
                    let f = v / &b[&lead];
                    for (&c, bv) in b {
                        let entry = row.entry(c).or_insert_with(BigRational::zero);
                        *entry -= &f * bv;
                        if entry.is_zero() {
                            row.remove(&c);
                        }
                    }
                }
            }
        }
    }
    basis.len()
}

fn row(entries: &[(usize, i64)]) -> BTreeMap<usize, BigRational> {
    let mut r = BTreeMap::new();
    for &(c, v) in entries {
        *r.entry(c).or_insert_with(BigRational::zero) += BigRational::from_integer(v.into());
    }
    r
}

/// Dimension of `{f : ({0,1}^r)^n → Q^s}` additive in each slot (and
/// symmetric if asked), counted as unknowns minus the rank of the constraint
/// system. Every point of the box is a sum of unit vectors inside the box, so
/// this equals the dimension of the space of n-morphisms `(Z^r)^n → Q^s`.
pub fn brute_force_polymorphism_dim(n: usize, r: usize, s: usize, symmetric: bool) -> usize {
    let points = 1usize << r;
    let tuples = points.pow(n as u32);
    let col = |t: &[usize], comp: usize| -> usize {
        t.iter().fold(0, |acc, &p| acc * points + p) * s + comp
    };
    let unknowns = tuples * s;
    let mut rows = Vec::new();
    let all: Vec<Vec<usize>> = (0..tuples)
        .map(|mut flat| {
            let mut t = vec![0; n];
            for slot in t.iter_mut().rev() {
                *slot = flat % points;
                flat /= points;
            }
            t
        })
        .collect();
    for t in &all {
        for j in 0..n {
            for comp in 0..s {
                // f(…, 0, …) = 0
                if t[j] == 0 {
                    rows.push(row(&[(col(t, comp), 1)]));
                    continue;
                }
                // f(…, g + e_i, …) = f(…, g, …) + f(…, e_i, …) for g without bit i.
                for i in 0..r {
                    let bit = 1 << i;
                    if t[j] & bit != 0 {
                        continue;
                    }
                    let mut sum = t.clone();
                    sum[j] |= bit;
                    let mut unit = t.clone();
                    unit[j] = bit;
                    rows.push(row(&[(col(&sum, comp), 1), (col(t, comp), -1), (col(&unit, comp), -1)]));
                }
            }
        }
        if symmetric {
            for j in 0..n.saturating_sub(1) {
                let mut u = t.clone();
                u.swap(j, j + 1);
                for comp in 0..s {
                    rows.push(row(&[(col(t, comp), 1), (col(&u, comp), -1)]));
                }
            }
        }
    }
    unknowns - sparse_rank(rows)
}

/// Kernel dimension of a stencil operator on `N·Z^r`-periodic polynomials of
/// degree `≤ n`, from pointwise evaluation of `D` on the basis functions
/// `[x ≡ c mod N]·x^ν` at the points of `[0, N(n+1))^r`.
pub fn pointwise_kernel_dim(op: &polylike::solver::StencilOperator, n: usize) -> usize {
    let (r, period) = (op.rank(), op.period());
    let nus = polylike::solver::exponents_up_to(r, n);
    let cells = period.pow(r as u32);
    let side = (period * (n + 1)) as i64;
    let cell_of = |x: &[i64]| -> usize {
        x.iter().fold(0, |acc, &v| acc * period + v.rem_euclid(period as i64) as usize)
    };
    let mut rows = Vec::new();
    let npts = (side as usize).pow(r as u32);
    for flat in 0..npts {
        let mut x = vec![0i64; r];
        let mut f = flat;
        for v in x.iter_mut().rev() {
            *v = (f % side as usize) as i64;
            f /= side as usize;
        }
        let mut eq = BTreeMap::new();
        for (k, nu) in nus.iter().enumerate() {
            for c in 0..cells {
                let basis = |y: &[i64]| -> BigRational {
                    if cell_of(y) != c {
                        return BigRational::zero();
                    }
                    let m: BigInt = nu.iter().zip(y).map(|(&e, &v)| num_traits::pow(BigInt::from(v), e as usize)).product();
                    BigRational::from_integer(m)
                };
                let v = op.apply_pointwise(basis, &x);
                if !v.is_zero() {
                    eq.insert(k * cells + c, v);
                }
            }
        }
        rows.push(eq);
    }
    nus.len() * cells - sparse_rank(rows)
}
