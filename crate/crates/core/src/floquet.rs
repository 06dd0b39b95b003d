//! Periodic-polynomial structure of polynomial-like functions on lattices.
//!
//! Over `Z^r` every `p ∈ P_n` is a sum `Σ_{|ν|≤n} a_ν(x)·x^ν` with invariant
//! coefficients. The top coefficients are read off `D^n p` at generator
//! tuples, `a_ν = (1/ν!)·[D^n p](e_{i_1},…,e_{i_n})` for any arrangement
//! `(i_1..i_n)` of `ν`, and the lower ones by peeling.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::diffcalc::{is_polynomial_like, iterated_difference};
use crate::error::{Error, Result};
use crate::gmodule::{
    Additive, CertKind, FloquetElement, GModule, LatticeModule, NumericFunction, SampleOptions,
};
use crate::scalar::{factorial, Qi};

/// All `ν ∈ N^rank` with `|ν|₁ = total`, lexicographically ascending.
pub fn exponents(rank: usize, total: u32) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, rank: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == rank {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            fill(prefix, rank, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if rank == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(&mut Vec::new(), rank, total, &mut out);
    out
}

/// Distinct index sequences in which `i` occurs `ν_i` times, lexicographically
/// ascending; the first one is sorted.
pub fn arrangements(nu: &[u32]) -> Vec<Vec<usize>> {
    fn fill(counts: &mut [u32], left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                prefix.push(i);
                fill(counts, left - 1, prefix, out);
                prefix.pop();
                counts[i] += 1;
            }
        }
    }
    let mut counts = nu.to_vec();
    let total = nu.iter().sum::<u32>() as usize;
    let mut out = Vec::new();
    fill(&mut counts, total, &mut Vec::with_capacity(total), &mut out);
    out
}

/// `ν! = ν_1!⋯ν_r!`.
pub fn nu_factorial(nu: &[u32]) -> BigInt {
    nu.iter().map(|&e| factorial(e)).product()
}

/// `[D^n x^ν](g_1..g_n)` for `|ν|₁ = n`: `ν!·Σ_κ g_{1,κ_1}⋯g_{n,κ_n}` over the
/// arrangements `κ` of `ν`. The value does not depend on `x`.
pub fn monomial_difference(nu: &[u32], tuple: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = nu.iter().sum::<u32>() as usize;
    if tuple.len() != n {
        return Err(Error::Structural(format!(
            "|ν| = {n} but the tuple has {} entries",
            tuple.len()
        )));
    }
    if let Some(g) = tuple.iter().find(|g| g.len() != nu.len()) {
        return Err(Error::Structural(format!(
            "tuple entry of rank {}, exponent of rank {}",
            g.len(),
            nu.len()
        )));
    }
    let sum: BigInt = arrangements(nu)
        .iter()
        .map(|k| {
            k.iter()
                .enumerate()
                .fold(BigInt::one(), |acc, (j, &i)| acc * &tuple[j][i])
        })
        .sum();
    Ok(nu_factorial(nu) * sum)
}

fn index_tuple(gens: &[crate::group::GroupElement], k: &[usize]) -> Vec<crate::group::GroupElement> {
    k.iter().map(|&i| gens[i].clone()).collect()
}

/// Coefficients `a_ν`, `|ν| = n`, without a membership test. Every arrangement
/// of each `ν` is evaluated and compared with the first.
fn extract_level<M: LatticeModule + 'static>(
    module: &Arc<M>,
    p: &M::Elem,
    n: usize,
) -> Result<Vec<(Vec<u32>, M::Elem)>> {
    let gens = module.group().free_generators();
    let dn = iterated_difference(module, p, n);
    exponents(gens.len(), n as u32)
        .into_par_iter()
        .map(|nu| {
            let arr = arrangements(&nu);
            let first = dn.eval(&index_tuple(&gens, &arr[0]))?;
            for k in &arr[1..] {
                let v = dn.eval(&index_tuple(&gens, k))?;
                if !module.equals(&first, &v).zero {
                    return Err(Error::Violation {
                        name: "arrangement independence".into(),
                        detail: format!(
                            "D^{n} at generator indices {:?} and {:?} differ",
                            one_based(&arr[0]),
                            one_based(k)
                        ),
                    });
                }
            }
            let inv = BigRational::new(BigInt::one(), nu_factorial(&nu));
            Ok((nu, first.scale(&inv)))
        })
        .collect()
}

fn one_based(k: &[usize]) -> Vec<usize> {
    k.iter().map(|i| i + 1).collect()
}

fn check_invariant<M: GModule>(module: &M, nu: &[u32], a: &M::Elem) -> Result<()> {
    let report = module.invariance(a);
    if report.invariant {
        return Ok(());
    }
    Err(Error::Violation {
        name: "periodic coefficient".into(),
        detail: format!(
            "coefficient of x^{nu:?} is not invariant{}",
            report
                .witness
                .map(|g| format!(" (moved by {g})"))
                .unwrap_or_default()
        ),
    })
}

/// `a_ν = (1/ν!)·[D^n p](e_{i_1},…,e_{i_n})` for all `|ν|₁ = n`.
///
/// Fails with a membership witness when `p ∉ P_n`, and with a violation when
/// two arrangements of some `ν` disagree or a coefficient is not invariant.
pub fn leading_coefficients<M: LatticeModule + 'static>(
    module: &Arc<M>,
    p: &M::Elem,
    n: usize,
    options: &SampleOptions,
) -> Result<BTreeMap<Vec<u32>, M::Elem>> {
    let membership = is_polynomial_like(module, p, n, options)?;
    if !membership.holds {
        return Err(membership.into_error());
    }
    let mut out = BTreeMap::new();
    for (nu, a) in extract_level(module, p, n)? {
        check_invariant(module.as_ref(), &nu, &a)?;
        out.insert(nu, a);
    }
    Ok(out)
}

/// First pair of arrangements of the same exponent at which `D^n a` differs.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ArrangementWitness {
    pub nu: Vec<u32>,
    /// 1-based generator indices.
    pub first: Vec<usize>,
    pub other: Vec<usize>,
    pub first_value: String,
    pub other_value: String,
}

/// Whether `[D^n a](h_{i_1},…,h_{i_n})` depends only on the multiset of
/// generator indices. Meaningful for any group; on non-abelian groups the
/// answer is observed rather than guaranteed.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ArrangementReport {
    pub order: usize,
    pub independent: bool,
    pub kind: CertKind,
    pub checked: usize,
    pub witness: Option<ArrangementWitness>,
}

pub fn arrangement_diagnostic<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
) -> Result<ArrangementReport> {
    let gens = module.group().free_generators();
    let dn = iterated_difference(module, a, n);
    let mut kind = module.cert_kind();
    let mut checked = 0;
    for nu in exponents(gens.len(), n as u32) {
        let arr = arrangements(&nu);
        let first = dn.eval(&index_tuple(&gens, &arr[0]))?;
        checked += 1;
        for k in &arr[1..] {
            let v = dn.eval(&index_tuple(&gens, k))?;
            checked += 1;
            let z = module.equals(&first, &v);
            kind = kind.meet(z.kind);
            if !z.zero {
                return Ok(ArrangementReport {
                    order: n,
                    independent: false,
                    kind,
                    checked,
                    witness: Some(ArrangementWitness {
                        nu: nu.clone(),
                        first: one_based(&arr[0]),
                        other: one_based(k),
                        first_value: module.describe(&first),
                        other_value: module.describe(&v),
                    }),
                });
            }
        }
    }
    Ok(ArrangementReport {
        order: n,
        independent: true,
        kind,
        checked,
        witness: None,
    })
}

/// `Σ_ν a_ν(x)·x^ν` with invariant coefficients; zero coefficients are absent.
#[derive(Clone, Debug)]
pub struct Decomposition<E> {
    rank: usize,
    coefficients: BTreeMap<Vec<u32>, E>,
}

impl<E: Additive> Decomposition<E> {
    pub fn new(rank: usize) -> Self {
        Decomposition {
            rank,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn insert(&mut self, nu: Vec<u32>, a: E) -> Result<()> {
        if nu.len() != self.rank {
            return Err(Error::Structural(format!(
                "exponent {nu:?} in a decomposition of rank {}",
                self.rank
            )));
        }
        self.coefficients.insert(nu, a);
        Ok(())
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, E> {
        &self.coefficients
    }

    pub fn get(&self, nu: &[u32]) -> Option<&E> {
        self.coefficients.get(nu)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Largest `|ν|₁`, or `None` when empty.
    pub fn degree(&self) -> Option<u32> {
        self.coefficients.keys().map(|nu| nu.iter().sum()).max()
    }
}

impl<E: PartialEq> PartialEq for Decomposition<E> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.coefficients == other.coefficients
    }
}

fn nu_key(nu: &[u32]) -> String {
    nu.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl Decomposition<FloquetElement> {
    /// `{"rank":r,"coefficients":{"2":[terms…],"1,0":[…]}}`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (nu, a) in &self.coefficients {
            map.insert(nu_key(nu), a.to_json());
        }
        serde_json::json!({"rank": self.rank, "coefficients": map})
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let rank = value
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("decomposition needs an integer \"rank\"".into()))?
            as usize;
        let map = value
            .get("coefficients")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("decomposition needs a \"coefficients\" object".into()))?;
        let mut d = Decomposition::new(rank);
        for (key, v) in map {
            let nu = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent key {key:?}")))
                    })
                    .collect::<Result<Vec<u32>>>()?
            };
            if nu.len() != rank {
                return Err(Error::Parse(format!("exponent key {key:?} does not have rank {rank}")));
            }
            let a = FloquetElement::from_json(v, Some(rank))?;
            if !a.is_invariant() {
                return Err(Error::Argument(format!(
                    "coefficient of x^{key} contains polynomial terms"
                )));
            }
            if !a.is_zero() {
                d.coefficients.insert(nu, a);
            }
        }
        Ok(d)
    }
}

/// `Σ_ν a_ν·x^ν` in the module.
pub fn reconstruct<M: LatticeModule>(module: &M, d: &Decomposition<M::Elem>) -> M::Elem {
    d.coefficients
        .iter()
        .fold(module.zero(), |acc, (nu, a)| acc.add(&module.mul_monomial(a, nu)))
}

/// Recovers the periodic coefficients of `p ∈ P_n`, highest level first.
///
/// The membership of `p` is certified once; each lower level is checked by
/// exact degree when the module knows it and by sampling otherwise. A failure
/// at level `k` is reported as non-membership in `P_k`.
pub fn decompose<M: LatticeModule + 'static>(
    module: &Arc<M>,
    p: &M::Elem,
    n: usize,
    options: &SampleOptions,
) -> Result<Decomposition<M::Elem>> {
    let group = module.group();
    if !group.is_abelian() || !group.torsion_moduli().is_empty() {
        return Err(Error::Unsupported(
            "decomposition is defined over free abelian groups".into(),
        ));
    }
    let membership = is_polynomial_like(module, p, n, options)?;
    if !membership.holds {
        return Err(membership.into_error());
    }
    let mut d = Decomposition::new(module.rank());
    let mut current = p.clone();
    for level in (0..=n).rev() {
        if level < n {
            check_level(module, &current, level, options)?;
        }
        let coefficients = if level == 0 {
            vec![(vec![0; module.rank()], current.clone())]
        } else {
            extract_level(module, &current, level)?
        };
        for (nu, a) in coefficients {
            if module.zero_test(&a).zero {
                continue;
            }
            check_invariant(module.as_ref(), &nu, &a)?;
            current = current.sub(&module.mul_monomial(&a, &nu));
            d.insert(nu, a)?;
        }
    }
    Ok(d)
}

fn check_level<M: LatticeModule + 'static>(
    module: &Arc<M>,
    current: &M::Elem,
    level: usize,
    options: &SampleOptions,
) -> Result<()> {
    match module.exact_degree(current) {
        Some(deg) if deg <= level as i64 => Ok(()),
        Some(deg) => Err(Error::Violation {
            name: "peeling".into(),
            detail: format!("remainder has degree {deg} at level {level}"),
        }),
        None => {
            let m = is_polynomial_like(module, current, level, options)?;
            if m.holds {
                Ok(())
            } else {
                Err(m.into_error())
            }
        }
    }
}

/// Coefficients below this modulus are dropped by [`fourier_fit`].
pub const FIT_DROP_TOL: f64 = 1e-10;
/// Largest denominator used when snapping fitted coefficients to rationals.
pub const FIT_MAX_DENOMINATOR: i64 = 1_000_000;

/// A periodic black-box coefficient approximated by a trigonometric polynomial.
#[derive(Clone, Debug)]
pub struct FourierFit {
    pub element: FloquetElement,
    /// Largest deviation from the black box at the supplied check points.
    pub residual: f64,
}

/// Truncated Fourier series `Σ_{|k_i| ≤ cutoff} ĉ_k e^{2πik·x}` of a
/// `Z^r`-periodic function, by a direct DFT on a uniform grid of the unit cell.
/// Coefficients are snapped to nearby small-denominator rationals.
pub fn fourier_fit(f: &NumericFunction, cutoff: usize, check_points: &[Vec<f64>]) -> FourierFit {
    let r = f.rank();
    let m = 4 * cutoff + 4;
    let cells = m.pow(r as u32);
    let samples: Vec<(Vec<f64>, Complex64)> = (0..cells)
        .map(|flat| {
            let x = digits(flat, m, r)
                .iter()
                .map(|&j| j as f64 / m as f64)
                .collect::<Vec<_>>();
            let v = f.eval(&x);
            (x, v)
        })
        .collect();
    let side = 2 * cutoff + 1;
    let mut element = FloquetElement::zero(r);
    for flat in 0..side.pow(r as u32) {
        let k: Vec<i64> = digits(flat, side, r)
            .iter()
            .map(|&j| j as i64 - cutoff as i64)
            .collect();
        let c: Complex64 = samples
            .iter()
            .map(|(x, v)| {
                let phase: f64 = k.iter().zip(x).map(|(&ki, xi)| ki as f64 * xi).sum();
                v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase)
            })
            .sum::<Complex64>()
            / cells as f64;
        if c.norm() < FIT_DROP_TOL {
            continue;
        }
        let q = Qi::new(snap(c.re), snap(c.im));
        element = element.add(&FloquetElement::term(k, vec![0; r], q));
    }
    let residual = check_points
        .iter()
        .map(|x| (element.evaluate(x) - f.eval(x)).norm())
        .fold(0.0, f64::max);
    FourierFit { element, residual }
}

fn digits(mut flat: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for d in out.iter_mut().rev() {
        *d = flat % base;
        flat /= base;
    }
    out
}

/// Best rational approximation with denominator at most
/// [`FIT_MAX_DENOMINATOR`], by continued fractions.
fn snap(x: f64) -> BigRational {
    if x.abs() < FIT_DROP_TOL || !x.is_finite() {
        return BigRational::zero();
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(FIT_MAX_DENOMINATOR) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = BigRational::new(h1.clone(), k1.clone());
        if (approx.to_f64().unwrap_or(f64::NAN) - x).abs() < FIT_DROP_TOL {
            return approx;
        }
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    if k1.is_zero() || k1.is_negative() {
        return BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    }
    BigRational::new(h1, k1)
}

/// A black-box polynomial-like function with known periodic coefficients.
pub struct NumericExample {
    pub name: &'static str,
    pub rank: usize,
    pub degree: usize,
    pub function: NumericFunction,
    pub coefficients: Vec<(Vec<u32>, NumericFunction)>,
}

fn tau() -> f64 {
    2.0 * std::f64::consts::PI
}

fn real<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(rank: usize, f: F) -> NumericFunction {
    NumericFunction::new(rank, move |x| Complex64::new(f(x), 0.0))
}

/// Built-in black boxes, addressable by name from the command line.
pub fn numeric_examples() -> Vec<NumericExample> {
    let t = tau();
    vec![
        NumericExample {
            name: "sin_x",
            rank: 1,
            degree: 1,
            function: real(1, move |x| (t * x[0]).sin() * x[0]),
            coefficients: vec![(vec![1], real(1, move |x| (t * x[0]).sin()))],
        },
        NumericExample {
            name: "cos_x2_plus_x",
            rank: 1,
            degree: 2,
            function: real(1, move |x| (t * x[0]).cos() * x[0] * x[0] + x[0]),
            coefficients: vec![
                (vec![2], real(1, move |x| (t * x[0]).cos())),
                (vec![1], real(1, |_| 1.0)),
            ],
        },
        NumericExample {
            name: "exp_sin_x_plus_tent",
            rank: 1,
            degree: 1,
            function: real(1, move |x| {
                let f = x[0].rem_euclid(1.0);
                (t * x[0]).sin().exp() * x[0] + f * (1.0 - f)
            }),
            coefficients: vec![
                (vec![1], real(1, move |x| (t * x[0]).sin().exp())),
                (vec![0], real(1, |x| {
                    let f = x[0].rem_euclid(1.0);
                    f * (1.0 - f)
                })),
            ],
        },
        NumericExample {
            name: "wave_x1_plus_3",
            rank: 2,
            degree: 1,
            function: NumericFunction::new(2, move |x| {
                Complex64::from_polar(1.0, t * (x[0] + x[1])) * x[0] + 3.0
            }),
            coefficients: vec![
                (vec![1, 0], NumericFunction::new(2, move |x| Complex64::from_polar(1.0, t * (x[0] + x[1])))),
                (vec![0, 0], real(2, |_| 3.0)),
            ],
        },
        NumericExample {
            name: "saddle_plus_sin_x2",
            rank: 2,
            degree: 2,
            function: real(2, move |x| {
                x[0] * x[0] - x[1] * x[1] + (t * x[0]).cos() * x[0] * x[1] + (t * x[1]).sin()
            }),
            coefficients: vec![
                (vec![2, 0], real(2, |_| 1.0)),
                (vec![1, 1], real(2, move |x| (t * x[0]).cos())),
                (vec![0, 2], real(2, |_| -1.0)),
                (vec![0, 0], real(2, move |x| (t * x[1]).sin())),
            ],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::{FloquetModule, NumericModule};
    use crate::scalar::{qi, ratio};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(exponents(3, 2).len(), 6);
        assert_eq!(exponents(0, 0), vec![Vec::<u32>::new()]);
        assert!(exponents(0, 1).is_empty());
    }

    #[test]
    fn arrangement_enumeration() {
        assert_eq!(arrangements(&[1, 1]), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(arrangements(&[2]), vec![vec![0, 0]]);
        assert_eq!(arrangements(&[2, 1, 1]).len(), 12);
    }

    #[test]
    fn monomial_difference_examples() {
        let v = monomial_difference(&[2], &[big(&[3]), big(&[5])]).unwrap();
        assert_eq!(v, BigInt::from(30));
        let v = monomial_difference(&[1, 1], &[big(&[1, 0]), big(&[0, 1])]).unwrap();
        assert_eq!(v, BigInt::one());
        let v = monomial_difference(&[2, 1], &[big(&[1, 0]), big(&[1, 0]), big(&[0, 1])]).unwrap();
        assert_eq!(v, BigInt::from(2));
        assert!(monomial_difference(&[2], &[big(&[1])]).is_err());
    }

    #[test]
    fn leading_coefficient_examples() {
        let m = Arc::new(FloquetModule::new(1));
        let e = FloquetElement::exponential(&[1]);
        let p = e.mul_monomial(&[1]).add(&FloquetElement::constant(1, qi(3, 0)));
        let lc = leading_coefficients(&m, &p, 1, &SampleOptions::default()).unwrap();
        assert_eq!(lc[&vec![1]], e);

        let m2 = Arc::new(FloquetModule::new(2));
        let lc = leading_coefficients(&m2, &FloquetElement::monomial(&[1, 1]), 2, &SampleOptions::default()).unwrap();
        assert_eq!(lc[&vec![1, 1]], FloquetElement::one(2));
        assert!(lc[&vec![2, 0]].is_zero());
        assert!(lc[&vec![0, 2]].is_zero());
    }

    #[test]
    fn decompose_example() {
        let m = Arc::new(FloquetModule::new(1));
        let e1 = FloquetElement::exponential(&[1]);
        let e2 = FloquetElement::exponential(&[2]);
        let p = FloquetElement::monomial(&[2]).add(&e1.mul_monomial(&[1])).add(&e2);
        let d = decompose(&m, &p, 2, &SampleOptions::default()).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.get(&[2]), Some(&FloquetElement::one(1)));
        assert_eq!(d.get(&[1]), Some(&e1));
        assert_eq!(d.get(&[0]), Some(&e2));
        assert_eq!(reconstruct(m.as_ref(), &d), p);
        let back = Decomposition::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn decompose_invariant_and_empty() {
        let m = Arc::new(FloquetModule::new(2));
        let p = FloquetElement::exponential(&[1, -1]);
        let d = decompose(&m, &p, 0, &SampleOptions::default()).unwrap();
        assert_eq!(d.get(&[0, 0]), Some(&p));
        assert!(reconstruct(m.as_ref(), &Decomposition::new(2)).is_zero());
    }

    #[test]
    fn decompose_rejects_with_order() {
        let m = Arc::new(FloquetModule::new(1));
        match decompose(&m, &FloquetElement::monomial(&[3]), 2, &SampleOptions::default()) {
            Err(Error::NotPolynomialLike { order, .. }) => assert_eq!(order, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn numeric_sin_example() {
        let ex = &numeric_examples()[0];
        let opts = SampleOptions::default();
        let m = Arc::new(NumericModule::new(1, &opts));
        let d = decompose(&m, &ex.function, 1, &opts).unwrap();
        let a = d.get(&[1]).unwrap();
        for x in m.points() {
            assert!((a.eval(x) - ex.coefficients[0].1.eval(x)).norm() < 1e-8);
        }
        assert!(d.get(&[0]).is_none());
    }

    #[test]
    fn fourier_fit_snaps_sine() {
        let f = real(1, |x| (tau() * x[0]).sin());
        let fit = fourier_fit(&f, 2, &[vec![0.1], vec![0.37]]);
        assert_eq!(fit.element.coefficient(&[1], &[0]), Qi::new(BigRational::zero(), ratio(-1, 2)));
        assert_eq!(fit.element.len(), 2);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn heisenberg_arrangement_dependence() {
        use crate::gmodule::{GroupFunction, GroupFunctionModule};
        use crate::group::GroupSpec;
        let m = Arc::new(GroupFunctionModule::new(GroupSpec::HeisenbergZ, &SampleOptions::default()));
        let r = arrangement_diagnostic(&m, &GroupFunction::heisenberg_coordinate(2), 2).unwrap();
        assert!(!r.independent);
        let w = r.witness.unwrap();
        assert_eq!((w.first, w.other), (vec![1, 2], vec![2, 1]));
    }
}
