//! Exact elements `Σ c·e^{2πi k·x}·x^ν` with `c ∈ Q(i)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Additive, CertKind, GModule, GRing, InvarianceReport, LatticeModule, ZeroTest};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::scalar::{binomial, format_rational, parse_rational, qi_from_int, qi_is_zero, qi_one, Qi};

/// Fourier index `k` and monomial exponent `ν` of one term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub k: Vec<i64>,
    pub nu: Vec<u32>,
}

/// Canonical form: a sorted map with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloquetElement {
    rank: usize,
    terms: BTreeMap<TermKey, Qi>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: Vec<i64>,
    nu: Vec<i64>,
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

impl FloquetElement {
    pub fn zero(rank: usize) -> Self {
        FloquetElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, qi_one())
    }

    pub fn constant(rank: usize, c: Qi) -> Self {
        Self::term(vec![0; rank], vec![0; rank], c)
    }

    /// A single term `c·e^{2πi k·x}·x^ν`.
    ///
    /// Panics if `k` and `nu` have different lengths.
    pub fn term(k: Vec<i64>, nu: Vec<u32>, c: Qi) -> Self {
        assert_eq!(k.len(), nu.len(), "fourier index and exponent rank differ");
        let mut e = Self::zero(k.len());
        e.add_term(TermKey { k, nu }, c);
        e
    }

    /// The coordinate function `x_i` (0-based).
    pub fn coordinate(rank: usize, i: usize) -> Self {
        let mut nu = vec![0; rank];
        nu[i] = 1;
        Self::term(vec![0; rank], nu, qi_one())
    }

    /// `e^{2πi k·x}`.
    pub fn exponential(k: &[i64]) -> Self {
        Self::term(k.to_vec(), vec![0; k.len()], qi_one())
    }

    /// `x^ν`.
    pub fn monomial(nu: &[u32]) -> Self {
        Self::term(vec![0; nu.len()], nu.to_vec(), qi_one())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Qi)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |ν|₁` over the stored terms, `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|t| t.nu.iter().map(|&e| e as i64).sum::<i64>())
            .max()
            .unwrap_or(-1)
    }

    /// Invariant under `Z^r` iff no term carries a monomial factor.
    pub fn is_invariant(&self) -> bool {
        self.terms.keys().all(|t| t.nu.iter().all(|&e| e == 0))
    }

    /// Coefficient of a given term (zero if absent).
    pub fn coefficient(&self, k: &[i64], nu: &[u32]) -> Qi {
        self.terms
            .get(&TermKey {
                k: k.to_vec(),
                nu: nu.to_vec(),
            })
            .cloned()
            .unwrap_or_else(|| qi_from_int(&BigInt::zero()))
    }

    fn add_term(&mut self, key: TermKey, c: Qi) {
        assert_eq!(key.k.len(), self.rank, "term rank differs from element rank");
        if qi_is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + c;
                if qi_is_zero(v) {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn mul_qi(&self, c: &Qi) -> Self {
        if qi_is_zero(c) {
            return Self::zero(self.rank);
        }
        FloquetElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "rank mismatch in product");
        let mut out = Self::zero(self.rank);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                let key = TermKey {
                    k: t1.k.iter().zip(&t2.k).map(|(a, b)| a + b).collect(),
                    nu: t1.nu.iter().zip(&t2.nu).map(|(a, b)| a + b).collect(),
                };
                out.add_term(key, c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, nu: &[u32]) -> Self {
        assert_eq!(nu.len(), self.rank, "rank mismatch in monomial product");
        FloquetElement {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    let key = TermKey {
                        k: t.k.clone(),
                        nu: t.nu.iter().zip(nu).map(|(a, b)| a + b).collect(),
                    };
                    (key, c.clone())
                })
                .collect(),
        }
    }

    /// Translation `f ↦ f(· + g)` by an integer vector. The exponential
    /// factors are unchanged because `k·g ∈ Z`; monomials expand binomially.
    pub fn shift(&self, g: &[BigInt]) -> Self {
        assert_eq!(g.len(), self.rank, "shift vector has the wrong rank");
        let mut out = Self::zero(self.rank);
        for (t, c) in &self.terms {
            // (μ, Π C(ν_i, μ_i) g_i^{ν_i-μ_i})
            let mut expansion: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), BigInt::one())];
            for (i, &e) in t.nu.iter().enumerate() {
                let mut next = Vec::with_capacity(expansion.len() * (e as usize + 1));
                for (mu, w) in &expansion {
                    for m in 0..=e {
                        let f = binomial(e, m) * num_traits::pow(g[i].clone(), (e - m) as usize);
                        if f.is_zero() {
                            continue;
                        }
                        let mut mu2 = mu.clone();
                        mu2.push(m);
                        next.push((mu2, w * &f));
                    }
                }
                expansion = next;
            }
            for (mu, w) in expansion {
                out.add_term(
                    TermKey {
                        k: t.k.clone(),
                        nu: mu,
                    },
                    c * qi_from_int(&w),
                );
            }
        }
        out
    }

    /// Floating-point evaluation at `x ∈ R^r`.
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.rank, "evaluation point has the wrong rank");
        self.terms
            .iter()
            .map(|(t, c)| {
                let phase: f64 = t.k.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum();
                let mono: f64 = t
                    .nu
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product();
                crate::scalar::qi_to_c64(c) * Complex64::from_polar(1.0, 2.0 * PI * phase) * mono
            })
            .sum()
    }

    /// JSON list of `{"k":[..],"nu":[..],"re":"p/q","im":"p/q"}` in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(t, c)| TermJson {
                k: t.k.clone(),
                nu: t.nu.iter().map(|&e| e as i64).collect(),
                re: format_rational(&c.re),
                im: format_rational(&c.im),
            })
            .collect();
        serde_json::to_value(list).expect("term list serializes")
    }

    /// Parses the JSON term list. An empty list needs `rank`; otherwise
    /// the rank is read off the vectors and must agree with `rank` if given.
    pub fn from_json(value: &serde_json::Value, rank: Option<usize>) -> Result<Self> {
        let list: Vec<TermJson> = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("element terms: {e}")))?;
        let r = match (list.first(), rank) {
            (Some(t), _) => t.k.len(),
            (None, Some(r)) => r,
            (None, None) => 1,
        };
        if let Some(expected) = rank {
            if expected != r {
                return Err(Error::Parse(format!(
                    "element has rank {r}, expected {expected}"
                )));
            }
        }
        let mut out = Self::zero(r);
        for t in list {
            if t.k.len() != r || t.nu.len() != r {
                return Err(Error::Parse(format!(
                    "term vectors must all have length {r}"
                )));
            }
            if let Some(e) = t.nu.iter().find(|&&e| e < 0) {
                return Err(Error::Parse(format!("negative exponent {e} in nu")));
            }
            let nu = t
                .nu
                .iter()
                .map(|&e| u32::try_from(e).map_err(|_| Error::Parse(format!("exponent {e} too large"))))
                .collect::<Result<Vec<u32>>>()?;
            let c = Qi::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            out.add_term(TermKey { k: t.k, nu }, c);
        }
        Ok(out)
    }
}

impl Additive for FloquetElement {
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "rank mismatch in sum");
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        FloquetElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    fn scale(&self, c: &BigRational) -> Self {
        self.mul_qi(&Qi::new(c.clone(), BigRational::zero()))
    }
}

impl fmt::Display for FloquetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", crate::scalar::format_qi(c))?;
            if t.k.iter().any(|&k| k != 0) {
                write!(f, "·e(2πi{:?}·x)", t.k)?;
            }
            for (j, &e) in t.nu.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{}", j + 1)?,
                    _ => write!(f, "·x{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// The Floquet algebra over `Z^r` as a right `Z^r`-module.
#[derive(Clone, Debug)]
pub struct FloquetModule {
    group: GroupSpec,
}

impl FloquetModule {
    pub fn new(rank: usize) -> Self {
        FloquetModule {
            group: GroupSpec::free_abelian(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.group.free_rank()
    }

    fn check(&self, a: &FloquetElement) -> Result<()> {
        if a.rank() != self.rank() {
            return Err(Error::Structural(format!(
                "element of rank {} used in module of rank {}",
                a.rank(),
                self.rank()
            )));
        }
        Ok(())
    }
}

impl GModule for FloquetModule {
    type Elem = FloquetElement;

    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn zero(&self) -> FloquetElement {
        FloquetElement::zero(self.rank())
    }

    fn act(&self, a: &FloquetElement, g: &GroupElement) -> Result<FloquetElement> {
        self.check(a)?;
        if !self.group.contains(g) {
            return Err(Error::Structural(format!("{g} is not an element of Z^{}", self.rank())));
        }
        let coords = g.free_coords().expect("lattice elements are abelian");
        Ok(a.shift(coords))
    }

    fn zero_test(&self, a: &FloquetElement) -> ZeroTest {
        ZeroTest {
            kind: CertKind::Exact,
            zero: a.is_zero(),
            max_abs: 0.0,
            samples: 0,
        }
    }

    fn invariance(&self, a: &FloquetElement) -> InvarianceReport {
        let witness = a.terms().find_map(|(t, _)| t.nu.iter().position(|&e| e > 0));
        InvarianceReport {
            invariant: witness.is_none(),
            kind: CertKind::Exact,
            witness: witness.map(|i| self.group.free_generators().swap_remove(i)),
        }
    }

    fn describe(&self, a: &FloquetElement) -> String {
        a.to_string()
    }

    fn cert_kind(&self) -> CertKind {
        CertKind::Exact
    }

    fn exact_degree(&self, a: &FloquetElement) -> Option<i64> {
        Some(a.degree())
    }
}

impl GRing for FloquetModule {
    fn one(&self) -> FloquetElement {
        FloquetElement::one(self.rank())
    }

    fn mul(&self, a: &FloquetElement, b: &FloquetElement) -> FloquetElement {
        a.mul(b)
    }
}

impl LatticeModule for FloquetModule {
    fn coordinate(&self, i: usize) -> FloquetElement {
        FloquetElement::coordinate(self.rank(), i)
    }

    fn mul_monomial(&self, a: &FloquetElement, nu: &[u32]) -> FloquetElement {
        a.mul_monomial(nu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn x() -> FloquetElement {
        FloquetElement::coordinate(1, 0)
    }

    #[test]
    fn shift_of_x() {
        let m = FloquetModule::new(1);
        let s = m.act(&x(), &GroupElement::lattice(&[1])).unwrap();
        assert_eq!(s, x().add(&FloquetElement::one(1)));
    }

    #[test]
    fn exponential_is_periodic() {
        let m = FloquetModule::new(1);
        let e = FloquetElement::exponential(&[1]);
        for g in -3..=3 {
            assert_eq!(m.act(&e, &GroupElement::lattice(&[g])).unwrap(), e);
        }
    }

    #[test]
    fn shifted_exponential_quadratic() {
        // e(x)·x² shifted by 2 is e(x)(x² + 4x + 4)
        let m = FloquetModule::new(1);
        let a = FloquetElement::term(vec![1], vec![2], qi(1, 0));
        let s = m.act(&a, &GroupElement::lattice(&[2])).unwrap();
        let e = FloquetElement::exponential(&[1]);
        let expected = e.mul(&FloquetElement::monomial(&[2]).add(&x().scale_int(&4.into())).add(&FloquetElement::constant(1, qi(4, 0))));
        assert_eq!(s, expected);
        for i in 0..10 {
            let t = -1.3 + 0.37 * i as f64;
            let lhs = s.evaluate(&[t]);
            let rhs = a.evaluate(&[t + 2.0]);
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn products() {
        assert_eq!(x().mul(&x()), FloquetElement::monomial(&[2]));
        let e = FloquetElement::exponential(&[1]);
        let em = FloquetElement::exponential(&[-1]);
        assert_eq!(e.mul(&em), FloquetElement::one(1));
        let lhs = x().add(&e).mul(&x());
        let rhs = FloquetElement::monomial(&[2]).add(&FloquetElement::term(vec![1], vec![1], qi(1, 0)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degrees() {
        assert_eq!(FloquetElement::zero(2).degree(), -1);
        assert_eq!(FloquetElement::exponential(&[3, -1]).degree(), 0);
        assert_eq!(FloquetElement::term(vec![1, 0], vec![1, 2], qi(1, 0)).degree(), 3);
    }

    #[test]
    fn invariance_witness() {
        let m = FloquetModule::new(2);
        assert!(m.invariance(&FloquetElement::exponential(&[2, 1])).invariant);
        let rep = m.invariance(&FloquetElement::coordinate(2, 0));
        assert!(!rep.invariant);
        assert_eq!(rep.witness, Some(GroupElement::lattice(&[1, 0])));
    }

    #[test]
    fn cancellation_keeps_canonical_form() {
        let a = x().add(&FloquetElement::exponential(&[1]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.sub(&a).len(), 0);
    }

    #[test]
    fn json_parse() {
        let v: serde_json::Value = serde_json::from_str(
            r#"[{"k":[1],"nu":[1],"re":"1/2","im":"-3"},{"k":[0],"nu":[0],"re":"2","im":"0"}]"#,
        )
        .unwrap();
        let e = FloquetElement::from_json(&v, None).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(FloquetElement::from_json(&e.to_json(), Some(1)).unwrap(), e);
        let neg: serde_json::Value =
            serde_json::from_str(r#"[{"k":[0],"nu":[-1],"re":"1","im":"0"}]"#).unwrap();
        assert!(FloquetElement::from_json(&neg, None).is_err());
        let empty = serde_json::json!([]);
        assert_eq!(FloquetElement::from_json(&empty, Some(3)).unwrap(), FloquetElement::zero(3));
    }

    #[test]
    fn act_rejects_foreign_elements() {
        let m = FloquetModule::new(2);
        assert!(m.act(&FloquetElement::zero(2), &GroupElement::lattice(&[1])).is_err());
        assert!(m.act(&x(), &GroupElement::lattice(&[1, 0])).is_err());
    }
}
