//! Black-box complex functions on `R^r` with the translation action.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    Additive, CertKind, FloquetElement, GModule, GRing, InvarianceReport, LatticeModule,
    SampleOptions, ZeroTest,
};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::scalar::rational_to_f64;

type Evaluator = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A deterministic map `R^r → C`.
#[derive(Clone)]
pub struct NumericFunction {
    rank: usize,
    f: Evaluator,
}

impl fmt::Debug for NumericFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumericFunction(rank={})", self.rank)
    }
}

impl NumericFunction {
    pub fn new<F>(rank: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        NumericFunction {
            rank,
            f: Arc::new(f),
        }
    }

    pub fn constant(rank: usize, c: Complex64) -> Self {
        Self::new(rank, move |_| c)
    }

    pub fn from_floquet(e: &FloquetElement) -> Self {
        let e = e.clone();
        Self::new(e.rank(), move |x| e.evaluate(x))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        (self.f)(x)
    }

    /// `x ↦ f(x + g)`.
    pub fn translate(&self, g: Vec<f64>) -> Self {
        let f = self.f.clone();
        Self::new(self.rank, move |x| {
            let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + b).collect();
            f(&y)
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(self.rank, move |x| f(x) * g(x))
    }
}

impl Additive for NumericFunction {
    fn add(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(self.rank, move |x| f(x) + g(x))
    }

    fn neg(&self) -> Self {
        let f = self.f.clone();
        Self::new(self.rank, move |x| -f(x))
    }

    fn sub(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(self.rank, move |x| f(x) - g(x))
    }

    fn scale(&self, c: &BigRational) -> Self {
        let f = self.f.clone();
        let c = rational_to_f64(c);
        Self::new(self.rank, move |x| f(x) * c)
    }
}

/// Functions on `R^r` under translation by `Z^r`, compared on a fixed,
/// seeded set of sample points.
#[derive(Clone, Debug)]
pub struct NumericModule {
    group: GroupSpec,
    points: Vec<Vec<f64>>,
    probes: Vec<GroupElement>,
    tol: f64,
}

impl NumericModule {
    pub fn new(rank: usize, options: &SampleOptions) -> Self {
        let group = GroupSpec::free_abelian(rank);
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0x6e75_6d65_7269_6321);
        let extent = options.radius.max(1) as f64;
        let points = (0..options.samples.max(1))
            .map(|_| (0..rank).map(|_| rng.gen_range(-extent..extent)).collect())
            .collect();
        let mut probes = group.generators();
        probes.extend((0..options.samples).map(|_| group.random_element(&mut rng, options.radius)));
        NumericModule {
            group,
            points,
            probes,
            tol: options.tol,
        }
    }

    pub fn rank(&self) -> usize {
        self.group.free_rank()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

fn to_f64_vec(g: &GroupElement) -> Vec<f64> {
    g.free_coords()
        .expect("lattice elements are abelian")
        .iter()
        .map(|c| rational_to_f64(&BigRational::from_integer(c.clone())))
        .collect()
}

impl GModule for NumericModule {
    type Elem = NumericFunction;

    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn zero(&self) -> NumericFunction {
        NumericFunction::constant(self.rank(), Complex64::new(0.0, 0.0))
    }

    fn act(&self, a: &NumericFunction, g: &GroupElement) -> Result<NumericFunction> {
        if a.rank() != self.rank() || !self.group.contains(g) {
            return Err(Error::Structural(format!(
                "cannot act by {g} on a rank-{} function in Z^{}",
                a.rank(),
                self.rank()
            )));
        }
        Ok(a.translate(to_f64_vec(g)))
    }

    fn zero_test(&self, a: &NumericFunction) -> ZeroTest {
        let max_abs = self
            .points
            .iter()
            .map(|x| a.eval(x).norm())
            .fold(0.0_f64, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) });
        ZeroTest {
            kind: CertKind::Sampled,
            zero: max_abs <= self.tol,
            max_abs,
            samples: self.points.len(),
        }
    }

    fn invariance(&self, a: &NumericFunction) -> InvarianceReport {
        for x in &self.points {
            let base = a.eval(x);
            for g in &self.probes {
                let y: Vec<f64> = x.iter().zip(to_f64_vec(g)).map(|(p, q)| p + q).collect();
                let d = (a.eval(&y) - base).norm();
                if d.is_nan() || d > self.tol {
                    return InvarianceReport {
                        invariant: false,
                        kind: CertKind::Sampled,
                        witness: Some(g.clone()),
                    };
                }
            }
        }
        InvarianceReport {
            invariant: true,
            kind: CertKind::Sampled,
            witness: None,
        }
    }

    fn describe(&self, a: &NumericFunction) -> String {
        let shown: Vec<String> = self
            .points
            .iter()
            .take(3)
            .map(|x| format!("f({x:.3?}) = {:.6e}", a.eval(x)))
            .collect();
        shown.join("; ")
    }

    fn cert_kind(&self) -> CertKind {
        CertKind::Sampled
    }
}

impl GRing for NumericModule {
    fn one(&self) -> NumericFunction {
        NumericFunction::constant(self.rank(), Complex64::new(1.0, 0.0))
    }

    fn mul(&self, a: &NumericFunction, b: &NumericFunction) -> NumericFunction {
        a.mul(b)
    }
}

impl LatticeModule for NumericModule {
    fn coordinate(&self, i: usize) -> NumericFunction {
        NumericFunction::new(self.rank(), move |x| Complex64::new(x[i], 0.0))
    }

    fn mul_monomial(&self, a: &NumericFunction, nu: &[u32]) -> NumericFunction {
        let f = a.clone();
        let nu = nu.to_vec();
        NumericFunction::new(self.rank(), move |x| {
            let m: f64 = x.iter().zip(&nu).map(|(&xi, &e)| xi.powi(e as i32)).product();
            f.eval(x) * m
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn translation_and_invariance() {
        let m = NumericModule::new(1, &SampleOptions::default());
        let s = NumericFunction::new(1, |x| Complex64::new((2.0 * PI * x[0]).sin(), 0.0));
        assert!(m.invariance(&s).invariant);
        let x = m.coordinate(0);
        let rep = m.invariance(&x);
        assert!(!rep.invariant);
        assert_eq!(rep.witness, Some(GroupElement::lattice(&[1])));
        let shifted = m.act(&x, &GroupElement::lattice(&[2])).unwrap();
        assert!((shifted.eval(&[0.5]).re - 2.5).abs() < 1e-15);
    }

    #[test]
    fn zero_test_uses_tolerance() {
        let m = NumericModule::new(2, &SampleOptions::default());
        assert!(m.zero_test(&NumericFunction::constant(2, Complex64::new(1e-10, 0.0))).zero);
        assert!(!m.zero_test(&NumericFunction::constant(2, Complex64::new(1e-6, 0.0))).zero);
    }
}
