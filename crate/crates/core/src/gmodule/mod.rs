//! Right G-modules `A` with a linear action `a ↦ a^g`.
//!
//! Three concrete modules are provided:
//!
//! * [`FloquetModule`]: the exact algebra spanned by `e^{2πi k·x}·x^ν` over
//!   `Z^r`, acting by translation `f^g(x) = f(x+g)`.
//! * [`NumericModule`]: black-box complex functions on `R^r`, same action,
//!   compared by sampling.
//! * [`GroupFunctionModule`]: exact `Q(i)`-valued functions on any
//!   supported group with `(a^g)(h) = a(g·h)`.
//!
//! A standard lattice `Z^r` is assumed. A general rank-r lattice is handled
//! by pre-composing functions with its basis matrix.

mod floquet_element;
mod group_function;
mod numeric;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::group::{GroupElement, GroupSpec};

pub use floquet_element::{FloquetElement, FloquetModule, TermKey};
pub use group_function::{additive_function, GroupFunction, GroupFunctionModule};
pub use numeric::{NumericFunction, NumericModule};

/// Vector-space operations carried by module elements themselves.
pub trait Additive: Clone + Send + Sync + fmt::Debug {
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &BigRational) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn scale_int(&self, c: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(c.clone()))
    }
}

/// How strongly a yes/no answer is backed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    /// Decided exactly (a proof).
    Exact,
    /// Exact values compared at finitely many sample points.
    SampledExact,
    /// Floating-point values compared at sample points within a tolerance.
    Sampled,
}

impl CertKind {
    /// The weaker of two certificate kinds.
    pub fn meet(self, other: CertKind) -> CertKind {
        use CertKind::*;
        match (self, other) {
            (Sampled, _) | (_, Sampled) => Sampled,
            (SampledExact, _) | (_, SampledExact) => SampledExact,
            _ => Exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroTest {
    pub kind: CertKind,
    pub zero: bool,
    /// Largest observed modulus; 0 for exact tests of zero elements.
    pub max_abs: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub kind: CertKind,
    /// A group element `g` with `a^g ≠ a`, when one was found.
    pub witness: Option<GroupElement>,
}

/// Knobs for every randomized check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleOptions {
    /// Number of random tuples (or points) per check.
    pub samples: usize,
    /// Coordinate radius for random group elements.
    pub radius: i64,
    pub seed: u64,
    /// Absolute tolerance for floating-point comparisons.
    pub tol: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            samples: 64,
            radius: 3,
            seed: 0,
            tol: 1e-8,
        }
    }
}

/// A right G-module. The action is linear; `act(act(a,g),h) = act(a, g·h)`.
pub trait GModule: Send + Sync {
    type Elem: Additive;

    fn group(&self) -> &GroupSpec;

    fn zero(&self) -> Self::Elem;

    fn act(&self, a: &Self::Elem, g: &GroupElement) -> Result<Self::Elem>;

    fn zero_test(&self, a: &Self::Elem) -> ZeroTest;

    /// Whether `a^g = a` for all `g`; exact or sampled depending on the module.
    fn invariance(&self, a: &Self::Elem) -> InvarianceReport;

    fn describe(&self, a: &Self::Elem) -> String;

    /// Kind of certificate produced by [`GModule::zero_test`].
    fn cert_kind(&self) -> CertKind;

    /// Exact degree, for modules where polynomial degree is decidable.
    fn exact_degree(&self, _a: &Self::Elem) -> Option<i64> {
        None
    }

    fn equals(&self, a: &Self::Elem, b: &Self::Elem) -> ZeroTest {
        self.zero_test(&a.sub(b))
    }
}

/// A module that is also a ring on which every `a ↦ a^g` is an automorphism.
pub trait GRing: GModule {
    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// A ring of functions on `R^r` (or `Z^r`) carrying the coordinate functions.
pub trait LatticeModule: GRing {
    fn rank(&self) -> usize {
        self.group().free_rank()
    }

    /// The coordinate function `x_i` (0-based).
    fn coordinate(&self, i: usize) -> Self::Elem;

    /// `a · x^ν`.
    fn mul_monomial(&self, a: &Self::Elem, nu: &[u32]) -> Self::Elem {
        let mut out = a.clone();
        for (i, &e) in nu.iter().enumerate() {
            let x = self.coordinate(i);
            for _ in 0..e {
                out = self.mul(&out, &x);
            }
        }
        out
    }
}

/// Convenience wrapper around [`GModule::invariance`].
pub fn is_invariant<M: GModule>(module: &M, a: &M::Elem) -> InvarianceReport {
    module.invariance(a)
}
