//! Exact `Q(i)`-valued functions on a group, acted on by `(a^g)(h) = a(g·h)`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    Additive, CertKind, GModule, GRing, InvarianceReport, SampleOptions, ZeroTest,
};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::scalar::{format_qi, qi_is_zero, qi_one, qi_real, qi_to_c64, Qi};

type Evaluator = Arc<dyn Fn(&GroupElement) -> Result<Qi> + Send + Sync>;

#[derive(Clone)]
pub struct GroupFunction {
    f: Evaluator,
}

impl fmt::Debug for GroupFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupFunction")
    }
}

impl GroupFunction {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&GroupElement) -> Result<Qi> + Send + Sync + 'static,
    {
        GroupFunction { f: Arc::new(f) }
    }

    pub fn constant(c: Qi) -> Self {
        Self::new(move |_| Ok(c.clone()))
    }

    pub fn eval(&self, h: &GroupElement) -> Result<Qi> {
        (self.f)(h)
    }

    /// The Heisenberg coordinate function `(a, b, c) ↦ a`, `b` or `c`
    /// for `index` 0, 1 or 2.
    pub fn heisenberg_coordinate(index: usize) -> Self {
        assert!(index < 3, "Heisenberg elements have three coordinates");
        Self::new(move |h| match h {
            GroupElement::Heisenberg { a, b, c } => {
                let v = [a, b, c][index];
                Ok(qi_real(BigRational::from_integer(v.clone())))
            }
            other => Err(Error::Structural(format!("{other} is not a Heisenberg element"))),
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(move |h| Ok(f(h)? * g(h)?))
    }
}

impl Additive for GroupFunction {
    fn add(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(move |h| Ok(f(h)? + g(h)?))
    }

    fn neg(&self) -> Self {
        let f = self.f.clone();
        Self::new(move |h| Ok(-f(h)?))
    }

    fn sub(&self, other: &Self) -> Self {
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(move |h| Ok(f(h)? - g(h)?))
    }

    fn scale(&self, c: &BigRational) -> Self {
        let f = self.f.clone();
        let c = qi_real(c.clone());
        Self::new(move |h| Ok(f(h)? * c.clone()))
    }
}

/// `u(h) = α(abelianize(h))` for weights `α` on the free part. Such a `u`
/// satisfies `u(g·h) = u(h) + α(g)`. Torsion weights must vanish since a
/// homomorphism to `Q` kills elements of finite order.
pub fn additive_function(
    group: &GroupSpec,
    free_weights: &[BigRational],
    torsion_weights: &[BigRational],
) -> Result<GroupFunction> {
    if free_weights.len() != group.free_rank() {
        return Err(Error::Argument(format!(
            "expected {} free weights, got {}",
            group.free_rank(),
            free_weights.len()
        )));
    }
    if torsion_weights.len() > group.torsion_moduli().len() {
        return Err(Error::Argument("more torsion weights than torsion factors".into()));
    }
    if torsion_weights.iter().any(|w| !w.is_zero()) {
        return Err(Error::Argument(
            "a homomorphism to Q must vanish on torsion; torsion weights must be 0".into(),
        ));
    }
    let group = group.clone();
    let weights = free_weights.to_vec();
    Ok(GroupFunction::new(move |h| {
        let coords = group.abelianize(h)?;
        let v = coords
            .free_part
            .iter()
            .zip(&weights)
            .fold(BigRational::zero(), |acc, (c, w)| {
                acc + BigRational::from_integer(c.clone()) * w
            });
        Ok(qi_real(v))
    }))
}

/// Functions on a group, compared exactly at a seeded set of sample points.
#[derive(Clone, Debug)]
pub struct GroupFunctionModule {
    group: GroupSpec,
    points: Vec<GroupElement>,
    probes: Vec<GroupElement>,
}

impl GroupFunctionModule {
    /// Sample points are the identity, the generators and `samples` random
    /// elements; invariance probes add the commutators of generator pairs.
    pub fn new(group: GroupSpec, options: &SampleOptions) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0x6772_6f75_7066_6e63);
        let gens = group.generators();
        let mut points = vec![group.identity()];
        points.extend(gens.iter().cloned());
        points.extend((0..options.samples).map(|_| group.random_element(&mut rng, options.radius)));

        let mut probes = gens.clone();
        for (i, x) in gens.iter().enumerate() {
            for y in &gens[i + 1..] {
                let c = group.commutator(x, y).expect("generators belong to the group");
                if !group.is_identity(&c) && !probes.contains(&c) {
                    probes.push(c);
                }
            }
        }
        probes.extend((0..options.samples).map(|_| group.random_element(&mut rng, options.radius)));
        GroupFunctionModule {
            group,
            points,
            probes,
        }
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.points
    }
}

impl GModule for GroupFunctionModule {
    type Elem = GroupFunction;

    fn group(&self) -> &GroupSpec {
        &self.group
    }

    fn zero(&self) -> GroupFunction {
        GroupFunction::constant(qi_real(BigRational::zero()))
    }

    fn act(&self, a: &GroupFunction, g: &GroupElement) -> Result<GroupFunction> {
        if !self.group.contains(g) {
            return Err(Error::Structural(format!("{g} is not an element of {:?}", self.group)));
        }
        let f = a.f.clone();
        let group = self.group.clone();
        let g = g.clone();
        Ok(GroupFunction::new(move |h| f(&group.multiply(&g, h)?)))
    }

    fn zero_test(&self, a: &GroupFunction) -> ZeroTest {
        let mut max_abs = 0.0_f64;
        let mut zero = true;
        for h in &self.points {
            match a.eval(h) {
                Ok(v) => {
                    if !qi_is_zero(&v) {
                        zero = false;
                        max_abs = max_abs.max(qi_to_c64(&v).norm());
                    }
                }
                Err(_) => {
                    zero = false;
                    max_abs = f64::NAN;
                }
            }
        }
        ZeroTest {
            kind: CertKind::SampledExact,
            zero,
            max_abs,
            samples: self.points.len(),
        }
    }

    fn invariance(&self, a: &GroupFunction) -> InvarianceReport {
        for h in &self.points {
            let base = a.eval(h);
            for g in &self.probes {
                let moved = self.group.multiply(g, h).and_then(|gh| a.eval(&gh));
                let same = matches!((&base, &moved), (Ok(p), Ok(q)) if p == q);
                if !same {
                    return InvarianceReport {
                        invariant: false,
                        kind: CertKind::SampledExact,
                        witness: Some(g.clone()),
                    };
                }
            }
        }
        InvarianceReport {
            invariant: true,
            kind: CertKind::SampledExact,
            witness: None,
        }
    }

    fn describe(&self, a: &GroupFunction) -> String {
        let shown: Vec<String> = self
            .points
            .iter()
            .take(4)
            .map(|h| match a.eval(h) {
                Ok(v) => format!("u{h} = {}", format_qi(&v)),
                Err(e) => format!("u{h}: {e}"),
            })
            .collect();
        shown.join("; ")
    }

    fn cert_kind(&self) -> CertKind {
        CertKind::SampledExact
    }
}

impl GRing for GroupFunctionModule {
    fn one(&self) -> GroupFunction {
        GroupFunction::constant(qi_one())
    }

    fn mul(&self, a: &GroupFunction, b: &GroupFunction) -> GroupFunction {
        a.mul(b)
    }
}
