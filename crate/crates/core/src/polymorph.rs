//! Polymorphisms: maps `G^n → B` additive in every argument.
//!
//! A polymorphism kills commutators and torsion, so it factors through the
//! free part of the abelianization and is determined by its values
//! `b_{i_1..i_n}` on tuples of free generators:
//! `L(g_1..g_n) = Σ_I g_{1,i_1}⋯g_{n,i_n}·b_I`, with `g_{j,i}` the free
//! coordinates of `g_j`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::diffcalc::{is_polynomial_like, iterated_difference, random_tuples, CheckReport, Cochain};
use crate::error::{Error, Result};
use crate::gmodule::{Additive, CertKind, FloquetElement, GModule, SampleOptions};
use crate::group::{format_tuple, GroupElement, GroupSpec};
use crate::scalar::binomial;

/// Dense tensor of values on generator multi-indices `{0..r}^n`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Polymorphism<E> {
    arity: usize,
    rank: usize,
    values: Vec<E>,
    zero: E,
}

/// Iterates `{0..rank}^arity` in row-major order.
pub fn multi_indices(arity: usize, rank: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..rank).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

impl<E: Additive> Polymorphism<E> {
    pub fn new(arity: usize, rank: usize, values: Vec<E>, zero: E) -> Result<Self> {
        let expected = rank.checked_pow(arity as u32).ok_or_else(|| {
            Error::Argument(format!("tensor {rank}^{arity} is too large"))
        })?;
        if values.len() != expected {
            return Err(Error::Structural(format!(
                "tensor of arity {arity} over rank {rank} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Polymorphism {
            arity,
            rank,
            values,
            zero,
        })
    }

    pub fn from_fn<F: FnMut(&[usize]) -> E>(arity: usize, rank: usize, zero: E, mut f: F) -> Self {
        let values = multi_indices(arity, rank).iter().map(|i| f(i)).collect();
        Polymorphism {
            arity,
            rank,
            values,
            zero,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    fn flat(&self, index: &[usize]) -> usize {
        index.iter().fold(0, |acc, &i| acc * self.rank + i)
    }

    pub fn value(&self, index: &[usize]) -> &E {
        assert_eq!(index.len(), self.arity, "multi-index has the wrong length");
        &self.values[self.flat(index)]
    }

    /// Weight `Π_j c_{j,i_j}` of every multi-index for given free coordinates.
    fn weights(&self, coords: &[Vec<BigInt>]) -> Vec<BigInt> {
        multi_indices(self.arity, self.rank)
            .iter()
            .map(|idx| {
                idx.iter()
                    .enumerate()
                    .fold(BigInt::one(), |acc, (j, &i)| acc * &coords[j][i])
            })
            .collect()
    }

    /// Exact evaluation on a tuple of group elements.
    pub fn eval(&self, group: &GroupSpec, args: &[GroupElement]) -> Result<E> {
        if args.len() != self.arity {
            return Err(Error::Structural(format!(
                "{}-morphism evaluated on {} arguments",
                self.arity,
                args.len()
            )));
        }
        if group.free_rank() != self.rank {
            return Err(Error::Structural(format!(
                "polymorphism of rank {} used with a group of free rank {}",
                self.rank,
                group.free_rank()
            )));
        }
        let coords = args
            .iter()
            .map(|g| group.abelianize(g).map(|c| c.free_part))
            .collect::<Result<Vec<_>>>()?;
        let mut acc = self.zero.clone();
        for (w, b) in self.weights(&coords).iter().zip(&self.values) {
            if !w.is_zero() {
                acc = acc.add(&b.scale_int(w));
            }
        }
        Ok(acc)
    }

    /// `Σ_k c_k·L_k` over polymorphisms of equal shape.
    pub fn combine(terms: &[(BigRational, &Polymorphism<E>)]) -> Result<Polymorphism<E>> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::Argument("empty linear combination".into()))?;
        let mut values = vec![first.zero.clone(); first.values.len()];
        for (c, p) in terms {
            if p.arity != first.arity || p.rank != first.rank {
                return Err(Error::Structural("polymorphisms of different shape".into()));
            }
            for (v, b) in values.iter_mut().zip(&p.values) {
                *v = v.add(&b.scale(c));
            }
        }
        Polymorphism::new(first.arity, first.rank, values, first.zero.clone())
    }

    /// Compares every `b_I` with `b_{sort(I)}`; returns the first offending
    /// index pair.
    pub fn symmetry_defect<F>(&self, mut equal: F) -> Option<(Vec<usize>, Vec<usize>)>
    where
        F: FnMut(&E, &E) -> bool,
    {
        for idx in multi_indices(self.arity, self.rank) {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            if sorted != idx && !equal(self.value(&idx), self.value(&sorted)) {
                return Some((idx, sorted));
            }
        }
        None
    }

    /// Polymorphism as a lazily evaluated cochain.
    pub fn as_cochain<M>(&self, module: Arc<M>) -> Cochain<M>
    where
        M: GModule<Elem = E> + 'static,
        E: 'static,
    {
        let p = self.clone();
        let group = module.group().clone();
        Cochain::new(module, self.arity, move |args| p.eval(&group, args))
    }

    /// JSON `{"arity":n,"rank":r,"values":{"1,2":…}}` with 1-based keys.
    pub fn to_json<F: Fn(&E) -> Value>(&self, entry: F) -> Value {
        let mut values = Map::new();
        for idx in multi_indices(self.arity, self.rank) {
            let key: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            values.insert(key.join(","), entry(self.value(&idx)));
        }
        serde_json::json!({"arity": self.arity, "rank": self.rank, "values": values})
    }
}

impl Polymorphism<FloquetElement> {
    pub fn from_json(value: &Value, element_rank: usize) -> Result<Self> {
        let field = |k: &str| {
            value
                .get(k)
                .ok_or_else(|| Error::Parse(format!("polymorphism is missing {k:?}")))
        };
        let arity = field("arity")?
            .as_u64()
            .ok_or_else(|| Error::Parse("arity must be a non-negative integer".into()))?
            as usize;
        let rank = field("rank")?
            .as_u64()
            .ok_or_else(|| Error::Parse("rank must be a non-negative integer".into()))?
            as usize;
        let map = field("values")?
            .as_object()
            .ok_or_else(|| Error::Parse("values must be an object".into()))?;
        let zero = FloquetElement::zero(element_rank);
        let mut values = vec![zero.clone(); rank.pow(arity as u32)];
        for (key, v) in map {
            let idx = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|s| match s.trim().parse::<usize>() {
                        Ok(i) if (1..=rank).contains(&i) => Ok(i - 1),
                        _ => Err(Error::Parse(format!("bad tensor index {key:?}"))),
                    })
                    .collect::<Result<Vec<usize>>>()?
            };
            if idx.len() != arity {
                return Err(Error::Parse(format!("index {key:?} does not have {arity} entries")));
            }
            let flat = idx.iter().fold(0, |acc, &i| acc * rank + i);
            values[flat] = FloquetElement::from_json(v, Some(element_rank))?;
        }
        Polymorphism::new(arity, rank, values, zero)
    }
}

/// A vector of the abstract coefficient space `B = Q^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarVector(pub Vec<BigRational>);

impl ScalarVector {
    pub fn zero(dim: usize) -> Self {
        ScalarVector(vec![BigRational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigRational::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Additive for ScalarVector {
    fn add(&self, other: &Self) -> Self {
        ScalarVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn neg(&self) -> Self {
        ScalarVector(self.0.iter().map(|a| -a).collect())
    }

    fn scale(&self, c: &BigRational) -> Self {
        ScalarVector(self.0.iter().map(|a| a * c).collect())
    }
}

/// The `s·r^n` indicator forms `ℓ_I^i`: value `e_i` at multi-index `I` and
/// zero elsewhere. Ordered by `I` (row-major), then `i`.
pub fn basis(n: usize, r: usize, s: usize) -> Vec<Polymorphism<ScalarVector>> {
    let mut out = Vec::new();
    for idx in multi_indices(n, r) {
        for i in 0..s {
            out.push(Polymorphism::from_fn(n, r, ScalarVector::zero(s), |j| {
                if j == idx.as_slice() {
                    ScalarVector::unit(s, i)
                } else {
                    ScalarVector::zero(s)
                }
            }));
        }
    }
    out
}

/// Coordinates of `L` in [`basis`], read off its tensor.
pub fn basis_coordinates(l: &Polymorphism<ScalarVector>) -> Vec<BigRational> {
    l.values.iter().flat_map(|v| v.0.iter().cloned()).collect()
}

/// `dim L_n = s·r^n`.
pub fn dim_ln(n: usize, r: usize, s: usize) -> BigUint {
    BigUint::from(s) * BigUint::from(r).pow(n as u32)
}

/// `dim L_n^S = s·C(n+r-1, r-1)`, the number of multisets of size `n` from `r` generators.
pub fn dim_lns(n: usize, r: usize, s: usize) -> BigUint {
    if r == 0 {
        return if n == 0 { BigUint::from(s) } else { BigUint::zero() };
    }
    BigUint::from(s) * to_biguint(binomial((n + r - 1) as u32, (r - 1) as u32))
}

/// `dim P_n ≤ s·C(n+r, r)`, from the filtration `P_{n-1} ⊆ P_n` with
/// quotients embedded in the symmetric polymorphisms.
pub fn dim_pn_bound(n: usize, r: usize, s: usize) -> BigUint {
    BigUint::from(s) * to_biguint(binomial((n + r) as u32, r as u32))
}

/// `s·Σ_{k≤n} r^k`, the bound obtained through all (not necessarily
/// symmetric) polymorphisms.
pub fn dim_pn_telescoped_bound(n: usize, r: usize, s: usize) -> BigUint {
    (0..=n).map(|k| dim_ln(k, r, s)).sum()
}

fn to_biguint(v: BigInt) -> BigUint {
    v.to_biguint().expect("binomial coefficients are non-negative")
}

/// `D^n a` packaged as a polymorphism, with diagnostics.
#[derive(Clone, Debug)]
pub struct DnPolymorphism<E> {
    pub polymorphism: Polymorphism<E>,
    /// Tensor symmetric under index permutations (as observed).
    pub tensor_symmetric: bool,
    /// Symmetric flag: set only for abelian groups with a symmetric tensor.
    pub symmetric: bool,
    pub symmetry_witness: Option<(Vec<usize>, Vec<usize>)>,
    pub multilinearity: CheckReport,
}

/// Tuples used to verify multilinearity of an extracted tensor.
pub const MULTILINEARITY_SAMPLES: usize = 16;
pub const MULTILINEARITY_RADIUS: i64 = 3;

/// Extracts `b_I = [D^n a](h_{i_1}..h_{i_n})` over the free generators.
///
/// Requires `a ∈ P_n`; the multilinear expansion is then compared against
/// direct evaluation of `D^n a` on random tuples, aborting with a witness on
/// mismatch.
pub fn from_dn<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    options: &SampleOptions,
) -> Result<DnPolymorphism<M::Elem>> {
    let membership = is_polynomial_like(module, a, n, options)?;
    if !membership.holds {
        return Err(membership.into_error());
    }
    let group = module.group().clone();
    let gens = group.free_generators();
    let dn = iterated_difference(module, a, n);
    let mut values = Vec::new();
    for idx in multi_indices(n, gens.len()) {
        let args: Vec<GroupElement> = idx.iter().map(|&i| gens[i].clone()).collect();
        values.push(dn.eval(&args)?);
    }
    let l = Polymorphism::new(n, gens.len(), values, module.zero())?;

    let defect = l.symmetry_defect(|x, y| module.equals(x, y).zero);
    let tuples = random_tuples(
        &group,
        MULTILINEARITY_SAMPLES,
        n,
        MULTILINEARITY_RADIUS,
        options.seed ^ 0x6d75_6c74_696c_696e,
    );
    let mut kind = module.cert_kind();
    for t in &tuples {
        let z = module.equals(&l.eval(&group, t)?, &dn.eval(t)?);
        kind = kind.meet(z.kind);
        if !z.zero {
            return Err(Error::Violation {
                name: "multilinearity".into(),
                detail: format!("expansion of D^{n} differs from direct evaluation at {}", format_tuple(t)),
            });
        }
    }
    Ok(DnPolymorphism {
        tensor_symmetric: defect.is_none(),
        symmetric: defect.is_none() && group.is_abelian(),
        symmetry_witness: defect,
        multilinearity: CheckReport {
            name: format!("multilinearity_{n}"),
            passed: true,
            kind,
            checked: tuples.len(),
            witness: None,
        },
        polymorphism: l,
    })
}

/// Whether every tensor entry is zero (exactly or as sampled).
pub fn is_zero_tensor<M: GModule>(module: &M, l: &Polymorphism<M::Elem>) -> (bool, CertKind) {
    l.values().iter().fold((true, module.cert_kind()), |(z, k), v| {
        let t = module.zero_test(v);
        (z && t.zero, k.meet(t.kind))
    })
}

/// Elements every polymorphism kills: nontrivial commutators of generator
/// pairs and the torsion generators.
pub fn vanishing_elements(group: &GroupSpec) -> Result<Vec<GroupElement>> {
    let gens = group.free_generators();
    let mut out = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let c = group.commutator(x, y)?;
            if !group.is_identity(&c) && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.extend(group.torsion_generators());
    Ok(out)
}

/// `c(…, z, …) = 0` for every `z` from [`vanishing_elements`], placed in each
/// slot of each tuple.
pub fn vanishing_check<M: GModule + 'static>(
    c: &Cochain<M>,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    let module = c.module().clone();
    let zs = vanishing_elements(module.group())?;
    let mut kind = module.cert_kind();
    let mut checked = 0;
    for t in tuples {
        for i in 0..t.len() {
            for z in &zs {
                let mut u = t.clone();
                u[i] = z.clone();
                let v = c.eval(&u)?;
                let test = module.zero_test(&v);
                kind = kind.meet(test.kind);
                checked += 1;
                if !test.zero {
                    return Ok(CheckReport {
                        name: format!("vanishing_{}", c.arity()),
                        passed: false,
                        kind,
                        checked,
                        witness: Some(format!("{} -> {}", format_tuple(&u), module.describe(&v))),
                    });
                }
            }
        }
    }
    Ok(CheckReport {
        name: format!("vanishing_{}", c.arity()),
        passed: true,
        kind,
        checked,
        witness: None,
    })
}

/// Real-multilinear extension of a polymorphism of `Z^r` to `R^r`.
#[derive(Clone, Debug)]
pub struct RealExtension<E> {
    polymorphism: Polymorphism<E>,
}

pub fn extend_to_rr<E: Additive>(l: &Polymorphism<E>, group: &GroupSpec) -> Result<RealExtension<E>> {
    match group {
        GroupSpec::FreeAbelian { rank } if *rank == l.rank => Ok(RealExtension {
            polymorphism: l.clone(),
        }),
        GroupSpec::FreeAbelian { rank } => Err(Error::Structural(format!(
            "polymorphism of rank {} over Z^{rank}",
            l.rank
        ))),
        _ => Err(Error::Unsupported(
            "real extension is defined for free abelian groups only".into(),
        )),
    }
}

impl<E: Additive> RealExtension<E> {
    /// Weights `Π_j x_{j,i_j}` of the tensor entries at real arguments.
    pub fn weights(&self, args: &[Vec<f64>]) -> Result<Vec<f64>> {
        let p = &self.polymorphism;
        if args.len() != p.arity || args.iter().any(|x| x.len() != p.rank) {
            return Err(Error::Structural("real arguments have the wrong shape".into()));
        }
        Ok(multi_indices(p.arity, p.rank)
            .iter()
            .map(|idx| idx.iter().enumerate().map(|(j, &i)| args[j][i]).product())
            .collect())
    }

    /// `Σ_I w_I(args)·value(b_I)` for a numeric reading of the entries.
    pub fn evaluate_with<F: Fn(&E) -> Complex64>(&self, args: &[Vec<f64>], value: F) -> Result<Complex64> {
        let w = self.weights(args)?;
        Ok(w.iter()
            .zip(&self.polymorphism.values)
            .map(|(w, b)| value(b) * *w)
            .sum())
    }
}

impl RealExtension<ScalarVector> {
    pub fn evaluate(&self, args: &[Vec<f64>]) -> Result<Vec<f64>> {
        let w = self.weights(args)?;
        let s = self.polymorphism.zero.0.len();
        let mut out = vec![0.0; s];
        for (w, b) in w.iter().zip(&self.polymorphism.values) {
            for (o, x) in out.iter_mut().zip(&b.0) {
                *o += w * x.to_f64().unwrap_or(f64::NAN);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::{FloquetModule, GroupFunction, GroupFunctionModule};
    use crate::scalar::{qi, rat};

    fn scalar_form(n: usize, r: usize, vals: &[i64]) -> Polymorphism<ScalarVector> {
        let values = vals.iter().map(|&v| ScalarVector(vec![rat(v)])).collect();
        Polymorphism::new(n, r, values, ScalarVector::zero(1)).unwrap()
    }

    #[test]
    fn eval_linear_form() {
        let l = scalar_form(1, 2, &[5, 7]);
        let g = GroupSpec::free_abelian(2);
        let v = l.eval(&g, &[GroupElement::lattice(&[2, -1])]).unwrap();
        assert_eq!(v, ScalarVector(vec![rat(3)]));
        assert!(l.eval(&g, &[g.identity()]).unwrap().is_zero());
    }

    #[test]
    fn commutator_argument_vanishes() {
        let g = GroupSpec::HeisenbergZ;
        let l = scalar_form(2, 2, &[1, 2, 3, 4]);
        let z = GroupElement::heisenberg(0, 0, 1);
        assert!(l.eval(&g, &[z, GroupElement::heisenberg(3, 1, 0)]).unwrap().is_zero());
    }

    #[test]
    fn basis_counts() {
        assert_eq!(basis(1, 2, 1).len(), 2);
        assert_eq!(basis(2, 2, 1).len(), 4);
        assert_eq!(basis(3, 2, 2).len(), 16);
    }

    #[test]
    fn dimension_formulas() {
        assert_eq!(dim_ln(2, 2, 1), BigUint::from(4u32));
        assert_eq!(dim_lns(2, 2, 1), BigUint::from(3u32));
        assert_eq!(dim_ln(1, 3, 2), dim_lns(1, 3, 2));
        assert_eq!(dim_lns(3, 2, 2), BigUint::from(8u32));
        assert_eq!(dim_pn_bound(0, 3, 5), BigUint::from(5u32));
        assert_eq!(dim_pn_bound(2, 2, 1), BigUint::from(6u32));
        assert_eq!(dim_pn_bound(3, 1, 1), BigUint::from(4u32));
        assert_eq!(dim_pn_telescoped_bound(2, 2, 1), BigUint::from(7u32));
    }

    #[test]
    fn from_dn_of_x1x2() {
        let m = Arc::new(FloquetModule::new(2));
        let a = FloquetElement::monomial(&[1, 1]);
        let p = from_dn(&m, &a, 2, &SampleOptions::default()).unwrap();
        let l = &p.polymorphism;
        assert_eq!(*l.value(&[0, 1]), FloquetElement::one(2));
        assert_eq!(*l.value(&[1, 0]), FloquetElement::one(2));
        assert!(l.value(&[0, 0]).is_zero());
        assert!(l.value(&[1, 1]).is_zero());
        assert!(p.symmetric);
    }

    #[test]
    fn from_dn_of_periodic_linear() {
        let m = Arc::new(FloquetModule::new(1));
        let a = FloquetElement::term(vec![1], vec![1], qi(1, 0));
        let p = from_dn(&m, &a, 1, &SampleOptions::default()).unwrap();
        assert_eq!(*p.polymorphism.value(&[0]), FloquetElement::exponential(&[1]));
    }

    #[test]
    fn from_dn_rejects_non_members() {
        let m = Arc::new(FloquetModule::new(1));
        let err = from_dn(&m, &FloquetElement::monomial(&[3]), 2, &SampleOptions::default());
        assert!(matches!(err, Err(Error::NotPolynomialLike { .. })));
    }

    #[test]
    fn from_dn_lower_degree_is_zero() {
        let m = Arc::new(FloquetModule::new(2));
        let a = FloquetElement::monomial(&[1, 0]).add(&FloquetElement::exponential(&[1, 1]));
        let p = from_dn(&m, &a, 2, &SampleOptions::default()).unwrap();
        assert!(is_zero_tensor(m.as_ref(), &p.polymorphism).0);
    }

    #[test]
    fn heisenberg_center_tensor_is_asymmetric() {
        let m = Arc::new(GroupFunctionModule::new(GroupSpec::HeisenbergZ, &SampleOptions::default()));
        let p = from_dn(&m, &GroupFunction::heisenberg_coordinate(2), 2, &SampleOptions::default()).unwrap();
        assert!(p.multilinearity.passed);
        assert!(!p.tensor_symmetric);
        assert!(!p.symmetric);
    }

    #[test]
    fn heisenberg_center_difference_kills_commutators() {
        let opts = SampleOptions::default();
        let m = Arc::new(GroupFunctionModule::new(GroupSpec::HeisenbergZ, &opts));
        let dn = iterated_difference(&m, &GroupFunction::heisenberg_coordinate(2), 2);
        let tuples = random_tuples(m.group(), 8, 2, 3, 1);
        let r = vanishing_check(&dn, &tuples).unwrap();
        assert!(r.passed);
        assert_eq!(r.checked, 8 * 2);
    }

    #[test]
    fn real_extension() {
        let l = scalar_form(1, 2, &[5, 7]);
        let ext = extend_to_rr(&l, &GroupSpec::free_abelian(2)).unwrap();
        assert_eq!(ext.evaluate(&[vec![0.5, 0.0]]).unwrap(), vec![2.5]);
        assert!(extend_to_rr(&l, &GroupSpec::HeisenbergZ).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = Arc::new(FloquetModule::new(2));
        let p = from_dn(&m, &FloquetElement::monomial(&[1, 1]), 2, &SampleOptions::default()).unwrap();
        let v = p.polymorphism.to_json(|e| e.to_json());
        assert!(v["values"].get("1,2").is_some());
        let back = Polymorphism::<FloquetElement>::from_json(&v, 2).unwrap();
        assert_eq!(back, p.polymorphism);
    }
}
