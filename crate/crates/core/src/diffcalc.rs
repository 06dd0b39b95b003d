//! Normalized cochains, the one-step maps `d_n`, the iterated difference
//! operators `D^n`, the coboundary `δ^n` for the trivial left action, and
//! checks of the identities relating them.
//!
//! Cochains are lazy evaluators. `D^n a` evaluated on a tuple costs `n`
//! actions through the recursion `D^n = d_n D^{n-1}`; the closed
//! inclusion-exclusion form costs `2^n` and is kept as an independent route.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gmodule::{Additive, CertKind, GModule, GRing, SampleOptions, ZeroTest};
use crate::group::{format_tuple, GroupElement, GroupSpec};

type Evaluator<E> = Arc<dyn Fn(&[GroupElement]) -> Result<E> + Send + Sync>;

/// A map `G^n → A`, evaluated on demand.
pub struct Cochain<M: GModule> {
    arity: usize,
    module: Arc<M>,
    eval: Evaluator<M::Elem>,
}

impl<M: GModule> Clone for Cochain<M> {
    fn clone(&self) -> Self {
        Cochain {
            arity: self.arity,
            module: self.module.clone(),
            eval: self.eval.clone(),
        }
    }
}

impl<M: GModule> fmt::Debug for Cochain<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(arity={})", self.arity)
    }
}

impl<M: GModule + 'static> Cochain<M> {
    pub fn new<F>(module: Arc<M>, arity: usize, f: F) -> Self
    where
        F: Fn(&[GroupElement]) -> Result<M::Elem> + Send + Sync + 'static,
    {
        Cochain {
            arity,
            module,
            eval: Arc::new(f),
        }
    }

    /// The 0-cochain with value `a`.
    pub fn constant(module: Arc<M>, a: M::Elem) -> Self {
        Self::new(module, 0, move |_| Ok(a.clone()))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn module(&self) -> &Arc<M> {
        &self.module
    }

    pub fn eval(&self, args: &[GroupElement]) -> Result<M::Elem> {
        if args.len() != self.arity {
            return Err(Error::Structural(format!(
                "cochain of arity {} evaluated on {} arguments",
                self.arity,
                args.len()
            )));
        }
        let group = self.module.group();
        if let Some(g) = args.iter().find(|g| !group.contains(g)) {
            return Err(Error::Structural(format!("{g} is not an element of {group:?}")));
        }
        (self.eval)(args)
    }
}

/// `(d_n c)(g_1..g_n) = c(g_1..g_{n-1})^{g_n} - c(g_1..g_{n-1})`.
pub fn d<M: GModule + 'static>(c: &Cochain<M>) -> Cochain<M> {
    let inner = c.clone();
    let module = c.module.clone();
    Cochain::new(c.module.clone(), c.arity + 1, move |args| {
        let (last, head) = args.split_last().expect("arity is at least 1");
        let v = (inner.eval)(head)?;
        Ok(module.act(&v, last)?.sub(&v))
    })
}

/// `D^n a` through the recursion `D^0 = id`, `D^n = d_n D^{n-1}`.
pub fn iterated_difference<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
) -> Cochain<M> {
    let mut c = Cochain::constant(module.clone(), a.clone());
    for _ in 0..n {
        c = d(&c);
    }
    c
}

/// `[D^n a](g_1..g_n)` by the inclusion-exclusion formula
/// `Σ_{I ⊆ {1..n}} (-1)^{|I|} a^{π_I(g)}`, where `π_I` is the ordered product
/// with the positions in `I` omitted. Subsets are visited in Gray-code order;
/// for abelian groups each product is updated from the previous one.
pub fn closed_difference<M: GModule>(
    module: &M,
    a: &M::Elem,
    tuple: &[GroupElement],
) -> Result<M::Elem> {
    inclusion_exclusion(module, a, tuple, true)
}

/// `[Δ^n a](g_1..g_n) = Σ_{s=1}^n (-1)^s S_s`, i.e. `D^n a` without its
/// leading term `a^{g_1⋯g_n}`.
pub fn delta_sum<M: GModule>(module: &M, a: &M::Elem, tuple: &[GroupElement]) -> Result<M::Elem> {
    if tuple.is_empty() {
        return Err(Error::Argument("Δ^n needs n ≥ 1".into()));
    }
    inclusion_exclusion(module, a, tuple, false)
}

fn inclusion_exclusion<M: GModule>(
    module: &M,
    a: &M::Elem,
    tuple: &[GroupElement],
    with_leading: bool,
) -> Result<M::Elem> {
    let group = module.group();
    let n = tuple.len();
    if n >= usize::BITS as usize - 1 {
        return Err(Error::Argument(format!("arity {n} is too large")));
    }
    let abelian = group.is_abelian();
    let inverses = if abelian {
        tuple.iter().map(|g| group.inverse(g)).collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let mut omitted = vec![false; n];
    let mut product = group.product(tuple)?;
    let mut acc = if with_leading {
        module.act(a, &product)?
    } else {
        module.zero()
    };
    let mut size = 0usize;
    for step in 1usize..(1usize << n) {
        let i = step.trailing_zeros() as usize;
        omitted[i] = !omitted[i];
        if omitted[i] {
            size += 1;
        } else {
            size -= 1;
        }
        product = if abelian {
            let factor = if omitted[i] { &inverses[i] } else { &tuple[i] };
            group.multiply(&product, factor)?
        } else {
            let kept: Vec<GroupElement> = tuple
                .iter()
                .zip(&omitted)
                .filter(|(_, &o)| !o)
                .map(|(g, _)| g.clone())
                .collect();
            group.product(&kept)?
        };
        let term = module.act(a, &product)?;
        acc = if size % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    Ok(acc)
}

/// `δ^n c` for the trivial left action:
/// `c(g_2..) + Σ_{i=1}^n (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{n+1} c(g_1..g_n)`.
/// For `n = 0` this is the zero 1-cochain.
pub fn coboundary<M: GModule + 'static>(c: &Cochain<M>) -> Cochain<M> {
    let inner = c.clone();
    let module = c.module.clone();
    let n = c.arity;
    Cochain::new(c.module.clone(), n + 1, move |args| {
        if n == 0 {
            return Ok(module.zero());
        }
        let group = module.group();
        let mut acc = (inner.eval)(&args[1..])?;
        for i in 0..n {
            let mut merged = Vec::with_capacity(n);
            merged.extend_from_slice(&args[..i]);
            merged.push(group.multiply(&args[i], &args[i + 1])?);
            merged.extend_from_slice(&args[i + 2..]);
            let v = (inner.eval)(&merged)?;
            acc = if i % 2 == 0 { acc.sub(&v) } else { acc.add(&v) };
        }
        let last = (inner.eval)(&args[..n])?;
        Ok(if n % 2 == 0 { acc.sub(&last) } else { acc.add(&last) })
    })
}

/// A tuple at which a checked quantity failed, with a rendering of the value.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub tuple: Vec<GroupElement>,
    pub value: String,
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Witness", 2)?;
        let tuple: Vec<String> = self.tuple.iter().map(ToString::to_string).collect();
        st.serialize_field("tuple", &tuple)?;
        st.serialize_field("value", &self.value)?;
        st.end()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", format_tuple(&self.tuple), self.value)
    }
}

/// Outcome of a membership test `D^{n+1} a = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub order: usize,
    pub holds: bool,
    pub kind: CertKind,
    /// Number of tuples at which `D^{n+1} a` was evaluated.
    pub checked: usize,
    /// Exact degree, for modules that know it.
    pub degree: Option<i64>,
    pub witness: Option<Witness>,
}

impl Membership {
    pub fn into_error(self) -> Error {
        match self.witness {
            Some(w) => Error::NotPolynomialLike {
                order: self.order,
                arity: self.order + 1,
                tuple: format_tuple(&w.tuple),
                value: w.value,
            },
            None => Error::Violation {
                name: "membership".into(),
                detail: format!("element is not in P_{}", self.order),
            },
        }
    }
}

/// All points of `N^vars` with coordinate sum at most `total`, ordered by
/// sum and then lexicographically.
pub(crate) fn simplex_points(vars: usize, total: usize) -> Vec<Vec<usize>> {
    fn fill(prefix: &mut Vec<usize>, vars: usize, remaining: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == vars {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for v in 0..=remaining {
            prefix.push(v);
            fill(prefix, vars, remaining - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..=total {
        fill(&mut Vec::with_capacity(vars), vars, s, &mut out);
    }
    out
}

/// The zero-certification grid for `D^k` on elements of degree `degree` over
/// `Z^r`: all `k`-tuples with non-negative coordinates of total sum at most
/// `degree`. Every value `[D^k a](g)` is a polynomial of total degree at most
/// `degree` in the `r·k` coordinates, and such a polynomial vanishing on this
/// simplex vanishes identically.
pub fn certification_grid(rank: usize, arity: usize, degree: usize) -> Vec<Vec<GroupElement>> {
    if rank == 0 {
        return vec![vec![GroupElement::lattice(&[]); arity]];
    }
    simplex_points(rank * arity, degree)
        .into_iter()
        .map(|p| {
            p.chunks(rank)
                .map(|c| GroupElement::lattice_big(c.iter().map(|&v| BigInt::from(v)).collect()))
                .collect()
        })
        .collect()
}

/// Evaluates `c` on `tuples` and returns the first tuple where the value is
/// nonzero, plus how many tuples were examined.
fn first_nonzero<M: GModule + 'static>(
    c: &Cochain<M>,
    tuples: &[Vec<GroupElement>],
) -> Result<(Option<Witness>, CertKind, f64)> {
    let module = c.module.clone();
    let results: Vec<Result<ZeroTest>> = tuples
        .par_iter()
        .map(|t| c.eval(t).map(|v| module.zero_test(&v)))
        .collect();
    let mut kind = module.cert_kind();
    let mut max_abs = 0.0_f64;
    for (t, r) in tuples.iter().zip(results) {
        let z = r?;
        kind = kind.meet(z.kind);
        max_abs = max_abs.max(z.max_abs);
        if !z.zero {
            let v = c.eval(t)?;
            return Ok((
                Some(Witness {
                    tuple: t.clone(),
                    value: module.describe(&v),
                }),
                kind,
                max_abs,
            ));
        }
    }
    Ok((None, kind, max_abs))
}

/// Seeded random tuples of the given length.
pub fn random_tuples(
    group: &GroupSpec,
    count: usize,
    len: usize,
    radius: i64,
    seed: u64,
) -> Vec<Vec<GroupElement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| group.random_tuple(&mut rng, len, radius))
        .collect()
}

/// Tests `a ∈ P_n`, i.e. `D^{n+1} a = 0`.
///
/// For modules with an exact degree (the Floquet algebra) the answer is
/// `degree(a) ≤ n`, and the vanishing of `D^{n+1} a` is independently
/// certified on [`certification_grid`]; a disagreement is reported as an
/// error. Other modules are tested on `options.samples` random tuples.
pub fn is_polynomial_like<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    options: &SampleOptions,
) -> Result<Membership> {
    let cochain = iterated_difference(module, a, n + 1);
    let group = module.group();
    if let Some(degree) = module.exact_degree(a) {
        if !group.is_abelian() || !group.torsion_moduli().is_empty() {
            return Err(Error::Unsupported(
                "exact degree certification needs a free abelian group".into(),
            ));
        }
        let by_degree = degree <= n as i64;
        let grid = certification_grid(group.free_rank(), n + 1, degree.max(0) as usize);
        let (witness, kind, _) = first_nonzero(&cochain, &grid)?;
        if by_degree != witness.is_none() {
            return Err(Error::Violation {
                name: "membership certificate".into(),
                detail: format!(
                    "degree {degree} and grid evaluation of D^{} disagree",
                    n + 1
                ),
            });
        }
        return Ok(Membership {
            order: n,
            holds: by_degree,
            kind,
            checked: grid.len(),
            degree: Some(degree),
            witness,
        });
    }
    let tuples = random_tuples(group, options.samples, n + 1, options.radius, options.seed);
    let (witness, kind, _) = first_nonzero(&cochain, &tuples)?;
    Ok(Membership {
        order: n,
        holds: witness.is_none(),
        kind,
        checked: tuples.len(),
        degree: None,
        witness,
    })
}

/// Result of one identity check over a set of tuples.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub kind: CertKind,
    pub checked: usize,
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn into_result(self) -> Result<CheckReport> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::Violation {
                name: self.name,
                detail: self.witness.unwrap_or_default(),
            })
        }
    }
}

/// Runs `test` on each tuple, stopping at the first failure.
fn run_check<F>(name: &str, start: CertKind, tuples: &[Vec<GroupElement>], test: F) -> Result<CheckReport>
where
    F: Fn(&[GroupElement]) -> Result<(ZeroTest, String)>,
{
    let mut kind = start;
    for (i, t) in tuples.iter().enumerate() {
        let (z, detail) = test(t)?;
        kind = kind.meet(z.kind);
        if !z.zero {
            return Ok(CheckReport {
                name: name.to_string(),
                passed: false,
                kind,
                checked: i + 1,
                witness: Some(format!("{} -> {detail}", format_tuple(t))),
            });
        }
    }
    Ok(CheckReport {
        name: name.to_string(),
        passed: true,
        kind,
        checked: tuples.len(),
        witness: None,
    })
}

fn check_len(tuples: &[Vec<GroupElement>], len: usize) -> Result<()> {
    match tuples.iter().find(|t| t.len() != len) {
        Some(t) => Err(Error::Structural(format!(
            "expected {len}-tuples, got a {}-tuple",
            t.len()
        ))),
        None => Ok(()),
    }
}

/// Recursive `D^n a` against the closed inclusion-exclusion form.
pub fn closed_form_check<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, n)?;
    let rec = iterated_difference(module, a, n);
    run_check(&format!("closed_form_D{n}"), module.cert_kind(), tuples, |t| {
        let lhs = rec.eval(t)?;
        let rhs = if n == 0 { a.clone() } else { closed_difference(module.as_ref(), a, t)? };
        let diff = lhs.sub(&rhs);
        Ok((module.zero_test(&diff), module.describe(&diff)))
    })
}

/// `Δ^n a + a^{g_1⋯g_n}` against the closed form of `D^n a`.
pub fn delta_consistency_check<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, n)?;
    run_check(&format!("delta_consistency_{n}"), module.cert_kind(), tuples, |t| {
        let lead = module.act(a, &module.group().product(t)?)?;
        let lhs = delta_sum(module.as_ref(), a, t)?.add(&lead);
        let rhs = closed_difference(module.as_ref(), a, t)?;
        let diff = lhs.sub(&rhs);
        Ok((module.zero_test(&diff), module.describe(&diff)))
    })
}

/// `c(…, e, …) = 0` with the identity placed in every slot of every tuple.
pub fn normalization_check<M: GModule + 'static>(
    c: &Cochain<M>,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, c.arity)?;
    let module = c.module.clone();
    let e = module.group().identity();
    let mut expanded = Vec::new();
    for t in tuples {
        for i in 0..t.len() {
            let mut u = t.clone();
            u[i] = e.clone();
            expanded.push(u);
        }
    }
    run_check(&format!("normalization_{}", c.arity), module.cert_kind(), &expanded, |t| {
        let v = c.eval(t)?;
        Ok((module.zero_test(&v), module.describe(&v)))
    })
}

/// `[D^{n+1}a](g_1..g_{n+1}) = [D^n(a^{g_1})](g_2..) - [D^n a](g_2..)`.
pub fn recursion_identity_check<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, n + 1)?;
    let big = iterated_difference(module, a, n + 1);
    let small = iterated_difference(module, a, n);
    run_check(&format!("recursion_{n}"), module.cert_kind(), tuples, |t| {
        let lhs = big.eval(t)?;
        let shifted = iterated_difference(module, &module.act(a, &t[0])?, n);
        let rhs = shifted.eval(&t[1..])?.sub(&small.eval(&t[1..])?);
        let diff = lhs.sub(&rhs);
        Ok((module.zero_test(&diff), module.describe(&diff)))
    })
}

/// `[D^1(ab)](g) = a^g·[D^1 b](g) + [D^1 a](g)·b`.
pub fn leibniz_check<M: GRing + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    b: &M::Elem,
    elements: &[GroupElement],
) -> Result<CheckReport> {
    let tuples: Vec<Vec<GroupElement>> = elements.iter().map(|g| vec![g.clone()]).collect();
    let ab = module.mul(a, b);
    run_check("leibniz", module.cert_kind(), &tuples, |t| {
        let g = &t[0];
        let ag = module.act(a, g)?;
        let bg = module.act(b, g)?;
        let lhs = module.act(&ab, g)?.sub(&ab);
        let rhs = module
            .mul(&ag, &bg.sub(b))
            .add(&module.mul(&ag.sub(a), b));
        let diff = lhs.sub(&rhs);
        Ok((module.zero_test(&diff), module.describe(&diff)))
    })
}

/// Given `D^m a = 0` and `D^n b = 0` with `m + n ≥ 1`, certifies
/// `D^{m+n-1}(ab) = 0`. Orders are annihilator orders: `a ∈ P_{m-1}`.
pub fn ring_closure_check<M: GRing + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    m: usize,
    b: &M::Elem,
    n: usize,
    options: &SampleOptions,
) -> Result<CheckReport> {
    if m + n == 0 {
        return Err(Error::Argument("ring closure needs m + n ≥ 1".into()));
    }
    let ab = module.mul(a, b);
    let name = format!("ring_closure_{m}_{n}");
    // D^0 = id, so m = 0 or n = 0 means one factor is zero.
    for (x, k) in [(a, m), (b, n)] {
        let ok = if k == 0 {
            module.zero_test(x).zero
        } else {
            is_polynomial_like(module, x, k - 1, options)?.holds
        };
        if !ok {
            return Err(Error::Argument(format!(
                "{name}: a factor is not annihilated by D^{k}"
            )));
        }
    }
    let target = m + n - 1;
    let (holds, kind, checked, witness) = if target == 0 {
        let z = module.zero_test(&ab);
        (z.zero, z.kind, 1, (!z.zero).then(|| module.describe(&ab)))
    } else {
        let mem = is_polynomial_like(module, &ab, target - 1, options)?;
        (mem.holds, mem.kind, mem.checked, mem.witness.map(|w| w.to_string()))
    };
    Ok(CheckReport {
        name,
        passed: holds,
        kind,
        checked,
        witness,
    })
}

/// For invariant `a`: `D^n(ab) = a·D^n b`.
pub fn invariant_linearity_check<M: GRing + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    b: &M::Elem,
    n: usize,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, n)?;
    let inv = module.invariance(a);
    if !inv.invariant {
        return Err(Error::Argument(format!(
            "left factor is not invariant (moved by {})",
            inv.witness.map(|g| g.to_string()).unwrap_or_default()
        )));
    }
    let dab = iterated_difference(module, &module.mul(a, b), n);
    let db = iterated_difference(module, b, n);
    run_check(&format!("invariant_linearity_{n}"), inv.kind, tuples, |t| {
        let diff = dab.eval(t)?.sub(&module.mul(a, &db.eval(t)?));
        Ok((module.zero_test(&diff), module.describe(&diff)))
    })
}

/// `δ^n D^n = -D^{n+1}` for odd `n`, `0` for even `n`.
pub fn delta_d_relation_check<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, n + 1)?;
    let lhs = coboundary(&iterated_difference(module, a, n));
    let next = iterated_difference(module, a, n + 1);
    run_check(&format!("delta_D_relation_{n}"), module.cert_kind(), tuples, |t| {
        let l = lhs.eval(t)?;
        let diff = if n % 2 == 1 { l.add(&next.eval(t)?) } else { l };
        Ok((module.zero_test(&diff), module.describe(&diff)))
    })
}

/// `δ^{n+1} δ^n c = 0`.
pub fn coboundary_square_check<M: GModule + 'static>(
    c: &Cochain<M>,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, c.arity + 2)?;
    let dd = coboundary(&coboundary(c));
    let module = c.module.clone();
    run_check(&format!("coboundary_squared_{}", c.arity), module.cert_kind(), tuples, |t| {
        let v = dd.eval(t)?;
        Ok((module.zero_test(&v), module.describe(&v)))
    })
}

/// `δ^n c = 0` (cocycle condition).
pub fn cocycle_check<M: GModule + 'static>(
    c: &Cochain<M>,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, c.arity + 1)?;
    let dc = coboundary(c);
    let module = c.module.clone();
    run_check(&format!("cocycle_{}", c.arity), module.cert_kind(), tuples, |t| {
        let v = dc.eval(t)?;
        Ok((module.zero_test(&v), module.describe(&v)))
    })
}

/// Every value of `c` on `tuples` is an invariant element.
pub fn invariant_values_check<M: GModule + 'static>(
    c: &Cochain<M>,
    tuples: &[Vec<GroupElement>],
) -> Result<CheckReport> {
    check_len(tuples, c.arity)?;
    let module = c.module.clone();
    let mut kind = module.cert_kind();
    for (i, t) in tuples.iter().enumerate() {
        let v = c.eval(t)?;
        let inv = module.invariance(&v);
        kind = kind.meet(inv.kind);
        if !inv.invariant {
            return Ok(CheckReport {
                name: format!("invariant_values_{}", c.arity),
                passed: false,
                kind,
                checked: i + 1,
                witness: Some(format!(
                    "{} -> value moved by {}",
                    format_tuple(t),
                    inv.witness.map(|g| g.to_string()).unwrap_or_default()
                )),
            });
        }
    }
    Ok(CheckReport {
        name: format!("invariant_values_{}", c.arity),
        passed: true,
        kind,
        checked: tuples.len(),
        witness: None,
    })
}

/// `a ∈ P_n ⇒ a^g ∈ P_n` for every generator `g`.
pub fn translation_invariance_check<M: GModule + 'static>(
    module: &Arc<M>,
    a: &M::Elem,
    n: usize,
    options: &SampleOptions,
) -> Result<CheckReport> {
    let mut kind = module.cert_kind();
    let gens = module.group().generators();
    for (i, g) in gens.iter().enumerate() {
        let moved = module.act(a, g)?;
        let mem = is_polynomial_like(module, &moved, n, options)?;
        kind = kind.meet(mem.kind);
        if !mem.holds {
            return Ok(CheckReport {
                name: format!("P{n}_translation_invariance"),
                passed: false,
                kind,
                checked: i + 1,
                witness: Some(format!(
                    "a^{g}: {}",
                    mem.witness.map(|w| w.to_string()).unwrap_or_default()
                )),
            });
        }
    }
    Ok(CheckReport {
        name: format!("P{n}_translation_invariance"),
        passed: true,
        kind,
        checked: gens.len(),
        witness: None,
    })
}

/// Observed (a)symmetry of a cochain under permutations of its arguments.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub arity: usize,
    pub symmetric: bool,
    pub kind: CertKind,
    pub checked: usize,
    /// A tuple and a permutation of it with different values.
    pub witness: Option<(String, String)>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Compares `c(g_σ)` with `c(g)` for all permutations `σ`. This is a
/// diagnostic; callers decide whether symmetry is expected.
pub fn check_symmetry<M: GModule + 'static>(
    c: &Cochain<M>,
    tuples: &[Vec<GroupElement>],
) -> Result<SymmetryReport> {
    check_len(tuples, c.arity)?;
    let module = c.module.clone();
    let perms = permutations(c.arity);
    let mut kind = module.cert_kind();
    let mut checked = 0;
    for t in tuples {
        let base = c.eval(t)?;
        for p in &perms {
            let u: Vec<GroupElement> = p.iter().map(|&i| t[i].clone()).collect();
            let z = module.equals(&c.eval(&u)?, &base);
            kind = kind.meet(z.kind);
            checked += 1;
            if !z.zero {
                return Ok(SymmetryReport {
                    arity: c.arity,
                    symmetric: false,
                    kind,
                    checked,
                    witness: Some((format_tuple(t), format_tuple(&u))),
                });
            }
        }
    }
    Ok(SymmetryReport {
        arity: c.arity,
        symmetric: true,
        kind,
        checked,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::{FloquetElement, FloquetModule, GroupFunction, GroupFunctionModule};
    use crate::scalar::qi;

    fn lat(v: i64) -> GroupElement {
        GroupElement::lattice(&[v])
    }

    fn floquet(r: usize) -> Arc<FloquetModule> {
        Arc::new(FloquetModule::new(r))
    }

    #[test]
    fn d1_of_invariant_is_zero() {
        let m = floquet(1);
        let e = FloquetElement::exponential(&[2]);
        let c = d(&Cochain::constant(m.clone(), e));
        for g in -3..=3 {
            assert!(c.eval(&[lat(g)]).unwrap().is_zero());
        }
    }

    #[test]
    fn d1_of_x_is_constant_g() {
        let m = floquet(1);
        let c = iterated_difference(&m, &FloquetElement::coordinate(1, 0), 1);
        for g in -3..=3 {
            assert_eq!(c.eval(&[lat(g)]).unwrap(), FloquetElement::constant(1, qi(g, 0)));
        }
    }

    #[test]
    fn d2_of_square_is_2gh() {
        let m = floquet(1);
        let c = iterated_difference(&m, &FloquetElement::monomial(&[2]), 2);
        for g in -2..=2 {
            for h in -2..=2 {
                let v = c.eval(&[lat(g), lat(h)]).unwrap();
                assert_eq!(v, FloquetElement::constant(1, qi(2 * g * h, 0)));
            }
        }
    }

    #[test]
    fn d0_is_identity() {
        let m = floquet(1);
        let a = FloquetElement::term(vec![1], vec![1], qi(2, 1));
        assert_eq!(iterated_difference(&m, &a, 0).eval(&[]).unwrap(), a);
    }

    #[test]
    fn closed_form_n2_terms() {
        let m = floquet(1);
        let a = FloquetElement::monomial(&[3]);
        let (g1, g2) = (lat(2), lat(-1));
        let expected = m
            .act(&a, &lat(1))
            .unwrap()
            .sub(&m.act(&a, &g2).unwrap())
            .sub(&m.act(&a, &g1).unwrap())
            .add(&a);
        assert_eq!(closed_difference(m.as_ref(), &a, &[g1, g2]).unwrap(), expected);
    }

    #[test]
    fn closed_form_with_identity_vanishes() {
        let m = floquet(1);
        let a = FloquetElement::term(vec![1], vec![3], qi(1, 0));
        let v = closed_difference(m.as_ref(), &a, &[lat(2), lat(0), lat(1)]).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn delta_one_is_minus_a() {
        let m = floquet(1);
        let a = FloquetElement::term(vec![1], vec![2], qi(1, -1));
        assert_eq!(delta_sum(m.as_ref(), &a, &[lat(3)]).unwrap(), a.neg());
    }

    #[test]
    fn coboundary_of_zero_cochain_is_zero() {
        let m = floquet(1);
        let c = coboundary(&Cochain::constant(m.clone(), FloquetElement::monomial(&[1])));
        assert!(c.eval(&[lat(5)]).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_second_difference() {
        let group = GroupSpec::HeisenbergZ;
        let m = Arc::new(GroupFunctionModule::new(group.clone(), &SampleOptions::default()));
        let u = GroupFunction::heisenberg_coordinate(2);
        let c = iterated_difference(&m, &u, 2);
        let tuples = random_tuples(&group, 20, 2, 3, 5);
        for t in &tuples {
            let v = c.eval(t).unwrap();
            let (a1, b2) = match (&t[0], &t[1]) {
                (GroupElement::Heisenberg { a, .. }, GroupElement::Heisenberg { b, .. }) => (a.clone(), b.clone()),
                _ => unreachable!(),
            };
            let expected = GroupFunction::constant(crate::scalar::qi_from_int(&(a1 * b2)));
            assert!(m.equals(&v, &expected).zero);
        }
    }

    #[test]
    fn membership_witness_for_square() {
        let m = floquet(1);
        let mem = is_polynomial_like(&m, &FloquetElement::monomial(&[2]), 1, &SampleOptions::default()).unwrap();
        assert!(!mem.holds);
        assert_eq!(mem.kind, CertKind::Exact);
        let w = mem.witness.unwrap();
        assert_eq!(w.tuple, vec![lat(1), lat(1)]);
        assert_eq!(w.value, "2");
    }

    #[test]
    fn membership_exact_true() {
        let m = floquet(1);
        let a = FloquetElement::term(vec![1], vec![1], qi(1, 0)).add(&FloquetElement::constant(1, qi(3, 0)));
        let mem = is_polynomial_like(&m, &a, 1, &SampleOptions::default()).unwrap();
        assert!(mem.holds);
        assert_eq!(mem.kind, CertKind::Exact);
        let zero = is_polynomial_like(&m, &FloquetElement::zero(1), 0, &SampleOptions::default()).unwrap();
        assert!(zero.holds);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_points(2, 2).len(), 6);
        assert_eq!(certification_grid(3, 4, 4).len(), 1820);
    }

    #[test]
    fn arity_mismatch_is_structural() {
        let m = floquet(1);
        let c = iterated_difference(&m, &FloquetElement::monomial(&[1]), 2);
        assert!(matches!(c.eval(&[lat(1)]), Err(Error::Structural(_))));
    }

    #[test]
    fn heisenberg_symmetry_diagnostic() {
        let group = GroupSpec::HeisenbergZ;
        let m = Arc::new(GroupFunctionModule::new(group.clone(), &SampleOptions::default()));
        let c = iterated_difference(&m, &GroupFunction::heisenberg_coordinate(2), 2);
        let rep = check_symmetry(&c, &[vec![GroupElement::heisenberg(1, 0, 0), GroupElement::heisenberg(0, 1, 0)]]).unwrap();
        assert!(!rep.symmetric);
    }
}
