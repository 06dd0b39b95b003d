//! Frozen values and independent cross-checks.

mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polylike::diffcalc::{is_polynomial_like, iterated_difference};
use polylike::floquet::{arrangements, exponents, leading_coefficients, monomial_difference, nu_factorial};
use polylike::gmodule::{
    Additive, FloquetElement, FloquetModule, GModule, GroupFunction, GroupFunctionModule,
    SampleOptions,
};
use polylike::group::{GroupElement, GroupSpec};
use polylike::polymorph::{basis, basis_coordinates, dim_lns, from_dn, Polymorphism, ScalarVector};
use polylike::scalar::{qi, qi_real, rat};
use polylike::solver::{apply, polynomial_kernel, PolyAnsatz, StencilOperator};

use common::{pointwise_kernel_dim, random_floquet, sparse_rank};

fn lattice_tuples(rank: usize, len: usize, lo: i64, hi: i64) -> Vec<Vec<Vec<i64>>> {
    let side = (hi - lo + 1) as usize;
    let total = side.pow((rank * len) as u32);
    (0..total)
        .map(|mut flat| {
            let mut coords = vec![0i64; rank * len];
            for c in coords.iter_mut().rev() {
                *c = lo + (flat % side) as i64;
                flat /= side;
            }
            coords.chunks(rank).map(<[i64]>::to_vec).collect()
        })
        .collect()
}

#[test]
fn second_difference_of_square() {
    // [D^2 x^2](g, h) = 2gh
    let m = Arc::new(FloquetModule::new(1));
    let d2 = iterated_difference(&m, &FloquetElement::monomial(&[2]), 2);
    let v = d2.eval(&[GroupElement::lattice(&[3]), GroupElement::lattice(&[-2])]).unwrap();
    assert_eq!(v, FloquetElement::constant(1, qi(-12, 0)));
}

#[test]
fn membership_witness_of_square() {
    let m = Arc::new(FloquetModule::new(1));
    let mem = is_polynomial_like(&m, &FloquetElement::monomial(&[2]), 1, &SampleOptions::default()).unwrap();
    assert!(!mem.holds);
    let w = mem.witness.unwrap();
    assert_eq!(w.tuple, vec![GroupElement::lattice(&[1]), GroupElement::lattice(&[1])]);
    assert_eq!(w.value, "2");
}

#[test]
fn monomial_difference_matches_iterated_difference() {
    for rank in 1..=2 {
        let m = Arc::new(FloquetModule::new(rank));
        for n in 1..=3u32 {
            for nu in exponents(rank, n) {
                let xnu = FloquetElement::monomial(&nu);
                let dn = iterated_difference(&m, &xnu, n as usize);
                let next = iterated_difference(&m, &xnu, n as usize + 1);
                for t in lattice_tuples(rank, n as usize, -2, 2) {
                    let args: Vec<GroupElement> = t.iter().map(|g| GroupElement::lattice(g)).collect();
                    let big: Vec<Vec<BigInt>> = t.iter().map(|g| g.iter().map(|&v| v.into()).collect()).collect();
                    let want = monomial_difference(&nu, &big).unwrap();
                    assert_eq!(dn.eval(&args).unwrap(), FloquetElement::constant(rank, qi_real(want.into())));
                }
                // D^{n+1} x^ν = 0
                for t in lattice_tuples(rank, n as usize + 1, -1, 1).iter().step_by(7) {
                    let args: Vec<GroupElement> = t.iter().map(|g| GroupElement::lattice(g)).collect();
                    assert!(next.eval(&args).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn monomial_difference_at_matching_basis_vectors_is_nu_factorial() {
    for nu in exponents(3, 3) {
        for k in arrangements(&nu) {
            let tuple: Vec<Vec<BigInt>> = k
                .iter()
                .map(|&i| (0..3).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect();
            assert_eq!(monomial_difference(&nu, &tuple).unwrap(), nu_factorial(&nu));
        }
    }
}

#[test]
fn dn_tensor_is_factorial_times_leading_coefficient() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = SampleOptions::default();
    for i in 0..24 {
        let r = 1 + i % 3;
        let m = Arc::new(FloquetModule::new(r));
        let p = random_floquet(&mut rng, r, 3, 5);
        let n = p.degree().max(1) as usize;
        let lc = leading_coefficients(&m, &p, n, &opts).unwrap();
        let l = from_dn(&m, &p, n, &opts).unwrap().polymorphism;
        for (nu, a) in &lc {
            let scaled = a.scale(&BigRational::from_integer(nu_factorial(nu)));
            for k in arrangements(nu) {
                assert_eq!(*l.value(&k), scaled, "p = {p}, ν = {nu:?}");
            }
        }
    }
}

#[test]
fn heisenberg_second_difference_values() {
    let m = Arc::new(GroupFunctionModule::new(GroupSpec::HeisenbergZ, &SampleOptions::default()));
    let d2 = iterated_difference(&m, &GroupFunction::heisenberg_coordinate(2), 2);
    let (x, y) = (GroupElement::heisenberg(1, 0, 0), GroupElement::heisenberg(0, 1, 0));
    let e = GroupSpec::HeisenbergZ.identity();
    assert_eq!(d2.eval(&[x.clone(), y.clone()]).unwrap().eval(&e).unwrap(), qi(1, 0));
    assert_eq!(d2.eval(&[y, x]).unwrap().eval(&e).unwrap(), qi(0, 0));
}

#[test]
fn polymorphism_basis_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::Rng;
    for (n, r, s) in [(1, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)] {
        let l = Polymorphism::from_fn(n, r, ScalarVector::zero(s), |_| {
            ScalarVector((0..s).map(|_| rat(rng.gen_range(-4..=4))).collect())
        });
        let b = basis(n, r, s);
        let coords = basis_coordinates(&l);
        let terms: Vec<(BigRational, &Polymorphism<ScalarVector>)> = coords.into_iter().zip(&b).collect();
        assert_eq!(Polymorphism::combine(&terms).unwrap(), l);
    }
}

#[test]
fn symmetric_dimension_by_symmetrized_basis_rank() {
    // The symmetrizations of the indicator basis span L_n^S.
    for (n, r) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        let mut rows = Vec::new();
        for idx in polylike::polymorph::multi_indices(n, r) {
            let mut row = std::collections::BTreeMap::new();
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            for perm in polylike::polymorph::multi_indices(n, r) {
                let mut ps = perm.clone();
                ps.sort_unstable();
                if ps == sorted {
                    let flat = perm.iter().fold(0, |acc, &i| acc * r + i);
                    row.insert(flat, BigRational::one());
                }
            }
            rows.push(row);
        }
        assert_eq!(dim_lns(n, r, 1), sparse_rank(rows).into());
    }
}

#[test]
fn one_dimensional_laplacian_examples() {
    let lap = StencilOperator::laplacian(1, 1).unwrap();
    assert!(apply(&lap, &PolyAnsatz::monomial(1, &[1])).unwrap().is_zero());
    let v = apply(&lap, &PolyAnsatz::monomial(1, &[2])).unwrap();
    assert_eq!(v.degree(), 0);
    for x in -3..=3 {
        assert_eq!(v.eval(&[x]), rat(2));
    }
}

#[test]
fn kernel_matches_pointwise_oracle() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ops = vec![
        StencilOperator::laplacian(1, 1).unwrap(),
        StencilOperator::laplacian(1, 3).unwrap(),
        StencilOperator::laplacian(2, 2).unwrap(),
    ];
    for (r, period) in [(1, 2), (1, 3), (2, 2)] {
        let cells = period * if r == 2 { period } else { 1 };
        let offsets: Vec<Vec<i64>> = if r == 1 {
            vec![vec![-1], vec![0], vec![1]]
        } else {
            vec![vec![0, 0], vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]
        };
        for _ in 0..2 {
            let entries = offsets
                .iter()
                .map(|o| (o.clone(), (0..cells).map(|_| rat(rng.gen_range(-2..=2))).collect()))
                .collect();
            ops.push(StencilOperator::new(r, period, entries).unwrap());
        }
    }
    for op in &ops {
        for n in 0..=2 {
            let k = polynomial_kernel(op, n).unwrap();
            assert_eq!(k.dimension, pointwise_kernel_dim(op, n), "{op:?} n={n}");
            for b in &k.basis {
                assert!(apply(op, b).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn one_dimensional_laplacian_kernel() {
    let lap = StencilOperator::laplacian(1, 1).unwrap();
    let dims: Vec<usize> = (0..=3).map(|n| polynomial_kernel(&lap, n).unwrap().dimension).collect();
    assert_eq!(dims, vec![1, 2, 2, 2]);
}

#[test]
fn invariant_elements_decompose_to_themselves() {
    let m = Arc::new(FloquetModule::new(2));
    let p = FloquetElement::exponential(&[1, 2]).add(&FloquetElement::constant(2, qi(0, 1)));
    let d = polylike::floquet::decompose(&m, &p, 0, &SampleOptions::default()).unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!(d.get(&[0, 0]), Some(&p));
    assert!(m.invariance(&p).invariant);
}
