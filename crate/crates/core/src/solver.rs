//! Polynomial-like solutions of periodic stencil operators on `Z^r`.
//!
//! An operator `(Du)(x) = Σ_o c_o(x mod N)·u(x+o)` maps the space of
//! `N·Z^r`-periodic polynomials `u(x) = Σ_{|ν|≤n} a_ν(x mod N)·x^ν` into
//! itself, so its kernel there is the nullspace of a finite rational matrix.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::floquet::exponents;
use crate::linalg::{span_coordinates, Matrix};
use crate::polymorph::dim_pn_bound;
use crate::scalar::{binomial, format_rational, parse_rational};

/// Flat row-major index of `x mod N` in `(Z/N)^r`.
fn cell_of(x: &[i64], period: usize) -> usize {
    x.iter()
        .fold(0, |acc, &xi| acc * period + xi.rem_euclid(period as i64) as usize)
}

/// Residues of a flat cell index.
fn cell_coords(mut flat: usize, period: usize, rank: usize) -> Vec<i64> {
    let mut out = vec![0; rank];
    for c in out.iter_mut().rev() {
        *c = (flat % period) as i64;
        flat /= period;
    }
    out
}

fn cell_count(rank: usize, period: usize) -> usize {
    period.pow(rank as u32)
}

/// `(j + o) mod N` as a flat cell index.
fn shifted_cell(cell: usize, offset: &[i64], period: usize) -> usize {
    let mut x = cell_coords(cell, period, offset.len());
    for (xi, o) in x.iter_mut().zip(offset) {
        *xi += o;
    }
    cell_of(&x, period)
}

/// `C(ν,μ)·o^{ν-μ}` when `μ ≤ ν` componentwise, else zero.
fn expansion_factor(nu: &[u32], mu: &[u32], o: &[i64]) -> BigInt {
    let mut out = BigInt::one();
    for ((&n, &m), &oi) in nu.iter().zip(mu).zip(o) {
        if m > n {
            return BigInt::zero();
        }
        out *= binomial(n, m) * BigInt::from(oi).pow(n - m);
        if out.is_zero() {
            break;
        }
    }
    out
}

/// Exponents with `|ν|₁ ≤ n`, ordered by total degree then lexicographically.
pub fn exponents_up_to(rank: usize, n: usize) -> Vec<Vec<u32>> {
    (0..=n as u32).flat_map(|k| exponents(rank, k)).collect()
}

/// `(Du)(x) = Σ_o c_o(x mod N)·u(x+o)` with `N`-periodic rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilOperator {
    rank: usize,
    period: usize,
    stencil: BTreeMap<Vec<i64>, Vec<BigRational>>,
}

impl StencilOperator {
    /// Builds an operator from `(offset, coefficient table)` entries; repeated
    /// offsets are summed and all-zero tables dropped.
    pub fn new(rank: usize, period: usize, entries: Vec<(Vec<i64>, Vec<BigRational>)>) -> Result<Self> {
        if period == 0 {
            return Err(Error::Argument("period must be positive".into()));
        }
        let cells = cell_count(rank, period);
        let mut stencil: BTreeMap<Vec<i64>, Vec<BigRational>> = BTreeMap::new();
        for (offset, coeffs) in entries {
            if offset.len() != rank {
                return Err(Error::Structural(format!(
                    "offset {offset:?} in a rank-{rank} stencil"
                )));
            }
            if coeffs.len() != cells {
                return Err(Error::Structural(format!(
                    "coefficient table of length {} for {cells} cells",
                    coeffs.len()
                )));
            }
            let slot = stencil
                .entry(offset)
                .or_insert_with(|| vec![BigRational::zero(); cells]);
            for (s, c) in slot.iter_mut().zip(coeffs) {
                *s += c;
            }
        }
        stencil.retain(|_, t| t.iter().any(|c| !c.is_zero()));
        Ok(StencilOperator {
            rank,
            period,
            stencil,
        })
    }

    fn constant_entries(rank: usize, period: usize, entries: &[(Vec<i64>, i64)]) -> Result<Self> {
        let cells = cell_count(rank, period);
        Self::new(
            rank,
            period,
            entries
                .iter()
                .map(|(o, c)| (o.clone(), vec![BigRational::from_integer((*c).into()); cells]))
                .collect(),
        )
    }

    /// The nearest-neighbour Laplacian `Σ_i u(x+e_i) + u(x-e_i) - 2u(x)`.
    pub fn laplacian(rank: usize, period: usize) -> Result<Self> {
        let mut entries = vec![(vec![0; rank], -2 * rank as i64)];
        for i in 0..rank {
            for s in [1, -1] {
                let mut o = vec![0; rank];
                o[i] = s;
                entries.push((o, 1));
            }
        }
        Self::constant_entries(rank, period, &entries)
    }

    pub fn identity(rank: usize, period: usize) -> Result<Self> {
        Self::constant_entries(rank, period, &[(vec![0; rank], 1)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn stencil(&self) -> &BTreeMap<Vec<i64>, Vec<BigRational>> {
        &self.stencil
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        let entries = self
            .stencil
            .iter()
            .map(|(o, t)| (o.clone(), t.iter().map(|x| x * c).collect()))
            .collect();
        Self::new(self.rank, self.period, entries).expect("shape is preserved")
    }

    /// `D + c(x)`, with `c` given on the cells of `(Z/N)^r`.
    pub fn add_zeroth_order(&self, c: &[BigRational]) -> Result<Self> {
        let mut entries: Vec<_> = self.stencil.iter().map(|(o, t)| (o.clone(), t.clone())).collect();
        entries.push((vec![0; self.rank], c.to_vec()));
        Self::new(self.rank, self.period, entries)
    }

    /// The same operator with coefficient tables read modulo `m·N`.
    pub fn with_period(&self, period: usize) -> Result<Self> {
        if period == 0 || period % self.period != 0 {
            return Err(Error::Argument(format!(
                "period {period} is not a multiple of {}",
                self.period
            )));
        }
        let cells = cell_count(self.rank, period);
        let entries = self
            .stencil
            .iter()
            .map(|(o, t)| {
                let table = (0..cells)
                    .map(|j| t[cell_of(&cell_coords(j, period, self.rank), self.period)].clone())
                    .collect();
                (o.clone(), table)
            })
            .collect();
        Self::new(self.rank, period, entries)
    }

    /// `(Du)(x)` for a function given pointwise.
    pub fn apply_pointwise<F: Fn(&[i64]) -> BigRational>(&self, u: F, x: &[i64]) -> BigRational {
        let cell = cell_of(x, self.period);
        self.stencil
            .iter()
            .map(|(o, t)| {
                let y: Vec<i64> = x.iter().zip(o).map(|(a, b)| a + b).collect();
                &t[cell] * u(&y)
            })
            .sum()
    }

    /// `{"rank":r,"period":N,"stencil":[{"offset":[..],"coeffs":["1",..]},..]}`;
    /// coefficients may be strings `"p/q"` or JSON integers.
    pub fn from_json(value: &Value) -> Result<Self> {
        let int = |k: &str| {
            value
                .get(k)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::Parse(format!("operator needs a non-negative integer {k:?}")))
        };
        let rank = int("rank")?;
        let period = int("period")?;
        let list = value
            .get("stencil")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("operator needs a \"stencil\" list".into()))?;
        let mut entries = Vec::new();
        for entry in list {
            let offset = entry
                .get("offset")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("stencil entry needs an \"offset\" list".into()))?
                .iter()
                .map(|v| v.as_i64().ok_or_else(|| Error::Parse("offsets must be integers".into())))
                .collect::<Result<Vec<i64>>>()?;
            let coeffs = entry
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("stencil entry needs a \"coeffs\" list".into()))?
                .iter()
                .map(|v| match v {
                    Value::String(s) => parse_rational(s),
                    Value::Number(n) if n.is_i64() => {
                        Ok(BigRational::from_integer(n.as_i64().unwrap_or(0).into()))
                    }
                    _ => Err(Error::Parse(format!("bad coefficient {v}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            entries.push((offset, coeffs));
        }
        Self::new(rank, period, entries).map_err(|e| match e {
            Error::Structural(m) | Error::Argument(m) => Error::Parse(m),
            e => e,
        })
    }

    pub fn to_json(&self) -> Value {
        let stencil: Vec<Value> = self
            .stencil
            .iter()
            .map(|(o, t)| {
                let coeffs: Vec<String> = t.iter().map(format_rational).collect();
                serde_json::json!({"offset": o, "coeffs": coeffs})
            })
            .collect();
        serde_json::json!({"rank": self.rank, "period": self.period, "stencil": stencil})
    }
}

/// `u(x) = Σ_ν a_ν(x mod N)·x^ν`; all-zero tables are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyAnsatz {
    rank: usize,
    period: usize,
    coefficients: BTreeMap<Vec<u32>, Vec<BigRational>>,
}

impl PolyAnsatz {
    pub fn zero(rank: usize, period: usize) -> Self {
        PolyAnsatz {
            rank,
            period,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn new(rank: usize, period: usize, coefficients: BTreeMap<Vec<u32>, Vec<BigRational>>) -> Result<Self> {
        let cells = cell_count(rank, period);
        for (nu, t) in &coefficients {
            if nu.len() != rank || t.len() != cells {
                return Err(Error::Structural(format!(
                    "coefficient x^{nu:?} has shape ({}, {}), expected ({rank}, {cells})",
                    nu.len(),
                    t.len()
                )));
            }
        }
        let mut u = PolyAnsatz {
            rank,
            period,
            coefficients,
        };
        u.coefficients.retain(|_, t| t.iter().any(|c| !c.is_zero()));
        Ok(u)
    }

    /// `x^ν` with constant coefficient 1.
    pub fn monomial(period: usize, nu: &[u32]) -> Self {
        let cells = cell_count(nu.len(), period);
        let mut coefficients = BTreeMap::new();
        coefficients.insert(nu.to_vec(), vec![BigRational::one(); cells]);
        PolyAnsatz {
            rank: nu.len(),
            period,
            coefficients,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, Vec<BigRational>> {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Largest `|ν|₁`, or `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.coefficients
            .keys()
            .map(|nu| nu.iter().sum::<u32>() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn eval(&self, x: &[i64]) -> BigRational {
        let cell = cell_of(x, self.period);
        self.coefficients
            .iter()
            .map(|(nu, t)| {
                let mono: BigInt = nu
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| BigInt::from(xi).pow(e))
                    .product();
                &t[cell] * BigRational::from_integer(mono)
            })
            .sum()
    }

    /// `x ↦ u(x+t)`, re-expanded in the same form.
    pub fn translate(&self, t: &[i64]) -> Self {
        let cells = cell_count(self.rank, self.period);
        let mut out: BTreeMap<Vec<u32>, Vec<BigRational>> = BTreeMap::new();
        for (nu, table) in &self.coefficients {
            for mu in lower_exponents(nu) {
                let f = expansion_factor(nu, &mu, t);
                if f.is_zero() {
                    continue;
                }
                let f = BigRational::from_integer(f);
                let slot = out
                    .entry(mu)
                    .or_insert_with(|| vec![BigRational::zero(); cells]);
                for (j, s) in slot.iter_mut().enumerate() {
                    *s += &table[shifted_cell(j, t, self.period)] * &f;
                }
            }
        }
        PolyAnsatz::new(self.rank, self.period, out).expect("shape is preserved")
    }

    fn add_scaled(&mut self, other: &PolyAnsatz, c: &BigRational, mask: Option<&[BigRational]>) {
        let cells = cell_count(self.rank, self.period);
        for (nu, t) in &other.coefficients {
            let slot = self
                .coefficients
                .entry(nu.clone())
                .or_insert_with(|| vec![BigRational::zero(); cells]);
            for (j, (s, v)) in slot.iter_mut().zip(t).enumerate() {
                let w = match mask {
                    Some(m) => &m[j] * c,
                    None => c.clone(),
                };
                *s += v * w;
            }
        }
        self.coefficients.retain(|_, t| t.iter().any(|c| !c.is_zero()));
    }

    /// Coordinates in the unknown ordering of [`polynomial_kernel`].
    pub fn to_vector(&self, n: usize) -> Vec<BigRational> {
        let cells = cell_count(self.rank, self.period);
        exponents_up_to(self.rank, n)
            .iter()
            .flat_map(|nu| match self.coefficients.get(nu) {
                Some(t) => t.clone(),
                None => vec![BigRational::zero(); cells],
            })
            .collect()
    }

    pub fn from_vector(rank: usize, period: usize, n: usize, v: &[BigRational]) -> Result<Self> {
        let cells = cell_count(rank, period);
        let nus = exponents_up_to(rank, n);
        if v.len() != nus.len() * cells {
            return Err(Error::Structural("coefficient vector has the wrong length".into()));
        }
        let coefficients = nus
            .into_iter()
            .enumerate()
            .map(|(i, nu)| (nu, v[i * cells..(i + 1) * cells].to_vec()))
            .collect();
        PolyAnsatz::new(rank, period, coefficients)
    }

    /// `{"x^ν": ["a(0)", "a(1)", …]}` keyed by comma-joined exponents.
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .coefficients
            .iter()
            .map(|(nu, t)| {
                let key = nu.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                let vals: Vec<String> = t.iter().map(format_rational).collect();
                (key, serde_json::json!(vals))
            })
            .collect();
        Value::Object(map)
    }

    /// Human-readable rendering, constant tables collapsed to one value.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .map(|(nu, t)| {
                let c = if t.iter().all(|c| *c == t[0]) {
                    format_rational(&t[0])
                } else {
                    format!("[{}]", t.iter().map(format_rational).collect::<Vec<_>>().join(","))
                };
                let mono: Vec<String> = nu
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    c
                } else {
                    format!("{c}·{}", mono.join("·"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// All `μ ≤ ν` componentwise.
fn lower_exponents(nu: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &e in nu {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=e).map(move |m| {
                    let mut q = p.clone();
                    q.push(m);
                    q
                })
            })
            .collect();
    }
    out
}

fn check_shapes(d: &StencilOperator, u: &PolyAnsatz) -> Result<()> {
    if d.rank != u.rank || d.period != u.period {
        return Err(Error::Structural(format!(
            "operator on (rank {}, period {}) applied to ansatz on (rank {}, period {})",
            d.rank, d.period, u.rank, u.period
        )));
    }
    Ok(())
}

/// `D u = Σ_o c_o·u(·+o)`, exactly.
pub fn apply(d: &StencilOperator, u: &PolyAnsatz) -> Result<PolyAnsatz> {
    check_shapes(d, u)?;
    let mut out = PolyAnsatz::zero(u.rank, u.period);
    for (o, table) in &d.stencil {
        out.add_scaled(&u.translate(o), &BigRational::one(), Some(table));
    }
    Ok(out)
}

/// The assembled linear system: rows `(μ, cell)`, columns `(ν, cell)`, both in
/// the `(|ν|₁, ν lexicographic, cell)` order.
pub fn kernel_system(d: &StencilOperator, n: usize) -> Matrix {
    let cells = cell_count(d.rank, d.period);
    let nus = exponents_up_to(d.rank, n);
    let cols = nus.len() * cells;
    let rows: Vec<Vec<BigRational>> = (0..nus.len() * cells)
        .into_par_iter()
        .map(|row| {
            let (mu, j) = (&nus[row / cells], row % cells);
            let mut out = vec![BigRational::zero(); cols];
            for (o, table) in &d.stencil {
                let c = &table[j];
                if c.is_zero() {
                    continue;
                }
                let src = shifted_cell(j, o, d.period);
                for (k, nu) in nus.iter().enumerate() {
                    let f = expansion_factor(nu, mu, o);
                    if !f.is_zero() {
                        out[k * cells + src] += c * BigRational::from_integer(f);
                    }
                }
            }
            out
        })
        .collect();
    Matrix::from_rows(rows, cols)
}

/// Basis of `{u : |ν|₁ ≤ n, D u = 0}` and its dimension.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub n: usize,
    pub dimension: usize,
    pub basis: Vec<PolyAnsatz>,
}

/// Kernel of `D` on periodic polynomials of degree `≤ n`, by exact
/// elimination. The basis vectors come from the reduced echelon form, one per
/// free unknown.
pub fn polynomial_kernel(d: &StencilOperator, n: usize) -> Result<Kernel> {
    let basis = kernel_system(d, n)
        .nullspace()
        .iter()
        .map(|v| PolyAnsatz::from_vector(d.rank, d.period, n, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Kernel {
        n,
        dimension: basis.len(),
        basis,
    })
}

/// `dim P_n` against `s·C(n+r, r)` with `s = dim P_0`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub dim: usize,
    pub bound: String,
    pub slack: String,
}

pub fn check_bound(d: &StencilOperator, n: usize) -> Result<BoundReport> {
    let s = polynomial_kernel(d, 0)?.dimension;
    let dim = if n == 0 { s } else { polynomial_kernel(d, n)?.dimension };
    let bound = dim_pn_bound(n, d.rank, s);
    let dim_big = BigUint::from(dim);
    if dim_big > bound {
        return Err(Error::Violation {
            name: "dimension bound".into(),
            detail: format!("dim P_{n} = {dim} exceeds {bound}"),
        });
    }
    Ok(BoundReport {
        n,
        r: d.rank,
        s,
        dim,
        slack: (&bound - dim_big).to_string(),
        bound: bound.to_string(),
    })
}

/// Checks that every translate of a basis element by a unit vector lies in
/// the span of the basis, solving for the coordinates exactly.
pub fn kernel_translation_check(kernel: &Kernel) -> Result<bool> {
    let Some(first) = kernel.basis.first() else {
        return Ok(true);
    };
    let (rank, n) = (first.rank, kernel.n);
    let vectors: Vec<Vec<BigRational>> = kernel.basis.iter().map(|b| b.to_vector(n)).collect();
    for b in &kernel.basis {
        for i in 0..rank {
            for s in [1, -1] {
                let mut t = vec![0; rank];
                t[i] = s;
                if span_coordinates(&vectors, &b.translate(&t).to_vector(n)).is_none() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `D(u(·+t)) = (Du)(·+t)` for `t ∈ N·Z^r`.
pub fn commutes_with_translation(d: &StencilOperator, u: &PolyAnsatz, t: &[i64]) -> Result<bool> {
    if t.iter().any(|ti| ti.rem_euclid(d.period as i64) != 0) {
        return Err(Error::Argument(format!(
            "translation {t:?} is not a multiple of the period {}",
            d.period
        )));
    }
    Ok(apply(d, &u.translate(t))? == apply(d, u)?.translate(t))
}
