//! Difference-operator calculus for group actions on modules.
//!
//! For a group `G` acting on the right on an abelian group `A`, the iterated
//! difference operators `D^n: A → C^n(G, A)` are defined by `D^0 = id` and
//! `[D^n a](g_1..g_n) = [D^{n-1}a](g_1..g_{n-1})^{g_n} - [D^{n-1}a](g_1..g_{n-1})`.
//! Elements with `D^{n+1} a = 0` are polynomial-like of order `n`.
//!
//! * [`group`]: free abelian, finitely generated abelian and Heisenberg groups.
//! * [`gmodule`]: the exact Floquet algebra, numeric and group-valued function modules.
//! * [`diffcalc`]: cochains, `d_n`, `D^n`, `δ^n`, membership certificates, identity checks.
//! * [`polymorph`]: multilinear maps (polymorphisms) and their dimensions.
//! * [`floquet`]: decomposition of polynomial-like functions into `Σ a_ν(x) x^ν`.
//! * [`solver`]: polynomial-like kernels of periodic stencil operators.
//! * [`cli`]: the command line front end.

pub mod cli;
pub mod diffcalc;
pub mod error;
pub mod floquet;
pub mod gmodule;
pub mod group;
pub mod linalg;
pub mod polymorph;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
