//! Finitely generated groups with exact element arithmetic.
//!
//! Three families are supported: free abelian groups `Z^r`, finitely
//! generated abelian groups `Z^r ⊕ Z/m_1 ⊕ … ⊕ Z/m_t`, and the integer
//! Heisenberg group with law `(a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a·b')`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    FreeAbelian {
        rank: usize,
    },
    FinGenAbelian {
        rank: usize,
        #[serde(default)]
        torsion_moduli: Vec<u64>,
    },
    HeisenbergZ,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Abelian { free: Vec<BigInt>, torsion: Vec<u64> },
    Heisenberg { a: BigInt, b: BigInt, c: BigInt },
}

/// Image of an element in the abelianization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianizedCoords {
    pub free_part: Vec<BigInt>,
    pub torsion_part: Vec<u64>,
}

impl AbelianizedCoords {
    pub fn is_zero(&self) -> bool {
        self.free_part.iter().all(Zero::is_zero) && self.torsion_part.iter().all(|&t| t == 0)
    }
}

impl GroupElement {
    /// An element of `Z^r` from its coordinates.
    pub fn lattice(coords: &[i64]) -> Self {
        GroupElement::Abelian {
            free: coords.iter().map(|&c| BigInt::from(c)).collect(),
            torsion: Vec::new(),
        }
    }

    pub fn lattice_big(coords: Vec<BigInt>) -> Self {
        GroupElement::Abelian {
            free: coords,
            torsion: Vec::new(),
        }
    }

    pub fn heisenberg(a: i64, b: i64, c: i64) -> Self {
        GroupElement::Heisenberg {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// Free coordinates for abelian elements; `None` for Heisenberg elements.
    pub fn free_coords(&self) -> Option<&[BigInt]> {
        match self {
            GroupElement::Abelian { free, .. } => Some(free),
            GroupElement::Heisenberg { .. } => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Abelian { free, torsion } => {
                write!(f, "(")?;
                for (i, c) in free.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                if !torsion.is_empty() {
                    write!(f, ";")?;
                    for (i, t) in torsion.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{t}")?;
                    }
                }
                write!(f, ")")
            }
            GroupElement::Heisenberg { a, b, c } => write!(f, "({a},{b},{c})"),
        }
    }
}

/// Formats a tuple of group elements as `[g1, g2, …]`.
pub fn format_tuple(tuple: &[GroupElement]) -> String {
    let parts: Vec<String> = tuple.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

impl GroupSpec {
    pub fn free_abelian(rank: usize) -> Self {
        GroupSpec::FreeAbelian { rank }
    }

    pub fn fin_gen_abelian(rank: usize, torsion_moduli: Vec<u64>) -> Result<Self> {
        let g = GroupSpec::FinGenAbelian {
            rank,
            torsion_moduli,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if let GroupSpec::FinGenAbelian { torsion_moduli, .. } = self {
            if let Some(m) = torsion_moduli.iter().find(|&&m| m < 2) {
                return Err(Error::Argument(format!("torsion modulus {m} is below 2")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: GroupSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("group spec: {e}")))?;
        g.validate()?;
        Ok(g)
    }

    /// Rank of the free part of the abelianization.
    pub fn free_rank(&self) -> usize {
        match self {
            GroupSpec::FreeAbelian { rank } | GroupSpec::FinGenAbelian { rank, .. } => *rank,
            GroupSpec::HeisenbergZ => 2,
        }
    }

    pub fn torsion_moduli(&self) -> &[u64] {
        match self {
            GroupSpec::FinGenAbelian { torsion_moduli, .. } => torsion_moduli,
            _ => &[],
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self, GroupSpec::HeisenbergZ)
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupSpec::HeisenbergZ, GroupElement::Heisenberg { .. }) => true,
            (GroupSpec::HeisenbergZ, _) | (_, GroupElement::Heisenberg { .. }) => false,
            (_, GroupElement::Abelian { free, torsion }) => {
                let moduli = self.torsion_moduli();
                free.len() == self.free_rank()
                    && torsion.len() == moduli.len()
                    && torsion.iter().zip(moduli).all(|(t, m)| t < m)
            }
        }
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::Structural(format!("element {g} does not belong to {self:?}")))
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::HeisenbergZ => GroupElement::heisenberg(0, 0, 0),
            _ => GroupElement::Abelian {
                free: vec![BigInt::zero(); self.free_rank()],
                torsion: vec![0; self.torsion_moduli().len()],
            },
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (x, y) {
            (
                GroupElement::Heisenberg { a, b, c },
                GroupElement::Heisenberg {
                    a: a2,
                    b: b2,
                    c: c2,
                },
            ) => GroupElement::Heisenberg {
                a: a + a2,
                b: b + b2,
                c: c + c2 + a * b2,
            },
            (
                GroupElement::Abelian { free, torsion },
                GroupElement::Abelian {
                    free: free2,
                    torsion: torsion2,
                },
            ) => GroupElement::Abelian {
                free: free.iter().zip(free2).map(|(p, q)| p + q).collect(),
                torsion: torsion
                    .iter()
                    .zip(torsion2)
                    .zip(self.torsion_moduli())
                    .map(|((p, q), m)| (p + q) % m)
                    .collect(),
            },
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(match x {
            GroupElement::Heisenberg { a, b, c } => GroupElement::Heisenberg {
                a: -a,
                b: -b,
                c: a * b - c,
            },
            GroupElement::Abelian { free, torsion } => GroupElement::Abelian {
                free: free.iter().map(|p| -p).collect(),
                torsion: torsion
                    .iter()
                    .zip(self.torsion_moduli())
                    .map(|(t, m)| (m - t) % m)
                    .collect(),
            },
        })
    }

    /// `x·y·x⁻¹·y⁻¹`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let xy = self.multiply(x, y)?;
        let xyx = self.multiply(&xy, &self.inverse(x)?)?;
        self.multiply(&xyx, &self.inverse(y)?)
    }

    /// Ordered product `g_1 ⋯ g_n`; the empty product is the identity.
    pub fn product(&self, factors: &[GroupElement]) -> Result<GroupElement> {
        factors
            .iter()
            .try_fold(self.identity(), |acc, g| self.multiply(&acc, g))
    }

    /// Ordered product of the tuple with the (1-based) positions in
    /// `omitted` left out.
    pub fn pi_product(&self, omitted: &[usize], tuple: &[GroupElement]) -> Result<GroupElement> {
        let n = tuple.len();
        if omitted.is_empty() || omitted.len() > n {
            return Err(Error::Argument(format!(
                "index set of size {} is invalid for a {n}-tuple",
                omitted.len()
            )));
        }
        if omitted.windows(2).any(|w| w[0] >= w[1]) || omitted[0] < 1 || omitted[omitted.len() - 1] > n
        {
            return Err(Error::Argument(format!(
                "indices {omitted:?} must be strictly increasing within 1..={n}"
            )));
        }
        let kept: Vec<GroupElement> = tuple
            .iter()
            .enumerate()
            .filter(|(i, _)| omitted.binary_search(&(i + 1)).is_err())
            .map(|(_, g)| g.clone())
            .collect();
        self.product(&kept)
    }

    pub fn abelianize(&self, g: &GroupElement) -> Result<AbelianizedCoords> {
        self.check(g)?;
        Ok(match g {
            GroupElement::Heisenberg { a, b, .. } => AbelianizedCoords {
                free_part: vec![a.clone(), b.clone()],
                torsion_part: Vec::new(),
            },
            GroupElement::Abelian { free, torsion } => AbelianizedCoords {
                free_part: free.clone(),
                torsion_part: torsion.clone(),
            },
        })
    }

    /// Elements mapping onto the standard free basis of the abelianization.
    pub fn free_generators(&self) -> Vec<GroupElement> {
        match self {
            GroupSpec::HeisenbergZ => vec![
                GroupElement::heisenberg(1, 0, 0),
                GroupElement::heisenberg(0, 1, 0),
            ],
            _ => {
                let r = self.free_rank();
                let t = self.torsion_moduli().len();
                (0..r)
                    .map(|i| {
                        let mut free = vec![BigInt::zero(); r];
                        free[i] = 1.into();
                        GroupElement::Abelian {
                            free,
                            torsion: vec![0; t],
                        }
                    })
                    .collect()
            }
        }
    }

    /// One generator per torsion factor.
    pub fn torsion_generators(&self) -> Vec<GroupElement> {
        let r = self.free_rank();
        let t = self.torsion_moduli().len();
        (0..t)
            .map(|j| {
                let mut torsion = vec![0; t];
                torsion[j] = 1;
                GroupElement::Abelian {
                    free: vec![BigInt::zero(); r],
                    torsion,
                }
            })
            .collect()
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        let mut gens = self.free_generators();
        gens.extend(self.torsion_generators());
        gens
    }

    /// Builds the element whose free coordinates are `coords` and whose
    /// remaining coordinates are zero.
    pub fn element_from_free(&self, coords: &[BigInt]) -> Result<GroupElement> {
        if coords.len() != self.free_rank() {
            return Err(Error::Structural(format!(
                "expected {} free coordinates, got {}",
                self.free_rank(),
                coords.len()
            )));
        }
        Ok(match self {
            GroupSpec::HeisenbergZ => GroupElement::Heisenberg {
                a: coords[0].clone(),
                b: coords[1].clone(),
                c: BigInt::zero(),
            },
            _ => GroupElement::Abelian {
                free: coords.to_vec(),
                torsion: vec![0; self.torsion_moduli().len()],
            },
        })
    }

    /// Uniform random element with every unbounded coordinate in
    /// `[-radius, radius]`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, radius: i64) -> GroupElement {
        let mut coord = || BigInt::from(rng.gen_range(-radius..=radius));
        match self {
            GroupSpec::HeisenbergZ => GroupElement::Heisenberg {
                a: coord(),
                b: coord(),
                c: coord(),
            },
            _ => {
                let free = (0..self.free_rank()).map(|_| coord()).collect();
                let torsion = self
                    .torsion_moduli()
                    .iter()
                    .map(|&m| rng.gen_range(0..m))
                    .collect();
                GroupElement::Abelian { free, torsion }
            }
        }
    }

    pub fn random_tuple<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        len: usize,
        radius: i64,
    ) -> Vec<GroupElement> {
        (0..len).map(|_| self.random_element(rng, radius)).collect()
    }

    /// Coarse size of an element, used to order witnesses.
    pub fn norm(&self, g: &GroupElement) -> BigInt {
        match g {
            GroupElement::Heisenberg { a, b, c } => a.abs() + b.abs() + c.abs(),
            GroupElement::Abelian { free, torsion } => {
                free.iter().map(Signed::abs).sum::<BigInt>()
                    + torsion.iter().map(|&t| BigInt::from(t)).sum::<BigInt>()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, c: i64) -> GroupElement {
        GroupElement::heisenberg(a, b, c)
    }

    #[test]
    fn free_abelian_product() {
        let g = GroupSpec::free_abelian(2);
        let p = g
            .multiply(&GroupElement::lattice(&[1, 0]), &GroupElement::lattice(&[0, 1]))
            .unwrap();
        assert_eq!(p, GroupElement::lattice(&[1, 1]));
    }

    #[test]
    fn heisenberg_products() {
        let g = GroupSpec::HeisenbergZ;
        assert_eq!(g.multiply(&h(1, 0, 0), &h(0, 1, 0)).unwrap(), h(1, 1, 1));
        assert_eq!(g.multiply(&h(0, 1, 0), &h(1, 0, 0)).unwrap(), h(1, 1, 0));
    }

    #[test]
    fn commutators() {
        let g = GroupSpec::HeisenbergZ;
        assert_eq!(g.commutator(&h(1, 0, 0), &h(0, 1, 0)).unwrap(), h(0, 0, 1));
        assert_eq!(g.commutator(&h(2, -1, 5), &h(2, -1, 5)).unwrap(), g.identity());
        let z = g.commutator(&h(1, 0, 0), &h(0, 1, 0)).unwrap();
        assert!(g.abelianize(&z).unwrap().is_zero());

        let a = GroupSpec::free_abelian(3);
        let c = a
            .commutator(&GroupElement::lattice(&[1, 2, 3]), &GroupElement::lattice(&[-4, 0, 7]))
            .unwrap();
        assert_eq!(c, a.identity());
    }

    #[test]
    fn pi_products() {
        let g = GroupSpec::HeisenbergZ;
        let t = vec![h(1, 0, 0), h(5, 5, 5), h(0, 1, 0)];
        assert_eq!(g.pi_product(&[2], &t).unwrap(), h(1, 1, 1));
        assert_eq!(g.pi_product(&[1, 2, 3], &t).unwrap(), g.identity());
        assert!(g.pi_product(&[], &t).is_err());
        assert!(g.pi_product(&[2, 1], &t).is_err());
        assert!(g.pi_product(&[4], &t).is_err());
    }

    #[test]
    fn torsion_reduced() {
        let g = GroupSpec::fin_gen_abelian(1, vec![3]).unwrap();
        let t = g.torsion_generators().remove(0);
        let t2 = g.multiply(&t, &t).unwrap();
        let t3 = g.multiply(&t2, &t).unwrap();
        assert_eq!(t3, g.identity());
        assert_eq!(g.inverse(&t).unwrap(), t2);
        assert!(GroupSpec::fin_gen_abelian(1, vec![1]).is_err());
    }

    #[test]
    fn mismatch_is_structural() {
        let g = GroupSpec::free_abelian(2);
        let err = g.multiply(&GroupElement::lattice(&[1]), &GroupElement::lattice(&[0, 1]));
        assert!(matches!(err, Err(Error::Structural(_))));
        assert!(g.multiply(&h(0, 0, 0), &g.identity()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = GroupSpec::from_json(r#"{"kind":"free_abelian","rank":2}"#).unwrap();
        assert_eq!(g, GroupSpec::free_abelian(2));
        let t = GroupSpec::from_json(r#"{"kind":"fin_gen_abelian","rank":1,"torsion_moduli":[2,4]}"#)
            .unwrap();
        assert_eq!(t.torsion_moduli(), &[2, 4]);
        assert_eq!(
            GroupSpec::from_json(r#"{"kind":"heisenberg_z"}"#).unwrap(),
            GroupSpec::HeisenbergZ
        );
        assert!(GroupSpec::from_json(r#"{"kind":"fin_gen_abelian","rank":1,"torsion_moduli":[0]}"#)
            .is_err());
    }
}
