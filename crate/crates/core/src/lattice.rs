//! Submodules of rank at most 2 of the 2-local plane.
//!
//! Lattices are compared by membership, never by generator identity: two
//! values are equal iff each contains the other's generators. Primitive
//! lattices (those holding a vector with an odd coordinate) form a rooted
//! 3-valent tree under inclusion, with the multiplicity of a lattice being
//! its depth. [`Lattice::superlattice_at`] walks up that tree and
//! [`Lattice::index2_trichotomy`] lists the three children of a node.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{DyadicError, Scalar, Val2, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
    #[error("lattice is not primitive")]
    NotPrimitiveLattice,
    #[error("requested multiplicity {requested} is outside 0..={available}")]
    IndexOutOfRange { requested: Val2, available: Val2 },
    #[error("the full lattice has no index-2 trichotomy (multiplicity 0)")]
    MultiplicityZero,
    #[error("lattice has infinite multiplicity")]
    InfiniteMultiplicity,
    #[error("vector {0} is not a primitive element of the lattice")]
    NotPrimitiveMember(String),
    #[error("malformed lattice: {0}")]
    Malformed(String),
}

/// A 2-local lattice given by generators. Rank 2 generators are rationally
/// independent; every coordinate is 2-integral.
#[derive(Clone)]
pub enum Lattice {
    Zero,
    Line(Vector),
    Plane(Vector, Vector),
}

/// The three index-2 sublattices of a primitive lattice of finite multiplicity `d >= 1`.
#[derive(Debug, Clone)]
pub struct Trichotomy {
    pub plus: Lattice,
    pub minus: Lattice,
    /// Exactly the non-primitive elements of the parent lattice.
    pub zero: Lattice,
}

impl Lattice {
    /// The whole of the 2-local plane.
    pub fn full() -> Lattice {
        Lattice::Plane(Vector::new(1, 0), Vector::new(0, 1))
    }

    pub fn span(v1: &Vector, v2: &Vector) -> Result<Lattice, LatticeError> {
        v1.ensure_two_integral()?;
        v2.ensure_two_integral()?;
        Ok(Self::span_unchecked(v1, v2))
    }

    pub(crate) fn span_unchecked(v1: &Vector, v2: &Vector) -> Lattice {
        if !v1.cross(v2).is_zero() {
            return Lattice::Plane(v1.clone(), v2.clone());
        }
        match (v1.is_zero(), v2.is_zero()) {
            (true, true) => Lattice::Zero,
            (false, true) => Lattice::Line(v1.clone()),
            (true, false) => Lattice::Line(v2.clone()),
            (false, false) => {
                // parallel: keep whichever generates the other
                let t = v2.ratio_to(v1).expect("parallel nonzero vectors");
                if t.is_two_integral() {
                    Lattice::Line(v1.clone())
                } else {
                    Lattice::Line(v2.clone())
                }
            }
        }
    }

    pub fn line(v: &Vector) -> Result<Lattice, LatticeError> {
        Self::span(v, &Vector::zero())
    }

    pub fn rank(&self) -> usize {
        match self {
            Lattice::Zero => 0,
            Lattice::Line(_) => 1,
            Lattice::Plane(..) => 2,
        }
    }

    pub fn generators(&self) -> Vec<&Vector> {
        match self {
            Lattice::Zero => vec![],
            Lattice::Line(g) => vec![g],
            Lattice::Plane(g1, g2) => vec![g1, g2],
        }
    }

    /// 2-adic valuation of the index in the full lattice; infinite below rank 2.
    pub fn multiplicity(&self) -> Val2 {
        match self {
            Lattice::Plane(g1, g2) => g1.cross(g2).val2(),
            _ => Val2::Infinite,
        }
    }

    pub fn contains(&self, v: &Vector) -> Result<bool, LatticeError> {
        v.ensure_two_integral()?;
        Ok(self.contains_unchecked(v))
    }

    pub(crate) fn contains_unchecked(&self, v: &Vector) -> bool {
        match self {
            Lattice::Zero => v.is_zero(),
            Lattice::Line(g) => match v.ratio_to(g) {
                Some(t) => t.is_two_integral(),
                None => false,
            },
            Lattice::Plane(g1, g2) => {
                // Cramer's rule for g1*a + g2*b = v
                let det = g1.cross(g2);
                let a = v.cross(g2).checked_div(&det).expect("rank 2");
                let b = g1.cross(v).checked_div(&det).expect("rank 2");
                a.is_two_integral() && b.is_two_integral()
            }
        }
    }

    pub fn includes(&self, other: &Lattice) -> bool {
        other.generators().into_iter().all(|g| self.contains_unchecked(g))
    }

    pub fn equals(&self, other: &Lattice) -> bool {
        self.includes(other) && other.includes(self)
    }

    pub fn is_primitive(&self) -> bool {
        self.generators().into_iter().any(|g| g.is_primitive().unwrap_or(false))
    }

    fn primitive_generator(&self) -> Result<&Vector, LatticeError> {
        self.generators()
            .into_iter()
            .find(|g| g.is_primitive().unwrap_or(false))
            .ok_or(LatticeError::NotPrimitiveLattice)
    }

    /// The unique primitive lattice of multiplicity `i` containing `self`.
    pub fn superlattice_at(&self, i: Val2) -> Result<Lattice, LatticeError> {
        let u = self.primitive_generator()?;
        let d = self.multiplicity();
        if i > d || i < Val2::Finite(0) {
            return Err(LatticeError::IndexOutOfRange {
                requested: i,
                available: d,
            });
        }
        let exp = match i {
            Val2::Infinite => return Ok(self.clone()),
            Val2::Finite(e) => e as u32,
        };
        let step = Scalar::pow2(exp);
        if u.x.is_odd() {
            Ok(Lattice::Plane(
                u.clone(),
                Vector {
                    x: Scalar::zero(),
                    y: step,
                },
            ))
        } else {
            Ok(Lattice::Plane(
                u.clone(),
                Vector {
                    x: step,
                    y: Scalar::zero(),
                },
            ))
        }
    }

    /// Re-based form `(u, d, swapped)`: after optionally swapping coordinates,
    /// `self = span(u, (0, 2^d))` with `u.x` odd and `d >= 1` finite.
    fn rebased(&self) -> Result<(Vector, u32, bool), LatticeError> {
        let u = self.primitive_generator()?;
        let d = match self.multiplicity() {
            Val2::Infinite => return Err(LatticeError::InfiniteMultiplicity),
            Val2::Finite(0) => return Err(LatticeError::MultiplicityZero),
            Val2::Finite(d) => d as u32,
        };
        if u.x.is_odd() {
            Ok((u.clone(), d, false))
        } else {
            Ok((u.swapped(), d, true))
        }
    }

    pub fn index2_trichotomy(&self) -> Result<Trichotomy, LatticeError> {
        let (u, d, swapped) = self.rebased()?;
        let unswap = |v: Vector| if swapped { v.swapped() } else { v };
        let step = Vector {
            x: Scalar::zero(),
            y: Scalar::pow2(d),
        };
        let step2 = Vector {
            x: Scalar::zero(),
            y: Scalar::pow2(d + 1),
        };
        let two = Scalar::from_int(2);
        let plus = Lattice::Plane(unswap(u.clone()), unswap(step2.clone()));
        let minus = Lattice::Plane(unswap(&u + &step), unswap(step2));
        let zero = Lattice::Plane(unswap(u.scale(&two)), unswap(step));
        Ok(Trichotomy { plus, minus, zero })
    }

    /// Parity of the `(0, 2^d)`-coefficient of a primitive element in the re-based form.
    fn half_index(&self, u: &Vector, d: u32, swapped: bool, v: &Vector) -> Result<bool, LatticeError> {
        let bad = || LatticeError::NotPrimitiveMember(v.to_string());
        if !v.is_primitive()? || !self.contains_unchecked(v) {
            return Err(bad());
        }
        let v = if swapped { v.swapped() } else { v.clone() };
        let a = v.x.checked_div(&u.x).ok_or_else(bad)?;
        let b = (&v.y - &(&a * &u.y)).checked_div(&Scalar::pow2(d)).ok_or_else(bad)?;
        Ok(b.is_odd())
    }

    /// Whether two primitive elements fall in the same index-2 primitive sublattice.
    pub fn same_half(&self, v: &Vector, w: &Vector) -> Result<bool, LatticeError> {
        let (u, d, swapped) = self.rebased()?;
        Ok(self.half_index(&u, d, swapped, v)? == self.half_index(&u, d, swapped, w)?)
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            rank: self.rank(),
            generators: self.generators().into_iter().cloned().collect(),
        }
    }

    pub fn from_json(json: &LatticeJson) -> Result<Lattice, LatticeError> {
        let l = match json.generators.as_slice() {
            [] => Lattice::Zero,
            [g] => Lattice::line(g)?,
            [g1, g2] => Lattice::span(g1, g2)?,
            _ => return Err(LatticeError::Malformed("more than two generators".into())),
        };
        if l.rank() != json.rank {
            return Err(LatticeError::Malformed(format!(
                "declared rank {} but generators have rank {}",
                json.rank,
                l.rank()
            )));
        }
        Ok(l)
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Lattice) -> bool {
        self.equals(other)
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lattice::Zero => f.write_str("<0>"),
            Lattice::Line(g) => write!(f, "<{g}>"),
            Lattice::Plane(g1, g2) => write!(f, "<{g1}, {g2}>"),
        }
    }
}

/// Serialized form: `{ "rank": r, "generators": [[sx, sy], ...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub rank: usize,
    pub generators: Vec<Vector>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = LatticeJson::deserialize(d)?;
        Lattice::from_json(&json).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::vec2;

    fn span(a: (i64, i64), b: (i64, i64)) -> Lattice {
        Lattice::span(&vec2(a.0, a.1), &vec2(b.0, b.1)).unwrap()
    }

    #[test]
    fn span_ranks() {
        assert_eq!(span((1, 0), (0, 2)).rank(), 2);
        let l = span((2, 4), (1, 2));
        assert_eq!(l.rank(), 1);
        assert_eq!(l.generators(), vec![&vec2(1, 2)]);
        assert_eq!(span((0, 0), (0, 0)).rank(), 0);
        let half = Vector::new("1/2".parse::<Scalar>().unwrap(), Scalar::zero());
        assert!(Lattice::span(&half, &vec2(0, 1)).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(span((1, 0), (0, 2)).multiplicity(), Val2::Finite(1));
        assert_eq!(span((1, 0), (0, 1)).multiplicity(), Val2::Finite(0));
        // cross = 12 - 20 = -8
        assert_eq!(vec2(6, 2).cross(&vec2(10, 2)), Scalar::from_int(-8));
        assert_eq!(span((6, 2), (10, 2)).multiplicity(), Val2::Finite(3));
        assert_eq!(span((1, 2), (2, 4)).multiplicity(), Val2::Infinite);
    }

    #[test]
    fn membership_examples() {
        let l = span((1, 0), (0, 2));
        assert!(l.contains(&vec2(3, 4)).unwrap());
        assert!(!l.contains(&vec2(0, 1)).unwrap());
        assert!(span((3, 0), (0, 1)).contains(&vec2(1, 0)).unwrap());
        let line = span((2, 4), (0, 0));
        assert!(line.contains(&vec2(6, 12)).unwrap());
        assert!(!line.contains(&vec2(1, 2)).unwrap());
        assert!(!line.contains(&vec2(2, 5)).unwrap());
        assert!(Lattice::Zero.contains(&vec2(0, 0)).unwrap());
        assert!(!Lattice::Zero.contains(&vec2(0, 2)).unwrap());
    }

    #[test]
    fn inclusion_examples() {
        assert!(Lattice::full().includes(&span((1, 0), (0, 2))));
        assert!(span((1, 0), (0, 2)).includes(&span((1, 2), (0, 4))));
        assert!(!span((1, 2), (0, 4)).includes(&span((1, 0), (0, 2))));
        assert_eq!(span((1, 0), (0, 4)), span((1, 4), (0, 4)));
        assert_ne!(span((1, 0), (0, 4)), span((1, 2), (0, 4)));
    }

    #[test]
    fn primitive_lattices() {
        assert!(span((1, 0), (0, 2)).is_primitive());
        assert!(!span((2, 0), (0, 2)).is_primitive());
        assert!(!span((2, 4), (0, 0)).is_primitive());
    }

    #[test]
    fn superlattice_examples() {
        let l = span((1, 0), (0, 8));
        assert_eq!(l.superlattice_at(Val2::Finite(1)).unwrap(), span((1, 0), (0, 2)));
        assert_eq!(l.superlattice_at(Val2::Finite(0)).unwrap(), Lattice::full());
        assert_eq!(l.superlattice_at(Val2::Finite(3)).unwrap(), l);
        assert!(matches!(
            l.superlattice_at(Val2::Finite(4)),
            Err(LatticeError::IndexOutOfRange { .. })
        ));
        assert_eq!(
            span((2, 0), (0, 2)).superlattice_at(Val2::Finite(0)),
            Err(LatticeError::NotPrimitiveLattice)
        );
        let line = Lattice::line(&vec2(2, 1)).unwrap();
        assert_eq!(line.superlattice_at(Val2::Infinite).unwrap(), line);
        assert_eq!(line.superlattice_at(Val2::Finite(2)).unwrap(), span((2, 1), (4, 0)));
    }

    #[test]
    fn trichotomy_example() {
        let l = span((1, 0), (0, 2));
        let t = l.index2_trichotomy().unwrap();
        assert_eq!(t.plus, span((1, 0), (0, 4)));
        assert_eq!(t.minus, span((1, 2), (0, 4)));
        assert_eq!(t.zero, span((2, 0), (0, 2)));
        assert!(t.zero.contains(&vec2(2, 2)).unwrap());
        let p = vec2(1, 0);
        assert!(t.plus.contains(&p).unwrap() ^ t.minus.contains(&p).unwrap());
    }

    #[test]
    fn trichotomy_refusals() {
        assert_eq!(
            Lattice::full().index2_trichotomy().unwrap_err(),
            LatticeError::MultiplicityZero
        );
        assert_eq!(
            Lattice::line(&vec2(1, 0)).unwrap().index2_trichotomy().unwrap_err(),
            LatticeError::InfiniteMultiplicity
        );
        assert_eq!(
            span((2, 0), (0, 2)).index2_trichotomy().unwrap_err(),
            LatticeError::NotPrimitiveLattice
        );
    }

    #[test]
    fn trichotomy_with_even_first_coordinate() {
        // primitive generator (2, 1) forces the swapped form
        let l = span((2, 1), (8, 0));
        let t = l.index2_trichotomy().unwrap();
        for part in [&t.plus, &t.minus, &t.zero] {
            assert_eq!(part.multiplicity(), Val2::Finite(4));
            assert!(l.includes(part));
        }
        assert!(!t.zero.is_primitive());
    }

    #[test]
    fn same_half_examples() {
        let l = span((1, 0), (0, 2));
        assert!(l.same_half(&vec2(1, 0), &vec2(1, 4)).unwrap());
        assert!(!l.same_half(&vec2(1, 0), &vec2(1, 2)).unwrap());
        assert!(l.same_half(&vec2(3, 2), &vec2(3, 2)).unwrap());
        assert!(l.same_half(&vec2(2, 2), &vec2(1, 0)).is_err());
        assert!(l.same_half(&vec2(0, 1), &vec2(1, 0)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let l = span((6, 2), (10, 2));
        let text = serde_json::to_string(&l).unwrap();
        assert_eq!(text, r#"{"rank":2,"generators":[["6","2"],["10","2"]]}"#);
        let back: Lattice = serde_json::from_str(&text).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<Lattice>(r#"{"rank":2,"generators":[["1","2"]]}"#).is_err());
    }
}
