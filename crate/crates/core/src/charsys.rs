//! Finite-order monodromy characters valued in Q/Z and the twistedness
//! calculus: restriction to sublattices, descent to quotient lattices,
//! duality, and the composition-factor multiset model of local systems.

use crate::lattice::{QuotientLattice, Sublattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("character has rank {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("character does not descend: restriction to the sublattice is nontrivial")]
    NotDescendable,
    #[error("cannot parse fraction `{0}`")]
    Parse(String),
}

/// An element of Q/Z, kept as a reduced fraction in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QmodZ {
    value: BigRational,
}

impl QmodZ {
    pub fn new(r: BigRational) -> Self {
        let f = r.floor();
        QmodZ { value: r - f }
    }

    pub fn from_pair(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::new(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Self {
        QmodZ {
            value: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    /// Additive order in Q/Z, i.e. the (positive) denominator.
    pub fn order(&self) -> BigInt {
        self.value.denom().clone()
    }

    pub fn add(&self, other: &QmodZ) -> QmodZ {
        Self::new(&self.value + &other.value)
    }

    pub fn neg(&self) -> QmodZ {
        Self::new(-&self.value)
    }

    pub fn scale(&self, k: &BigInt) -> QmodZ {
        Self::new(&self.value * BigRational::from(k.clone()))
    }

    pub fn parse(text: &str) -> Result<Self, CharError> {
        let t = text.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let numer: BigInt = n.parse().map_err(|_| CharError::Parse(text.into()))?;
        let denom: BigInt = d.parse().map_err(|_| CharError::Parse(text.into()))?;
        if denom.is_zero() {
            return Err(CharError::Parse(text.into()));
        }
        Ok(Self::new(BigRational::new(numer, denom)))
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.denom().is_one() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

/// A homomorphism `Z^n -> Q/Z`: the monodromy character of a rank-one
/// finite-order local system, one value per standard basis vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    values: Vec<QmodZ>,
}

impl Character {
    pub fn new(values: Vec<QmodZ>) -> Self {
        Character { values }
    }

    pub fn trivial(rank: usize) -> Self {
        Character {
            values: vec![QmodZ::zero(); rank],
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[QmodZ] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// lcm of the denominators: the order of the character in Hom(Z^n, Q/Z).
    pub fn order(&self) -> BigInt {
        self.values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(&v.order()))
    }

    /// Value on an arbitrary lattice vector.
    pub fn evaluate(&self, v: &[BigInt]) -> Result<QmodZ, CharError> {
        if v.len() != self.values.len() {
            return Err(CharError::DimensionMismatch {
                expected: self.values.len(),
                got: v.len(),
            });
        }
        let mut acc = QmodZ::zero();
        for (coef, val) in v.iter().zip(&self.values) {
            acc = acc.add(&val.scale(coef));
        }
        Ok(acc)
    }

    /// Restriction to a sublattice, expressed in its basis coordinates.
    pub fn restrict(&self, s: &Sublattice) -> Result<Character, CharError> {
        if s.ambient_rank() != self.values.len() {
            return Err(CharError::DimensionMismatch {
                expected: self.values.len(),
                got: s.ambient_rank(),
            });
        }
        let values = s
            .basis()
            .iter()
            .map(|b| self.evaluate(b))
            .collect::<Result<_, _>>()?;
        Ok(Character { values })
    }

    /// Descent along `Z^n -> Z^n / q.sub`, in complement-basis coordinates.
    /// Only defined when the restriction to `q.sub` is trivial; the pullback
    /// of the result along the projection recovers the original character.
    pub fn descend(&self, q: &QuotientLattice) -> Result<Character, CharError> {
        if !self.restrict(q.sub())?.is_trivial() {
            return Err(CharError::NotDescendable);
        }
        let values = q
            .complement_basis()
            .iter()
            .map(|b| self.evaluate(b))
            .collect::<Result<_, _>>()?;
        Ok(Character { values })
    }

    /// Pullback of a character on the quotient to the ambient lattice.
    pub fn pullback(&self, q: &QuotientLattice) -> Result<Character, CharError> {
        if q.rank() != self.values.len() {
            return Err(CharError::DimensionMismatch {
                expected: self.values.len(),
                got: q.rank(),
            });
        }
        let n = q.ambient_rank();
        let mut values = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            let (_, quot) = q
                .coords(&e)
                .expect("standard basis vector has ambient rank");
            let mut acc = QmodZ::zero();
            for (coef, val) in quot.iter().zip(&self.values) {
                acc = acc.add(&val.scale(coef));
            }
            values.push(acc);
        }
        Ok(Character { values })
    }

    /// The character of the dual local system.
    pub fn dual(&self) -> Character {
        Character {
            values: self.values.iter().map(|v| v.neg()).collect(),
        }
    }

    /// Parses the comma-separated fraction syntax, e.g. `1/2,1/3,0`.
    /// Each value is reduced into `[0, 1)`.
    pub fn parse(text: &str) -> Result<Character, CharError> {
        let t = text.trim();
        if t.is_empty() {
            return Ok(Character { values: Vec::new() });
        }
        let values = t.split(',').map(QmodZ::parse).collect::<Result<_, _>>()?;
        Ok(Character { values })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Semisimplified local system on one orbit: the multiset of characters of
/// its composition factors on the orbit's fundamental-group lattice.
/// Extension data is deliberately forgotten; multiplicities are rank
/// bookkeeping only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocalSystemClass {
    quotient: QuotientLattice,
    factors: BTreeMap<Character, u64>,
}

impl LocalSystemClass {
    pub fn new(
        quotient: QuotientLattice,
        factors: impl IntoIterator<Item = (Character, u64)>,
    ) -> Result<Self, CharError> {
        let mut map: BTreeMap<Character, u64> = BTreeMap::new();
        for (chi, mult) in factors {
            if chi.ambient_rank() != quotient.rank() {
                return Err(CharError::DimensionMismatch {
                    expected: quotient.rank(),
                    got: chi.ambient_rank(),
                });
            }
            if mult == 0 {
                continue;
            }
            *map.entry(chi).or_insert(0) += mult;
        }
        Ok(LocalSystemClass {
            quotient,
            factors: map,
        })
    }

    pub fn empty(quotient: QuotientLattice) -> Self {
        LocalSystemClass {
            quotient,
            factors: BTreeMap::new(),
        }
    }

    pub fn singleton(
        quotient: QuotientLattice,
        chi: Character,
        mult: u64,
    ) -> Result<Self, CharError> {
        Self::new(quotient, [(chi, mult)])
    }

    pub fn quotient(&self) -> &QuotientLattice {
        &self.quotient
    }

    pub fn factors(&self) -> &BTreeMap<Character, u64> {
        &self.factors
    }

    pub fn characters(&self) -> impl Iterator<Item = &Character> {
        self.factors.keys()
    }

    /// Total rank: sum of multiplicities.
    pub fn rank(&self) -> u64 {
        self.factors.values().sum()
    }

    /// Twisted: no composition factor is the trivial local system. The empty
    /// class (the zero local system) is vacuously twisted.
    pub fn is_twisted(&self) -> bool {
        self.factors.keys().all(|chi| !chi.is_trivial())
    }

    /// Disjoint union of factor multisets (semisimplification of an
    /// extension).
    pub fn merge(&self, other: &LocalSystemClass) -> LocalSystemClass {
        let mut factors = self.factors.clone();
        for (chi, mult) in &other.factors {
            *factors.entry(chi.clone()).or_insert(0) += mult;
        }
        LocalSystemClass {
            quotient: self.quotient.clone(),
            factors,
        }
    }
}
