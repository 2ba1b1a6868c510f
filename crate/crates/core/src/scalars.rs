//! Exact scalars over ℤ, ℚ and 𝔽_p, plus the small amount of field linear
//! algebra the nilpotency oracle and the duality checks need.
//!
//! Nothing here ever rounds. Integers and rationals are arbitrary precision,
//! residues are kept in `[0, p)` so that equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("operands live in different coefficient rings ({0} and {1})")]
    MixedRings(CoefficientRing, CoefficientRing),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot invert zero")]
    DivisionByZero,
    #[error("{0} is not a unit in {1}")]
    NotUnit(Scalar, CoefficientRing),
    #[error("linear algebra over {0} requires a field")]
    NotAField(CoefficientRing),
    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, got: usize },
}

/// A prime modulus. Only constructible through [`Prime::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    /// Largest accepted modulus; keeps residue products inside `u128`.
    pub const MAX: u64 = 1 << 62;

    pub fn new(p: u64) -> Result<Prime, ScalarError> {
        if p < 2 || p > Self::MAX || !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The exact scalar domain a ring is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(Prime),
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self, ScalarError> {
        Prime::new(p).map(CoefficientRing::PrimeField)
    }

    /// Shorthand for 𝔽₂, used all over the place.
    pub fn f2() -> Self {
        CoefficientRing::PrimeField(Prime(2))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientRing::PrimeField(p) => p.get(),
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer under the canonical map ℤ → R.
    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            CoefficientRing::Integers => Scalar::Int(n.clone()),
            CoefficientRing::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            CoefficientRing::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(p.get()));
                Scalar::Mod { residue: r.to_u64().expect("residue below modulus"), modulus: p }
            }
        }
    }

    /// Parses the textual names `Z`, `Q` and `F_<p>`.
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "Z" => Ok(CoefficientRing::Integers),
            "Q" => Ok(CoefficientRing::Rationals),
            _ => {
                let p = s
                    .strip_prefix("F_")
                    .ok_or_else(|| format!("unknown coefficient ring `{s}` (expected Z, Q or F_<p>)"))?;
                let p: u64 = p.parse().map_err(|_| format!("bad field characteristic in `{s}`"))?;
                CoefficientRing::prime_field(p).map_err(|e| e.to_string())
            }
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::PrimeField(p) => write!(f, "F_{}", p.get()),
        }
    }
}

/// An exact number tagged with the ring it belongs to.
///
/// The `std::ops` impls panic on mixed-ring operands; callers that cannot
/// guarantee a common ring use the `checked_*` methods instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod { residue: u64, modulus: Prime },
}

impl Scalar {
    pub fn ring(&self) -> CoefficientRing {
        match self {
            Scalar::Int(_) => CoefficientRing::Integers,
            Scalar::Rat(_) => CoefficientRing::Rationals,
            Scalar::Mod { modulus, .. } => CoefficientRing::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_one(),
            Scalar::Rat(q) => q.is_one(),
            Scalar::Mod { residue, .. } => *residue == 1,
        }
    }

    fn same_ring(&self, other: &Scalar) -> Result<(), ScalarError> {
        let (a, b) = (self.ring(), other.ring());
        if a == b {
            Ok(())
        } else {
            Err(ScalarError::MixedRings(a, b))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_ring(other)?;
        Ok(match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { residue: a, modulus }, Scalar::Mod { residue: b, .. }) => {
                let p = modulus.get() as u128;
                Scalar::Mod { residue: ((*a as u128 + *b as u128) % p) as u64, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_ring(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.same_ring(other)?;
        Ok(match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { residue: a, modulus }, Scalar::Mod { residue: b, .. }) => {
                let p = modulus.get() as u128;
                Scalar::Mod { residue: ((*a as u128 * *b as u128) % p) as u64, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_eq(&self, other: &Scalar) -> Result<bool, ScalarError> {
        self.same_ring(other)?;
        Ok(self == other)
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { residue, modulus } => {
                let r = if *residue == 0 { 0 } else { modulus.get() - residue };
                Scalar::Mod { residue: r, modulus: *modulus }
            }
        }
    }

    pub fn invert(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match self {
            Scalar::Int(n) => {
                if n.abs().is_one() {
                    Ok(self.clone())
                } else {
                    Err(ScalarError::NotUnit(self.clone(), CoefficientRing::Integers))
                }
            }
            Scalar::Rat(q) => Ok(Scalar::Rat(q.recip())),
            Scalar::Mod { residue, modulus } => {
                // Fermat: a^(p-2) is the inverse of a nonzero residue.
                let p = modulus.get() as u128;
                let mut base = *residue as u128;
                let mut exp = modulus.get() - 2;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Ok(Scalar::Mod { residue: acc as u64, modulus: *modulus })
            }
        }
    }

    /// The integer this scalar denotes, when it has an integral
    /// representative. Residues map to their canonical value in `[0, p)`.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(n) => Some(n.clone()),
            Scalar::Rat(q) => q.is_integer().then(|| q.to_integer()),
            Scalar::Mod { residue, .. } => Some(BigInt::from(*residue)),
        }
    }

    /// True for the additive inverse of one.
    pub fn is_minus_one(&self) -> bool {
        self.neg_ref().is_one()
    }

    pub fn is_unit(&self) -> bool {
        self.invert().is_ok()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{n}"),
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Mod { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar addition")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar subtraction")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar multiplication")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn check_matrix(rows: &[Vec<Scalar>]) -> Result<Option<CoefficientRing>, ScalarError> {
    let width = rows.first().map_or(0, Vec::len);
    let mut ring = None;
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(ScalarError::RaggedMatrix { row: r, expected: width, got: row.len() });
        }
        for s in row {
            match ring {
                None => ring = Some(s.ring()),
                Some(k) if k != s.ring() => return Err(ScalarError::MixedRings(k, s.ring())),
                _ => {}
            }
        }
    }
    if let Some(k) = ring {
        if !k.is_field() {
            return Err(ScalarError::NotAField(k));
        }
    }
    Ok(ring)
}

/// Reduced row echelon form by Gauss–Jordan elimination; returns the
/// nonzero rows, which form a basis of the row space.
pub fn row_basis(rows: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, ScalarError> {
    if check_matrix(rows)?.is_none() {
        return Ok(Vec::new());
    }
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let width = m[0].len();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].invert()?;
        for x in m[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..width {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    Ok(m)
}

/// Rank of a matrix over ℚ or 𝔽_p.
pub fn field_rank(rows: &[Vec<Scalar>]) -> Result<usize, ScalarError> {
    Ok(row_basis(rows)?.len())
}

/// Determinant of a square matrix over a field, by elimination.
pub fn determinant(rows: &[Vec<Scalar>]) -> Result<Option<Scalar>, ScalarError> {
    let Some(k) = check_matrix(rows)? else { return Ok(None) };
    let n = rows.len();
    if rows[0].len() != n {
        return Err(ScalarError::RaggedMatrix { row: 0, expected: n, got: rows[0].len() });
    }
    let mut m = rows.to_vec();
    let mut det = k.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(Some(k.zero()));
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].invert()?;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &delta;
            }
        }
    }
    Ok(Some(det))
}
