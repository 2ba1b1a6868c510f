//! Poincaré-duality pairings and the decision procedure that sorts a closed
//! orientable manifold with free fundamental group into one of the three
//! cohomological shapes compatible with `TC ≤ 3`, or excludes it with an
//! explicit zero-divisor product.
//!
//! Admissible outcomes are necessary conditions only. They never certify
//! `TC ≤ 3`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bounds::{find_witness, zero_divisor_nilpotency, BoundsError, Witness, DEFAULT_MAX_K};
use crate::graded::{GradedError, GradedRing};
use crate::kunneth::SquareRing;
use crate::scalars::{determinant, field_rank, CoefficientRing, Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("{0} is not orientable; only orientable manifolds are classified")]
    NonOrientable(String),
    #[error("dimension {0} is below 3")]
    DimensionTooSmall(u32),
    #[error("invalid homology profile: {0}")]
    Profile(String),
    #[error("manifold data: {0}")]
    Validation(String),
    #[error("the {branch} branch needs a ring over {coeff}, none supplied")]
    MissingRing { coeff: String, branch: &'static str },
    #[error("ring {ring} has no formal dimension")]
    NoFormalDimension { ring: String },
    #[error("top degree {degree} of {ring} has dimension {dim}, expected 1")]
    TopDegree { ring: String, degree: u32, dim: usize },
    #[error("Poincaré duality checks need field coefficients, got {0} (base-change to Q first)")]
    NotAField(CoefficientRing),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A cyclic summand `ℤ/p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.prime, self.exponent)
    }
}

/// Integral homology of a closed connected manifold: free ranks and torsion
/// summands in each degree `0..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    dimension: u32,
    ranks: Vec<usize>,
    torsion: Vec<Vec<PrimePower>>,
}

impl HomologyProfile {
    /// `torsion` may be shorter than `ranks`; missing degrees are torsion-free.
    pub fn new(dimension: u32, ranks: Vec<usize>, mut torsion: Vec<Vec<PrimePower>>) -> Result<Self, ClassifyError> {
        let len = dimension as usize + 1;
        if ranks.len() != len {
            return Err(ClassifyError::Profile(format!("expected {len} ranks, got {}", ranks.len())));
        }
        if torsion.len() > len {
            return Err(ClassifyError::Profile(format!("torsion listed above degree {dimension}")));
        }
        if ranks[0] != 1 {
            return Err(ClassifyError::Profile("H_0 must have rank 1".into()));
        }
        for (i, summands) in torsion.iter().enumerate() {
            for s in summands {
                if s.exponent == 0 || CoefficientRing::prime_field(s.prime).is_err() {
                    return Err(ClassifyError::Profile(format!("bad torsion summand {s} in degree {i}")));
                }
            }
        }
        torsion.resize(len, Vec::new());
        for t in &mut torsion {
            t.sort();
        }
        Ok(HomologyProfile { dimension, ranks, torsion })
    }

    /// Torsion-free profile.
    pub fn free(dimension: u32, ranks: Vec<usize>) -> Result<Self, ClassifyError> {
        Self::new(dimension, ranks, Vec::new())
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn torsion(&self) -> &[Vec<PrimePower>] {
        &self.torsion
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }

    pub fn torsion_primes(&self) -> BTreeSet<u64> {
        self.torsion.iter().flatten().map(|s| s.prime).collect()
    }

    fn p_summands(&self, i: usize, p: u64) -> usize {
        self.torsion.get(i).map_or(0, |t| t.iter().filter(|s| s.prime == p).count())
    }

    /// `dim H_i(M; 𝔽_p) = rank_i + #p(i) + #p(i−1)`.
    pub fn fp_homology_dim(&self, i: usize, p: u64) -> usize {
        let below = if i == 0 { 0 } else { self.p_summands(i - 1, p) };
        self.ranks[i] + self.p_summands(i, p) + below
    }

    /// Expected Betti numbers of the cohomology ring over `coeff`, degrees `0..=m`.
    /// Over ℤ this is the free rank.
    pub fn betti_over(&self, coeff: CoefficientRing) -> Vec<usize> {
        let m = self.dimension as usize;
        match coeff.characteristic() {
            0 => self.ranks.clone(),
            p => (0..=m).map(|i| self.fp_homology_dim(i, p)).collect(),
        }
    }

    /// Dimension of `⊕_{i=2}^{m−2} H_i(M; coeff)`.
    pub fn middle_dim(&self, coeff: CoefficientRing) -> usize {
        let m = self.dimension as usize;
        let betti = self.betti_over(coeff);
        (2..=m.saturating_sub(2)).map(|i| betti[i]).sum()
    }
}

#[derive(Debug, Clone)]
pub struct ManifoldData {
    pub name: String,
    pub orientable: bool,
    pub pi1_free_rank: usize,
    pub profile: HomologyProfile,
    pub rings: BTreeMap<CoefficientRing, Arc<GradedRing>>,
}

impl ManifoldData {
    pub fn dimension(&self) -> u32 {
        self.profile.dimension
    }

    /// Checks the profile against orientability and `π₁`, and every supplied
    /// ring against the profile by universal coefficients.
    pub fn validate(&self) -> Result<(), ClassifyError> {
        let m = self.profile.dimension;
        let top = self.profile.ranks[m as usize];
        let want_top = usize::from(self.orientable);
        if top != want_top {
            return Err(ClassifyError::Validation(format!(
                "H_{m} has rank {top} but the manifold is {}orientable",
                if self.orientable { "" } else { "non-" }
            )));
        }
        if m >= 1 && self.pi1_free_rank != self.profile.ranks[1] {
            return Err(ClassifyError::Validation(format!(
                "pi1 free rank {} disagrees with rank H_1 = {}",
                self.pi1_free_rank, self.profile.ranks[1]
            )));
        }
        for (coeff, ring) in &self.rings {
            if ring.coeff() != *coeff {
                return Err(ClassifyError::Validation(format!(
                    "ring {} is over {} but filed under {coeff}",
                    ring.name(),
                    ring.coeff()
                )));
            }
            if ring.formal_dim() != Some(m) {
                return Err(ClassifyError::Validation(format!(
                    "ring {} has formal dimension {:?}, expected {m}",
                    ring.name(),
                    ring.formal_dim()
                )));
            }
            let mut got = ring.betti_numbers();
            got.resize(m as usize + 1, 0);
            let want = self.profile.betti_over(*coeff);
            if got != want {
                return Err(ClassifyError::Validation(format!(
                    "Betti numbers of {} over {coeff} are {got:?}, homology predicts {want:?}",
                    ring.name()
                )));
            }
        }
        Ok(())
    }

    /// The ℤ ring, or the ℚ ring when no ℤ ring is given.
    pub fn rational_ring(&self) -> Option<&Arc<GradedRing>> {
        self.rings.get(&CoefficientRing::Integers).or_else(|| self.rings.get(&CoefficientRing::Rationals))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// `H*(M;ℤ) ≅ ⋀(x_k)`.
    Alternative1(u32),
    /// `H*(M;ℤ) ≅ ⋀(x_k, x_l)`, `k, l` odd.
    Alternative2(u32, u32),
    /// `H*(M;𝔽₂) ≅ ⋀(x_k, x_{k+1}) ⊗ 𝔽₂`, `m = 2k + 1`.
    Alternative3(u32),
    Excluded,
}

impl Outcome {
    pub fn is_admissible(&self) -> bool {
        !matches!(self, Outcome::Excluded)
    }

    /// Parses the form produced by `Display`.
    pub fn parse(s: &str) -> Option<Outcome> {
        if s == "Excluded" {
            return Some(Outcome::Excluded);
        }
        let (head, rest) = s.split_once('(')?;
        let args: Vec<u32> = rest.strip_suffix(')')?.split(',').map(|a| a.trim().parse().ok()).collect::<Option<_>>()?;
        match (head, args.as_slice()) {
            ("Alternative1", [k]) => Some(Outcome::Alternative1(*k)),
            ("Alternative2", [k, l]) => Some(Outcome::Alternative2(*k, *l)),
            ("Alternative3", [k]) => Some(Outcome::Alternative3(*k)),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Alternative1(k) => write!(f, "Alternative1({k})"),
            Outcome::Alternative2(k, l) => write!(f, "Alternative2({k},{l})"),
            Outcome::Alternative3(k) => write!(f, "Alternative3({k})"),
            Outcome::Excluded => write!(f, "Excluded"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: String,
    pub witness: Option<Witness>,
    pub witness_coeff: Option<CoefficientRing>,
    /// Best proven lower bound for TC.
    pub tc_floor: usize,
}

// ---------------------------------------------------------------------------
// Poincaré duality

/// `M[i][j]` = coefficient of the top class in `bᵢ·bⱼ`, rows over degree
/// `k`, columns over degree `m − k`.
pub fn pairing_matrix(ring: &GradedRing, k: u32) -> Result<Vec<Vec<Scalar>>, ClassifyError> {
    let (m, g) = top_class(ring)?;
    let zero = ring.coeff().zero();
    if k > m {
        return Ok(Vec::new());
    }
    let cols = ring.degree_indices(m - k);
    Ok(ring
        .degree_indices(k)
        .into_iter()
        .map(|i| cols.iter().map(|&j| ring.product(i, j).get(&g).cloned().unwrap_or_else(|| zero.clone())).collect())
        .collect())
}

fn top_class(ring: &GradedRing) -> Result<(u32, usize), ClassifyError> {
    let m = ring.formal_dim().ok_or_else(|| ClassifyError::NoFormalDimension { ring: ring.name().into() })?;
    let top = ring.degree_indices(m);
    if top.len() != 1 {
        return Err(ClassifyError::TopDegree { ring: ring.name().into(), degree: m, dim: top.len() });
    }
    Ok((m, top[0]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingDiagnostic {
    pub k: u32,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

impl PairingDiagnostic {
    pub fn nonsingular(&self) -> bool {
        self.rows == self.cols && self.rank == self.rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareReport {
    pub holds: bool,
    pub top_dim: usize,
    pub degrees: Vec<PairingDiagnostic>,
}

impl PoincareReport {
    pub fn first_failure(&self) -> Option<u32> {
        self.degrees.iter().find(|d| !d.nonsingular()).map(|d| d.k)
    }
}

/// Holds iff `dim H^m = 1` and every pairing `H^k × H^{m−k} → H^m` is
/// non-singular.
pub fn check_poincare_duality(ring: &GradedRing) -> Result<PoincareReport, ClassifyError> {
    if !ring.coeff().is_field() {
        return Err(ClassifyError::NotAField(ring.coeff()));
    }
    let m = ring.formal_dim().ok_or_else(|| ClassifyError::NoFormalDimension { ring: ring.name().into() })?;
    let top_dim = ring.degree_indices(m).len();
    if top_dim != 1 {
        return Ok(PoincareReport { holds: false, top_dim, degrees: Vec::new() });
    }
    let mut degrees = Vec::new();
    for k in 0..=m {
        let mat = pairing_matrix(ring, k)?;
        let rows = mat.len();
        let cols = ring.degree_indices(m - k).len();
        let rank = if rows == 0 { 0 } else { field_rank(&mat)? };
        degrees.push(PairingDiagnostic { k, rows, cols, rank });
    }
    let holds = degrees.iter().all(PairingDiagnostic::nonsingular);
    Ok(PoincareReport { holds, top_dim, degrees })
}

/// True when the degree-`k` pairing is square with unit determinant in the
/// ring's own coefficients.
fn unimodular_pairing(ring: &GradedRing, k: u32) -> Result<bool, ClassifyError> {
    let mat = pairing_matrix(ring, k)?;
    if mat.is_empty() || mat.iter().any(|r| r.len() != mat.len()) {
        return Ok(false);
    }
    let det = if ring.coeff().is_field() {
        determinant(&mat)?
    } else {
        let q = CoefficientRing::Rationals;
        let lifted: Vec<Vec<Scalar>> = mat
            .iter()
            .map(|r| r.iter().map(|c| q.from_bigint(&c.to_bigint().expect("integer entries"))).collect())
            .collect();
        determinant(&lifted)?.map(|d| if d.is_one() || d.is_minus_one() { ring.coeff().one() } else { ring.coeff().zero() })
    };
    Ok(det.is_some_and(|d| d.is_unit()))
}

// ---------------------------------------------------------------------------
// Decision procedure

/// Degrees where `betti` is nonzero, with multiplicity.
fn support(betti: &[usize]) -> Vec<(u32, usize)> {
    betti.iter().enumerate().filter(|(_, &b)| b > 0).map(|(i, &b)| (i as u32, b)).collect()
}

fn search(rings: &[&Arc<GradedRing>], ks: &[usize]) -> Result<Option<(Witness, CoefficientRing)>, ClassifyError> {
    let squares: Vec<SquareRing> = rings.iter().map(|r| SquareRing::new(r)).collect::<Result<_, _>>()?;
    for &k in ks {
        for sq in &squares {
            if let Some(w) = find_witness(sq, k) {
                return Ok(Some((w, sq.base().coeff())));
            }
        }
    }
    Ok(None)
}

fn excluded(
    rings: &[&Arc<GradedRing>],
    ks: &[usize],
    reason: String,
) -> Result<Verdict, ClassifyError> {
    match search(rings, ks)? {
        Some((w, coeff)) => Ok(Verdict {
            outcome: Outcome::Excluded,
            tc_floor: w.len() + 1,
            reason,
            witness: Some(w),
            witness_coeff: Some(coeff),
        }),
        None => Err(ClassifyError::Undecided(format!("{reason}, but no nonzero zero-divisor product was found"))),
    }
}

fn require<'a>(
    data: &'a ManifoldData,
    coeff: CoefficientRing,
    branch: &'static str,
) -> Result<&'a Arc<GradedRing>, ClassifyError> {
    data.rings.get(&coeff).ok_or(ClassifyError::MissingRing { coeff: coeff.to_string(), branch })
}

fn require_rational<'a>(data: &'a ManifoldData, branch: &'static str) -> Result<&'a Arc<GradedRing>, ClassifyError> {
    data.rational_ring().ok_or(ClassifyError::MissingRing { coeff: "Z or Q".into(), branch })
}

/// Sorts `data` into one of the three admissible shapes or excludes it.
pub fn classify_theorem2(data: &ManifoldData) -> Result<Verdict, ClassifyError> {
    data.validate()?;
    if !data.orientable {
        return Err(ClassifyError::NonOrientable(data.name.clone()));
    }
    let m = data.dimension();
    if m < 3 {
        return Err(ClassifyError::DimensionTooSmall(m));
    }
    let (outcome, reason) = match data.pi1_free_rank {
        0 => match simply_connected(data)? {
            Decision::Admissible(o, r) => (o, r),
            Decision::Excluded(v) => return Ok(v),
        },
        1 => match circle_factor(data)? {
            Decision::Admissible(o, r) => (o, r),
            Decision::Excluded(v) => return Ok(v),
        },
        r => {
            let ring = require_rational(data, "free rank ≥ 2")?;
            let mut rings = vec![ring];
            rings.extend(data.rings.values().filter(|r| r.coeff().characteristic() > 0));
            let reason = format!(
                "pi1 free of rank {r}: the degree-1 pairing gives a nonzero product of four zero divisors \
                 when m is even (and of three when it is odd)"
            );
            return excluded(&rings, &[4, 3], reason);
        }
    };
    admissible(data, outcome, reason)
}

enum Decision {
    Admissible(Outcome, String),
    Excluded(Verdict),
}

/// Cross-checks an admissible shape against direct computation and fills in
/// the floor from the supplied rings.
fn admissible(data: &ManifoldData, outcome: Outcome, reason: String) -> Result<Verdict, ClassifyError> {
    let mut floor = 2;
    for ring in data.rings.values() {
        let sq = SquareRing::new(ring)?;
        let (zcl, _) = zero_divisor_nilpotency(&sq, DEFAULT_MAX_K)?;
        if zcl >= 4 {
            return excluded(
                &[ring],
                &[3],
                format!("cohomology matches {outcome} but zcl over {} is {zcl}", ring.coeff()),
            );
        }
        floor = floor.max(zcl);
    }
    Ok(Verdict {
        outcome,
        reason: format!("{reason}; necessary condition only, TC ≤ 3 is not certified"),
        witness: None,
        witness_coeff: None,
        tc_floor: floor,
    })
}

fn circle_factor(data: &ManifoldData) -> Result<Decision, ClassifyError> {
    let m = data.dimension();
    let ring = require_rational(data, "free rank 1")?;
    let profile = &data.profile;
    let expected: Vec<usize> = (0..=m).map(|i| usize::from(i == 0 || i == 1 || i == m - 1 || i == m)).collect();
    let odd = (m - 1) % 2 == 1;
    let shape = profile.ranks == expected && !profile.has_torsion();
    if odd && shape && unimodular_pairing(ring, 1)? {
        return Ok(Decision::Admissible(
            Outcome::Alternative2(1, m - 1),
            format!("exterior algebra on classes of degrees 1 and {}", m - 1),
        ));
    }
    let reason = if !odd && shape {
        format!("degree {} is even, so the square of its zero divisor times the degree-1 one is nonzero", m - 1)
    } else if !shape {
        "homology beyond degrees 0, 1, m-1, m gives a nonzero triple product".to_string()
    } else {
        "the degree-1 pairing is not unimodular".to_string()
    };
    let mut rings = vec![ring];
    for p in profile.torsion_primes() {
        rings.push(require(data, CoefficientRing::prime_field(p)?, "free rank 1 with torsion")?);
    }
    excluded(&rings, &[3], reason).map(Decision::Excluded)
}

fn simply_connected(data: &ManifoldData) -> Result<Decision, ClassifyError> {
    let m = data.dimension();
    let profile = &data.profile;
    if profile.middle_dim(CoefficientRing::Rationals) > 0 {
        let ring = require_rational(data, "rational middle homology")?;
        let sup = support(&profile.ranks);
        let total: usize = sup.iter().map(|(_, b)| b).sum();
        let middle: Vec<u32> = sup.iter().filter(|(d, _)| *d != 0 && *d != m).map(|(d, _)| *d).collect();
        let (k, l) = match middle.as_slice() {
            [k] => (*k, *k),
            [k, l] => (*k, *l),
            _ => (0, 0),
        };
        let fits = total == 4 && !profile.has_torsion() && k % 2 == 1 && l % 2 == 1 && k + l == m;
        if fits && unimodular_pairing(ring, k)? {
            return Ok(Decision::Admissible(
                Outcome::Alternative2(k, l),
                format!("exterior algebra on classes of degrees {k} and {l}"),
            ));
        }
        let mut rings = vec![ring];
        rings.extend(data.rings.values().filter(|r| r.coeff().characteristic() > 0));
        return excluded(&rings, &[3], "rational middle cohomology is not an exterior algebra on two odd classes".into())
            .map(Decision::Excluded);
    }
    let odd_primes: Vec<u64> = profile
        .torsion_primes()
        .into_iter()
        .filter(|&p| p != 2)
        .filter(|&p| profile.middle_dim(CoefficientRing::prime_field(p).expect("validated prime")) > 0)
        .collect();
    if !odd_primes.is_empty() {
        let mut rings = Vec::new();
        for p in &odd_primes {
            rings.push(require(data, CoefficientRing::prime_field(*p)?, "odd torsion")?);
        }
        return excluded(&rings, &[3], format!("odd torsion in the middle homology (p = {})", odd_primes[0]))
            .map(Decision::Excluded);
    }
    let f2 = CoefficientRing::f2();
    if profile.middle_dim(f2) > 0 {
        let ring = require(data, f2, "2-torsion")?;
        let betti = profile.betti_over(f2);
        let k = (2..=m - 2).find(|&i| betti[i as usize] > 0).expect("middle homology present");
        let off_support_vanishes = (0..=m as usize)
            .filter(|&i| i != 0 && i != k as usize && i != m as usize)
            .all(|i| profile.ranks[i] == 0 && profile.torsion[i].is_empty());
        if m == 2 * k + 1 && off_support_vanishes && wu_shape(ring, k) {
            return Ok(Decision::Admissible(
                Outcome::Alternative3(k),
                format!("mod 2 exterior algebra on classes of degrees {k} and {}", k + 1),
            ));
        }
        let mut rings = vec![ring];
        rings.extend(data.rational_ring());
        return excluded(&rings, &[3], "2-torsion in the middle homology outside the Wu shape".into())
            .map(Decision::Excluded);
    }
    let parity = if m % 2 == 0 { "even" } else { "odd" };
    Ok(Decision::Admissible(
        Outcome::Alternative1(m),
        format!("homology of a sphere ({parity} dimension)"),
    ))
}

/// `⋀(x_k, x_{k+1}) ⊗ 𝔽₂` with `x_k² = 0` and `x_k·x_{k+1}` the top class.
fn wu_shape(ring: &GradedRing, k: u32) -> bool {
    let (a, b) = (ring.degree_indices(k), ring.degree_indices(k + 1));
    let Ok((_, g)) = top_class(ring) else { return false };
    if ring.dim() != 4 || a.len() != 1 || b.len() != 1 {
        return false;
    }
    let xy = ring.product(a[0], b[0]);
    ring.product(a[0], a[0]).is_empty() && xy.len() == 1 && xy.get(&g).is_some_and(Scalar::is_unit)
}
