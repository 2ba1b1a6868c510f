//! Nilpotency of the ideal of zero divisors (a lower bound for topological
//! complexity) and of the augmentation ideal (a lower bound for category).
//!
//! `nil(I)` is the least `k` such that every `k`-fold product of elements of
//! `I` vanishes, so `nil` of the zero ideal is 1 and `TC ≥ nil(Ker Δ*)`.
//!
//! The main algorithm only looks at products of generators. This is enough:
//! any element of `Ker Δ*` is a combination `Σ rᵢ ûᵢ`, and by graded
//! commutativity a product of `k` such elements expands into ring multiples of
//! `k`-fold products of generators. Hence all `k`-fold products in the ideal
//! vanish exactly when all `k`-fold generator products do. Generators commute
//! up to sign, so multisets of generators suffice, and [`nilpotency_oracle`]
//! recomputes the same number from ideal powers as subspaces.

use std::fmt;

use thiserror::Error;

use crate::graded::{Element, GradedError, GradedRing};
use crate::kunneth::SquareRing;
use crate::scalars::{row_basis, CoefficientRing, Scalar, ScalarError};

pub const DEFAULT_MAX_K: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("nonzero {cap}-fold product found; raise --max-k to continue the search")]
    KCapExceeded { cap: usize },
    #[error("the span oracle needs field coefficients, got {0}")]
    NotAField(CoefficientRing),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A nonzero product of zero divisors `b̂ᵢ₁ ··· b̂ᵢₖ`, factors in the order
/// they were multiplied (left to right).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Base-ring basis indices of the factors.
    pub factors: Vec<usize>,
    pub labels: Vec<String>,
    pub product: Element,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplies the factors again from scratch.
    pub fn recompute(&self, sq: &SquareRing) -> Element {
        self.factors.iter().fold(sq.product_ring().one(), |acc, &i| &acc * &sq.generator(i))
    }

    /// Nonzero and reproducible.
    pub fn verify(&self, sq: &SquareRing) -> bool {
        !self.product.is_zero() && self.recompute(sq) == self.product
    }

    /// `hat(u1),hat(v1),...`
    pub fn describe_factors(&self) -> String {
        self.labels.iter().map(|l| format!("hat({l})")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.labels.iter().map(|l| format!("hat({l})")).collect();
        write!(f, "{} = {}", factors.join("·"), self.product)
    }
}

/// A nonzero product of positive-degree basis elements of one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CupWitness {
    pub factors: Vec<usize>,
    pub labels: Vec<String>,
    pub product: Element,
}

impl fmt::Display for CupWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.labels.join("·"), self.product)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub ring_name: String,
    pub coeff: CoefficientRing,
    pub zcl: usize,
    pub tc_lower_bound: usize,
    pub cuplength_nil: usize,
    pub cat_lower_bound: usize,
    pub witness: Option<Witness>,
    pub cup_witness: Option<CupWitness>,
}

/// Depth-first search over non-decreasing index sequences of length `k`,
/// which visits multisets in lexicographic order. Prefixes that multiply to
/// zero or cannot stay within `max_degree` are cut.
struct ProductSearch<'a> {
    factors: &'a [Element],
    degrees: &'a [u32],
    suffix_min: Vec<u32>,
    max_degree: u32,
}

impl<'a> ProductSearch<'a> {
    fn new(factors: &'a [Element], degrees: &'a [u32], max_degree: u32) -> Self {
        let mut suffix_min = vec![u32::MAX; degrees.len() + 1];
        for i in (0..degrees.len()).rev() {
            suffix_min[i] = suffix_min[i + 1].min(degrees[i]);
        }
        ProductSearch { factors, degrees, suffix_min, max_degree }
    }

    fn first_nonzero(&self, k: usize, one: Element) -> Option<(Vec<usize>, Element)> {
        let mut chosen = Vec::with_capacity(k);
        self.descend(0, k, one, 0, &mut chosen)
    }

    fn descend(&self, start: usize, left: usize, acc: Element, deg: u32, chosen: &mut Vec<usize>) -> Option<(Vec<usize>, Element)> {
        if left == 0 {
            return Some((chosen.clone(), acc));
        }
        for i in start..self.factors.len() {
            let rest = (left as u32 - 1).saturating_mul(self.suffix_min[i]);
            if deg.saturating_add(self.degrees[i]).saturating_add(rest) > self.max_degree {
                continue;
            }
            let next = &acc * &self.factors[i];
            if next.is_zero() {
                continue;
            }
            chosen.push(i);
            if let Some(hit) = self.descend(i, left - 1, next, deg + self.degrees[i], chosen) {
                return Some(hit);
            }
            chosen.pop();
        }
        None
    }
}

fn generator_data(sq: &SquareRing) -> (Vec<Element>, Vec<u32>) {
    let base = sq.base();
    let gens = sq.zero_divisor_generators();
    let degrees = (1..base.dim()).map(|i| base.degree(i)).collect();
    (gens, degrees)
}

fn make_witness(sq: &SquareRing, picks: Vec<usize>, product: Element) -> Witness {
    let factors: Vec<usize> = picks.into_iter().map(|g| g + 1).collect();
    let labels = factors.iter().map(|&i| sq.base().label(i).to_string()).collect();
    Witness { factors, labels, product }
}

/// The first nonzero `k`-fold generator product in lexicographic multiset
/// order, or `None` when all of them vanish.
pub fn find_witness(sq: &SquareRing, k: usize) -> Option<Witness> {
    let (gens, degrees) = generator_data(sq);
    let search = ProductSearch::new(&gens, &degrees, sq.product_ring().max_degree());
    search
        .first_nonzero(k, sq.product_ring().one())
        .map(|(picks, product)| make_witness(sq, picks, product))
}

/// `nil(Ker Δ*)` together with a nonzero `(nil − 1)`-fold product.
pub fn zero_divisor_nilpotency(sq: &SquareRing, max_k: usize) -> Result<(usize, Option<Witness>), BoundsError> {
    let (gens, degrees) = generator_data(sq);
    let search = ProductSearch::new(&gens, &degrees, sq.product_ring().max_degree());
    let mut last = None;
    for k in 1..=max_k {
        match search.first_nonzero(k, sq.product_ring().one()) {
            Some((picks, product)) => last = Some(make_witness(sq, picks, product)),
            None => return Ok((k, last)),
        }
    }
    Err(BoundsError::KCapExceeded { cap: max_k })
}

/// Nilpotency of the ideal of positive-degree classes, with a nonzero
/// `(nil − 1)`-fold product of basis elements.
pub fn cuplength_nilpotency(ring: &std::sync::Arc<GradedRing>) -> (usize, Option<CupWitness>) {
    let factors: Vec<Element> = (1..ring.dim()).map(|i| ring.basis_vector(i)).collect();
    let degrees: Vec<u32> = (1..ring.dim()).map(|i| ring.degree(i)).collect();
    let search = ProductSearch::new(&factors, &degrees, ring.max_degree());
    let mut last = None;
    for k in 1.. {
        match search.first_nonzero(k, ring.one()) {
            Some((picks, product)) => {
                let factors: Vec<usize> = picks.into_iter().map(|g| g + 1).collect();
                let labels = factors.iter().map(|&i| ring.label(i).to_string()).collect();
                last = Some(CupWitness { factors, labels, product });
            }
            None => return (k, last),
        }
    }
    unreachable!("products of positive-degree classes eventually leave the top degree")
}

pub fn tc_lower_bound(ring: &std::sync::Arc<GradedRing>) -> Result<BoundReport, BoundsError> {
    tc_lower_bound_with(ring, DEFAULT_MAX_K)
}

pub fn tc_lower_bound_with(ring: &std::sync::Arc<GradedRing>, max_k: usize) -> Result<BoundReport, BoundsError> {
    let sq = SquareRing::new(ring)?;
    let (zcl, witness) = zero_divisor_nilpotency(&sq, max_k)?;
    let (nil, cup_witness) = cuplength_nilpotency(ring);
    Ok(BoundReport {
        ring_name: ring.name().to_string(),
        coeff: ring.coeff(),
        zcl,
        tc_lower_bound: zcl,
        cuplength_nil: nil,
        cat_lower_bound: nil,
        witness,
        cup_witness,
    })
}

fn dense(e: &Element, n: usize) -> Vec<Scalar> {
    (0..n).map(|i| e.coeff_of(i)).collect()
}

/// Independent check of [`zero_divisor_nilpotency`] over a field: builds
/// `I = span{x·û}` and then `I^{j+1} = span{w·û : w ∈ basis(I^j)}` with exact
/// row reduction, returning the first `j` with `I^j = 0`.
pub fn nilpotency_oracle(sq: &SquareRing) -> Result<usize, BoundsError> {
    let ring = sq.product_ring();
    if !ring.coeff().is_field() {
        return Err(BoundsError::NotAField(ring.coeff()));
    }
    let n = ring.dim();
    let gens = sq.zero_divisor_generators();
    let mut rows = Vec::new();
    for x in 0..n {
        let bx = ring.basis_vector(x);
        for g in &gens {
            rows.push(dense(&(&bx * g), n));
        }
    }
    let mut power = row_basis(&rows)?;
    let mut j = 1;
    while !power.is_empty() {
        let mut next = Vec::with_capacity(power.len() * gens.len());
        for w in &power {
            let w = ring.element(w.iter().cloned().enumerate())?;
            for g in &gens {
                next.push(dense(&(&w * g), n));
            }
        }
        power = row_basis(&next)?;
        j += 1;
    }
    Ok(j)
}
