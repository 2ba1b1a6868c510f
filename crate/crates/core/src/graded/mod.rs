//! Graded-commutative rings given by an explicit homogeneous basis and a
//! multiplication table.
//!
//! A ring is assembled with [`RingBuilder`]: the caller lists basis elements
//! and the products it knows, everything unspecified is zero, and the mirror
//! entry `bⱼ·bᵢ` is synthesized with the Koszul sign `(−1)^{|bᵢ||bⱼ|}`. The
//! finished table is validated exhaustively (unit law, degrees, odd squares,
//! associativity) before a [`GradedRing`] is handed out.

mod builders;
mod element;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalars::{CoefficientRing, Scalar, ScalarError};

pub use builders::{base_change, connected_sum_ring, exterior_algebra, exterior_algebra_labeled, sphere_product};
pub use element::{format_terms, Element};

/// Sparse coordinate vector: basis index → nonzero coefficient.
pub type Coords = BTreeMap<usize, Scalar>;

/// Default cap on basis size. Squares of rings grow quadratically.
pub const DEFAULT_BASIS_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unit violation: {0}")]
    UnitViolation(String),
    #[error("basis index {0} out of range")]
    UnknownIndex(usize),
    #[error("commutativity violation: {a}*{b} and {b}*{a} disagree with the Koszul sign rule")]
    CommutativityViolation { a: String, b: String },
    #[error("product {a}*{b} specified more than once")]
    DuplicateProduct { a: String, b: String },
    #[error("degree mismatch: {a}*{b} has degree {expected} but term `{term}` has degree {got}")]
    DegreeMismatch { a: String, b: String, term: String, expected: u32, got: u32 },
    #[error("basis element `{label}` has degree {degree}, above the formal dimension {dim}")]
    AboveFormalDimension { label: String, degree: u32, dim: u32 },
    #[error("associativity violation: ({a}*{b})*{c} != {a}*({b}*{c})")]
    AssociativityViolation { a: String, b: String, c: String },
    #[error("odd square violation: {a}*{a} must vanish for an odd-degree class outside characteristic 2")]
    OddSquareViolation { a: String },
    #[error("basis size {size} exceeds the cap {cap}")]
    BasisCapExceeded { size: usize, cap: usize },
    #[error("exterior generator of even degree {degree} is not allowed over {coeff}")]
    EvenExteriorGenerator { degree: u32, coeff: CoefficientRing },
    #[error("base change needs integer coefficients, got {0}")]
    BaseChangeSource(CoefficientRing),
    #[error("base change target must be Q or F_p, got {0}")]
    BaseChangeTarget(CoefficientRing),
    #[error("formal dimensions differ: {0:?} vs {1:?}")]
    DimensionMismatch(Option<u32>, Option<u32>),
    #[error("ring `{0}` does not have a one-dimensional top degree")]
    TopDegree(String),
    #[error("operands belong to different rings (`{0}` and `{1}`)")]
    CrossRing(String, String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element must have positive degree")]
    DegreeZero,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub label: String,
    pub degree: u32,
}

/// A finite graded-commutative ring with an explicit basis. Index 0 is the
/// unit `1`; it is the only element of degree 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    name: String,
    coeff: CoefficientRing,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
    // dense n×n, row-major: table[i * n + j] = bᵢ·bⱼ
    table: Vec<Coords>,
    formal_dim: Option<u32>,
}

/// Koszul sign `(−1)^{ab}` as a boolean "is negative".
pub(crate) fn koszul_negative(a: u32, b: u32) -> bool {
    (a & 1) == 1 && (b & 1) == 1
}

impl GradedRing {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeff(&self) -> CoefficientRing {
        self.coeff
    }

    pub fn formal_dim(&self) -> Option<u32> {
        self.formal_dim
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Structure constants of `bᵢ·bⱼ`.
    pub fn product(&self, i: usize, j: usize) -> &Coords {
        &self.table[i * self.basis.len() + j]
    }

    pub fn max_degree(&self) -> u32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    /// Indices of the basis elements in degree `d`, in basis order.
    pub fn degree_indices(&self, d: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == d).collect()
    }

    /// Dimension of each degree `0..=max_degree` (or `0..=formal_dim`).
    pub fn betti_numbers(&self) -> Vec<usize> {
        let top = self.formal_dim.unwrap_or(0).max(self.max_degree());
        let mut b = vec![0; top as usize + 1];
        for e in &self.basis {
            b[e.degree as usize] += 1;
        }
        b
    }

    pub fn renamed(&self, name: impl Into<String>) -> Arc<GradedRing> {
        let mut r = self.clone();
        r.name = name.into();
        Arc::new(r)
    }

    /// Nonzero table entries `(i, j, bᵢ·bⱼ)` with `1 ≤ i ≤ j`, in row-major order.
    pub fn nonzero_products(&self) -> impl Iterator<Item = (usize, usize, &Coords)> + '_ {
        let n = self.dim();
        (1..n).flat_map(move |i| (i..n).map(move |j| (i, j))).filter_map(move |(i, j)| {
            let c = self.product(i, j);
            (!c.is_empty()).then_some((i, j, c))
        })
    }

    pub(crate) fn mul_coords(&self, a: &Coords, b: &Coords) -> Coords {
        let mut acc = Coords::new();
        for (&i, x) in a {
            for (&j, y) in b {
                let xy = x * y;
                for (&k, c) in self.product(i, j) {
                    add_term(&mut acc, k, &(&xy * c));
                }
            }
        }
        acc
    }

    fn check_associativity(&self) -> Result<(), GradedError> {
        let n = self.dim();
        let bound = self.formal_dim.unwrap_or(u32::MAX);
        for i in 1..n {
            for j in 1..n {
                let dij = self.degree(i) + self.degree(j);
                if dij > bound {
                    continue;
                }
                let ij = self.product(i, j);
                for k in 1..n {
                    if dij + self.degree(k) > bound {
                        continue;
                    }
                    let left = self.mul_coords(ij, &unit_coords(k, self.coeff));
                    let right = self.mul_coords(&unit_coords(i, self.coeff), self.product(j, k));
                    if left != right {
                        return Err(GradedError::AssociativityViolation {
                            a: self.label(i).to_string(),
                            b: self.label(j).to_string(),
                            c: self.label(k).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {} (basis {}", self.name, self.coeff, self.dim())?;
        if let Some(m) = self.formal_dim {
            write!(f, ", dim {m}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn unit_coords(i: usize, coeff: CoefficientRing) -> Coords {
    let mut c = Coords::new();
    c.insert(i, coeff.one());
    c
}

pub(crate) fn add_term(acc: &mut Coords, k: usize, s: &Scalar) {
    if s.is_zero() {
        return;
    }
    match acc.get_mut(&k) {
        Some(v) => {
            let sum = &*v + s;
            if sum.is_zero() {
                acc.remove(&k);
            } else {
                *v = sum;
            }
        }
        None => {
            acc.insert(k, s.clone());
        }
    }
}

/// Incremental description of a ring; [`RingBuilder::build`] validates it.
#[derive(Debug, Clone)]
pub struct RingBuilder {
    name: String,
    coeff: CoefficientRing,
    basis: Vec<BasisElement>,
    products: Vec<(usize, usize, Vec<(usize, Scalar)>)>,
    formal_dim: Option<u32>,
    cap: usize,
}

impl RingBuilder {
    pub fn new(name: impl Into<String>, coeff: CoefficientRing) -> Self {
        RingBuilder {
            name: name.into(),
            coeff,
            basis: vec![BasisElement { label: "1".into(), degree: 0 }],
            products: Vec::new(),
            formal_dim: None,
            cap: DEFAULT_BASIS_CAP,
        }
    }

    pub fn coeff(&self) -> CoefficientRing {
        self.coeff
    }

    /// Appends a basis element and returns its index.
    pub fn basis_element(&mut self, label: impl Into<String>, degree: u32) -> usize {
        self.basis.push(BasisElement { label: label.into(), degree });
        self.basis.len() - 1
    }

    pub fn formal_dim(&mut self, m: u32) -> &mut Self {
        self.formal_dim = Some(m);
        self
    }

    pub fn basis_cap(&mut self, cap: usize) -> &mut Self {
        self.cap = cap;
        self
    }

    pub fn product(&mut self, i: usize, j: usize, terms: Vec<(usize, Scalar)>) -> &mut Self {
        self.products.push((i, j, terms));
        self
    }

    /// Like [`RingBuilder::product`] with integer coefficients reduced into
    /// the coefficient ring.
    pub fn product_int(&mut self, i: usize, j: usize, terms: &[(usize, i64)]) -> &mut Self {
        let terms = terms.iter().map(|&(k, c)| (k, self.coeff.from_int(c))).collect();
        self.product(i, j, terms)
    }

    fn label(&self, i: usize) -> String {
        self.basis.get(i).map_or_else(|| format!("#{i}"), |b| b.label.clone())
    }

    pub fn build(&self) -> Result<Arc<GradedRing>, GradedError> {
        let n = self.basis.len();
        if n > self.cap {
            return Err(GradedError::BasisCapExceeded { size: n, cap: self.cap });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, b) in self.basis.iter().enumerate() {
            if index.insert(b.label.clone(), i).is_some() {
                return Err(GradedError::DuplicateLabel(b.label.clone()));
            }
            if i > 0 && b.degree == 0 {
                return Err(GradedError::UnitViolation(format!(
                    "`{}` is a second basis element of degree 0",
                    b.label
                )));
            }
            if let Some(m) = self.formal_dim {
                if b.degree > m {
                    return Err(GradedError::AboveFormalDimension {
                        label: b.label.clone(),
                        degree: b.degree,
                        dim: m,
                    });
                }
            }
        }
        let deg = |i: usize| self.basis[i].degree;

        // canonical entries (i ≤ j) and the orientation they were given in
        let mut supplied: HashMap<(usize, usize), (Coords, bool)> = HashMap::new();
        for (i, j, terms) in &self.products {
            let (i, j) = (*i, *j);
            for idx in [i, j].into_iter().chain(terms.iter().map(|t| t.0)) {
                if idx >= n {
                    return Err(GradedError::UnknownIndex(idx));
                }
            }
            let mut coords = Coords::new();
            for (k, c) in terms {
                if c.ring() != self.coeff {
                    return Err(ScalarError::MixedRings(self.coeff, c.ring()).into());
                }
                add_term(&mut coords, *k, c);
            }
            let expected = deg(i) + deg(j);
            if let Some((&k, _)) = coords.iter().find(|(&k, _)| deg(k) != expected) {
                return Err(GradedError::DegreeMismatch {
                    a: self.label(i),
                    b: self.label(j),
                    term: self.label(k),
                    expected,
                    got: deg(k),
                });
            }
            let flipped = i > j;
            let key = if flipped { (j, i) } else { (i, j) };
            if flipped && koszul_negative(deg(i), deg(j)) {
                coords = coords.into_iter().map(|(k, c)| (k, -c)).collect();
            }
            match supplied.get(&key) {
                Some((_, prev_flipped)) if *prev_flipped == flipped => {
                    return Err(GradedError::DuplicateProduct { a: self.label(i), b: self.label(j) });
                }
                Some((prev, _)) if *prev != coords => {
                    return Err(GradedError::CommutativityViolation {
                        a: self.label(key.0),
                        b: self.label(key.1),
                    });
                }
                Some(_) => {}
                None => {
                    supplied.insert(key, (coords, flipped));
                }
            }
        }

        let mut table = vec![Coords::new(); n * n];
        for j in 0..n {
            let unit = unit_coords(j, self.coeff);
            if let Some((c, _)) = supplied.get(&(0, j)) {
                if *c != unit {
                    return Err(GradedError::UnitViolation(format!(
                        "1*{} must equal {}",
                        self.label(j),
                        self.label(j)
                    )));
                }
            }
            table[j] = unit.clone();
            table[j * n] = unit;
        }
        let mut keys: Vec<_> = supplied.keys().copied().filter(|&(i, _)| i > 0).collect();
        keys.sort_unstable();
        for (i, j) in keys {
            let c = &supplied[&(i, j)].0;
            if i == j && deg(i) % 2 == 1 && self.coeff.characteristic() != 2 && !c.is_empty() {
                return Err(GradedError::OddSquareViolation { a: self.label(i) });
            }
            table[i * n + j] = c.clone();
            table[j * n + i] = if koszul_negative(deg(i), deg(j)) {
                c.iter().map(|(&k, v)| (k, -v)).collect()
            } else {
                c.clone()
            };
        }

        let ring = GradedRing {
            name: self.name.clone(),
            coeff: self.coeff,
            basis: self.basis.clone(),
            index,
            table,
            formal_dim: self.formal_dim,
        };
        ring.check_associativity()?;
        Ok(Arc::new(ring))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: CoefficientRing = CoefficientRing::Integers;

    #[test]
    fn three_sphere() {
        let mut b = RingBuilder::new("S3", Z);
        let x = b.basis_element("x", 3);
        b.formal_dim(3).product_int(x, x, &[]);
        let r = b.build().unwrap();
        assert_eq!(r.dim(), 2);
        assert!(r.product(x, x).is_empty());
        assert_eq!(r.betti_numbers(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn koszul_sign_is_enforced_on_both_orders() {
        let mut b = RingBuilder::new("bad", Z);
        let u = b.basis_element("u", 1);
        let v = b.basis_element("v", 1);
        let g = b.basis_element("g", 2);
        b.product_int(u, v, &[(g, 1)]).product_int(v, u, &[(g, 1)]);
        assert_eq!(
            b.build().unwrap_err(),
            GradedError::CommutativityViolation { a: "u".into(), b: "v".into() }
        );

        let mut ok = RingBuilder::new("T2", Z);
        let u = ok.basis_element("u", 1);
        let v = ok.basis_element("v", 1);
        let g = ok.basis_element("g", 2);
        ok.product_int(u, v, &[(g, 1)]).product_int(v, u, &[(g, -1)]);
        let r = ok.build().unwrap();
        assert_eq!(r.product(v, u), &unit_coords(g, Z).into_iter().map(|(k, c)| (k, -c)).collect());
    }

    #[test]
    fn degree_mismatch_named() {
        let mut b = RingBuilder::new("bad", Z);
        let u = b.basis_element("u", 1);
        let v = b.basis_element("v", 2);
        b.product_int(u, u, &[(v, 1)]).product_int(u, v, &[(u, 1)]);
        // u*u has degree 2 so the first entry is fine except for the odd square
        let err = b.build().unwrap_err();
        assert!(matches!(err, GradedError::DegreeMismatch { ref term, got: 1, expected: 3, .. } if term == "u"));
    }

    #[test]
    fn odd_square_over_integers() {
        let mut b = RingBuilder::new("bad", Z);
        let u = b.basis_element("u", 1);
        let v = b.basis_element("v", 2);
        b.product_int(u, u, &[(v, 1)]);
        assert_eq!(b.build().unwrap_err(), GradedError::OddSquareViolation { a: "u".into() });

        // the real projective plane's mod 2 ring is fine
        let mut b = RingBuilder::new("RP2", CoefficientRing::f2());
        let u = b.basis_element("u", 1);
        let v = b.basis_element("v", 2);
        b.product_int(u, u, &[(v, 1)]);
        assert!(b.build().is_ok());
    }

    #[test]
    fn associativity_break_detected() {
        // a·b = c, but (a·b)·a ≠ a·(b·a) once c·a is declared nonzero and b·a·a is not
        let mut b = RingBuilder::new("bad", Z);
        let a = b.basis_element("a", 2);
        let bb = b.basis_element("b", 2);
        let c = b.basis_element("c", 4);
        let d = b.basis_element("d", 6);
        b.product_int(a, bb, &[(c, 1)]).product_int(a, c, &[(d, 1)]);
        let err = b.build().unwrap_err();
        assert!(matches!(err, GradedError::AssociativityViolation { .. }));
    }

    #[test]
    fn unit_rules() {
        let mut b = RingBuilder::new("bad", Z);
        let x = b.basis_element("x", 2);
        b.product_int(0, x, &[(x, 2)]);
        assert!(matches!(b.build(), Err(GradedError::UnitViolation(_))));

        let mut b = RingBuilder::new("bad", Z);
        b.basis_element("e", 0);
        assert!(matches!(b.build(), Err(GradedError::UnitViolation(_))));
    }

    #[test]
    fn misc_errors() {
        let mut b = RingBuilder::new("bad", Z);
        b.basis_element("x", 2);
        b.basis_element("x", 3);
        assert_eq!(b.build().unwrap_err(), GradedError::DuplicateLabel("x".into()));

        let mut b = RingBuilder::new("bad", Z);
        b.basis_element("x", 4);
        b.formal_dim(3);
        assert!(matches!(b.build(), Err(GradedError::AboveFormalDimension { degree: 4, .. })));

        let mut b = RingBuilder::new("bad", Z);
        let x = b.basis_element("x", 2);
        b.product_int(x, 7, &[]);
        assert_eq!(b.build().unwrap_err(), GradedError::UnknownIndex(7));

        let mut b = RingBuilder::new("bad", Z);
        let x = b.basis_element("x", 2);
        b.product(x, x, vec![(0, CoefficientRing::Rationals.one())]);
        assert!(matches!(b.build(), Err(GradedError::Scalar(ScalarError::MixedRings(..)))));

        let mut b = RingBuilder::new("big", Z);
        for i in 0..10 {
            b.basis_element(format!("x{i}"), 1);
        }
        b.basis_cap(8);
        assert_eq!(b.build().unwrap_err(), GradedError::BasisCapExceeded { size: 11, cap: 8 });

        let mut b = RingBuilder::new("dup", Z);
        let x = b.basis_element("x", 2);
        let y = b.basis_element("y", 4);
        b.product_int(x, x, &[(y, 1)]).product_int(x, x, &[(y, 1)]);
        assert!(matches!(b.build(), Err(GradedError::DuplicateProduct { .. })));
    }
}
