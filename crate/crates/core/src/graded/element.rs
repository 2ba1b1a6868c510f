use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{add_term, unit_coords, Coords, GradedError, GradedRing};
use crate::scalars::Scalar;

/// A sparse exact linear combination of basis elements of one ring.
#[derive(Debug, Clone)]
pub struct Element {
    ring: Arc<GradedRing>,
    coords: Coords,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.coords == other.coords
    }
}

impl Eq for Element {}

impl GradedRing {
    pub fn zero(self: &Arc<Self>) -> Element {
        Element { ring: Arc::clone(self), coords: Coords::new() }
    }

    pub fn one(self: &Arc<Self>) -> Element {
        self.basis_vector(0)
    }

    pub fn basis_vector(self: &Arc<Self>, i: usize) -> Element {
        Element { ring: Arc::clone(self), coords: unit_coords(i, self.coeff) }
    }

    pub fn by_label(self: &Arc<Self>, label: &str) -> Option<Element> {
        self.index_of(label).map(|i| self.basis_vector(i))
    }

    /// Builds an element from `(index, coefficient)` pairs, summing repeats.
    pub fn element(self: &Arc<Self>, terms: impl IntoIterator<Item = (usize, Scalar)>) -> Result<Element, GradedError> {
        let mut coords = Coords::new();
        for (k, c) in terms {
            if k >= self.dim() {
                return Err(GradedError::UnknownIndex(k));
            }
            if c.ring() != self.coeff {
                return Err(crate::scalars::ScalarError::MixedRings(self.coeff, c.ring()).into());
            }
            add_term(&mut coords, k, &c);
        }
        Ok(Element { ring: Arc::clone(self), coords })
    }

    pub fn element_int(self: &Arc<Self>, terms: &[(usize, i64)]) -> Element {
        self.element(terms.iter().map(|&(k, c)| (k, self.coeff.from_int(c))))
            .expect("indices in range")
    }
}

impl Element {
    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn coeff_of(&self, i: usize) -> Scalar {
        self.coords.get(&i).cloned().unwrap_or_else(|| self.ring.coeff().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn check_same(&self, other: &Element) -> Result<(), GradedError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(GradedError::CrossRing(self.ring.name().into(), other.ring.name().into()))
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, GradedError> {
        self.check_same(other)?;
        let mut coords = self.coords.clone();
        for (&k, c) in &other.coords {
            add_term(&mut coords, k, c);
        }
        Ok(Element { ring: Arc::clone(&self.ring), coords })
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element, GradedError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element, GradedError> {
        self.check_same(other)?;
        Ok(Element { ring: Arc::clone(&self.ring), coords: self.ring.mul_coords(&self.coords, &other.coords) })
    }

    pub fn scale(&self, s: &Scalar) -> Result<Element, GradedError> {
        if s.ring() != self.ring.coeff() {
            return Err(crate::scalars::ScalarError::MixedRings(self.ring.coeff(), s.ring()).into());
        }
        let mut coords = Coords::new();
        for (&k, c) in &self.coords {
            add_term(&mut coords, k, &(c * s));
        }
        Ok(Element { ring: Arc::clone(&self.ring), coords })
    }

    pub fn pow(&self, k: u32) -> Element {
        (0..k).fold(self.ring.one(), |acc, _| &acc * self)
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn degree_components(&self) -> BTreeMap<u32, Element> {
        let mut out: BTreeMap<u32, Element> = BTreeMap::new();
        for (&k, c) in &self.coords {
            out.entry(self.ring.degree(k))
                .or_insert_with(|| self.ring.zero())
                .coords
                .insert(k, c.clone());
        }
        out
    }

    /// The degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.coords.keys().map(|&k| self.ring.degree(k));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// True when `other` equals `self` or `-self`.
    pub fn equals_up_to_sign(&self, other: &Element) -> bool {
        self == other || *self == -other
    }
}

/// Renders `(label, coefficient)` terms as `c*label + -label + ...`, the
/// same syntax ring files use on the right of `mul`. Zero renders as `0`.
pub fn format_terms<'a>(terms: impl IntoIterator<Item = (&'a str, &'a Scalar)>) -> String {
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(label, c)| {
            if c.is_one() {
                label.to_string()
            } else if matches!(c, Scalar::Int(_) | Scalar::Rat(_)) && c.is_minus_one() {
                format!("-{label}")
            } else {
                format!("{c}*{label}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_terms(self.coords.iter().map(|(&k, c)| (self.ring.label(k), c)));
        f.write_str(&s)
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("elements of the same ring")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("elements of the same ring")
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("elements of the same ring")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            ring: Arc::clone(&self.ring),
            coords: self.coords.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}
