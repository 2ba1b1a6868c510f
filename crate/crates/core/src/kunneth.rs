//! The square ring `H*(M) ⊗ H*(M) ≅ H*(M × M)`, the diagonal map `Δ*` and
//! the zero divisors `û = u ⊗ 1 − 1 ⊗ u`.
//!
//! Products follow the Koszul rule
//! `(a ⊗ b)·(c ⊗ d) = (−1)^{|b||c|} (a·c) ⊗ (b·d)`.
//! The square is materialized as an ordinary [`GradedRing`] and goes through
//! the full validator, so a sign slip surfaces at construction time.

use std::sync::Arc;

use crate::graded::{add_term, koszul_negative, Coords, Element, GradedError, GradedRing, RingBuilder, DEFAULT_BASIS_CAP};

#[derive(Debug, Clone)]
pub struct SquareRing {
    base: Arc<GradedRing>,
    product: Arc<GradedRing>,
}

impl SquareRing {
    pub fn new(base: &Arc<GradedRing>) -> Result<SquareRing, GradedError> {
        Self::with_cap(base, DEFAULT_BASIS_CAP)
    }

    /// `cap` bounds the size of the square's basis, i.e. `n²`.
    pub fn with_cap(base: &Arc<GradedRing>, cap: usize) -> Result<SquareRing, GradedError> {
        let n = base.dim();
        if n * n > cap {
            return Err(GradedError::BasisCapExceeded { size: n * n, cap });
        }
        let mut b = RingBuilder::new(format!("{}_sq", base.name()), base.coeff());
        b.basis_cap(cap);
        if let Some(m) = base.formal_dim() {
            b.formal_dim(2 * m);
        }
        for p in 1..n * n {
            let (i, j) = (p / n, p % n);
            b.basis_element(format!("{}⊗{}", base.label(i), base.label(j)), base.degree(i) + base.degree(j));
        }
        for p in 1..n * n {
            let (a, bb) = (p / n, p % n);
            for q in p..n * n {
                let (c, d) = (q / n, q % n);
                let coords = tensor_product_entry(base, a, bb, c, d);
                if !coords.is_empty() {
                    b.product(p, q, coords.into_iter().collect());
                }
            }
        }
        Ok(SquareRing { base: Arc::clone(base), product: b.build()? })
    }

    pub fn base(&self) -> &Arc<GradedRing> {
        &self.base
    }

    pub fn product_ring(&self) -> &Arc<GradedRing> {
        &self.product
    }

    /// Row-major flat index of `bᵢ ⊗ bⱼ`.
    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.base.dim() + j
    }

    pub fn unflat(&self, p: usize) -> (usize, usize) {
        (p / self.base.dim(), p % self.base.dim())
    }

    fn check_base(&self, e: &Element) -> Result<(), GradedError> {
        if Arc::ptr_eq(e.ring(), &self.base) || **e.ring() == *self.base {
            Ok(())
        } else {
            Err(GradedError::CrossRing(e.ring().name().into(), self.base.name().into()))
        }
    }

    fn check_product(&self, e: &Element) -> Result<(), GradedError> {
        if Arc::ptr_eq(e.ring(), &self.product) || **e.ring() == *self.product {
            Ok(())
        } else {
            Err(GradedError::CrossRing(e.ring().name().into(), self.product.name().into()))
        }
    }

    /// The cross product `a × b = a ⊗ b`.
    pub fn cross(&self, a: &Element, b: &Element) -> Result<Element, GradedError> {
        self.check_base(a)?;
        self.check_base(b)?;
        let terms = a.coords().iter().flat_map(|(&i, x)| b.coords().iter().map(move |(&j, y)| (i, j, x * y)));
        self.product.element(terms.map(|(i, j, c)| (self.flat(i, j), c)).collect::<Vec<_>>())
    }

    /// `Δ*(a ⊗ b) = a·b`, extended linearly.
    pub fn diagonal(&self, e: &Element) -> Result<Element, GradedError> {
        self.check_product(e)?;
        let mut acc = Coords::new();
        for (&p, c) in e.coords() {
            let (i, j) = self.unflat(p);
            for (&k, s) in self.base.product(i, j) {
                add_term(&mut acc, k, &(c * s));
            }
        }
        self.base.element(acc)
    }

    /// `û = u ⊗ 1 − 1 ⊗ u` for homogeneous `u` of positive degree.
    pub fn zero_divisor(&self, u: &Element) -> Result<Element, GradedError> {
        self.check_base(u)?;
        match u.homogeneous_degree() {
            None if u.is_zero() => Ok(self.product.zero()),
            None => Err(GradedError::NotHomogeneous),
            Some(0) => Err(GradedError::DegreeZero),
            Some(_) => {
                let one = self.base.one();
                Ok(&self.cross(u, &one)? - &self.cross(&one, u)?)
            }
        }
    }

    /// `b̂ᵢ` for the basis element with index `i ≥ 1`.
    pub fn generator(&self, i: usize) -> Element {
        self.zero_divisor(&self.base.basis_vector(i)).expect("basis elements of positive degree")
    }

    /// One zero divisor per positive-degree basis element, in basis order.
    /// These generate the kernel of `Δ*` as an ideal.
    pub fn zero_divisor_generators(&self) -> Vec<Element> {
        (1..self.base.dim()).map(|i| self.generator(i)).collect()
    }
}

/// Structure constants of `(b_a ⊗ b_b)·(b_c ⊗ b_d)` in flat coordinates.
fn tensor_product_entry(base: &GradedRing, a: usize, b: usize, c: usize, d: usize) -> Coords {
    let n = base.dim();
    let mut out = Coords::new();
    let (ac, bd) = (base.product(a, c), base.product(b, d));
    if ac.is_empty() || bd.is_empty() {
        return out;
    }
    let negative = koszul_negative(base.degree(b), base.degree(c));
    for (&k, x) in ac {
        for (&l, y) in bd {
            let s = x * y;
            add_term(&mut out, k * n + l, &if negative { -s } else { s });
        }
    }
    out
}
