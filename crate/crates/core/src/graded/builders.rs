//! Builders for the ring families that show up in practice: exterior
//! algebras, cohomology of products of spheres, coefficient reduction and
//! connected sums.

use std::collections::HashSet;
use std::sync::Arc;

use super::{koszul_negative, GradedError, GradedRing, RingBuilder};
use crate::scalars::CoefficientRing;

/// `⋀(x_{d₁}, …, x_{dₙ})`. Over ℤ and ℚ every degree must be odd; over 𝔽_p
/// any degrees are accepted and generators square to zero by fiat.
pub fn exterior_algebra(coeff: CoefficientRing, degrees: &[u32]) -> Result<Arc<GradedRing>, GradedError> {
    if coeff.characteristic() == 0 {
        if let Some(&d) = degrees.iter().find(|&&d| d % 2 == 0) {
            return Err(GradedError::EvenExteriorGenerator { degree: d, coeff });
        }
    }
    sphere_product(coeff, degrees)
}

/// Exterior algebra with caller-chosen generator labels.
pub fn exterior_algebra_labeled(
    name: &str,
    coeff: CoefficientRing,
    generators: &[(&str, u32)],
) -> Result<Arc<GradedRing>, GradedError> {
    if coeff.characteristic() == 0 {
        if let Some(&(_, d)) = generators.iter().find(|g| g.1 % 2 == 0) {
            return Err(GradedError::EvenExteriorGenerator { degree: d, coeff });
        }
    }
    square_free_algebra(name, coeff, generators)
}

/// Cohomology of `S^{d₁} × … × S^{dₙ}`: the square-free algebra on one
/// generator per factor, even degrees allowed.
pub fn sphere_product(coeff: CoefficientRing, degrees: &[u32]) -> Result<Arc<GradedRing>, GradedError> {
    let labels = default_labels(degrees);
    let gens: Vec<(&str, u32)> = labels.iter().map(String::as_str).zip(degrees.iter().copied()).collect();
    let name = if degrees.is_empty() {
        "point".to_string()
    } else {
        degrees.iter().map(|d| format!("S{d}")).collect::<Vec<_>>().join("x")
    };
    square_free_algebra(&name, coeff, &gens)
}

/// `x3`, `x5`, and for repeated degrees `x3`, `x3'`, `x3''`.
fn default_labels(degrees: &[u32]) -> Vec<String> {
    let mut seen: Vec<u32> = Vec::new();
    degrees
        .iter()
        .map(|&d| {
            let primes = seen.iter().filter(|&&e| e == d).count();
            seen.push(d);
            format!("x{d}{}", "'".repeat(primes))
        })
        .collect()
}

/// Subsets of `0..n` ordered by size, then lexicographically.
fn monomials(n: usize) -> Vec<Vec<usize>> {
    fn combos(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            combos(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..=n {
        combos(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn square_free_algebra(name: &str, coeff: CoefficientRing, gens: &[(&str, u32)]) -> Result<Arc<GradedRing>, GradedError> {
    let monos = monomials(gens.len());
    let mut b = RingBuilder::new(name, coeff);
    let top: u32 = gens.iter().map(|g| g.1).sum();
    b.formal_dim(top);
    for m in monos.iter().skip(1) {
        let label: String = m.iter().map(|&g| gens[g].0).collect();
        let degree = m.iter().map(|&g| gens[g].1).sum();
        b.basis_element(label, degree);
    }
    let position = |m: &[usize]| monos.iter().position(|x| x == m).expect("monomial present");
    for (i, s) in monos.iter().enumerate().skip(1) {
        for (j, t) in monos.iter().enumerate().skip(i) {
            if s.iter().any(|g| t.contains(g)) {
                continue;
            }
            // moving each generator of t left past the larger generators of s
            let negative = s
                .iter()
                .flat_map(|&a| t.iter().filter(move |&&c| c < a).map(move |&c| (a, c)))
                .filter(|&(a, c)| koszul_negative(gens[a].1, gens[c].1))
                .count()
                % 2
                == 1;
            let mut merged: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
            merged.sort_unstable();
            b.product_int(i, j, &[(position(&merged), if negative { -1 } else { 1 })]);
        }
    }
    b.build()
}

/// Reduces an integral ring to ℚ or 𝔽_p coefficients.
pub fn base_change(ring: &GradedRing, target: CoefficientRing) -> Result<Arc<GradedRing>, GradedError> {
    if ring.coeff() != CoefficientRing::Integers {
        return Err(GradedError::BaseChangeSource(ring.coeff()));
    }
    if !target.is_field() {
        return Err(GradedError::BaseChangeTarget(target));
    }
    let mut b = RingBuilder::new(ring.name(), target);
    b.basis_cap(ring.dim().max(super::DEFAULT_BASIS_CAP));
    if let Some(m) = ring.formal_dim() {
        b.formal_dim(m);
    }
    for e in ring.basis().iter().skip(1) {
        b.basis_element(e.label.clone(), e.degree);
    }
    for (i, j, c) in ring.nonzero_products() {
        let terms = c
            .iter()
            .map(|(&k, s)| (k, target.from_bigint(&s.to_bigint().expect("integer coefficient"))))
            .collect();
        b.product(i, j, terms);
    }
    b.build()
}

fn top_class(r: &GradedRing, m: u32) -> Result<usize, GradedError> {
    match r.degree_indices(m).as_slice() {
        [g] => Ok(*g),
        _ => Err(GradedError::TopDegree(r.name().to_string())),
    }
}

/// Cohomology ring of `A # B` for closed `m`-manifolds: the positive-degree
/// parts below `m` side by side, the two fundamental classes identified to
/// one class `g`, and all mixed products zero.
///
/// Labels are kept when the two sides do not clash; otherwise every label
/// from `A` gets a `1` suffix and every label from `B` a `2` suffix.
pub fn connected_sum_ring(a: &GradedRing, b: &GradedRing, m: u32) -> Result<Arc<GradedRing>, GradedError> {
    if a.formal_dim() != Some(m) || b.formal_dim() != Some(m) {
        return Err(GradedError::DimensionMismatch(a.formal_dim(), b.formal_dim()));
    }
    if a.coeff() != b.coeff() {
        return Err(crate::scalars::ScalarError::MixedRings(a.coeff(), b.coeff()).into());
    }
    let top_a = top_class(a, m)?;
    let top_b = top_class(b, m)?;

    let middle = |r: &GradedRing| -> Vec<usize> { (1..r.dim()).filter(|&i| r.degree(i) < m).collect() };
    let (mid_a, mid_b) = (middle(a), middle(b));
    let labels_a: HashSet<&str> = mid_a.iter().map(|&i| a.label(i)).collect();
    let clash = mid_b.iter().any(|&i| labels_a.contains(b.label(i)));
    let rename = |r: &GradedRing, i: usize, suffix: &str| {
        if clash {
            format!("{}{suffix}", r.label(i))
        } else {
            r.label(i).to_string()
        }
    };

    // (side, old index) in degree order, A before B within a degree
    let mut entries: Vec<(u8, usize)> = mid_a.iter().map(|&i| (0, i)).chain(mid_b.iter().map(|&i| (1, i))).collect();
    entries.sort_by_key(|&(side, i)| (if side == 0 { a.degree(i) } else { b.degree(i) }, side));

    let mut builder = RingBuilder::new(format!("{}_sum_{}", a.name(), b.name()), a.coeff());
    builder.formal_dim(m);
    let mut map_a = vec![usize::MAX; a.dim()];
    let mut map_b = vec![usize::MAX; b.dim()];
    map_a[0] = 0;
    map_b[0] = 0;
    for &(side, i) in &entries {
        if side == 0 {
            map_a[i] = builder.basis_element(rename(a, i, "1"), a.degree(i));
        } else {
            map_b[i] = builder.basis_element(rename(b, i, "2"), b.degree(i));
        }
    }
    let taken: HashSet<String> = entries
        .iter()
        .map(|&(side, i)| if side == 0 { rename(a, i, "1") } else { rename(b, i, "2") })
        .collect();
    let g_label = if taken.contains("g") { "g_top".to_string() } else { "g".to_string() };
    let g = builder.basis_element(g_label, m);
    map_a[top_a] = g;
    map_b[top_b] = g;

    for (r, map) in [(a, &map_a), (b, &map_b)] {
        for (i, j, c) in r.nonzero_products() {
            let terms = c.iter().map(|(&k, s)| (map[k], s.clone())).collect();
            builder.product(map[i], map[j], terms);
        }
    }
    builder.build()
}
