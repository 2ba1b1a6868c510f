//! Built-in manifolds with their expected bounds and, where known, their
//! topological complexity and category.
//!
//! Expected zcl values were computed with the span oracle and frozen. The
//! regression check recomputes everything from the rings.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::bounds::{cuplength_nilpotency, nilpotency_oracle, zero_divisor_nilpotency, DEFAULT_MAX_K};
use crate::classify::{check_poincare_duality, classify_theorem2, HomologyProfile, ManifoldData, Outcome, PrimePower};
use crate::graded::{base_change, connected_sum_ring, exterior_algebra_labeled, sphere_product, GradedRing};
use crate::kunneth::SquareRing;
use crate::scalars::CoefficientRing;

const Z: CoefficientRing = CoefficientRing::Integers;
const Q: CoefficientRing = CoefficientRing::Rationals;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub data: ManifoldData,
    pub known_tc: Option<usize>,
    pub known_cat: Option<usize>,
    pub expected_zcl: BTreeMap<CoefficientRing, usize>,
    /// `None` where the classifier does not apply (surfaces, non-orientable).
    pub expected_verdict: Option<Outcome>,
    pub source_note: String,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.data.name
    }
}

/// The ℤ ring together with its ℚ and 𝔽₂ reductions.
fn integral(name: &str, ring: Arc<GradedRing>) -> BTreeMap<CoefficientRing, Arc<GradedRing>> {
    let ring = ring.renamed(name);
    let mut out: BTreeMap<_, _> = [Q, CoefficientRing::f2()]
        .into_iter()
        .map(|c| (c, base_change(&ring, c).expect("integral ring").renamed(name)))
        .collect();
    out.insert(Z, ring);
    out
}

fn ranks_at(m: u32, degrees: &[u32]) -> Vec<usize> {
    let mut ranks = vec![0; m as usize + 1];
    ranks[0] = 1;
    for &d in degrees {
        ranks[d as usize] += 1;
    }
    ranks
}

fn zcl(z: usize, q: usize, f2: usize) -> BTreeMap<CoefficientRing, usize> {
    BTreeMap::from([(Z, z), (Q, q), (CoefficientRing::f2(), f2)])
}

struct Draft {
    name: String,
    pi1: usize,
    profile: HomologyProfile,
    rings: BTreeMap<CoefficientRing, Arc<GradedRing>>,
}

impl Draft {
    fn entry(
        self,
        known_tc: Option<usize>,
        known_cat: Option<usize>,
        expected_zcl: BTreeMap<CoefficientRing, usize>,
        expected_verdict: Option<Outcome>,
        note: &str,
    ) -> CatalogEntry {
        CatalogEntry {
            data: ManifoldData {
                name: self.name,
                orientable: true,
                pi1_free_rank: self.pi1,
                profile: self.profile,
                rings: self.rings,
            },
            known_tc,
            known_cat,
            expected_zcl,
            expected_verdict,
            source_note: note.into(),
        }
    }
}

/// Product of spheres of the given degrees, with its ℤ, ℚ and 𝔽₂ rings.
fn product_of_spheres(name: &str, degrees: &[u32]) -> Draft {
    let m = degrees.iter().sum();
    let mut all: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << degrees.len()) {
        all.push(degrees.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, d)| d).sum());
    }
    all.retain(|&d| d != m);
    all.push(m);
    Draft {
        name: name.into(),
        pi1: degrees.iter().filter(|&&d| d == 1).count(),
        profile: HomologyProfile::free(m, ranks_at(m, &all)).expect("sphere product profile"),
        rings: integral(name, sphere_product(Z, degrees).expect("sphere product ring")),
    }
}

pub fn sphere_entry(k: u32) -> CatalogEntry {
    let odd = k % 2 == 1;
    let verdict = (k >= 3).then_some(Outcome::Alternative1(k));
    let (expected, tc, note) = if odd {
        (zcl(2, 2, 2), 2, "odd-dimensional spheres have TC = 2")
    } else {
        (zcl(3, 3, 2), 3, "even-dimensional spheres have TC = 3; over F_2 the bound drops to 2")
    };
    product_of_spheres(&format!("S{k}"), &[k]).entry(Some(tc), None, expected, verdict, note)
}

/// `S^k × S^l` with `k, l` odd (`k = 1` allowed).
pub fn odd_sphere_product_entry(k: u32, l: u32) -> CatalogEntry {
    let verdict = (k + l >= 3).then_some(Outcome::Alternative2(k.min(l), k.max(l)));
    product_of_spheres(&format!("S{k}xS{l}"), &[k, l]).entry(
        Some(3),
        None,
        zcl(3, 3, 3),
        verdict,
        "products of two odd spheres have TC = 3",
    )
}

/// `V₂(ℂⁿ) = ⋀(x_{2n−3}, x_{2n−1})`.
pub fn complex_stiefel_entry(n: u32) -> CatalogEntry {
    let (k, l) = (2 * n - 3, 2 * n - 1);
    let name = format!("V2C{n}");
    Draft {
        name: name.clone(),
        pi1: 0,
        profile: HomologyProfile::free(k + l, ranks_at(k + l, &[k, l, k + l])).expect("profile"),
        rings: integral(&name, ext(&[k, l])),
    }
    .entry(None, Some(3), zcl(3, 3, 3), Some(Outcome::Alternative2(k, l)), "complex Stiefel manifold of 2-frames, cat = 3")
}

/// `V₂(ℍⁿ) = ⋀(x_{4n−5}, x_{4n−1})`.
pub fn quaternionic_stiefel_entry(n: u32) -> CatalogEntry {
    let (k, l) = (4 * n - 5, 4 * n - 1);
    let name = format!("V2H{n}");
    Draft {
        name: name.clone(),
        pi1: 0,
        profile: HomologyProfile::free(k + l, ranks_at(k + l, &[k, l, k + l])).expect("profile"),
        rings: integral(&name, ext(&[k, l])),
    }
    .entry(
        None,
        Some(3),
        zcl(3, 3, 3),
        Some(Outcome::Alternative2(k, l)),
        "quaternionic Stiefel manifold of 2-frames, cat = 3; generator degrees 4n-5 and 4n-1 \
         (a printed degree 2n-5 for the first generator does not add up to dim 8n-6 and is not used)",
    )
}

fn ext(degrees: &[u32]) -> Arc<GradedRing> {
    sphere_product(Z, degrees).expect("exterior ring")
}

/// `(S¹×S^{m−1}) # (S¹×S^{m−1})`.
pub fn connected_sum_entry(m: u32) -> CatalogEntry {
    let name = format!("ConnSum{m}");
    let s = sphere_product(Z, &[1, m - 1]).expect("S1 x S(m-1)");
    let ring = connected_sum_ring(&s, &s, m).expect("connected sum ring");
    let (expected, note) = if m % 2 == 0 {
        (zcl(5, 5, 4), "connected sum of two copies of S1xS(m-1); u1·v1·u2·v2 zero divisors multiply to 2(g⊗g)")
    } else {
        (
            zcl(4, 4, 4),
            "connected sum of two copies of S1xS(m-1); for odd m the four-fold product cancels \
             (g⊗1 and 1⊗g anticommute) and the bound is 4",
        )
    };
    let ranks = ranks_at(m, &[1, 1, m - 1, m - 1, m]);
    Draft { name: name.clone(), pi1: 2, profile: HomologyProfile::free(m, ranks).expect("profile"), rings: integral(&name, ring) }
        .entry(None, None, expected, Some(Outcome::Excluded), note)
}

fn wu_entry() -> CatalogEntry {
    let ring = exterior_algebra_labeled("Wu", CoefficientRing::f2(), &[("x2", 2), ("x3", 3)]).expect("Wu ring");
    let profile = HomologyProfile::new(5, vec![1, 0, 0, 0, 0, 1], vec![vec![], vec![], vec![PrimePower { prime: 2, exponent: 1 }]])
        .expect("Wu profile");
    CatalogEntry {
        data: ManifoldData {
            name: "Wu".into(),
            orientable: true,
            pi1_free_rank: 0,
            profile,
            rings: BTreeMap::from([(CoefficientRing::f2(), ring)]),
        },
        known_tc: None,
        known_cat: Some(3),
        expected_zcl: BTreeMap::from([(CoefficientRing::f2(), 3)]),
        expected_verdict: Some(Outcome::Alternative3(2)),
        source_note: "Wu manifold SU(3)/SO(3); cat = 3, TC open".into(),
    }
}

fn klein_entry() -> CatalogEntry {
    let ring = exterior_algebra_labeled("KleinGen3", CoefficientRing::f2(), &[("x1", 1), ("x2", 2)]).expect("Klein ring");
    let profile = HomologyProfile::new(3, vec![1, 1, 0, 0], vec![vec![], vec![], vec![PrimePower { prime: 2, exponent: 1 }]])
        .expect("Klein profile");
    CatalogEntry {
        data: ManifoldData {
            name: "KleinGen3".into(),
            orientable: false,
            pi1_free_rank: 1,
            profile,
            rings: BTreeMap::from([(CoefficientRing::f2(), ring)]),
        },
        known_tc: None,
        known_cat: Some(3),
        expected_zcl: BTreeMap::from([(CoefficientRing::f2(), 3)]),
        expected_verdict: None,
        source_note: "generalized Klein bottle, the non-orientable S2 bundle over S1; cat = 3, TC open".into(),
    }
}

/// Every built-in entry, in a fixed order.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = (1..=8).map(sphere_entry).collect();
    out.push(product_of_spheres("T2", &[1, 1]).entry(Some(3), None, zcl(3, 3, 3), None, "torus; TC = 3"));
    out.push(odd_sphere_product_entry(1, 3));
    out.push(odd_sphere_product_entry(1, 5));
    out.push(odd_sphere_product_entry(3, 3));
    out.push(odd_sphere_product_entry(3, 5));
    out.push(
        product_of_spheres("SU3", &[3, 5]).entry(
            Some(3),
            Some(3),
            zcl(3, 3, 3),
            Some(Outcome::Alternative2(3, 5)),
            "SU(3) = ⋀(x3,x5); cat = 3 forces TC = 3",
        ),
    );
    out.push(product_of_spheres("Sp2", &[3, 7]).entry(
        Some(4),
        Some(4),
        zcl(3, 3, 3),
        Some(Outcome::Alternative2(3, 7)),
        "Sp(2) = ⋀(x3,x7); TC = 4 although the cohomology is admissible. \
         The Hilton-Roitberg spaces E_ω share this ring and also have TC = 4",
    ));
    out.push(complex_stiefel_entry(3));
    out.push(complex_stiefel_entry(4));
    out.push(quaternionic_stiefel_entry(3));
    out.push(wu_entry());
    out.push(klein_entry());
    out.push(connected_sum_entry(3));
    out.push(connected_sum_entry(4));
    out.push(product_of_spheres("S2xS2", &[2, 2]).entry(
        None,
        None,
        zcl(5, 5, 3),
        Some(Outcome::Excluded),
        "even generators: a nonzero triple product of zero divisors; zcl is 5 over Z and Q",
    ));
    out.push(product_of_spheres("S1xS2", &[1, 2]).entry(
        None,
        None,
        zcl(4, 4, 3),
        Some(Outcome::Excluded),
        "S1 times an even sphere: the square of the even zero divisor times the odd one is nonzero",
    ));
    out
}

pub fn find_entry(name: &str) -> Option<CatalogEntry> {
    catalog_entries().into_iter().find(|e| e.name() == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub quantity: String,
    pub expected: String,
    pub got: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, got {}", self.quantity, self.expected, self.got)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryCheck {
    pub name: String,
    pub failures: Vec<Mismatch>,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogReport {
    pub entries: Vec<EntryCheck>,
}

impl CatalogReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(EntryCheck::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &EntryCheck> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

/// Recomputes the pristine catalog.
pub fn catalog_check() -> CatalogReport {
    check_entries(&catalog_entries())
}

pub fn check_entries(entries: &[CatalogEntry]) -> CatalogReport {
    CatalogReport { entries: entries.iter().map(check_entry).collect() }
}

fn check_entry(entry: &CatalogEntry) -> EntryCheck {
    let mut failures = Vec::new();
    let mut fail = |q: String, e: String, g: String| failures.push(Mismatch { quantity: q, expected: e, got: g });
    if let Err(e) = entry.data.validate() {
        fail("validation".into(), "ok".into(), e.to_string());
    }
    for (coeff, expected) in &entry.expected_zcl {
        if !entry.data.rings.contains_key(coeff) {
            fail(format!("zcl({coeff})"), expected.to_string(), "no ring".into());
        }
    }
    for (coeff, ring) in &entry.data.rings {
        let sq = match SquareRing::new(ring) {
            Ok(sq) => sq,
            Err(e) => {
                fail(format!("square({coeff})"), "ok".into(), e.to_string());
                continue;
            }
        };
        let zcl = match zero_divisor_nilpotency(&sq, DEFAULT_MAX_K) {
            Ok((z, _)) => z,
            Err(e) => {
                fail(format!("zcl({coeff})"), "a value".into(), e.to_string());
                continue;
            }
        };
        if let Some(&expected) = entry.expected_zcl.get(coeff) {
            if zcl != expected {
                fail(format!("zcl({coeff})"), expected.to_string(), zcl.to_string());
            }
        }
        if let Some(tc) = entry.known_tc {
            if zcl > tc {
                fail(format!("zcl({coeff}) <= known TC"), tc.to_string(), zcl.to_string());
            }
        }
        let (cup, _) = cuplength_nilpotency(ring);
        if let Some(cat) = entry.known_cat {
            if cup > cat {
                fail(format!("cuplength({coeff}) <= known cat"), cat.to_string(), cup.to_string());
            }
        }
        let field = if coeff.is_field() { Arc::clone(ring) } else { base_change(ring, Q).expect("integral ring") };
        match check_poincare_duality(&field) {
            Ok(r) if r.holds => {}
            Ok(r) => fail(
                format!("poincare duality({coeff})"),
                "non-singular".into(),
                format!("fails at degree {:?}", r.first_failure()),
            ),
            Err(e) => fail(format!("poincare duality({coeff})"), "non-singular".into(), e.to_string()),
        }
        if coeff.is_field() {
            match nilpotency_oracle(&sq) {
                Ok(o) if o == zcl => {}
                Ok(o) => fail(format!("oracle({coeff})"), zcl.to_string(), o.to_string()),
                Err(e) => fail(format!("oracle({coeff})"), zcl.to_string(), e.to_string()),
            }
        }
    }
    if let Some(expected) = entry.expected_verdict {
        match classify_theorem2(&entry.data) {
            Ok(v) if v.outcome == expected => {}
            Ok(v) => fail("verdict".into(), expected.to_string(), v.outcome.to_string()),
            Err(e) => fail("verdict".into(), expected.to_string(), e.to_string()),
        }
    }
    if let (Some(tc), Some(v)) = (entry.known_tc, entry.expected_verdict) {
        if tc <= 3 && !v.is_admissible() {
            fail("verdict vs known TC".into(), "admissible".into(), v.to_string());
        }
    }
    EntryCheck { name: entry.name().to_string(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_entries() {
        let s3 = find_entry("S3").unwrap();
        assert_eq!(s3.known_tc, Some(2));
        assert_eq!(find_entry("S2").unwrap().known_tc, Some(3));
        let su3 = find_entry("SU3").unwrap();
        assert_eq!((su3.known_tc, su3.known_cat), (Some(3), Some(3)));
        let sp2 = find_entry("Sp2").unwrap();
        assert_eq!(sp2.known_tc, Some(4));
        assert_eq!(sp2.expected_zcl[&Z], 3);
        assert!(sp2.source_note.contains("Hilton-Roitberg"));
        let wu = find_entry("Wu").unwrap();
        assert_eq!((wu.known_tc, wu.known_cat), (None, Some(3)));
        assert_eq!(wu.expected_zcl[&CoefficientRing::f2()], 3);
        let k = find_entry("KleinGen3").unwrap();
        assert_eq!((k.known_tc, k.known_cat), (None, Some(3)));
        assert!(!k.data.orientable);
    }

    #[test]
    fn names_are_unique() {
        let entries = catalog_entries();
        let mut names: Vec<_> = entries.iter().map(CatalogEntry::name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), entries.len());
    }

    #[test]
    fn pristine_catalog_passes() {
        let report = catalog_check();
        let failed: Vec<_> = report.failed().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn tampering_is_reported_by_name() {
        let mut entries = catalog_entries();
        let s2 = entries.iter_mut().find(|e| e.name() == "S2").unwrap();
        s2.expected_zcl.insert(Z, 2);
        let report = check_entries(&entries);
        let failed: Vec<_> = report.failed().collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].name, "S2");
        assert_eq!(failed[0].failures, vec![Mismatch { quantity: "zcl(Z)".into(), expected: "2".into(), got: "3".into() }]);
    }

    #[test]
    fn even_spheres_drop_over_f2() {
        for k in [2, 4, 6, 8] {
            let e = sphere_entry(k);
            assert_eq!(e.expected_zcl[&CoefficientRing::f2()], 2);
            assert_eq!(e.expected_zcl[&Z], 3);
        }
    }

    #[test]
    fn families_are_consistent() {
        for n in 3..=6 {
            let e = complex_stiefel_entry(n);
            assert_eq!(e.data.dimension(), 4 * n - 4);
            assert!(check_entries(&[e]).all_passed());
        }
        for n in 2..=3 {
            let e = quaternionic_stiefel_entry(n);
            assert_eq!(e.data.dimension(), 8 * n - 6);
            assert!(check_entries(&[e]).all_passed());
        }
        for (k, l) in [(1, 7), (5, 5), (3, 9)] {
            assert!(check_entries(&[odd_sphere_product_entry(k, l)]).all_passed());
        }
        for k in 9..=11 {
            assert!(check_entries(&[sphere_entry(k)]).all_passed());
        }
    }
}
