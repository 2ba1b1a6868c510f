//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails. Lines marked `(m=4)` are extra
//! rows for the even-dimensional connected sum and do not replace the
//! criterion they accompany.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use smalltc::bounds::{nilpotency_oracle, zero_divisor_nilpotency, DEFAULT_MAX_K};
use smalltc::catalog::{catalog_check, catalog_entries, find_entry, CatalogEntry};
use smalltc::classify::{check_poincare_duality, classify_theorem2, Outcome};
use smalltc::cli::{parse_manifold, parse_ring, serialize_manifold, serialize_ring};
use smalltc::graded::{base_change, sphere_product};
use smalltc::{CoefficientRing, Element, GradedError, GradedRing, RingBuilder, SquareRing};

const Z: CoefficientRing = CoefficientRing::Integers;
const Q: CoefficientRing = CoefficientRing::Rationals;

struct Suite {
    failed: usize,
}

impl Suite {
    fn record(&mut self, id: &str, title: &str, problems: Vec<String>) {
        if problems.is_empty() {
            println!("[PASS] {id} {title}");
        } else {
            self.failed += 1;
            println!("[FAIL] {id} {title}");
            for p in problems {
                println!("         {p}");
            }
        }
    }
}

fn f2() -> CoefficientRing {
    CoefficientRing::f2()
}

fn fp(p: u64) -> CoefficientRing {
    CoefficientRing::prime_field(p).unwrap()
}

fn zcl_of(ring: &Arc<GradedRing>) -> usize {
    zero_divisor_nilpotency(&SquareRing::new(ring).unwrap(), DEFAULT_MAX_K).unwrap().0
}

fn entry(name: &str) -> CatalogEntry {
    find_entry(name).unwrap_or_else(|| panic!("catalog entry {name}"))
}

fn hat(sq: &SquareRing, label: &str) -> Element {
    sq.zero_divisor(&sq.base().by_label(label).unwrap()).unwrap()
}

fn cross(sq: &SquareRing, a: &str, b: &str) -> Element {
    let r = sq.base();
    sq.cross(&r.by_label(a).unwrap(), &r.by_label(b).unwrap()).unwrap()
}

fn scaled(e: &Element, c: i64) -> Element {
    e.scale(&e.ring().coeff().from_int(c)).unwrap()
}

fn product(factors: &[Element]) -> Element {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| &acc * f)
}

/// `uw` for basis labels, as a single label of the base ring.
fn label_of(ring: &Arc<GradedRing>, e: &Element) -> String {
    assert_eq!(e.coords().len(), 1);
    let (&k, c) = e.coords().iter().next().unwrap();
    assert!(c.is_one());
    ring.label(k).to_string()
}

// (S1 x S^{m-1}) # (S1 x S^{m-1}): u = x11, v = x12 in degree 1, u' = x(m-1)1, v' = x(m-1)2.
fn case_one(m: u32) -> Vec<String> {
    let e = entry(&format!("ConnSum{m}"));
    let ring = &e.data.rings[&Z];
    let sq = SquareRing::new(ring).unwrap();
    let (u, v, up, vp) = ("x11", "x12", format!("x{}1", m - 1), format!("x{}2", m - 1));
    let got = product(&[hat(&sq, u), hat(&sq, &up), hat(&sq, v), hat(&sq, &vp)]);
    let want = scaled(&cross(&sq, "g", "g"), 2);
    let mut problems = Vec::new();
    if !got.equals_up_to_sign(&want) {
        problems.push(format!("m={m}: û·û'·v̂·v̂' = {got}, expected ±({want})"));
    }
    if got.is_zero() {
        problems.push(format!("m={m}: the four-fold product vanishes"));
    }
    problems
}

fn criterion_1a(s: &mut Suite) {
    s.record("1a", "case (1): û·û'·v̂·v̂' = 2(g⊗g) ≠ 0 on the connected sum, m = 3", case_one(3));
    s.record("1a (m=4)", "case (1) identity on the connected sum, m = 4", case_one(4));
}

fn criterion_1b(s: &mut Suite) {
    let mut problems = Vec::new();
    let ring = sphere_product(Z, &[1, 2]).unwrap();
    let sq = SquareRing::new(&ring).unwrap();
    let (u, v) = (hat(&sq, "x1"), hat(&sq, "x2"));
    let vv = &v * &v;
    let want = scaled(&cross(&sq, "x2", "x2"), -2);
    if vv != want {
        problems.push(format!("v̂² = {vv}, expected {want}"));
    }
    let got = &vv * &u;
    let want = scaled(&(&cross(&sq, "x1x2", "x2") - &cross(&sq, "x2", "x1x2")), -2);
    if got != want || got.is_zero() {
        problems.push(format!("v̂²·û = {got}, expected {want}"));
    }
    if &scaled(&cross(&sq, "x2", "x2"), -2) * &u != got {
        problems.push("−2(v⊗v)·û differs from v̂²·û".into());
    }
    s.record("1b", "case (2): v̂² = −2(v⊗v), v̂²·û = −2(g⊗v − v⊗g) ≠ 0", problems);
}

fn criterion_1c(s: &mut Suite) {
    // S1 x S2 x S3: u = x1, v = x2x3 (degree m−1 = 5, odd), w = x2, u·v = g.
    let mut problems = Vec::new();
    let ring = sphere_product(Z, &[1, 2, 3]).unwrap();
    let sq = SquareRing::new(&ring).unwrap();
    let (u, v, w) = (ring.by_label("x1").unwrap(), ring.by_label("x2x3").unwrap(), ring.by_label("x2").unwrap());
    let g = label_of(&ring, &(&u * &v));
    let uw = label_of(&ring, &(&u * &w));
    let got = product(&[hat(&sq, "x1"), hat(&sq, "x2x3"), hat(&sq, "x2")]);
    let base = &cross(&sq, "x2", &g) - &cross(&sq, &g, "x2");
    let tail = |sign: i64| &scaled(&cross(&sq, &uw, "x2x3"), sign) - &cross(&sq, "x2x3", &uw);
    let matches = [1, -1].iter().any(|&sgn| got.equals_up_to_sign(&(&base + &tail(sgn))));
    if got.is_zero() {
        problems.push("û·v̂·ŵ vanishes".into());
    }
    if !matches {
        problems.push(format!("û·v̂·ŵ = {got}; expected ±(w⊗g − g⊗w ± uw⊗v − v⊗uw)"));
    }
    s.record("1c", "case (2): û·v̂·ŵ = w⊗g − g⊗w ± uw⊗v − v⊗uw ≠ 0", problems);
}

/// `ℚ[u]/(u³) ⊗ ⋀(x)`, `|u| = 2`, `|x| = 1`: `v = ux`, `u·v = g`, `u² ≠ 0`.
fn truncated_ring(coeff: CoefficientRing) -> Arc<GradedRing> {
    let mut b = RingBuilder::new("CP2xS1", coeff);
    let x = b.basis_element("x", 1);
    let u = b.basis_element("u", 2);
    let v = b.basis_element("v", 3);
    let uu = b.basis_element("uu", 4);
    let g = b.basis_element("g", 5);
    b.formal_dim(5);
    b.product_int(x, u, &[(v, 1)])
        .product_int(x, uu, &[(g, 1)])
        .product_int(u, u, &[(uu, 1)])
        .product_int(u, v, &[(g, 1)]);
    b.build().unwrap()
}

fn criterion_1d(s: &mut Suite) {
    let mut problems = Vec::new();
    for coeff in [fp(5), Q] {
        let ring = truncated_ring(coeff);
        let sq = SquareRing::new(&ring).unwrap();
        let (u, v) = (hat(&sq, "u"), hat(&sq, "v"));
        let got = product(&[u.clone(), u, v]);
        let want = &(&scaled(&(&cross(&sq, "u", "g") - &cross(&sq, "g", "u")), 2) + &cross(&sq, "v", "uu"))
            - &cross(&sq, "uu", "v");
        if got != want || got.is_zero() {
            problems.push(format!("over {coeff}: û²·v̂ = {got}, expected {want}"));
        }
    }
    let wu = &entry("Wu").data.rings[&f2()];
    let sq = SquareRing::new(wu).unwrap();
    let u = hat(&sq, "x2");
    let got = product(&[u.clone(), u, hat(&sq, "x3")]);
    if !got.is_zero() {
        problems.push(format!("over F_2 with u² = 0: û²·v̂ = {got}, expected 0"));
    }
    s.record("1d", "case (3b): û²·v̂ = 2(u⊗g − g⊗u) + v⊗u² − u²⊗v over F_5 and Q; 0 over F_2 when u² = 0", problems);
}

fn criterion_1e(s: &mut Suite) {
    let ring = truncated_ring(f2());
    let sq = SquareRing::new(&ring).unwrap();
    let u = hat(&sq, "u");
    let got = product(&[u.clone(), u, hat(&sq, "v")]);
    let want = &cross(&sq, "uu", "v") + &cross(&sq, "v", "uu");
    let problems =
        if got == want && !got.is_zero() { vec![] } else { vec![format!("û²·v̂ = {got}, expected {want}")] };
    s.record("1e", "case (3c): over F_2 with u² ≠ 0, û²·v̂ = u²⊗v + v⊗u² ≠ 0", problems);
}

fn check_zcl(problems: &mut Vec<String>, name: &str, coeff: CoefficientRing, want: usize) {
    let e = entry(name);
    let ring = &e.data.rings[&coeff];
    let got = zcl_of(ring);
    if got != want {
        problems.push(format!("zcl({name}, {coeff}) = {got}, expected {want}"));
    }
    if coeff.is_field() {
        let oracle = nilpotency_oracle(&SquareRing::new(ring).unwrap()).unwrap();
        if oracle != want {
            problems.push(format!("oracle({name}, {coeff}) = {oracle}, expected {want}"));
        }
    } else {
        let oracle = nilpotency_oracle(&SquareRing::new(&base_change(ring, Q).unwrap()).unwrap()).unwrap();
        if oracle != want {
            problems.push(format!("oracle({name}, Q from Z) = {oracle}, expected {want}"));
        }
    }
}

fn criterion_2(s: &mut Suite) {
    let mut problems = Vec::new();
    for k in [1, 3, 5, 7] {
        for c in [Z, Q, f2()] {
            check_zcl(&mut problems, &format!("S{k}"), c, 2);
        }
    }
    for k in [2, 4, 6, 8] {
        check_zcl(&mut problems, &format!("S{k}"), Z, 3);
        check_zcl(&mut problems, &format!("S{k}"), f2(), 2);
    }
    check_zcl(&mut problems, "T2", Z, 3);
    for name in ["S1xS3", "S1xS5", "S3xS3", "S3xS5", "SU3", "Sp2", "V2C3", "V2C4", "V2H3"] {
        check_zcl(&mut problems, name, Z, 3);
    }
    check_zcl(&mut problems, "Wu", f2(), 3);
    check_zcl(&mut problems, "ConnSum3", Z, 5);
    check_zcl(&mut problems, "KleinGen3", f2(), 3);
    for e in catalog_entries() {
        let Some(tc) = e.known_tc else { continue };
        for (c, ring) in &e.data.rings {
            let z = zcl_of(ring);
            if z > tc {
                problems.push(format!("zcl({}, {c}) = {z} exceeds known TC {tc}", e.name()));
            }
        }
    }
    let sp2 = entry("Sp2");
    let z = zcl_of(&sp2.data.rings[&Z]);
    if !(z == 3 && sp2.known_tc == Some(4)) {
        problems.push(format!("Sp2 row: zcl {z}, known TC {:?}; expected 3 < 4", sp2.known_tc));
    }
    s.record("2", "bound table", problems);

    let mut extra = Vec::new();
    check_zcl(&mut extra, "ConnSum4", Z, 5);
    check_zcl(&mut extra, "ConnSum4", Q, 5);
    s.record("2 (m=4)", "zcl of the connected sum, m = 4", extra);
}

fn criterion_3(s: &mut Suite) {
    let mut problems = Vec::new();
    for e in catalog_entries() {
        for (c, ring) in &e.data.rings {
            if !c.is_field() {
                continue;
            }
            let sq = SquareRing::new(ring).unwrap();
            let (z, _) = zero_divisor_nilpotency(&sq, DEFAULT_MAX_K).unwrap();
            let o = nilpotency_oracle(&sq).unwrap();
            if z != o {
                problems.push(format!("{} over {c}: search {z}, oracle {o}", e.name()));
            }
        }
    }
    let mut runner = TestRunner::new(Config { cases: 64, failure_persistence: None, ..Config::default() });
    let strategy = (prop::collection::vec(1u32..=4, 1..=3), prop::sample::select(vec![2u64, 3, 5, 0]));
    let result = runner.run(&strategy, |(degrees, p)| {
        let coeff = if p == 0 { Q } else { fp(p) };
        let sq = SquareRing::new(&sphere_product(coeff, &degrees).unwrap()).unwrap();
        let (z, _) = zero_divisor_nilpotency(&sq, DEFAULT_MAX_K).unwrap();
        prop_assert_eq!(z, nilpotency_oracle(&sq).unwrap());
        Ok(())
    });
    if let Err(e) = result {
        problems.push(format!("random sphere products: {e}"));
    }
    s.record("3", "oracle equivalence on catalog field rings and random sphere products", problems);
}

fn check_verdict(problems: &mut Vec<String>, name: &str, want: Outcome, witness_len: Option<usize>) {
    let e = entry(name);
    let v = match classify_theorem2(&e.data) {
        Ok(v) => v,
        Err(err) => {
            problems.push(format!("{name}: {err}"));
            return;
        }
    };
    if v.outcome != want {
        problems.push(format!("{name}: {}, expected {want}", v.outcome));
    }
    if let Some(len) = witness_len {
        match (&v.witness, v.witness_coeff) {
            (Some(w), Some(c)) => {
                if w.len() != len || v.tc_floor != len + 1 {
                    problems.push(format!(
                        "{name}: witness length {} with tc_floor {}, expected {len} and {}",
                        w.len(),
                        v.tc_floor,
                        len + 1
                    ));
                }
                if !w.verify(&SquareRing::new(&e.data.rings[&c]).unwrap()) {
                    problems.push(format!("{name}: witness does not re-multiply to a nonzero product"));
                }
            }
            _ => problems.push(format!("{name}: no witness")),
        }
    }
}

fn criterion_4(s: &mut Suite) {
    let mut problems = Vec::new();
    for k in 3..=8 {
        check_verdict(&mut problems, &format!("S{k}"), Outcome::Alternative1(k), None);
    }
    for (name, k, l) in [("S1xS3", 1, 3), ("S1xS5", 1, 5), ("S3xS3", 3, 3), ("S3xS5", 3, 5), ("SU3", 3, 5), ("Sp2", 3, 7)] {
        check_verdict(&mut problems, name, Outcome::Alternative2(k, l), None);
    }
    check_verdict(&mut problems, "Wu", Outcome::Alternative3(2), None);
    check_verdict(&mut problems, "S2xS2", Outcome::Excluded, Some(3));
    check_verdict(&mut problems, "ConnSum3", Outcome::Excluded, Some(4));
    s.record("4", "classifier table", problems);

    let mut extra = Vec::new();
    check_verdict(&mut extra, "ConnSum4", Outcome::Excluded, Some(4));
    s.record("4 (m=4)", "connected sum, m = 4: Excluded with a 4-fold witness", extra);
}

fn criterion_5(s: &mut Suite) {
    let mut problems = Vec::new();
    let mut b = RingBuilder::new("sign", Z);
    let u = b.basis_element("u", 1);
    let v = b.basis_element("v", 1);
    let g = b.basis_element("g", 2);
    b.product_int(u, v, &[(g, 1)]).product_int(v, u, &[(g, 1)]);
    if !matches!(b.build(), Err(GradedError::CommutativityViolation { .. })) {
        problems.push("v·u = +g for odd u, v was not rejected as a commutativity violation".into());
    }
    let mut b = RingBuilder::new("assoc", Z);
    let a = b.basis_element("a", 2);
    let bb = b.basis_element("b", 2);
    let c = b.basis_element("c", 4);
    let d = b.basis_element("d", 6);
    b.product_int(a, bb, &[(c, 1)]).product_int(a, c, &[(d, 1)]);
    if !matches!(b.build(), Err(GradedError::AssociativityViolation { .. })) {
        problems.push("associativity break not rejected".into());
    }
    let mut b = RingBuilder::new("degree", Z);
    let x = b.basis_element("x", 1);
    let y = b.basis_element("y", 3);
    b.product_int(x, y, &[(y, 1)]);
    if !matches!(b.build(), Err(GradedError::DegreeMismatch { .. })) {
        problems.push("degree mismatch not rejected".into());
    }
    for e in catalog_entries() {
        for (c, ring) in &e.data.rings {
            match serialize_ring(ring).map(|t| parse_ring(&t)) {
                Ok(Ok(_)) => {}
                Ok(Err(err)) => problems.push(format!("{} over {c} fails validation: {err}", e.name())),
                Err(err) => problems.push(format!("{} over {c}: {err}", e.name())),
            }
            if c.is_field() && !check_poincare_duality(ring).map(|r| r.holds).unwrap_or(false) {
                problems.push(format!("{} over {c} fails Poincaré duality", e.name()));
            }
        }
    }
    s.record("5", "validator suite", problems);
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_smalltc")).args(args).output().expect("run smalltc");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_6(s: &mut Suite) {
    let mut problems = Vec::new();
    for e in catalog_entries() {
        let text = serialize_manifold(&e.data).unwrap();
        match parse_manifold(&text, None) {
            Ok(back) => {
                let same_rings: BTreeMap<_, _> = back.rings.iter().map(|(c, r)| (*c, (**r).clone())).collect();
                let orig: BTreeMap<_, _> = e.data.rings.iter().map(|(c, r)| (*c, (**r).clone())).collect();
                if same_rings != orig
                    || back.profile != e.data.profile
                    || serialize_manifold(&back).unwrap() != text
                {
                    problems.push(format!("{} does not round-trip", e.name()));
                }
            }
            Err(err) => problems.push(format!("{}: {err}", e.name())),
        }
    }
    let dir = std::env::temp_dir().join(format!("smalltc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("su3.ring");
    std::fs::write(&file, serialize_ring(&entry("SU3").data.rings[&Z]).unwrap()).unwrap();
    let path = file.to_str().unwrap();
    for args in [
        vec!["--format", "tsv", "catalog", "check"],
        vec!["--format", "tsv", "tc-bound", path],
        vec!["--format", "tsv", "zcl", path, "--witness"],
    ] {
        let (a, b) = (run_cli(&args), run_cli(&args));
        if a != b {
            problems.push(format!("`{}` output differs between runs", args.join(" ")));
        }
    }
    let (code, out) = run_cli(&["--format", "tsv", "catalog", "check"]);
    let lines = String::from_utf8_lossy(&out).lines().filter(|l| l.ends_with("\tPASS")).count();
    if code != 0 || lines != catalog_entries().len() || !catalog_check().all_passed() {
        problems.push(format!("catalog check exited {code} with {lines} PASS lines"));
    }
    std::fs::remove_dir_all(&dir).unwrap();
    s.record("6", "CLI contract: round trip, deterministic tsv, catalog check exits 0", problems);
}

fn main() {
    let mut s = Suite { failed: 0 };
    criterion_1a(&mut s);
    criterion_1b(&mut s);
    criterion_1c(&mut s);
    criterion_1d(&mut s);
    criterion_1e(&mut s);
    criterion_2(&mut s);
    criterion_3(&mut s);
    criterion_4(&mut s);
    criterion_5(&mut s);
    criterion_6(&mut s);
    println!("{} failed", s.failed);
    if s.failed > 0 {
        std::process::exit(1);
    }
}
