//! Line-oriented ring and manifold files.
//!
//! ```text
//! # comment
//! ring S1xS3
//! coeff Z
//! dim 4
//! basis u:1 v:3 g:4
//! mul u*v = g
//! ```
//!
//! A manifold file starts with `manifold`, `dim`, `orientable`, `pi1rank`
//! and `homology <i>:<rank>[,p^e...]` lines, followed by one `ring` section
//! or `ringfile <path>` line per coefficient ring.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::classify::{ClassifyError, HomologyProfile, ManifoldData, PrimePower};
use crate::graded::{format_terms, GradedError, GradedRing, RingBuilder};
use crate::scalars::{CoefficientRing, Scalar};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown label `{label}`")]
    UnknownLabel { line: usize, label: String },
    #[error("{}{source}", .line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid { line: Option<usize>, source: GradedError },
    #[error(transparent)]
    Manifold(#[from] ClassifyError),
    #[error("cannot write ring {ring}: {msg}")]
    Unserializable { ring: String, msg: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'))
}

/// Splits into `(line number, directive, rest)` with comments and blank
/// lines dropped.
fn directives(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        Some((i + 1, head, rest.trim()))
    })
}

struct MulLine {
    line: usize,
    a: String,
    b: String,
    terms: Vec<(String, BigInt)>,
}

#[derive(Default)]
struct RingSection {
    start: usize,
    name: Option<String>,
    coeff: Option<CoefficientRing>,
    dim: Option<u32>,
    basis: Vec<(usize, String, u32)>,
    muls: Vec<MulLine>,
}

impl RingSection {
    fn directive(&mut self, line: usize, head: &str, rest: &str) -> Result<(), FormatError> {
        match head {
            "ring" => {
                if self.name.is_some() {
                    return Err(syntax(line, "a file holds one ring"));
                }
                if !is_name(rest) {
                    return Err(syntax(line, format!("bad ring name `{rest}`")));
                }
                self.name = Some(rest.to_string());
            }
            "coeff" => {
                if self.coeff.is_some() {
                    return Err(syntax(line, "coeff given twice"));
                }
                self.coeff = Some(CoefficientRing::parse(rest).map_err(|e| syntax(line, e))?);
            }
            "dim" => {
                if self.dim.is_some() {
                    return Err(syntax(line, "dim given twice"));
                }
                self.dim = Some(rest.parse().map_err(|_| syntax(line, format!("bad dimension `{rest}`")))?);
            }
            "basis" => {
                for item in rest.split_whitespace() {
                    let (label, deg) =
                        item.split_once(':').ok_or_else(|| syntax(line, format!("expected label:degree, got `{item}`")))?;
                    let deg: u32 = deg.parse().map_err(|_| syntax(line, format!("bad degree in `{item}`")))?;
                    if label == "1" {
                        if deg != 0 {
                            return Err(syntax(line, "the unit 1 has degree 0"));
                        }
                        continue;
                    }
                    if !is_label(label) {
                        return Err(syntax(line, format!("bad label `{label}`")));
                    }
                    self.basis.push((line, label.to_string(), deg));
                }
            }
            "mul" => self.muls.push(parse_mul(line, rest)?),
            _ => return Err(syntax(line, format!("unknown directive `{head}`"))),
        }
        Ok(())
    }

    fn build(self) -> Result<Arc<GradedRing>, FormatError> {
        let name = self.name.ok_or_else(|| syntax(self.start, "missing `ring <name>`"))?;
        let coeff = self.coeff.ok_or_else(|| syntax(self.start, "missing `coeff`"))?;
        let mut b = RingBuilder::new(name, coeff);
        let mut index = BTreeMap::from([("1".to_string(), 0usize)]);
        for (line, label, deg) in &self.basis {
            if index.contains_key(label) {
                return Err(FormatError::Invalid { line: Some(*line), source: GradedError::DuplicateLabel(label.clone()) });
            }
            index.insert(label.clone(), b.basis_element(label.clone(), *deg));
        }
        if let Some(m) = self.dim {
            b.formal_dim(m);
        }
        let lookup = |line: usize, l: &str| {
            index.get(l).copied().ok_or_else(|| FormatError::UnknownLabel { line, label: l.to_string() })
        };
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut lines: BTreeMap<(String, String), usize> = BTreeMap::new();
        for m in &self.muls {
            let (i, j) = (lookup(m.line, &m.a)?, lookup(m.line, &m.b)?);
            if let Some(prev) = seen.insert((i, j), m.line) {
                return Err(syntax(m.line, format!("product {}*{} already given on line {prev}", m.a, m.b)));
            }
            let terms = m
                .terms
                .iter()
                .map(|(l, c)| Ok((lookup(m.line, l)?, coeff.from_bigint(c))))
                .collect::<Result<Vec<(usize, Scalar)>, FormatError>>()?;
            b.product(i, j, terms);
            lines.insert((m.a.clone(), m.b.clone()), m.line);
        }
        b.build().map_err(|e| {
            let line = offending_pair(&e).and_then(|(a, b)| {
                lines.get(&(a.clone(), b.clone())).or_else(|| lines.get(&(b, a))).copied()
            });
            FormatError::Invalid { line, source: e }
        })
    }
}

fn offending_pair(e: &GradedError) -> Option<(String, String)> {
    match e {
        GradedError::CommutativityViolation { a, b }
        | GradedError::DuplicateProduct { a, b }
        | GradedError::DegreeMismatch { a, b, .. }
        | GradedError::AssociativityViolation { a, b, .. } => Some((a.clone(), b.clone())),
        GradedError::OddSquareViolation { a } => Some((a.clone(), a.clone())),
        _ => None,
    }
}

fn parse_mul(line: usize, rest: &str) -> Result<MulLine, FormatError> {
    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(line, "expected `mul a*b = ...`"))?;
    let (a, b) = lhs.trim().split_once('*').ok_or_else(|| syntax(line, "expected `a*b` on the left"))?;
    let (a, b) = (a.trim(), b.trim());
    for l in [a, b] {
        if l != "1" && !is_label(l) {
            return Err(syntax(line, format!("bad label `{l}`")));
        }
    }
    let rhs = rhs.trim();
    let mut terms = Vec::new();
    if rhs != "0" {
        for t in rhs.split('+') {
            terms.push(parse_term(line, t.trim())?);
        }
    }
    Ok(MulLine { line, a: a.into(), b: b.into(), terms })
}

fn parse_term(line: usize, t: &str) -> Result<(String, BigInt), FormatError> {
    let (c, label) = match t.split_once('*') {
        Some((c, l)) => (c.trim().parse::<BigInt>().map_err(|_| syntax(line, format!("bad coefficient in `{t}`")))?, l.trim()),
        None => match t.strip_prefix('-') {
            Some(l) => (BigInt::from(-1), l.trim()),
            None => (BigInt::from(1), t),
        },
    };
    if label != "1" && !is_label(label) {
        return Err(syntax(line, format!("bad term `{t}`")));
    }
    Ok((label.to_string(), c))
}

/// Parses and validates a single ring.
pub fn parse_ring(text: &str) -> Result<Arc<GradedRing>, FormatError> {
    let mut section = RingSection { start: 1, ..Default::default() };
    for (line, head, rest) in directives(text) {
        section.directive(line, head, rest)?;
    }
    section.build()
}

fn coefficient_text(ring: &GradedRing, c: &Scalar) -> Result<(), FormatError> {
    match c {
        Scalar::Rat(q) if !q.is_integer() => Err(FormatError::Unserializable {
            ring: ring.name().into(),
            msg: format!("coefficient {q} is not an integer"),
        }),
        _ => Ok(()),
    }
}

/// Writes `ring` in the file grammar. Only integer constants are expressible.
pub fn serialize_ring(ring: &GradedRing) -> Result<String, FormatError> {
    let mut out = String::new();
    writeln!(out, "ring {}", ring.name()).unwrap();
    writeln!(out, "coeff {}", ring.coeff()).unwrap();
    if let Some(m) = ring.formal_dim() {
        writeln!(out, "dim {m}").unwrap();
    }
    if !is_name(ring.name()) {
        return Err(FormatError::Unserializable { ring: ring.name().into(), msg: "name is not an identifier".into() });
    }
    let basis: Vec<String> = ring.basis().iter().skip(1).map(|b| format!("{}:{}", b.label, b.degree)).collect();
    for b in ring.basis().iter().skip(1) {
        if !is_label(&b.label) {
            return Err(FormatError::Unserializable { ring: ring.name().into(), msg: format!("label `{}`", b.label) });
        }
    }
    if !basis.is_empty() {
        writeln!(out, "basis {}", basis.join(" ")).unwrap();
    }
    for (i, j, coords) in ring.nonzero_products() {
        for c in coords.values() {
            coefficient_text(ring, c)?;
        }
        let rhs = format_terms(coords.iter().map(|(&k, c)| (ring.label(k), c)));
        writeln!(out, "mul {}*{} = {rhs}", ring.label(i), ring.label(j)).unwrap();
    }
    Ok(out)
}

/// Parses a manifold file. `base` resolves `ringfile` paths.
pub fn parse_manifold(text: &str, base: Option<&Path>) -> Result<ManifoldData, FormatError> {
    let mut name = None;
    let mut dim: Option<u32> = None;
    let mut orientable = None;
    let mut pi1 = None;
    let mut homology: BTreeMap<usize, (usize, Vec<PrimePower>)> = BTreeMap::new();
    let mut rings: Vec<(usize, Arc<GradedRing>)> = Vec::new();
    let mut section: Option<RingSection> = None;

    for (line, head, rest) in directives(text) {
        if head == "ring" {
            if let Some(s) = section.take() {
                rings.push((s.start, s.build()?));
            }
            section = Some(RingSection { start: line, ..Default::default() });
        }
        if head == "ringfile" {
            if let Some(s) = section.take() {
                rings.push((s.start, s.build()?));
            }
            let path = base.map_or_else(|| PathBuf::from(rest), |b| b.join(rest));
            let text = std::fs::read_to_string(&path).map_err(|e| FormatError::Io { path: path.clone(), source: e })?;
            rings.push((line, parse_ring(&text)?));
            continue;
        }
        if let Some(s) = section.as_mut() {
            s.directive(line, head, rest)?;
            continue;
        }
        match head {
            "manifold" => {
                if !is_name(rest) {
                    return Err(syntax(line, format!("bad manifold name `{rest}`")));
                }
                name = Some(rest.to_string());
            }
            "dim" => dim = Some(rest.parse().map_err(|_| syntax(line, format!("bad dimension `{rest}`")))?),
            "orientable" => {
                orientable = Some(match rest {
                    "yes" | "true" => true,
                    "no" | "false" => false,
                    _ => return Err(syntax(line, format!("expected yes or no, got `{rest}`"))),
                })
            }
            "pi1rank" => pi1 = Some(rest.parse().map_err(|_| syntax(line, format!("bad rank `{rest}`")))?),
            "homology" => {
                let (i, h) = parse_homology(line, rest)?;
                if homology.insert(i, h).is_some() {
                    return Err(syntax(line, format!("homology in degree {i} given twice")));
                }
            }
            _ => return Err(syntax(line, format!("unknown manifold directive `{head}`"))),
        }
    }
    if let Some(s) = section.take() {
        rings.push((s.start, s.build()?));
    }
    let name = name.ok_or_else(|| syntax(1, "missing `manifold <name>`"))?;
    let m = dim.ok_or_else(|| syntax(1, "missing `dim`"))?;
    if let Some((&i, _)) = homology.range(m as usize + 1..).next() {
        return Err(syntax(1, format!("homology in degree {i} above dimension {m}")));
    }
    let ranks = (0..=m as usize).map(|i| homology.get(&i).map_or(0, |h| h.0)).collect();
    let torsion = (0..=m as usize).map(|i| homology.get(&i).map_or(Vec::new(), |h| h.1.clone())).collect();
    let profile = HomologyProfile::new(m, ranks, torsion)?;
    let mut by_coeff = BTreeMap::new();
    for (line, r) in rings {
        if by_coeff.insert(r.coeff(), r).is_some() {
            return Err(syntax(line, "a second ring over the same coefficients"));
        }
    }
    Ok(ManifoldData {
        name,
        orientable: orientable.unwrap_or(true),
        pi1_free_rank: pi1.ok_or_else(|| syntax(1, "missing `pi1rank`"))?,
        profile,
        rings: by_coeff,
    })
}

fn parse_homology(line: usize, rest: &str) -> Result<(usize, (usize, Vec<PrimePower>)), FormatError> {
    let (i, groups) = rest.split_once(':').ok_or_else(|| syntax(line, "expected `homology <i>:<rank>[,p^e...]`"))?;
    let i: usize = i.trim().parse().map_err(|_| syntax(line, format!("bad degree `{i}`")))?;
    let mut parts = groups.split(',').map(str::trim);
    let rank = parts.next().unwrap_or("");
    let rank: usize = rank.parse().map_err(|_| syntax(line, format!("bad rank `{rank}`")))?;
    let mut torsion = Vec::new();
    for p in parts {
        let (prime, e) = p.split_once('^').unwrap_or((p, "1"));
        let prime: u64 = prime.parse().map_err(|_| syntax(line, format!("bad torsion summand `{p}`")))?;
        let exponent: u32 = e.parse().map_err(|_| syntax(line, format!("bad torsion summand `{p}`")))?;
        if exponent == 0 || CoefficientRing::prime_field(prime).is_err() {
            return Err(syntax(line, format!("bad torsion summand `{p}`")));
        }
        torsion.push(PrimePower { prime, exponent });
    }
    Ok((i, (rank, torsion)))
}

pub fn serialize_manifold(data: &ManifoldData) -> Result<String, FormatError> {
    let mut out = String::new();
    let p = &data.profile;
    writeln!(out, "manifold {}", data.name).unwrap();
    writeln!(out, "dim {}", p.dimension()).unwrap();
    writeln!(out, "orientable {}", if data.orientable { "yes" } else { "no" }).unwrap();
    writeln!(out, "pi1rank {}", data.pi1_free_rank).unwrap();
    for (i, rank) in p.ranks().iter().enumerate() {
        let mut line = format!("homology {i}:{rank}");
        for t in &p.torsion()[i] {
            write!(line, ",{t}").unwrap();
        }
        writeln!(out, "{line}").unwrap();
    }
    for ring in data.rings.values() {
        out.push('\n');
        out.push_str(&serialize_ring(ring)?);
    }
    Ok(out)
}
