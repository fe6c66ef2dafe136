//! JSON input formats: problem files and quantum-torus specs.
//!
//! Semantic checks (shapes, degrees, dimensions) run inside deserialization so
//! every rejection carries the line and column where parsing stopped.

use gcover_core::algebra::{envelope_from_lie, GradedAlgebra, LieAlgebra, Rep};
use gcover_core::group::{FinAbGroup, GrpElt};
use gcover_core::qtorus::QTorusSpec;
use gcover_core::{ComplexMatrix, RootOfUnity, Tolerance, C64};
use serde::Deserialize;
use std::fmt;

/// `[re, im]`, `{"zeta": [m, k]}` for `exp(2 pi i k / m)`, or `{"rat": [p, q]}` for `p / q`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct ComplexLit(pub C64);

#[derive(Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Pair([f64; 2]),
    Zeta {
        zeta: [i64; 2],
    },
    Rat {
        rat: [i64; 2],
    },
}

impl TryFrom<RawComplex> for ComplexLit {
    type Error = String;

    fn try_from(raw: RawComplex) -> Result<Self, String> {
        match raw {
            RawComplex::Pair([re, im]) => Ok(ComplexLit(C64::new(re, im))),
            RawComplex::Zeta { zeta: [m, k] } => {
                if m <= 0 {
                    return Err(format!("root of unity order must be positive, got {m}"));
                }
                Ok(ComplexLit(RootOfUnity::new(m as u64, k).value()))
            }
            RawComplex::Rat { rat: [p, q] } => {
                if q == 0 {
                    return Err("rational literal has zero denominator".into());
                }
                Ok(ComplexLit(C64::new(p as f64 / q as f64, 0.0)))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSection {
    invariant_factors: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraSection {
    dim: usize,
    structure: Vec<Vec<Vec<ComplexLit>>>,
    #[serde(default)]
    unit: Option<Vec<ComplexLit>>,
    grading: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleSection {
    dim: usize,
    action: Vec<Vec<Vec<ComplexLit>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiloopSection {
    epimorphism: Vec<Vec<i64>>,
    #[serde(default)]
    cutoff: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    group: GroupSection,
    algebra: AlgebraSection,
    module: ModuleSection,
    #[serde(default)]
    lie: bool,
    #[serde(default)]
    multiloop: Option<MultiloopSection>,
}

/// The algebra of a problem: associative with its module, or a Lie algebra
/// with its action, to be replaced by the associative envelope.
#[derive(Clone, Debug)]
pub enum Structure {
    Associative(Rep),
    Lie { lie: LieAlgebra, action: Vec<ComplexMatrix> },
}

/// Optional loop data: images of the loop generators in the grading group.
#[derive(Clone, Debug)]
pub struct LoopData {
    pub epimorphism: Vec<GrpElt>,
    pub cutoff: Option<u32>,
}

/// A validated problem file.
#[derive(Clone, Debug, Deserialize)]
#[serde(try_from = "ProblemFile")]
pub struct Problem {
    pub group: FinAbGroup,
    pub structure: Structure,
    pub multiloop: Option<LoopData>,
}

impl Problem {
    /// The associative module: as given, or the envelope of the Lie action.
    pub fn rep(&self, tol: &Tolerance) -> gcover_core::Result<Rep> {
        match &self.structure {
            Structure::Associative(rep) => Ok(rep.clone()),
            Structure::Lie { lie, action } => envelope_from_lie(lie, action, tol),
        }
    }
}

fn matrix(path: &str, rows: &[Vec<ComplexLit>], n: usize) -> Result<ComplexMatrix, String> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(format!("{path}: expected a {n}x{n} matrix"));
    }
    let data = rows.iter().flatten().map(|z| z.0).collect();
    ComplexMatrix::from_row_major(n, n, data).map_err(|e| format!("{path}: {e}"))
}

fn element(path: &str, group: &FinAbGroup, coords: &[i64]) -> Result<GrpElt, String> {
    group.element(coords).map_err(|_| format!("{path}: expected {} coordinates", group.rank()))
}

impl TryFrom<ProblemFile> for Problem {
    type Error = String;

    fn try_from(f: ProblemFile) -> Result<Self, String> {
        let group = FinAbGroup::new(f.group.invariant_factors).map_err(|e| format!("group.invariant_factors: {e}"))?;
        let d = f.algebra.dim;
        if f.algebra.structure.len() != d {
            return Err(format!("algebra.structure: expected {d} rows, found {}", f.algebra.structure.len()));
        }
        let mut structure = Vec::with_capacity(d * d * d);
        for (i, row) in f.algebra.structure.iter().enumerate() {
            if row.len() != d {
                return Err(format!("algebra.structure[{i}]: expected {d} products, found {}", row.len()));
            }
            for (j, prod) in row.iter().enumerate() {
                if prod.len() != d {
                    return Err(format!("algebra.structure[{i}][{j}]: expected {d} coefficients, found {}", prod.len()));
                }
                structure.extend(prod.iter().map(|z| z.0));
            }
        }
        if f.algebra.grading.len() != d {
            return Err(format!("algebra.grading: expected {d} degrees, found {}", f.algebra.grading.len()));
        }
        let grading = f
            .algebra
            .grading
            .iter()
            .enumerate()
            .map(|(i, c)| element(&format!("algebra.grading[{i}]"), &group, c))
            .collect::<Result<Vec<_>, _>>()?;
        let n = f.module.dim;
        if f.module.action.len() != d {
            return Err(format!("module.action: expected {d} matrices, found {}", f.module.action.len()));
        }
        let action = f
            .module
            .action
            .iter()
            .enumerate()
            .map(|(i, m)| matrix(&format!("module.action[{i}]"), m, n))
            .collect::<Result<Vec<_>, _>>()?;
        let structure = if f.lie {
            if f.algebra.unit.is_some() {
                return Err("algebra.unit: a Lie algebra has no unit".into());
            }
            let lie = LieAlgebra::new(group.clone(), d, structure, grading).map_err(|e| format!("algebra: {e}"))?;
            Structure::Lie { lie, action }
        } else {
            let unit = f.algebra.unit.ok_or("algebra.unit: required for an associative algebra")?;
            if unit.len() != d {
                return Err(format!("algebra.unit: expected {d} coefficients, found {}", unit.len()));
            }
            let alg = GradedAlgebra::new(group.clone(), d, structure, unit.iter().map(|z| z.0).collect(), grading).map_err(|e| format!("algebra: {e}"))?;
            Structure::Associative(Rep::new(alg, action).map_err(|e| format!("module: {e}"))?)
        };
        let multiloop = match f.multiloop {
            None => None,
            Some(_) if !f.lie => return Err("multiloop: requires \"lie\": true".into()),
            Some(m) => Some(LoopData {
                epimorphism: m
                    .epimorphism
                    .iter()
                    .enumerate()
                    .map(|(i, c)| element(&format!("multiloop.epimorphism[{i}]"), &group, c))
                    .collect::<Result<Vec<_>, _>>()?,
                cutoff: m.cutoff,
            }),
        };
        Ok(Problem { group, structure, multiloop })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusFile {
    #[serde(rename = "L")]
    root_order: u64,
    orders: Vec<u64>,
    exponents: Vec<Vec<i64>>,
}

/// A quantum-torus spec `{"L", "orders", "exponents"}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(try_from = "TorusFile")]
pub struct TorusInput(pub QTorusSpec);

impl TryFrom<TorusFile> for TorusInput {
    type Error = String;

    fn try_from(f: TorusFile) -> Result<Self, String> {
        QTorusSpec::new(f.orders, f.root_order, f.exponents).map(TorusInput).map_err(|e| format!("exponents: {e}"))
    }
}

/// Rejected input, with the position where parsing stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl From<serde_json::Error> for SchemaError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        // serde_json appends " at line L column C"; the position is reported separately
        let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
        SchemaError { line: e.line(), column: e.column(), message }
    }
}

/// serde_json has no position for whole-document validation errors; those
/// messages start with a path such as `module.action[2]`, which is located in
/// the source text instead.
fn positioned(text: &str, e: serde_json::Error) -> SchemaError {
    let mut err = SchemaError::from(e);
    if err.line == 0 {
        let path = err.message.split(": ").next().unwrap_or("");
        let offset = locate(text, path).unwrap_or(0);
        let before = &text[..offset];
        err.line = before.matches('\n').count() + 1;
        err.column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    }
    err
}

enum Segment<'a> {
    Key(&'a str),
    Index(usize),
}

fn segments(path: &str) -> Option<Vec<Segment<'_>>> {
    let mut out = Vec::new();
    for part in path.split('.') {
        let (key, rest) = part.split_once('[').map_or((part, ""), |(k, r)| (k, r));
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        out.push(Segment::Key(key));
        for idx in rest.split('[') {
            if !idx.is_empty() {
                out.push(Segment::Index(idx.trim_end_matches(']').parse().ok()?));
            }
        }
    }
    Some(out)
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

/// End of the string literal starting at `i`.
fn skip_string(b: &[u8], mut i: usize) -> usize {
    i += 1;
    while i < b.len() {
        match b[i] {
            b'\\' => i += 2,
            b'"' => return i + 1,
            _ => i += 1,
        }
    }
    i
}

/// End of the value starting at `i`.
fn skip_value(b: &[u8], i: usize) -> usize {
    match b.get(i) {
        Some(b'"') => skip_string(b, i),
        Some(b'{') | Some(b'[') => {
            let mut depth = 0usize;
            let mut j = i;
            while j < b.len() {
                match b[j] {
                    b'"' => {
                        j = skip_string(b, j);
                        continue;
                    }
                    b'{' | b'[' => depth += 1,
                    b'}' | b']' => {
                        depth -= 1;
                        if depth == 0 {
                            return j + 1;
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            j
        }
        _ => {
            let mut j = i;
            while j < b.len() && !matches!(b[j], b',' | b']' | b'}') && !b[j].is_ascii_whitespace() {
                j += 1;
            }
            j
        }
    }
}

/// Byte offset of the value at `path` in a syntactically valid document.
fn locate(text: &str, path: &str) -> Option<usize> {
    let b = text.as_bytes();
    let mut i = skip_ws(b, 0);
    for seg in segments(path)? {
        match seg {
            Segment::Key(k) => {
                if b.get(i) != Some(&b'{') {
                    return None;
                }
                i = skip_ws(b, i + 1);
                loop {
                    let end = skip_string(b, i);
                    let key = text.get(i + 1..end.checked_sub(1)?)?;
                    i = skip_ws(b, skip_ws(b, end) + 1);
                    if key == k {
                        break;
                    }
                    i = skip_ws(b, skip_value(b, i));
                    if b.get(i) != Some(&b',') {
                        return None;
                    }
                    i = skip_ws(b, i + 1);
                }
            }
            Segment::Index(n) => {
                if b.get(i) != Some(&b'[') {
                    return None;
                }
                i = skip_ws(b, i + 1);
                for _ in 0..n {
                    i = skip_ws(b, skip_value(b, i));
                    if b.get(i) != Some(&b',') {
                        return None;
                    }
                    i = skip_ws(b, i + 1);
                }
            }
        }
    }
    Some(i)
}

pub fn parse_problem(text: &str) -> Result<Problem, SchemaError> {
    serde_json::from_str(text).map_err(|e| positioned(text, e))
}

pub fn parse_torus(text: &str) -> Result<TorusInput, SchemaError> {
    serde_json::from_str(text).map_err(|e| positioned(text, e))
}

/// Either kind of input file, told apart by the presence of `"exponents"`.
pub enum Input {
    Problem(Box<Problem>),
    Torus(TorusInput),
}

pub fn parse_input(text: &str) -> Result<Input, SchemaError> {
    let probe: serde_json::Value = serde_json::from_str(text).map_err(|e| positioned(text, e))?;
    if probe.get("exponents").is_some() {
        parse_torus(text).map(Input::Torus)
    } else {
        parse_problem(text).map(|p| Input::Problem(Box::new(p)))
    }
}
