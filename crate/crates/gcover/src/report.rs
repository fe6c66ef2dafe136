//! Command output: named checks and residuals, a JSON certificate, and plain tables.

use gcover_core::group::GrpElt;
use gcover_core::{ComplexMatrix, RootOfUnity, C64};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Magnitudes below this print and serialize as exact zero.
const DISPLAY_ZERO: f64 = 1e-12;

/// Accumulated output of one command.
#[derive(Debug, Default)]
pub struct Report {
    pub results: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
    /// The first check that failed, in execution order.
    pub first_failure: Option<String>,
    pub table: String,
}

impl Report {
    pub fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.to_string(), v);
    }

    pub fn residual(&mut self, key: &str, r: f64) {
        self.residuals.insert(key.to_string(), r);
    }

    /// Records a check; returns it so callers can stop early.
    pub fn check(&mut self, key: &str, ok: bool) -> bool {
        self.checks.insert(key.to_string(), ok);
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(key.to_string());
        }
        ok
    }

    pub fn pass(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.table.push_str(s.as_ref());
        self.table.push('\n');
    }

    /// Appends the check list in table form.
    pub fn check_lines(&mut self) {
        let lines: Vec<String> = self.checks.iter().map(|(k, ok)| format!("  [{}] {k}", if *ok { "ok" } else { "FAIL" })).collect();
        if !lines.is_empty() {
            self.line("checks:");
            for l in lines {
                self.line(l);
            }
        }
    }
}

/// Machine-readable record of a run. Maps are ordered, so equal inputs and
/// seed give byte-identical JSON.
#[derive(Debug, Serialize)]
pub struct Certificate {
    pub command: String,
    pub inputs_digest: String,
    pub tolerance: f64,
    pub seed: u64,
    pub results: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
    pub pass: bool,
    pub first_failure: Option<String>,
}

impl Certificate {
    pub fn new(command: &str, digest: String, tolerance: f64, seed: u64, r: Report) -> Self {
        Certificate {
            command: command.to_string(),
            inputs_digest: digest,
            tolerance,
            seed,
            pass: r.pass(),
            first_failure: r.first_failure,
            results: r.results,
            residuals: r.residuals,
            checks: r.checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// SHA-256 over the command line arguments and the bytes of every input file.
pub fn digest(args: &[String], files: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update((a.len() as u64).to_le_bytes());
        h.update(a.as_bytes());
    }
    for f in files {
        h.update((f.len() as u64).to_le_bytes());
        h.update(f);
    }
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn clean(x: f64) -> f64 {
    if x.abs() < DISPLAY_ZERO {
        0.0
    } else {
        x
    }
}

pub fn complex_json(z: C64) -> Value {
    json!([clean(z.re), clean(z.im)])
}

pub fn vector_json(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|z| complex_json(*z)).collect())
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(m.row(i))).collect())
}

pub fn element_json(g: &GrpElt) -> Value {
    json!(g.0)
}

pub fn root_json(z: RootOfUnity) -> Value {
    json!([z.order(), z.exponent()])
}

pub fn fmt_complex(z: C64) -> String {
    let (re, im) = (clean(z.re), clean(z.im));
    let num = |x: f64| {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".to_string()
        } else {
            s.to_string()
        }
    };
    let imag = |x: f64| match num(x).as_str() {
        "1" => "i".to_string(),
        s => format!("{s}i"),
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => num(re),
        (true, false) => format!("{}{}", if im < 0.0 { "-" } else { "" }, imag(im.abs())),
        (false, false) => format!("{}{}{}", num(re), if im < 0.0 { "-" } else { "+" }, imag(im.abs())),
    }
}

pub fn fmt_element(g: &GrpElt) -> String {
    let parts: Vec<String> = g.0.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Reduced row echelon basis of the column span of `q`: canonical, so equal
/// spans print identically whatever basis produced them.
pub fn canonical_basis(q: &ComplexMatrix) -> Vec<Vec<C64>> {
    let mut rows = q.columns();
    let n = q.rows();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm())) else { break };
        if rows[p][col].norm() < 1e-9 {
            continue;
        }
        rows.swap(r, p);
        let piv = rows[r][col];
        for z in rows[r].iter_mut() {
            *z /= piv;
        }
        rows[r][col] = C64::new(1.0, 0.0);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let f = row[col];
                for (z, p) in row.iter_mut().zip(&pivot_row) {
                    *z -= f * p;
                }
                row[col] = C64::new(0.0, 0.0);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    for row in &mut rows {
        for z in row.iter_mut() {
            *z = C64::new(clean(z.re), clean(z.im));
        }
    }
    rows
}

/// `span{e_1}` for coordinate vectors, otherwise explicit tuples.
pub fn fmt_span(q: &ComplexMatrix) -> String {
    let basis = canonical_basis(q);
    if basis.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> = basis
        .iter()
        .map(|v| {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != C64::new(0.0, 0.0)).collect();
            if nz.len() == 1 && v[nz[0]] == C64::new(1.0, 0.0) {
                format!("e_{}", nz[0] + 1)
            } else {
                let c: Vec<String> = v.iter().map(|z| fmt_complex(*z)).collect();
                format!("({})", c.join(", "))
            }
        })
        .collect();
    format!("span{{{}}}", parts.join(", "))
}

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut emit = |cells: Vec<&str>| {
        let line: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    emit(headers.to_vec());
    for r in rows {
        emit(r.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_complex(C64::new(1.0, 0.0)), "1");
        assert_eq!(fmt_complex(C64::new(-0.5, 0.8660254)), "-0.5+0.866025i");
        assert_eq!(fmt_complex(C64::new(1e-17, -1.0)), "-i");
        assert_eq!(fmt_complex(C64::new(2.0, 1.0)), "2+i");
        assert_eq!(fmt_complex(C64::new(-1e-17, 0.0)), "0");
    }

    #[test]
    fn spans_print_canonically() {
        let phase = C64::new(0.6, 0.8);
        let q = ComplexMatrix::from_columns(2, &[vec![phase, C64::new(0.0, 0.0)]]);
        assert_eq!(fmt_span(&q), "span{e_1}");
        let q = ComplexMatrix::from_columns(2, &[vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]]);
        assert_eq!(fmt_span(&q), "span{e_1, e_2}");
        let q = ComplexMatrix::from_columns(2, &[vec![C64::new(2.0, 0.0), C64::new(0.0, 2.0)]]);
        assert_eq!(fmt_span(&q), "span{(1, i)}");
    }

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = digest(&["thin".into()], &[b"{}"]);
        assert_eq!(a.len(), 64);
        assert_eq!(a, digest(&["thin".into()], &[b"{}"]));
        assert_ne!(a, digest(&["thin".into()], &[b"{ }"]));
        assert_ne!(digest(&["ab".into(), "c".into()], &[]), digest(&["a".into(), "bc".into()], &[]));
    }

    #[test]
    fn tables_align() {
        let t = table(&["g", "dim"], &[vec!["(0,0)".into(), "1".into()]]);
        assert_eq!(t, "g      dim\n(0,0)  1\n");
    }
}
