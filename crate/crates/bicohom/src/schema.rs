//! Versioned JSON documents describing inputs: real Lie-algebra
//! presentations, complex coframe presentations, and raw double complexes.
//!
//! All numbers that must survive a round trip exactly are carried as
//! strings: rationals as `"num/den"` (or `"num"`), Gaussian rationals as
//! `"a/b"`, `"c/d i"`, or `"a/b+c/d i"` with optional whitespace and with
//! the unit imaginary written `i`/`-i` (the canonical writer emits the
//! compact forms of [`scalar_to_string`], e.g. `"1/2-3i"`).
//!
//! Generator indices (`i`, `j`, `k` in bracket and coframe terms) are
//! **1-based**, matching the usual notation `e_1, …, e_n` and
//! `φ^1, …, φ^m`.  Bidegrees (`p`, `q` in raw double-complex blocks) are
//! **0-based**, matching the rectangle `[0,P]×[0,Q]`.
//!
//! Parsing here is purely syntactic: a successfully realized input may
//! still fail the semantic checks (Jacobi identity, integrability, the
//! double-complex identities), which its consumers perform and report
//! separately.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bicomplex::Bicomplex;
use crate::lie::{ComplexCoframePresentation, ComplexStructure, LieAlgebraPresentation};
use crate::linalg::{scalar_to_string, QMatrix, Rational, Scalar};

/// The document version this build reads and writes.
pub const SCHEMA_VERSION: u64 = 1;

/// Generators are addressed by 32-bit monomial masks, so a presentation
/// may carry at most this many (real) generators.
const MAX_GENERATORS: usize = 30;

/// Upper bounds keeping hostile raw-bicomplex documents from exhausting
/// memory before any mathematics runs.
const MAX_RECTANGLE_CELLS: usize = 4096;
const MAX_CELL_DIM: usize = 65536;

/// Failures while reading or realizing an input document.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SchemaError {
    /// The text is not JSON of the documented shape.
    #[error("JSON error: {0}")]
    Json(String),
    /// The document declares a version this build does not read.
    #[error("unsupported schema_version {found} (this build reads version {SCHEMA_VERSION})")]
    Version { found: u64 },
    /// A scalar string does not match the grammar.
    #[error("invalid scalar {text:?}: {reason}")]
    Scalar { text: String, reason: &'static str },
    /// The document is structurally inconsistent (index ranges, shapes).
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> SchemaError {
    SchemaError::Invalid(msg.into())
}

// ---------------------------------------------------------------------------
// scalar grammar
// ---------------------------------------------------------------------------

fn parse_integer(text: &str, digits: &str) -> Result<BigInt, SchemaError> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(SchemaError::Scalar {
            text: text.to_owned(),
            reason: "expected an integer",
        });
    }
    Ok(BigInt::from_str(digits).expect("digit strings parse"))
}

fn parse_fraction(text: &str, part: &str) -> Result<Rational, SchemaError> {
    let (negative, body) = match part.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, part.strip_prefix('+').unwrap_or(part)),
    };
    let (num_str, den_str) = match body.split_once('/') {
        None => (body, "1"),
        Some((n, d)) => (n, d),
    };
    let num = parse_integer(text, num_str)?;
    let den = parse_integer(text, den_str)?;
    if den.is_zero() {
        return Err(SchemaError::Scalar {
            text: text.to_owned(),
            reason: "zero denominator",
        });
    }
    let num = if negative { -num } else { num };
    Ok(Rational::new(num, den))
}

/// Parse `"num/den"` or `"num"` (optional sign, optional whitespace).
pub fn parse_rational(text: &str) -> Result<Rational, SchemaError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(SchemaError::Scalar {
            text: text.to_owned(),
            reason: "empty",
        });
    }
    parse_fraction(text, &compact)
}

/// Parse a Gaussian rational: a real fraction, an imaginary fraction
/// suffixed `i` (with `i`/`-i` for the units), or `real±imaginary` in that
/// order, e.g. `"3"`, `"-2/3"`, `"i"`, `"5/2i"`, `"1/2-3i"`, `"2/3 + 1/2 i"`.
pub fn parse_scalar(text: &str) -> Result<Scalar, SchemaError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let reject = |reason: &'static str| SchemaError::Scalar {
        text: text.to_owned(),
        reason,
    };
    if compact.is_empty() {
        return Err(reject("empty"));
    }
    // any sign after the first byte separates the two terms
    let mut split = None;
    for (pos, b) in compact.bytes().enumerate().skip(1) {
        if b == b'+' || b == b'-' {
            if split.is_some() {
                return Err(reject("more than two terms"));
            }
            split = Some(pos);
        }
    }
    let (first, second) = match split {
        None => (compact.as_str(), None),
        Some(pos) => (&compact[..pos], Some(&compact[pos..])),
    };
    let imaginary_value = |part: &str| -> Result<Rational, SchemaError> {
        use num_traits::One;
        match part {
            "" | "+" => Ok(Rational::one()),
            "-" => Ok(-Rational::one()),
            body => parse_fraction(text, body),
        }
    };
    match (first.strip_suffix('i'), second) {
        // a single term
        (None, None) => Ok(Scalar::from(parse_fraction(text, first)?)),
        (Some(body), None) => Ok(Scalar::new(Rational::zero(), imaginary_value(body)?)),
        // two terms: real first, imaginary second
        (None, Some(part)) => match part.strip_suffix('i') {
            None => Err(reject("two real terms (did you mean a single fraction?)")),
            Some(body) => Ok(Scalar::new(
                parse_fraction(text, first)?,
                imaginary_value(body)?,
            )),
        },
        (Some(_), Some(_)) => Err(reject("the real term must come first")),
    }
}

// ---------------------------------------------------------------------------
// document types
// ---------------------------------------------------------------------------

/// A parsed input document (tagged by `"type"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum InputDoc {
    Real(RealDoc),
    Coframe(CoframeDoc),
    Bicomplex(BicomplexDoc),
}

/// `{"type":"real", "n":…, "brackets":[…], "J":[[…]]}` — a Lie algebra by
/// rational structure constants, with an optional almost-complex structure
/// as an `n×n` rational matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealDoc {
    pub schema_version: u64,
    pub n: usize,
    pub brackets: Vec<BracketTerm>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<String>>>,
}

/// One structure constant: `[x_i, x_j] += c · x_k` (1-based indices).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

/// `{"type":"coframe", "m":…, "d":[…]}` — structure equations
/// `dφ^k = Σ c · φ^i∧φ^j + Σ c · φ^i∧φ̄^j` (1-based indices; the
/// conjugate equations are implied).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoframeDoc {
    pub schema_version: u64,
    pub m: usize,
    pub d: Vec<CoframeRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoframeRow {
    pub k: usize,
    pub terms: Vec<CoframeTerm>,
}

/// One summand of `dφ^k`: `c · φ^i∧φ^j` when `bar_j` is false,
/// `c · φ^i∧φ̄^j` when true.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoframeTerm {
    pub i: usize,
    pub j: usize,
    pub bar_j: bool,
    pub c: String,
}

/// `{"type":"bicomplex", "P":…, "Q":…, "dims":…, "del":…, "delbar":…}` —
/// a raw double complex on `[0,P]×[0,Q]`.  `dims[p][q]` is the dimension
/// at `(p,q)`; `del`/`delbar` list the nonzero blocks (absent blocks are
/// zero maps).  Conjugation data, if any, is not carried by this format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicomplexDoc {
    pub schema_version: u64,
    #[serde(rename = "P")]
    pub p_max: usize,
    #[serde(rename = "Q")]
    pub q_max: usize,
    pub dims: Vec<Vec<usize>>,
    pub del: Vec<BlockDoc>,
    pub delbar: Vec<BlockDoc>,
}

/// One matrix block of a raw double complex: the map out of `(p,q)`
/// (0-based), as a `target_dim × source_dim` array of scalar strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub p: usize,
    pub q: usize,
    pub matrix: Vec<Vec<String>>,
}

/// A syntactically valid input turned into engine objects.  Semantic
/// validation is deliberately not performed here: consumers distinguish
/// malformed documents (this module's errors) from mathematically invalid
/// ones (Jacobi violations, non-integrability, broken complex identities).
#[derive(Clone, Debug)]
pub enum RealizedInput {
    Real {
        algebra: LieAlgebraPresentation,
        /// The raw `J` matrix, if the document carried one; validate with
        /// [`ComplexStructure::new`].
        complex_structure: Option<QMatrix>,
    },
    Coframe(ComplexCoframePresentation),
    Raw(Bicomplex),
}

impl InputDoc {
    /// Parse a document, checking `schema_version` before anything else.
    pub fn parse(text: &str) -> Result<InputDoc, SchemaError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
        let version = value
            .get("schema_version")
            .ok_or_else(|| invalid("missing mandatory field \"schema_version\""))?
            .as_u64()
            .ok_or_else(|| invalid("\"schema_version\" must be a nonnegative integer"))?;
        if version != SCHEMA_VERSION {
            return Err(SchemaError::Version { found: version });
        }
        serde_json::from_value(value).map_err(|e| SchemaError::Json(e.to_string()))
    }

    /// Deterministic pretty rendering (fixed field order, two-space indent).
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Turn the document into engine objects (syntactic checks only).
    pub fn realize(&self) -> Result<RealizedInput, SchemaError> {
        match self {
            InputDoc::Real(doc) => realize_real(doc),
            InputDoc::Coframe(doc) => realize_coframe(doc),
            InputDoc::Bicomplex(doc) => realize_bicomplex(doc),
        }
    }

    /// Serialize a real presentation (1-based indices, deterministic order).
    pub fn from_real(
        algebra: &LieAlgebraPresentation,
        complex_structure: Option<&ComplexStructure>,
    ) -> InputDoc {
        let n = algebra.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in algebra.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        brackets.push(BracketTerm {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            c: c.to_string(),
                        });
                    }
                }
            }
        }
        let j = complex_structure.map(|cs| {
            let m = cs.matrix();
            (0..m.rows())
                .map(|r| {
                    (0..m.cols())
                        .map(|c| {
                            let z = m.get(r, c);
                            debug_assert!(z.im.is_zero(), "J must be a real matrix");
                            z.re.to_string()
                        })
                        .collect()
                })
                .collect()
        });
        InputDoc::Real(RealDoc {
            schema_version: SCHEMA_VERSION,
            n,
            brackets,
            j,
        })
    }

    /// Serialize a coframe presentation (1-based indices, holomorphic terms
    /// before mixed terms within each equation).
    pub fn from_coframe(coframe: &ComplexCoframePresentation) -> InputDoc {
        let mut rows: BTreeMap<usize, Vec<CoframeTerm>> = BTreeMap::new();
        for (k, s, t, c) in coframe.holomorphic_terms() {
            rows.entry(k).or_default().push(CoframeTerm {
                i: s + 1,
                j: t + 1,
                bar_j: false,
                c: scalar_to_string(c),
            });
        }
        for (k, s, t, c) in coframe.mixed_terms() {
            rows.entry(k).or_default().push(CoframeTerm {
                i: s + 1,
                j: t + 1,
                bar_j: true,
                c: scalar_to_string(c),
            });
        }
        InputDoc::Coframe(CoframeDoc {
            schema_version: SCHEMA_VERSION,
            m: coframe.dim(),
            d: rows
                .into_iter()
                .map(|(k, terms)| CoframeRow { k: k + 1, terms })
                .collect(),
        })
    }

    /// Serialize a raw double complex (nonzero blocks only; any conjugation
    /// data is dropped — this format does not carry it).
    pub fn from_bicomplex(b: &Bicomplex) -> InputDoc {
        let matrix_strings = |m: &QMatrix| -> Vec<Vec<String>> {
            (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| scalar_to_string(m.get(r, c))).collect())
                .collect()
        };
        let mut del = Vec::new();
        let mut delbar = Vec::new();
        for p in 0..=b.pmax() {
            for q in 0..=b.qmax() {
                if p < b.pmax() {
                    let m = b.del(p, q);
                    if !m.is_zero() {
                        del.push(BlockDoc {
                            p,
                            q,
                            matrix: matrix_strings(m),
                        });
                    }
                }
                if q < b.qmax() {
                    let m = b.delbar(p, q);
                    if !m.is_zero() {
                        delbar.push(BlockDoc {
                            p,
                            q,
                            matrix: matrix_strings(m),
                        });
                    }
                }
            }
        }
        InputDoc::Bicomplex(BicomplexDoc {
            schema_version: SCHEMA_VERSION,
            p_max: b.pmax(),
            q_max: b.qmax(),
            dims: (0..=b.pmax())
                .map(|p| (0..=b.qmax()).map(|q| b.dim(p, q)).collect())
                .collect(),
            del,
            delbar,
        })
    }
}

fn check_generator_index(what: &str, value: usize, n: usize) -> Result<usize, SchemaError> {
    if value == 0 || value > n {
        return Err(invalid(format!(
            "{what} index {value} out of range (indices are 1-based, at most {n})"
        )));
    }
    Ok(value - 1)
}

fn realize_real(doc: &RealDoc) -> Result<RealizedInput, SchemaError> {
    if doc.n == 0 {
        return Err(invalid("\"n\" must be at least 1"));
    }
    if doc.n > MAX_GENERATORS {
        return Err(invalid(format!(
            "\"n\" must be at most {MAX_GENERATORS} (monomials are 32-bit masks)"
        )));
    }
    let mut algebra = LieAlgebraPresentation::new(doc.n);
    for term in &doc.brackets {
        let i = check_generator_index("bracket", term.i, doc.n)?;
        let j = check_generator_index("bracket", term.j, doc.n)?;
        let k = check_generator_index("bracket", term.k, doc.n)?;
        let c = parse_rational(&term.c)?;
        if i == j && !c.is_zero() {
            return Err(invalid(format!(
                "bracket [x_{0}, x_{0}] must vanish; remove the term",
                term.i
            )));
        }
        algebra.add_bracket_term(i, j, k, c);
    }
    let complex_structure = match &doc.j {
        None => None,
        Some(rows) => {
            if rows.len() != doc.n || rows.iter().any(|r| r.len() != doc.n) {
                return Err(invalid(format!("\"J\" must be an {0}x{0} matrix", doc.n)));
            }
            let mut entries = Vec::with_capacity(doc.n);
            for row in rows {
                let mut out = Vec::with_capacity(doc.n);
                for cell in row {
                    out.push(Scalar::from(parse_rational(cell)?));
                }
                entries.push(out);
            }
            Some(QMatrix::from_fn(doc.n, doc.n, |r, c| entries[r][c].clone()))
        }
    };
    Ok(RealizedInput::Real {
        algebra,
        complex_structure,
    })
}

fn realize_coframe(doc: &CoframeDoc) -> Result<RealizedInput, SchemaError> {
    if doc.m == 0 {
        return Err(invalid("\"m\" must be at least 1"));
    }
    if doc.m > MAX_GENERATORS / 2 {
        return Err(invalid(format!(
            "\"m\" must be at most {} (2m generators as 32-bit masks)",
            MAX_GENERATORS / 2
        )));
    }
    let mut coframe = ComplexCoframePresentation::new(doc.m);
    for row in &doc.d {
        let k = check_generator_index("equation", row.k, doc.m)?;
        for term in &row.terms {
            let i = check_generator_index("coframe", term.i, doc.m)?;
            let j = check_generator_index("coframe", term.j, doc.m)?;
            let c = parse_scalar(&term.c)?;
            if term.bar_j {
                coframe.add_mixed_term(k, i, j, c);
            } else {
                if i == j && !c.is_zero() {
                    return Err(invalid(format!(
                        "the term φ^{0}∧φ^{0} vanishes; remove it",
                        term.i
                    )));
                }
                coframe.add_holomorphic_term(k, i, j, c);
            }
        }
    }
    Ok(RealizedInput::Coframe(coframe))
}

fn realize_bicomplex(doc: &BicomplexDoc) -> Result<RealizedInput, SchemaError> {
    let (pmax, qmax) = (doc.p_max, doc.q_max);
    if (pmax + 1).saturating_mul(qmax + 1) > MAX_RECTANGLE_CELLS {
        return Err(invalid(format!(
            "rectangle [0,{pmax}]x[0,{qmax}] exceeds {MAX_RECTANGLE_CELLS} cells"
        )));
    }
    if doc.dims.len() != pmax + 1 || doc.dims.iter().any(|col| col.len() != qmax + 1) {
        return Err(invalid(format!(
            "\"dims\" must be a (P+1)x(Q+1) = {}x{} grid",
            pmax + 1,
            qmax + 1
        )));
    }
    if doc.dims.iter().flatten().any(|&d| d > MAX_CELL_DIM) {
        return Err(invalid(format!("cell dimensions must be at most {MAX_CELL_DIM}")));
    }
    let dim = |p: usize, q: usize| doc.dims[p][q];
    let mut del: Vec<Vec<QMatrix>> = (0..=pmax)
        .map(|p| {
            (0..=qmax)
                .map(|q| {
                    let tgt = if p < pmax { dim(p + 1, q) } else { 0 };
                    QMatrix::zeros(tgt, dim(p, q))
                })
                .collect()
        })
        .collect();
    let mut delbar: Vec<Vec<QMatrix>> = (0..=pmax)
        .map(|p| {
            (0..=qmax)
                .map(|q| {
                    let tgt = if q < qmax { dim(p, q + 1) } else { 0 };
                    QMatrix::zeros(tgt, dim(p, q))
                })
                .collect()
        })
        .collect();
    let fill = |map_name: &str,
                    blocks: &[BlockDoc],
                    grid: &mut Vec<Vec<QMatrix>>,
                    step: (usize, usize)|
     -> Result<(), SchemaError> {
        let mut seen = std::collections::BTreeSet::new();
        for block in blocks {
            let (p, q) = (block.p, block.q);
            if p + step.0 > pmax || q + step.1 > qmax {
                return Err(invalid(format!(
                    "{map_name} block at ({p},{q}) maps outside the rectangle"
                )));
            }
            if !seen.insert((p, q)) {
                return Err(invalid(format!("duplicate {map_name} block at ({p},{q})")));
            }
            let (rows, cols) = (dim(p + step.0, q + step.1), dim(p, q));
            if block.matrix.len() != rows || block.matrix.iter().any(|r| r.len() != cols) {
                return Err(invalid(format!(
                    "{map_name} block at ({p},{q}) must be a {rows}x{cols} matrix"
                )));
            }
            let mut entries = Vec::with_capacity(rows);
            for row in &block.matrix {
                let mut out = Vec::with_capacity(cols);
                for cell in row {
                    out.push(parse_scalar(cell)?);
                }
                entries.push(out);
            }
            grid[p][q] = QMatrix::from_fn(rows, cols, |r, c| entries[r][c].clone());
        }
        Ok(())
    };
    fill("del", &doc.del, &mut del, (1, 0))?;
    fill("delbar", &doc.delbar, &mut delbar, (0, 1))?;
    let complex = Bicomplex::from_parts(doc.dims.clone(), del, delbar)
        .expect("shapes were checked block by block");
    Ok(RealizedInput::Raw(complex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::builtin;
    use crate::linalg::{scalar, scalar_i};

    #[test]
    fn scalar_grammar_accepts_all_documented_forms() {
        let cases: Vec<(&str, Scalar)> = vec![
            ("0", scalar(0)),
            ("3", scalar(3)),
            ("-3/2", scalar_i(-3, 0) / scalar(2)),
            ("i", scalar_i(0, 1)),
            ("-i", scalar_i(0, -1)),
            ("2i", scalar_i(0, 2)),
            ("-2i", scalar_i(0, -2)),
            ("1+i", scalar_i(1, 1)),
            ("1/2-3i", scalar_i(1, -6) / scalar(2)),
            ("2/3 + 1/2 i", scalar_i(4, 3) / scalar(6)),
            (" -1/2 - 1/2 i ", scalar_i(-1, -1) / scalar(2)),
            ("+5", scalar(5)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_scalar(text).unwrap(), want, "parsing {text:?}");
        }
        // the canonical writer round-trips
        for z in [
            scalar(0),
            scalar(-7),
            scalar_i(2, 5),
            scalar_i(0, -1),
            scalar_i(1, -6) / scalar(4),
        ] {
            assert_eq!(parse_scalar(&scalar_to_string(&z)).unwrap(), z);
        }
        assert_eq!(
            parse_rational("-22/6").unwrap(),
            Rational::new((-11).into(), 3.into())
        );
    }

    #[test]
    fn scalar_grammar_rejects_malformed_text() {
        for text in [
            "", " ", "1//2", "1/0", "x", "1x", "2+3", "i+i", "3i+1", "1+2+3i", "+-1", "1/-2",
            "1.5", "i2",
        ] {
            assert!(
                matches!(parse_scalar(text), Err(SchemaError::Scalar { .. })),
                "{text:?} should be rejected"
            );
        }
        assert!(matches!(
            parse_rational("1+i"),
            Err(SchemaError::Scalar { .. })
        ));
    }

    #[test]
    fn real_document_round_trips() {
        let example = builtin("iwasawa-real").unwrap();
        let algebra = example.real_algebra().unwrap();
        let j = ComplexStructure::standard(3);
        let doc = InputDoc::from_real(algebra, Some(&j));
        let text = doc.to_json_string();
        let reparsed = InputDoc::parse(&text).unwrap();
        assert_eq!(reparsed, doc);
        match reparsed.realize().unwrap() {
            RealizedInput::Real {
                algebra: got,
                complex_structure: Some(matrix),
            } => {
                assert_eq!(&got, algebra);
                assert_eq!(&matrix, j.matrix());
                assert!(got.jacobi_check().is_none());
            }
            other => panic!("wrong realization: {other:?}"),
        }
    }

    #[test]
    fn coframe_document_round_trips() {
        let example = builtin("iwasawa").unwrap();
        let coframe = example.coframe().unwrap();
        let doc = InputDoc::from_coframe(coframe);
        let text = doc.to_json_string();
        let reparsed = InputDoc::parse(&text).unwrap();
        assert_eq!(reparsed, doc);
        match reparsed.realize().unwrap() {
            RealizedInput::Coframe(got) => assert_eq!(&got, coframe),
            other => panic!("wrong realization: {other:?}"),
        }
    }

    #[test]
    fn bicomplex_document_round_trips() {
        let complex = builtin("kodaira-thurston").unwrap().bicomplex().unwrap();
        let doc = InputDoc::from_bicomplex(&complex);
        let reparsed = InputDoc::parse(&doc.to_json_string()).unwrap();
        assert_eq!(reparsed, doc);
        let raw = match reparsed.realize().unwrap() {
            RealizedInput::Raw(b) => b,
            other => panic!("wrong realization: {other:?}"),
        };
        assert_eq!(raw.pmax(), complex.pmax());
        assert_eq!(raw.qmax(), complex.qmax());
        for p in 0..=complex.pmax() {
            for q in 0..=complex.qmax() {
                assert_eq!(raw.dim(p, q), complex.dim(p, q));
                assert_eq!(raw.del(p, q), complex.del(p, q));
                assert_eq!(raw.delbar(p, q), complex.delbar(p, q));
            }
        }
        assert!(raw.validate().is_empty());
        // the raw format does not carry conjugation data
        assert!(complex.has_conjugation());
        assert!(!raw.has_conjugation());
    }

    #[test]
    fn handwritten_documents_realize() {
        let real = r#"{
            "type": "real", "schema_version": 1, "n": 3,
            "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}]
        }"#;
        match InputDoc::parse(real).unwrap().realize().unwrap() {
            RealizedInput::Real { algebra, complex_structure } => {
                assert!(algebra.jacobi_check().is_none());
                assert_eq!(algebra.bracket_basis(0, 1)[2], Rational::from_integer(1.into()));
                assert!(complex_structure.is_none());
            }
            other => panic!("wrong realization: {other:?}"),
        }
        let coframe = r#"{
            "type": "coframe", "schema_version": 1, "m": 3,
            "d": [{"k": 3, "terms": [{"i": 1, "j": 2, "bar_j": false, "c": "-1"}]}]
        }"#;
        match InputDoc::parse(coframe).unwrap().realize().unwrap() {
            RealizedInput::Coframe(got) => {
                assert_eq!(&got, builtin("iwasawa").unwrap().coframe().unwrap());
            }
            other => panic!("wrong realization: {other:?}"),
        }
        // a full square on [0,1]^2 (the sign on del(0,1) anticommutes)
        let raw = r#"{
            "type": "bicomplex", "schema_version": 1, "P": 1, "Q": 1,
            "dims": [[1, 1], [1, 1]],
            "del": [{"p": 0, "q": 0, "matrix": [["1"]]},
                     {"p": 0, "q": 1, "matrix": [["-1"]]}],
            "delbar": [{"p": 0, "q": 0, "matrix": [["1"]]},
                        {"p": 1, "q": 0, "matrix": [["1"]]}]
        }"#;
        match InputDoc::parse(raw).unwrap().realize().unwrap() {
            RealizedInput::Raw(b) => assert!(b.validate().is_empty()),
            other => panic!("wrong realization: {other:?}"),
        }
    }

    #[test]
    fn version_gate_and_structural_rejections() {
        let version2 = r#"{"type": "real", "schema_version": 2, "n": 1, "brackets": []}"#;
        assert_eq!(
            InputDoc::parse(version2).unwrap_err(),
            SchemaError::Version { found: 2 }
        );
        let missing = r#"{"type": "real", "n": 1, "brackets": []}"#;
        assert!(matches!(
            InputDoc::parse(missing).unwrap_err(),
            SchemaError::Invalid(_)
        ));
        let unknown_field =
            r#"{"type": "real", "schema_version": 1, "n": 1, "brackets": [], "extra": 0}"#;
        assert!(matches!(
            InputDoc::parse(unknown_field).unwrap_err(),
            SchemaError::Json(_)
        ));
        let bad_type = r#"{"type": "simplicial", "schema_version": 1}"#;
        assert!(matches!(
            InputDoc::parse(bad_type).unwrap_err(),
            SchemaError::Json(_)
        ));
        let not_an_object = r#"[1, 2, 3]"#;
        assert!(matches!(
            InputDoc::parse(not_an_object).unwrap_err(),
            SchemaError::Invalid(_)
        ));

        let reject = |text: &str, needle: &str| {
            let err = InputDoc::parse(text).unwrap().realize().unwrap_err();
            match err {
                SchemaError::Invalid(msg) => {
                    assert!(msg.contains(needle), "{msg:?} should mention {needle:?}")
                }
                other => panic!("expected Invalid, got {other:?}"),
            }
        };
        reject(
            r#"{"type": "real", "schema_version": 1, "n": 2,
                "brackets": [{"i": 0, "j": 1, "k": 2, "c": "1"}]}"#,
            "1-based",
        );
        reject(
            r#"{"type": "real", "schema_version": 1, "n": 2,
                "brackets": [{"i": 1, "j": 1, "k": 2, "c": "1"}]}"#,
            "must vanish",
        );
        reject(
            r#"{"type": "real", "schema_version": 1, "n": 2, "brackets": [],
                "J": [["0"], ["1"]]}"#,
            "2x2",
        );
        reject(
            r#"{"type": "coframe", "schema_version": 1, "m": 2,
                "d": [{"k": 1, "terms": [{"i": 2, "j": 2, "bar_j": false, "c": "1"}]}]}"#,
            "vanishes",
        );
        reject(
            r#"{"type": "bicomplex", "schema_version": 1, "P": 1, "Q": 0,
                "dims": [[1]], "del": [], "delbar": []}"#,
            "grid",
        );
        reject(
            r#"{"type": "bicomplex", "schema_version": 1, "P": 0, "Q": 0,
                "dims": [[1]], "del": [{"p": 0, "q": 0, "matrix": [["1"]]}], "delbar": []}"#,
            "outside the rectangle",
        );
        reject(
            r#"{"type": "bicomplex", "schema_version": 1, "P": 1, "Q": 0,
                "dims": [[1], [1]],
                "del": [{"p": 0, "q": 0, "matrix": [["1"]]},
                         {"p": 0, "q": 0, "matrix": [["2"]]}],
                "delbar": []}"#,
            "duplicate",
        );
        reject(
            r#"{"type": "bicomplex", "schema_version": 1, "P": 1, "Q": 0,
                "dims": [[2], [1]],
                "del": [{"p": 0, "q": 0, "matrix": [["1"]]}],
                "delbar": []}"#,
            "1x2 matrix",
        );
    }
}
