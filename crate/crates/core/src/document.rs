// SPDX-License-Identifier: Apache-2.0

//! JSON documents describing brackets and coordinate maps.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bracket::{CoordinateMap, HomogeneousBracket};
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::expr::{parse_diffpoly, parse_scalar};
use crate::lowdegree::{canonical_k2, potemin_build};
use crate::scalar::Scalar;
use crate::suite::PoteminData;
use crate::tensor::{Matrix, Tensor3};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Coefficients listed entry by entry.
    #[default]
    Raw,
    /// `∂ ∘ g ∘ ∂` from a skew matrix `g`.
    CanonicalK2,
    /// `∂(g∂ + c u_x)∂` from a symmetric `g` and `c^{ij}_l`.
    Potemin,
}

/// One coefficient `P_s^{ij}` with 1-based `i, j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub s: u32,
    pub i: usize,
    pub j: usize,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDocument {
    pub n: usize,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<String>>,
    #[serde(default)]
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<Entry>,
    /// `g[i][j] = g^{ij}` for the generated constructions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<String>>>,
    /// `c[l][i][j] = c^{ij}_l` for the Potëmin construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<Vec<String>>>>,
}

/// A bracket read from a document, with the construction data it came from.
#[derive(Clone, Debug)]
pub struct LoadedBracket {
    pub bracket: HomogeneousBracket,
    pub coordinates: Vec<String>,
    pub potemin: Option<PoteminData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub forward: Vec<String>,
    pub inverse: Vec<String>,
}

/// Locates strings of a JSON source by scanning forward in document order.
struct Locator<'a> {
    file: &'a str,
    text: &'a str,
    cursor: usize,
}

impl<'a> Locator<'a> {
    fn new(file: &'a str, text: &'a str) -> Self {
        Locator { file, text, cursor: 0 }
    }

    fn line_of(&self, offset: usize) -> usize {
        self.text[..offset].matches('\n').count() + 1
    }

    /// Line of the next occurrence of `value` as a JSON string literal.
    fn next(&mut self, value: &str) -> Option<usize> {
        let needle = serde_json::to_string(value).ok()?;
        let at = self.text[self.cursor..].find(&needle)? + self.cursor;
        self.cursor = at + needle.len();
        Some(self.line_of(at))
    }

    /// Line of the first occurrence of the object key `key`.
    fn key(&self, key: &str) -> Option<usize> {
        let needle = format!("\"{key}\"");
        self.text.find(&needle).map(|at| self.line_of(at))
    }

    fn error(&self, line: Option<usize>, message: impl Into<String>) -> Error {
        Error::Input {
            file: self.file.to_owned(),
            line,
            message: message.into(),
        }
    }
}

fn json_error(file: &str, e: serde_json::Error) -> Error {
    Error::Input {
        file: file.to_owned(),
        line: (e.line() > 0).then_some(e.line()),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input {
        file: path.display().to_string(),
        line: None,
        message: e.to_string(),
    })
}

fn parse_matrix(loc: &mut Locator, what: &str, rows: &[Vec<String>], n: usize) -> Result<Matrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(loc.error(loc.key(what), format!("`{what}` must be a {n}x{n} matrix")));
    }
    let mut out = Vec::with_capacity(n);
    for row in rows {
        let mut cells = Vec::with_capacity(n);
        for cell in row {
            let line = loc.next(cell);
            cells.push(parse_scalar(cell).map_err(|e| loc.error(line, format!("`{cell}`: {e}")))?);
        }
        out.push(cells);
    }
    Matrix::from_rows(out)
}

impl BracketDocument {
    pub fn from_json(text: &str, file: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_error(file, e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// A raw document listing every nonzero coefficient of `b`.
    pub fn from_bracket(b: &HomogeneousBracket) -> Self {
        let mut entries = Vec::new();
        for s in (0..=b.degree()).rev() {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    let p = b.get(s, i, j);
                    if !p.is_zero() {
                        entries.push(Entry {
                            s,
                            i: i + 1,
                            j: j + 1,
                            expr: p.to_string(),
                        });
                    }
                }
            }
        }
        BracketDocument {
            n: b.dim(),
            k: b.degree(),
            coordinates: None,
            construction: Construction::Raw,
            entries,
            g: None,
            c: None,
        }
    }

    pub fn load(path: &Path) -> Result<LoadedBracket> {
        let file = path.display().to_string();
        let text = read(path)?;
        Self::from_json(&text, &file)?.build(&text, &file)
    }

    pub fn parse(text: &str, file: &str) -> Result<LoadedBracket> {
        Self::from_json(text, file)?.build(text, file)
    }

    /// Validate against the schema and construct the bracket; `text` is the
    /// source the document was read from, used for line numbers.
    pub fn build(&self, text: &str, file: &str) -> Result<LoadedBracket> {
        let mut loc = Locator::new(file, text);
        let (n, k) = (self.n, self.k);
        if n == 0 {
            return Err(loc.error(loc.key("n"), "dimension `n` must be at least 1"));
        }
        if k == 0 {
            return Err(loc.error(loc.key("k"), "degree `k` must be at least 1"));
        }
        let coordinates = match &self.coordinates {
            Some(names) if names.len() != n => {
                return Err(loc.error(loc.key("coordinates"), format!("expected {n} coordinate names")))
            }
            Some(names) => names.clone(),
            None => (1..=n).map(|i| format!("u{i}")).collect(),
        };
        let unused = |field: &str, present: bool| -> Result<()> {
            if present {
                Err(loc.error(
                    loc.key(field),
                    format!("`{field}` is not used by the {:?} construction", self.construction),
                ))
            } else {
                Ok(())
            }
        };
        let (bracket, potemin) = match self.construction {
            Construction::Raw => {
                unused("g", self.g.is_some())?;
                unused("c", self.c.is_some())?;
                (self.raw(&mut loc)?, None)
            }
            Construction::CanonicalK2 => {
                unused("entries", !self.entries.is_empty())?;
                unused("c", self.c.is_some())?;
                if k != 2 {
                    return Err(loc.error(loc.key("k"), "canonical_k2 requires k = 2"));
                }
                let rows = self.g.as_ref().ok_or_else(|| loc.error(None, "canonical_k2 requires `g`"))?;
                let g = parse_matrix(&mut loc, "g", rows, n)?;
                let b = canonical_k2(&g).map_err(|e| loc.error(loc.key("g"), e.to_string()))?;
                (b, None)
            }
            Construction::Potemin => {
                unused("entries", !self.entries.is_empty())?;
                if k != 3 {
                    return Err(loc.error(loc.key("k"), "potemin requires k = 3"));
                }
                let rows = self.g.as_ref().ok_or_else(|| loc.error(None, "potemin requires `g`"))?;
                let g = parse_matrix(&mut loc, "g", rows, n)?;
                let layers = self.c.as_ref().ok_or_else(|| loc.error(None, "potemin requires `c`"))?;
                if layers.len() != n {
                    return Err(loc.error(loc.key("c"), format!("`c` must hold {n} matrices, one per lower index")));
                }
                let mats = layers
                    .iter()
                    .map(|m| parse_matrix(&mut loc, "c", m, n))
                    .collect::<Result<Vec<Matrix>>>()?;
                let c = Tensor3::from_fn(n, |i, j, l| mats[l].get(i, j).clone());
                let b = potemin_build(&g, &c).map_err(|e| loc.error(loc.key("g"), e.to_string()))?;
                (b, Some(PoteminData { g, c }))
            }
        };
        Ok(LoadedBracket {
            bracket,
            coordinates,
            potemin,
        })
    }

    fn raw(&self, loc: &mut Locator) -> Result<HomogeneousBracket> {
        let (n, k) = (self.n, self.k);
        let mut b = HomogeneousBracket::zero(n, k);
        let mut seen = std::collections::BTreeSet::new();
        let mut lines = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let line = loc.next(&e.expr);
            lines.push(line);
            if e.s > k || !(1..=n).contains(&e.i) || !(1..=n).contains(&e.j) {
                return Err(loc.error(
                    line,
                    format!("entry (s,i,j) = ({},{},{}) out of range for n = {n}, k = {k}", e.s, e.i, e.j),
                ));
            }
            if !seen.insert((e.s, e.i, e.j)) {
                return Err(loc.error(line, format!("duplicate entry (s,i,j) = ({},{},{})", e.s, e.i, e.j)));
            }
            let p: DiffPoly = parse_diffpoly(&e.expr).map_err(|err| loc.error(line, format!("`{}`: {err}", e.expr)))?;
            b.set(e.s, e.i - 1, e.j - 1, p);
        }
        if let Some(v) = b.validate().first() {
            let line = self
                .entries
                .iter()
                .zip(&lines)
                .find(|(e, _)| (e.s, e.i, e.j) == (v.s, v.i + 1, v.j + 1))
                .and_then(|(_, l)| *l);
            return Err(loc.error(line, v.to_string()));
        }
        Ok(b)
    }
}

impl MapDocument {
    pub fn from_map(map: &CoordinateMap) -> Self {
        MapDocument {
            forward: map.forward().iter().map(ToString::to_string).collect(),
            inverse: map.inverse_components().iter().map(ToString::to_string).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn parse(text: &str, file: &str) -> Result<CoordinateMap> {
        let doc: MapDocument = serde_json::from_str(text).map_err(|e| json_error(file, e))?;
        let mut loc = Locator::new(file, text);
        if doc.forward.len() != doc.inverse.len() {
            return Err(loc.error(loc.key("inverse"), "`forward` and `inverse` must have the same length"));
        }
        let mut side = |items: &[String]| -> Result<Vec<Scalar>> {
            items
                .iter()
                .map(|t| {
                    let line = loc.next(t);
                    parse_scalar(t).map_err(|e| loc.error(line, format!("`{t}`: {e}")))
                })
                .collect()
        };
        let forward = side(&doc.forward)?;
        let inverse = side(&doc.inverse)?;
        CoordinateMap::new(forward, inverse).map_err(|e| Error::Input {
            file: file.to_owned(),
            line: None,
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<CoordinateMap> {
        let file = path.display().to_string();
        Self::parse(&read(path)?, &file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn raw_round_trip() {
        let b = fixtures::rational_k3();
        let text = BracketDocument::from_bracket(&b).to_json();
        assert_eq!(BracketDocument::parse(&text, "mem").unwrap().bracket, b);
    }

    #[test]
    fn potemin_document_matches_fixture() {
        let text = r#"{
  "n": 2, "k": 3, "construction": "potemin",
  "g": [["1", "u2/u1"], ["u2/u1", "(1 + u2^2)/u1^2"]],
  "c": [[["0", "-u2/u1^2"], ["0", "-(1 + u2^2)/u1^3"]],
        [["0", "1/u1"], ["0", "u2/u1^2"]]]
}"#;
        let loaded = BracketDocument::parse(text, "mem").unwrap();
        assert_eq!(loaded.bracket, fixtures::rational_k3());
        assert!(loaded.potemin.is_some());
    }

    #[test]
    fn errors_carry_lines() {
        let text = "{\n  \"n\": 1, \"k\": 1,\n  \"entries\": [\n    {\"s\": 1, \"i\": 1, \"j\": 1, \"expr\": \"u1 +\"}\n  ]\n}";
        let err = BracketDocument::parse(text, "doc.json").unwrap_err().to_string();
        assert!(err.starts_with("doc.json:4: `u1 +`"), "{err}");
        let text = "{\n  \"n\": 1, \"k\": 1,\n  \"entries\": [\n    {\"s\": 1, \"i\": 1, \"j\": 1, \"expr\": \"u1_1\"}\n  ]\n}";
        let err = BracketDocument::parse(text, "doc.json").unwrap_err().to_string();
        assert!(err.starts_with("doc.json:4: P_1^{11}"), "{err}");
        let err = BracketDocument::parse("{\"n\": 1}", "doc.json").unwrap_err().to_string();
        assert!(err.contains("missing field `k`"), "{err}");
    }

    #[test]
    fn map_round_trip() {
        let m = fixtures::rational_map();
        let back = MapDocument::parse(&MapDocument::from_map(&m).to_json(), "mem").unwrap();
        assert_eq!(back.forward(), m.forward());
    }
}
