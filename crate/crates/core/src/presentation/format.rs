//! Text and JSON forms of a presentation.
//!
//! ```text
//! gens: j_1 j_2 j_3 j_4
//! rel: j_1 j_2 j_1' j_2'
//! schema: j_1^s j_2^s j_3^s j_4^s for s in {0,2}
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Printing a parsed
//! canonical file reproduces it byte for byte.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::syntax::{parse_letters, word_from_parsed, Exponent};
use crate::words::{Alphabet, Generator, Word};

use super::{IntegerSet, Presentation, RelatorSchema};

fn write_template(f: &mut fmt::Formatter<'_>, template: &[(Generator, i64)]) -> fmt::Result {
    for (i, (g, k)) in template.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        match k {
            1 => write!(f, "{g}^s")?,
            -1 => write!(f, "{g}^-s")?,
            k => write!(f, "{g}^{k}s")?,
        }
    }
    Ok(())
}

impl fmt::Display for RelatorSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_template(f, &self.template)?;
        write!(f, " for s in {}", self.index_set)?;
        if let Some(b) = self.truncation_bound {
            write!(f, " bound {b}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("gens:")?;
        for g in &self.generators {
            write!(f, " {g}")?;
        }
        writeln!(f)?;
        for r in &self.relators {
            writeln!(f, "rel: {r}")?;
        }
        for s in &self.schemas {
            writeln!(f, "schema: {s}")?;
        }
        Ok(())
    }
}

fn parse_set(text: &str, line: usize, column: usize) -> Result<IntegerSet> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::parse(line, column, "index set must look like {0,2,5}"))?;
    let values = inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::parse(line, column, format!("bad integer {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    IntegerSet::new(values).map_err(|e| Error::parse(line, column, e.to_string()))
}

fn parse_schema(body: &str, line: usize, column: usize) -> Result<RelatorSchema> {
    let (template, rest) = body
        .split_once(" for s in ")
        .ok_or_else(|| Error::parse(line, column, "schema needs `for s in {...}`"))?;
    let (set_text, bound) = match rest.split_once(" bound ") {
        Some((set, b)) => {
            let b = b
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::parse(line, column, "bad truncation bound"))?;
            (set, Some(b))
        }
        None => (rest, None),
    };
    let letters = parse_letters(template, true)
        .map_err(|(c, m)| Error::parse(line, column + c - 1, m))?;
    let template = letters
        .into_iter()
        .map(|(g, e)| match e {
            Exponent::Param(k) => Ok((g, k)),
            Exponent::Int(_) => Err(Error::parse(
                line,
                column,
                "schema letters need parameter exponents such as ^s",
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    let set_column = column + template_len(body, rest);
    let set = parse_set(set_text, line, set_column)?;
    let schema = RelatorSchema::new(template, set).map_err(|e| Error::parse(line, column, e.to_string()))?;
    Ok(match bound {
        Some(b) => schema.with_truncation_bound(b),
        None => schema,
    })
}

fn template_len(body: &str, rest: &str) -> usize {
    body[..body.len() - rest.len()].chars().count()
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut generators: Option<Alphabet> = None;
        let mut relators = Vec::new();
        let mut schemas = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let indent = raw.chars().count() - trimmed.chars().count();
            let (key, body) = trimmed
                .split_once(':')
                .ok_or_else(|| Error::parse(line, indent + 1, "expected `gens:`, `rel:` or `schema:`"))?;
            let column = indent + key.chars().count() + 2;
            match key {
                "gens" => {
                    if generators.is_some() {
                        return Err(Error::parse(line, 1, "duplicate `gens:` line"));
                    }
                    let mut alphabet = Alphabet::new();
                    for tok in body.split_whitespace() {
                        let g = crate::words::parse_generator(tok)
                            .map_err(|e| Error::parse(line, column, e.to_string()))?;
                        if !alphabet.insert(g.clone()) {
                            return Err(Error::parse(line, column, format!("duplicate generator {g}")));
                        }
                    }
                    generators = Some(alphabet);
                }
                "rel" => {
                    let letters = parse_letters(body, false)
                        .map_err(|(c, m)| Error::parse(line, column + c - 1, m))?;
                    let word = word_from_parsed(&letters).map_err(|m| Error::parse(line, column, m))?;
                    relators.push((line, column, word));
                }
                "schema" => schemas.push((line, column, parse_schema(body, line, column)?)),
                other => {
                    return Err(Error::parse(line, indent + 1, format!("unknown key {other:?}")))
                }
            }
        }
        let generators = generators.ok_or_else(|| Error::parse(1, 1, "missing `gens:` line"))?;
        let mut p = Presentation::free(generators);
        for (line, column, word) in relators {
            p.add_relator(&word).map_err(|e| Error::parse(line, column, e.to_string()))?;
        }
        for (line, column, schema) in schemas {
            p.add_schema(schema).map_err(|e| Error::parse(line, column, e.to_string()))?;
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct SchemaDoc {
    template: String,
    set: IntegerSet,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    bound: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    gens: Vec<Generator>,
    rel: Vec<Word>,
    schema: Vec<SchemaDoc>,
}

struct TemplateText<'a>(&'a [(Generator, i64)]);

impl fmt::Display for TemplateText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_template(f, self.0)
    }
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationDoc {
            gens: self.generators.iter().cloned().collect(),
            rel: self.relators.clone(),
            schema: self
                .schemas
                .iter()
                .map(|sc| SchemaDoc {
                    template: TemplateText(&sc.template).to_string(),
                    set: sc.index_set.clone(),
                    bound: sc.truncation_bound,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = PresentationDoc::deserialize(d)?;
        let mut text = String::from("gens:");
        for g in &doc.gens {
            text.push_str(&format!(" {g}"));
        }
        text.push('\n');
        for r in &doc.rel {
            text.push_str(&format!("rel: {r}\n"));
        }
        for sc in &doc.schema {
            text.push_str(&format!("schema: {} for s in {}", sc.template, sc.set));
            if let Some(b) = sc.bound {
                text.push_str(&format!(" bound {b}"));
            }
            text.push('\n');
        }
        text.parse().map_err(D::Error::custom)
    }
}
