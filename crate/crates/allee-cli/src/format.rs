//! Line-oriented structured text format shared by every machine-readable
//! output file.
//!
//! A document is a self-describing header block followed by a CSV body:
//!
//! ```text
//! #allee 1 equilibria
//! #param A 0.1
//! #param M -0.1
//! #tol trace 0.000000001
//! #columns id,kind,u,v
//! P1,attractor,0.09351813126541476,0.09351813126541476
//! ```
//!
//! Header lines start with `#`; the first token after `#` is the entry key.
//! The schema line `#allee <version> <kind>` always comes first. The body is
//! plain CSV with the column names given by the `#columns` line.
//!
//! Round-trip guarantee: parsing a file emitted by [`Document::to_text`] and
//! re-serializing it reproduces the bytes exactly. Numeric cells are emitted
//! with Rust's shortest-round-trip `Display`; on parse, a token is treated as
//! a number only when re-formatting it reproduces the original spelling, so
//! re-serialization can never alter a byte.

use std::fmt::Write as _;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Canonical float formatting: shortest decimal string that parses back to
/// the same value. All numeric output in CLI files goes through this.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// One cell of a header entry or CSV row.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
}

impl Field {
    pub fn num(x: f64) -> Self {
        Field::Num(x)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Field::Text(s.into())
    }

    /// Empty cell.
    pub fn empty() -> Self {
        Field::Text(String::new())
    }

    /// Classifies a raw token: numeric only when the canonical re-formatting
    /// is byte-identical to the input (keeps round-trips exact even for
    /// spellings like `1e-8` that `Display` would rewrite).
    pub fn parse(token: &str) -> Self {
        if let Ok(x) = token.parse::<f64>() {
            if fmt_f64(x) == token {
                return Field::Num(x);
            }
        }
        Field::Text(token.to_string())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Field::Num(x) => Some(*x),
            Field::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Field::Text(s) => Some(s),
            Field::Num(_) => None,
        }
    }

    /// The exact token this field serialises to.
    pub fn render(&self) -> String {
        match self {
            Field::Num(x) => fmt_f64(*x),
            Field::Text(s) => s.clone(),
        }
    }
}

/// One line of a document, in file order.
#[derive(Debug, Clone, PartialEq)]
pub enum Line {
    /// `#<key> <field> <field> ...` (space-separated header entry).
    Meta { key: String, fields: Vec<Field> },
    /// `#columns a,b,c` (comma-separated column names).
    Columns(Vec<String>),
    /// A CSV body row.
    Row(Vec<Field>),
}

/// An ordered structured text document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub lines: Vec<Line>,
}

impl Document {
    /// Starts a document with the schema line `#allee <version> <kind>`.
    pub fn new(kind: &str) -> Self {
        let mut doc = Document { lines: Vec::new() };
        doc.meta(
            "allee",
            vec![Field::num(SCHEMA_VERSION as f64), Field::text(kind)],
        );
        doc
    }

    pub fn meta(&mut self, key: &str, fields: Vec<Field>) {
        self.lines.push(Line::Meta {
            key: key.to_string(),
            fields,
        });
    }

    /// `#param <name> <value>` header entry.
    pub fn param(&mut self, name: &str, value: f64) {
        self.meta("param", vec![Field::text(name), Field::num(value)]);
    }

    /// `#tol <name> <value>` header entry.
    pub fn tol(&mut self, name: &str, value: f64) {
        self.meta("tol", vec![Field::text(name), Field::num(value)]);
    }

    /// `#note <words...>` header entry. Words are space-separated on re-parse,
    /// so the text must not rely on consecutive spaces.
    pub fn note(&mut self, text: &str) {
        let fields = text.split_whitespace().map(Field::parse).collect();
        self.meta("note", fields);
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.lines
            .push(Line::Columns(names.iter().map(|s| s.to_string()).collect()));
    }

    pub fn row(&mut self, fields: Vec<Field>) {
        self.lines.push(Line::Row(fields));
    }

    /// Looks up the first `#<key>` entry.
    pub fn find_meta(&self, key: &str) -> Option<&[Field]> {
        self.lines.iter().find_map(|line| match line {
            Line::Meta { key: k, fields } if k == key => Some(fields.as_slice()),
            _ => None,
        })
    }

    /// Value of the first `#param <name> <value>` entry.
    pub fn param_value(&self, name: &str) -> Option<f64> {
        self.lines.iter().find_map(|line| match line {
            Line::Meta { key, fields }
                if key == "param"
                    && fields.first().and_then(Field::as_str) == Some(name) =>
            {
                fields.get(1).and_then(Field::as_f64)
            }
            _ => None,
        })
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.lines.iter().find_map(|line| match line {
            Line::Columns(names) => Some(names.as_slice()),
            _ => None,
        })
    }

    pub fn body_rows(&self) -> impl Iterator<Item = &[Field]> {
        self.lines.iter().filter_map(|line| match line {
            Line::Row(fields) => Some(fields.as_slice()),
            _ => None,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            match line {
                Line::Meta { key, fields } => {
                    let _ = write!(out, "#{key}");
                    for field in fields {
                        let _ = write!(out, " {}", field.render());
                    }
                }
                Line::Columns(names) => {
                    let _ = write!(out, "#columns {}", names.join(","));
                }
                Line::Row(fields) => {
                    let cells: Vec<String> = fields.iter().map(Field::render).collect();
                    let _ = write!(out, "{}", cells.join(","));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses a document emitted by [`Document::to_text`].
    pub fn parse(text: &str) -> CliResult<Document> {
        let mut lines = Vec::new();
        let mut arity: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            if let Some(stripped) = raw.strip_prefix('#') {
                let mut tokens = stripped.split(' ');
                let key = tokens
                    .next()
                    .filter(|k| !k.is_empty())
                    .ok_or_else(|| {
                        CliError::Validation(format!("line {line_no}: empty header key"))
                    })?
                    .to_string();
                if key == "columns" {
                    let rest = tokens.collect::<Vec<_>>().join(" ");
                    let names: Vec<String> =
                        rest.split(',').map(|s| s.to_string()).collect();
                    arity = Some(names.len());
                    lines.push(Line::Columns(names));
                } else {
                    let fields = tokens.map(Field::parse).collect();
                    lines.push(Line::Meta { key, fields });
                }
            } else {
                let fields: Vec<Field> = raw.split(',').map(Field::parse).collect();
                if let Some(n) = arity {
                    if fields.len() != n {
                        return Err(CliError::Validation(format!(
                            "line {line_no}: expected {n} cells, found {}",
                            fields.len()
                        )));
                    }
                }
                lines.push(Line::Row(fields));
            }
        }
        match lines.first() {
            Some(Line::Meta { key, fields })
                if key == "allee" && fields.first().and_then(Field::as_f64).is_some() => {}
            _ => {
                return Err(CliError::Validation(
                    "missing schema line `#allee <version> <kind>`".to_string(),
                ))
            }
        }
        Ok(Document { lines })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_float_formatting_round_trips() {
        for &x in &[
            0.0,
            -0.0,
            1.0,
            0.1,
            -0.1,
            0.363,
            2.0 / 3.0,
            1e-8,
            1e-10,
            (73.0 - 5f64.sqrt()) / 200.0,
            f64::MAX,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s} did not round-trip");
            assert_eq!(fmt_f64(back), s);
        }
    }

    #[test]
    fn numeric_detection_keeps_foreign_spellings_as_text() {
        // `1e-8` parses as f64 but Display would rewrite it, so it must stay
        // text to preserve byte-identity.
        assert_eq!(Field::parse("1e-8"), Field::text("1e-8"));
        assert_eq!(Field::parse("0.00000001"), Field::num(1e-8));
        assert_eq!(Field::parse("attractor"), Field::text("attractor"));
        assert_eq!(Field::parse(""), Field::text(""));
        assert_eq!(Field::parse("-0"), Field::num(-0.0));
    }

    #[test]
    fn emitted_documents_parse_and_reserialize_byte_identically() {
        let mut doc = Document::new("equilibria");
        doc.param("A", 0.1);
        doc.param("M", -0.1);
        doc.tol("trace", 1e-9);
        doc.note("three positive equilibria");
        doc.columns(&["id", "kind", "u", "v"]);
        doc.row(vec![
            Field::text("P1"),
            Field::text("attractor"),
            Field::num(0.09351813126541476),
            Field::num(0.09351813126541476),
        ]);
        doc.row(vec![
            Field::text("P2"),
            Field::text("saddle"),
            Field::num(0.2196444454552163),
            Field::num(-0.0),
        ]);
        let text = doc.to_text();
        let parsed = Document::parse(&text).unwrap();
        assert_eq!(parsed.to_text(), text);
        assert_eq!(parsed, doc);
        assert_eq!(parsed.param_value("M"), Some(-0.1));
        assert_eq!(
            parsed.column_names().unwrap(),
            &["id", "kind", "u", "v"]
        );
        assert_eq!(parsed.body_rows().count(), 2);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let text = "#allee 1 test\n#columns a,b\n1,2\n1,2,3\n";
        let err = Document::parse(text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_schema_line_is_rejected() {
        assert!(Document::parse("1,2,3\n").is_err());
    }
}
