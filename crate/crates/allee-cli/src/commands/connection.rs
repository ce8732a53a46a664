//! `connection`: bisect the manifold-separation functional in `S` for a
//! heteroclinic (corner-to-middle-saddle) or homoclinic (middle-saddle)
//! connection, printing every iterate.

use allee_core::dynamics::{connection_search, ConnectionKind};

use crate::cli::{emit, resolve, ConnectionArgs};
use crate::error::{CliError, CliResult};
use crate::format::{fmt_f64, Document, Field};

pub fn run(args: &ConnectionArgs) -> CliResult<()> {
    let rp = resolve(&args.params)?;

    let kind: ConnectionKind = match (args.kind, rp.preset) {
        (Some(k), _) => k.into(),
        (None, Some(p)) if p.connection.is_some() => p.connection.unwrap(),
        _ => {
            return Err(CliError::Validation(
                "--kind heteroclinic|homoclinic is required (or use a preset that \
                 pins one, e.g. --figure F09b)"
                    .to_string(),
            ))
        }
    };
    let bracket: (f64, f64) = match (&args.bracket, rp.preset) {
        (Some(v), _) => (v[0], v[1]),
        (None, Some(p)) if p.bracket.is_some() => p.bracket.unwrap(),
        _ => {
            return Err(CliError::Validation(
                "--bracket LO HI is required (or use a preset that pins one)".to_string(),
            ))
        }
    };

    let params = rp.params;
    println!(
        "searching for a {kind} connection at (A, M, Q) = ({}, {}, {}), S in [{}, {}]",
        fmt_f64(params.a),
        fmt_f64(params.m),
        fmt_f64(params.q),
        fmt_f64(bracket.0),
        fmt_f64(bracket.1)
    );

    let outcome = connection_search(params.a, params.m, params.q, bracket, kind)?;

    let mut doc = Document::new("connection");
    rp.push_header(&mut doc);
    doc.meta("kind", vec![Field::text(kind.to_string())]);
    doc.meta(
        "bracket",
        vec![Field::num(bracket.0), Field::num(bracket.1)],
    );

    match outcome {
        Some(result) => {
            for (i, (s, sep)) in result.evaluations.iter().enumerate() {
                println!(
                    "  iterate {:>2}: S = {:<22} separation = {}",
                    i + 1,
                    fmt_f64(*s),
                    fmt_f64(*sep)
                );
            }
            println!(
                "S_c = {} (final bracket [{}, {}], section u = {})",
                fmt_f64(result.s_critical),
                fmt_f64(result.bracket.0),
                fmt_f64(result.bracket.1),
                fmt_f64(result.section_u)
            );
            doc.meta("section-u", vec![Field::num(result.section_u)]);
            doc.meta(
                "result",
                vec![
                    Field::text("s-critical"),
                    Field::num(result.s_critical),
                    Field::text("bracket"),
                    Field::num(result.bracket.0),
                    Field::num(result.bracket.1),
                ],
            );
            doc.columns(&["iterate", "s", "separation"]);
            for (i, (s, sep)) in result.evaluations.iter().enumerate() {
                doc.row(vec![
                    Field::num((i + 1) as f64),
                    Field::num(*s),
                    Field::num(*sep),
                ]);
            }
            emit(&doc, &rp.path("connection", "txt"))
        }
        None => {
            println!(
                "no sign change: the separation keeps one sign over [{}, {}]; \
                 no {kind} connection bracketed",
                fmt_f64(bracket.0),
                fmt_f64(bracket.1)
            );
            doc.meta("result", vec![Field::text("no-sign-change")]);
            doc.columns(&["iterate", "s", "separation"]);
            emit(&doc, &rp.path("connection", "txt"))
        }
    }
}
