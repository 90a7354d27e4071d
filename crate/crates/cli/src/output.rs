//! Serialization shared by the subcommands. Every number leaves the program
//! as a decimal string.

use std::io::{self, Write};

use serde::Serialize;

use crate::args::Format;

pub const SCHEMA: &str = "qpade/1";

/// Digits kept when printing enclosure endpoints.
pub const DIGITS: usize = 20;

#[derive(Serialize)]
struct Document<'a, R: Serialize, M: Serialize> {
    schema: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<M>,
    rows: &'a [R],
}

/// Writes `rows` as a JSON document, a CSV table or aligned text.
pub fn emit<R, M>(format: Format, command: &str, rows: &[R], meta: Option<M>) -> io::Result<()>
where
    R: Serialize + TextLine,
    M: Serialize + TextLine,
{
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match format {
        Format::Json => {
            let doc = Document {
                schema: SCHEMA,
                command,
                meta,
                rows,
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for row in rows {
                writeln!(out, "{}", row.text_line())?;
            }
            if let Some(m) = meta {
                writeln!(out, "{}", m.text_line())?;
            }
        }
    }
    out.flush()
}

/// One human-readable line per record.
pub trait TextLine {
    fn text_line(&self) -> String;
}

/// Placeholder metadata for commands that have none.
#[derive(Serialize)]
pub struct NoMeta;

impl TextLine for NoMeta {
    fn text_line(&self) -> String {
        String::new()
    }
}
