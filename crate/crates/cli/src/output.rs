use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::args::{Format, RunArgs};
use crate::CliError;

/// One CSV/JSON table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(u64),
    B(bool),
    S(&'static str),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Cell::F(v) if v.is_finite() => s.serialize_f64(v),
            Cell::F(_) | Cell::Empty => s.serialize_none(),
            Cell::U(v) => s.serialize_u64(v),
            Cell::B(v) => s.serialize_bool(v),
            Cell::S(v) => s.serialize_str(v),
        }
    }
}

/// Shortest round-trip decimal; `inf`, `-inf` and `nan` otherwise.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_owned()
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn write_cell(w: &mut impl Write, c: &Cell) -> io::Result<()> {
    match *c {
        Cell::F(v) => w.write_all(fmt_f64(v).as_bytes()),
        Cell::U(v) => write!(w, "{v}"),
        Cell::B(v) => write!(w, "{v}"),
        Cell::S(v) => w.write_all(v.as_bytes()),
        Cell::Empty => Ok(()),
    }
}

/// Config as written to the `#` header: everything that determines the
/// output, so the worker count and destination are left out.
pub fn header_config(command: &str, args: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(args).expect("config serializes");
    if let Value::Object(m) = &mut v {
        m.remove("workers");
        m.remove("output");
        m.insert("command".into(), Value::String(command.into()));
    }
    v
}

pub type RowIter<'a> = Box<dyn Iterator<Item = Result<Vec<Cell>, CliError>> + 'a>;

pub struct Table<'a> {
    pub columns: &'static [&'static str],
    pub rows: RowIter<'a>,
}

impl<'a> Table<'a> {
    pub fn new(columns: &'static [&'static str], rows: Vec<Vec<Cell>>) -> Self {
        Table {
            columns,
            rows: Box::new(rows.into_iter().map(Ok)),
        }
    }
}

fn write_table(
    w: &mut impl Write,
    config: &Value,
    t: Table,
    format: Format,
) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError::Config(format!("cannot write output: {e}"));
    match format {
        Format::Csv => {
            writeln!(w, "# {config}").map_err(io_err)?;
            writeln!(w, "{}", t.columns.join(",")).map_err(io_err)?;
            for row in t.rows {
                let row = row?;
                for (i, c) in row.iter().enumerate() {
                    if i > 0 {
                        w.write_all(b",").map_err(io_err)?;
                    }
                    write_cell(w, c).map_err(io_err)?;
                }
                w.write_all(b"\n").map_err(io_err)?;
            }
        }
        Format::Json => {
            write!(w, "{{\"config\":{config},\"rows\":[").map_err(io_err)?;
            for (i, row) in t.rows.enumerate() {
                let obj: serde_json::Map<String, Value> = t
                    .columns
                    .iter()
                    .zip(row?)
                    .map(|(k, c)| (k.to_string(), serde_json::to_value(c).unwrap()))
                    .collect();
                if i > 0 {
                    w.write_all(b",").map_err(io_err)?;
                }
                serde_json::to_writer(&mut *w, &obj).map_err(|e| io_err(e.into()))?;
            }
            w.write_all(b"]}\n").map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)
}

/// Writes the table to `--output` (summary to stdout), or the table to
/// stdout and the summary to stderr.
pub fn emit(
    run: &RunArgs,
    config: &Value,
    table: Table,
    summary: impl FnOnce() -> Value,
) -> Result<(), CliError> {
    match &run.output {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?;
            write_table(&mut BufWriter::new(f), config, table, run.format)?;
            println!("{}", summary());
        }
        None => {
            write_table(
                &mut BufWriter::new(io::stdout().lock()),
                config,
                table,
                run.format,
            )?;
            eprintln!("{}", summary());
        }
    }
    Ok(())
}
