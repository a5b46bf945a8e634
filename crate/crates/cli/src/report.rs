//! Tabular reports written as CSV or JSON, and parsed back.

use serde_json::{Map, Value as Json};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Small integer, a JSON number.
    Int,
    /// Arbitrary-size exact integer, a decimal string.
    Exact,
    /// Exact rational written `num/den`.
    Rational,
    Float,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Exact(String),
    Rational(String),
    Float(f64),
    Text(String),
}

/// Rounds to 15 significant digits, the precision written to reports.
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap()
}

impl Cell {
    pub fn float(x: f64) -> Cell {
        Cell::Float(round_sig15(x))
    }

    pub fn kind(&self) -> Kind {
        match self {
            Cell::Int(_) => Kind::Int,
            Cell::Exact(_) => Kind::Exact,
            Cell::Rational(_) => Kind::Rational,
            Cell::Float(_) => Kind::Float,
            Cell::Text(_) => Kind::Text,
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Cell::Int(v) => Json::from(*v),
            Cell::Float(x) if x.is_finite() => Json::from(*x),
            Cell::Float(x) => Json::String(format_float(*x)),
            Cell::Exact(s) | Cell::Rational(s) | Cell::Text(s) => Json::String(s.clone()),
        }
    }

    fn parse(kind: Kind, text: &str) -> Result<Cell, String> {
        let bad = |what: &str| format!("cannot parse '{text}' as {what}");
        Ok(match kind {
            Kind::Int => Cell::Int(text.parse().map_err(|_| bad("an integer"))?),
            Kind::Exact if is_integer(text) => Cell::Exact(text.to_string()),
            Kind::Exact => return Err(bad("an exact integer")),
            Kind::Rational => {
                let ok = match text.split_once('/') {
                    Some((n, d)) => is_integer(n) && !d.starts_with('-') && is_integer(d),
                    None => is_integer(text),
                };
                if !ok {
                    return Err(bad("a rational"));
                }
                Cell::Rational(text.to_string())
            }
            Kind::Float => Cell::Float(text.parse().map_err(|_| bad("a float"))?),
            Kind::Text => Cell::Text(text.to_string()),
        })
    }

    fn from_json(kind: Kind, v: &Json) -> Result<Cell, String> {
        match (kind, v) {
            (Kind::Int, Json::Number(n)) => n.as_i64().map(Cell::Int).ok_or_else(|| format!("bad integer {n}")),
            (Kind::Float, Json::Number(n)) => n.as_f64().map(Cell::Float).ok_or_else(|| format!("bad float {n}")),
            (_, Json::String(s)) => Cell::parse(kind, s),
            (k, other) => Err(format!("unexpected JSON value {other} for a {k:?} column")),
        }
    }
}

fn is_integer(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Shortest text that parses back to the same value.
fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(x) => f.write_str(&format_float(*x)),
            Cell::Exact(s) | Cell::Rational(s) | Cell::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: Kind,
}

/// A homogeneous report: every row has one cell per column, of the column's kind.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, Kind)]) -> Self {
        Table {
            columns: columns.iter().map(|(n, k)| Column { name: n.to_string(), kind: *k }).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        debug_assert!(row.iter().zip(&self.columns).all(|(c, col)| c.kind() == col.kind));
        self.rows.push(row);
    }

    pub fn schema(&self) -> Vec<(&str, Kind)> {
        self.columns.iter().map(|c| (c.name.as_str(), c.kind)).collect()
    }
}

pub fn emit_report(table: &Table, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(table.columns.iter().map(|c| c.name.as_str()))?;
            for row in &table.rows {
                w.write_record(row.iter().map(|c| c.to_string()))?;
            }
            w.flush()
        }
        Format::Json => {
            let arr: Vec<Json> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (col, cell) in table.columns.iter().zip(row) {
                        obj.insert(col.name.clone(), cell.to_json());
                    }
                    Json::Object(obj)
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &Json::Array(arr))?;
            out.write_all(b"\n")
        }
    }
}

pub fn render(table: &Table, format: Format) -> String {
    let mut buf = Vec::new();
    emit_report(table, format, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("reports are UTF-8")
}

/// Parses a report produced by [`emit_report`] against a known schema.
pub fn parse_report(text: &str, format: Format, schema: &[(&str, Kind)]) -> Result<Table, String> {
    let mut table = Table::new(schema);
    match format {
        Format::Csv => {
            let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
            let header: Vec<String> = r.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
            let names: Vec<&str> = schema.iter().map(|c| c.0).collect();
            if header != names {
                return Err(format!("header {header:?} does not match {names:?}"));
            }
            for rec in r.records() {
                let rec = rec.map_err(|e| e.to_string())?;
                let row = rec.iter().zip(schema).map(|(s, (_, k))| Cell::parse(*k, s)).collect::<Result<_, _>>()?;
                table.rows.push(row);
            }
        }
        Format::Json => {
            let v: Json = serde_json::from_str(text).map_err(|e| e.to_string())?;
            let arr = v.as_array().ok_or("expected a JSON array")?;
            for item in arr {
                let obj = item.as_object().ok_or("expected JSON objects")?;
                if obj.len() != schema.len() {
                    return Err(format!("object has {} fields, expected {}", obj.len(), schema.len()));
                }
                let row = schema
                    .iter()
                    .map(|(name, kind)| obj.get(*name).ok_or(format!("missing field {name}")).and_then(|v| Cell::from_json(*kind, v)))
                    .collect::<Result<_, _>>()?;
                table.rows.push(row);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(n: usize) -> Table {
        let mut t = Table::new(&[("q", Kind::Int), ("spec", Kind::Text), ("value", Kind::Exact), ("ratio", Kind::Float), ("a", Kind::Rational)]);
        for i in 0..n {
            t.push(vec![
                Cell::Int(i as i64),
                Cell::Text("primes:2,5".into()),
                Cell::Exact(format!("{}", 10u128.pow(30) + i as u128)),
                Cell::float(1.0 / (i as f64 + 3.0)),
                Cell::Rational("192/35".into()),
            ]);
        }
        t
    }

    #[test]
    fn shapes() {
        let t = sample(5);
        assert_eq!(render(&t, Format::Csv).lines().count(), 6);
        let json: Json = serde_json::from_str(&render(&sample(1), Format::Json)).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 1);
        let empty = sample(0);
        assert_eq!(render(&empty, Format::Csv), "q,spec,value,ratio,a\n");
        assert_eq!(serde_json::from_str::<Json>(&render(&empty, Format::Json)).unwrap(), Json::Array(vec![]));
        assert!(!render(&t, Format::Csv).contains('\r'));
    }

    #[test]
    fn round_trip_both_formats() {
        let t = sample(7);
        for f in [Format::Csv, Format::Json] {
            let back = parse_report(&render(&t, f), f, &t.schema()).unwrap();
            assert_eq!(back, t);
        }
    }

    proptest! {
        #[test]
        fn floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let mut t = Table::new(&[("x", Kind::Float)]);
            t.push(vec![Cell::float(x)]);
            for f in [Format::Csv, Format::Json] {
                prop_assert_eq!(parse_report(&render(&t, f), f, &t.schema()).unwrap(), t.clone());
            }
        }
    }
}
