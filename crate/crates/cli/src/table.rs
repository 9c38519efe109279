//! Record tables and their CSV/JSON rendering.

use clap::ValueEnum;
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::value::RawValue;
use serde_json::Value;

/// Digits after the decimal point in scientific notation; `HJWELL_PRECISION` overrides.
pub const DEFAULT_PRECISION: usize = 16;
pub const PRECISION_ENV: &str = "HJWELL_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Rows of named cells; the column set is the union in order of first use.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn push(&mut self, row: Vec<(&str, Cell)>) {
        let mut out = vec![Cell::Empty; self.columns.len()];
        for (name, cell) in row {
            let j = match self.columns.iter().position(|c| c == name) {
                Some(j) => j,
                None => {
                    self.columns.push(name.to_string());
                    for r in &mut self.rows {
                        r.push(Cell::Empty);
                    }
                    out.push(Cell::Empty);
                    self.columns.len() - 1
                }
            };
            out[j] = cell;
        }
        self.rows.push(out);
    }

    /// Cell by row and column name.
    pub fn get(&self, row: usize, column: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row).map(|r| &r[j])
    }

    /// Appends `other`'s rows, each prefixed by `prefix`.
    pub fn extend_tagged(&mut self, prefix: &[(&str, Cell)], other: &Table) {
        for r in &other.rows {
            let mut row: Vec<(&str, Cell)> = prefix.to_vec();
            row.extend(other.columns.iter().map(String::as_str).zip(r.iter().cloned()));
            self.push(row);
        }
    }
}

/// Output precision from the environment, falling back to the default.
pub fn precision() -> Result<usize, String> {
    match std::env::var(PRECISION_ENV) {
        Err(_) => Ok(DEFAULT_PRECISION),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(p) if (1..=40).contains(&p) => Ok(p),
            _ => Err(format!("{PRECISION_ENV} must be an integer in 1..=40, got {s:?}")),
        },
    }
}

pub fn format_num(v: f64, precision: usize) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.precision$e}")
    }
}

fn cell_text(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Empty => String::new(),
        Cell::Int(i) => i.to_string(),
        Cell::Num(v) => format_num(*v, precision),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
    }
}

/// One JSON object; finite numbers are written verbatim in the CSV notation.
struct JsonRow<'a> {
    columns: &'a [String],
    cells: &'a [Cell],
    precision: usize,
}

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.columns.len()))?;
        for (k, c) in self.columns.iter().zip(self.cells) {
            match c {
                Cell::Num(v) if v.is_finite() => {
                    let raw = RawValue::from_string(format_num(*v, self.precision)).expect("scientific notation is valid JSON");
                    m.serialize_entry(k, &raw)?
                }
                Cell::Num(v) => m.serialize_entry(k, &format_num(*v, self.precision))?,
                Cell::Empty => m.serialize_entry(k, &Value::Null)?,
                Cell::Int(i) => m.serialize_entry(k, i)?,
                Cell::Text(t) => m.serialize_entry(k, t)?,
                Cell::Bool(b) => m.serialize_entry(k, b)?,
            }
        }
        m.end()
    }
}

pub fn render(t: &Table, format: Format, precision: usize) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
            w.write_record(&t.columns).expect("in-memory write");
            for r in &t.rows {
                w.write_record(r.iter().map(|c| cell_text(c, precision))).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
        }
        Format::Json => {
            let rows: Vec<JsonRow> =
                t.rows.iter().map(|r| JsonRow { columns: &t.columns, cells: r, precision }).collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("json values serialize");
            s.push('\n');
            s
        }
    }
}

/// Parses rendered output back into rows of column → text, with JSON
/// nulls mapped to empty strings, so both formats compare cell by cell.
pub fn parse_rendered(s: &str, format: Format) -> Result<Vec<Vec<(String, String)>>, String> {
    match format {
        Format::Csv => {
            let mut r = csv::ReaderBuilder::new().from_reader(s.as_bytes());
            let head: Vec<String> = r.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
            r.records()
                .map(|rec| {
                    let rec = rec.map_err(|e| e.to_string())?;
                    Ok(head.iter().cloned().zip(rec.iter().map(String::from)).collect())
                })
                .collect()
        }
        Format::Json => {
            let v: Value = serde_json::from_str(s).map_err(|e| e.to_string())?;
            let rows = v.as_array().ok_or("top level is not an array")?;
            rows.iter()
                .map(|row| {
                    let obj = row.as_object().ok_or("row is not an object")?;
                    Ok(obj
                        .iter()
                        .map(|(k, v)| {
                            let text = match v {
                                Value::Null => String::new(),
                                Value::String(s) => s.clone(),
                                // The parser writes positive exponents as `e+k`.
                                Value::Number(n) => n.to_string().replace("e+", "e"),
                                other => other.to_string(),
                            };
                            (k.clone(), text)
                        })
                        .collect())
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::default();
        t.push(vec![("x", 0.1.into()), ("name", "a, b".into())]);
        t.push(vec![("x", f64::NAN.into()), ("ok", true.into()), ("n", 3usize.into())]);
        t
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_num(0.1, DEFAULT_PRECISION), "1.0000000000000001e-1");
        assert_eq!(format_num(-0.75 * 2f64.powi(100), DEFAULT_PRECISION), "-9.5073795017117205e29");
        assert_eq!(format_num(f64::NEG_INFINITY, 3), "-inf");
        // 17 significant digits round-trip every double.
        for v in [std::f64::consts::PI, 1e-310, 6.02214076e23] {
            assert_eq!(format_num(v, DEFAULT_PRECISION).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn columns_are_unioned() {
        let t = sample();
        assert_eq!(t.columns, ["x", "name", "ok", "n"]);
        assert_eq!(t.get(0, "ok"), Some(&Cell::Empty));
        assert_eq!(t.get(1, "n"), Some(&Cell::Int(3)));
    }

    #[test]
    fn csv_and_json_carry_the_same_content() {
        let t = sample();
        let c = parse_rendered(&render(&t, Format::Csv, 16), Format::Csv).unwrap();
        let j = parse_rendered(&render(&t, Format::Json, 16), Format::Json).unwrap();
        assert_eq!(c, j);
        assert_eq!(c[0][1], ("name".to_string(), "a, b".to_string()));
        let json = render(&t, Format::Json, 16);
        assert!(json.contains("\"x\": 1.0000000000000001e-1"), "{json}");
        assert!(json.contains("\"x\": \"NaN\""));
    }
}
