//! Tabular command output rendered as JSON, CSV or an aligned text table.
//!
//! Exact rationals are printed as `"num/den"`. Each one is followed by a
//! `<key>_decimal` rendering with six fractional digits, which is only a display aid.

use serde_json::{json, Map, Value as Json};

use crate::rat::{to_decimal_string, to_exact_string, Rat};

pub const DECIMAL_DIGITS: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Rat(Rat),
    Int(i128),
    Bool(bool),
    Text(String),
}

impl From<Rat> for Value {
    fn from(r: Rat) -> Value {
        Value::Rat(r)
    }
}

impl From<&Rat> for Value {
    fn from(r: &Rat) -> Value {
        Value::Rat(r.clone())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Value {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Value {
        Value::Text(s)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(i: $t) -> Value {
                Value::Int(i as i128)
            }
        }
    )*};
}
int_value!(i64, u64, usize, u128, i32, u32);

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Rat(r) => to_exact_string(r),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn decimal(&self) -> Option<String> {
        match self {
            Value::Rat(r) => Some(to_decimal_string(r, DECIMAL_DIGITS)),
            _ => None,
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Rat(r) => Json::String(to_exact_string(r)),
            Value::Int(i) => match i64::try_from(*i) {
                Ok(v) => json!(v),
                Err(_) => Json::String(i.to_string()),
            },
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str]) -> Section {
        Section { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
    pub summary: Vec<(String, Value)>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

fn put(map: &mut Map<String, Json>, key: &str, v: &Value) {
    map.insert(key.to_string(), v.json());
    if let Some(d) = v.decimal() {
        map.insert(format!("{key}_decimal"), Json::String(d));
    }
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.push((key.to_string(), v.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Json {
        let mut root = Map::new();
        root.insert("command".into(), Json::String(self.command.clone()));
        for s in &self.sections {
            let rows: Vec<Json> = s
                .rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (c, v) in s.columns.iter().zip(r) {
                        put(&mut m, c, v);
                    }
                    Json::Object(m)
                })
                .collect();
            root.insert(s.name.clone(), Json::Array(rows));
        }
        let mut summary = Map::new();
        for (k, v) in &self.summary {
            put(&mut summary, k, v);
        }
        root.insert("summary".into(), Json::Object(summary));
        Json::Object(root)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(vec![]);
        for s in &self.sections {
            w.write_record(["section", &s.name]).unwrap();
            let rat_cols: Vec<bool> = (0..s.columns.len()).map(|i| s.rows.iter().any(|r| matches!(r[i], Value::Rat(_)))).collect();
            let mut header = vec![];
            for (c, is_rat) in s.columns.iter().zip(&rat_cols) {
                header.push(c.clone());
                if *is_rat {
                    header.push(format!("{c}_decimal"));
                }
            }
            w.write_record(&header).unwrap();
            for r in &s.rows {
                let mut rec = vec![];
                for (v, is_rat) in r.iter().zip(&rat_cols) {
                    rec.push(v.text());
                    if *is_rat {
                        rec.push(v.decimal().unwrap_or_default());
                    }
                }
                w.write_record(&rec).unwrap();
            }
        }
        w.write_record(["section", "summary"]).unwrap();
        w.write_record(["key", "value", "value_decimal"]).unwrap();
        for (k, v) in &self.summary {
            w.write_record([k.clone(), v.text(), v.decimal().unwrap_or_default()]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    fn table(&self) -> String {
        let cell = |v: &Value| match v.decimal() {
            Some(d) => format!("{} (~{d})", v.text()),
            None => v.text(),
        };
        let mut out = format!("{}\n", self.command);
        for s in &self.sections {
            out.push_str(&format!("\n[{}]\n", s.name));
            let body: Vec<Vec<String>> = s.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..s.columns.len())
                .map(|i| body.iter().map(|r| r[i].chars().count()).chain([s.columns[i].chars().count()]).max().unwrap())
                .collect();
            let line = |cells: &[String]| {
                let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                parts.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(&s.columns));
            out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
            for r in &body {
                out.push_str(&line(r));
            }
        }
        if !self.summary.is_empty() {
            out.push('\n');
            let w = self.summary.iter().map(|(k, _)| k.chars().count()).max().unwrap();
            for (k, v) in &self.summary {
                out.push_str(&format!("{k:<w$}  {}\n", cell(v)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn sample() -> Report {
        let mut r = Report::new("demo");
        let mut s = Section::new("rows", &["k", "degree"]);
        s.push(vec![0.into(), int(4).into()]);
        s.push(vec![1.into(), rat(7, 2).into()]);
        r.sections.push(s);
        r.set("limit", int(3));
        r.set("status", "certified");
        r
    }

    #[test]
    fn json_carries_exact_and_decimal() {
        let j = sample().to_json();
        assert_eq!(j["rows"][1]["degree"], "7/2");
        assert_eq!(j["rows"][1]["degree_decimal"], "3.500000");
        assert_eq!(j["summary"]["limit"], "3/1");
        assert_eq!(j["summary"]["status"], "certified");
        assert!(j["summary"].get("status_decimal").is_none());
    }

    #[test]
    fn csv_and_table() {
        let c = sample().render(Format::Csv);
        assert!(c.contains("k,degree,degree_decimal\n0,4/1,4.000000\n1,7/2,3.500000\n"), "{c}");
        assert!(c.contains("limit,3/1,3.000000"));
        let t = sample().render(Format::Table);
        assert!(t.contains("7/2 (~3.500000)"));
        assert_eq!(sample().render(Format::Json), sample().render(Format::Json));
    }
}
