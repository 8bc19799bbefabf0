//! Ordered reports rendered as indented text or JSON.
//!
//! Both renderings walk the same tree, so the JSON form carries exactly the
//! fields of the text form. Rationals appear as `p/q (decimal)` in text and as
//! `{"exact": "p/q", "decimal": "..."}` in JSON; the decimal is display only.

use serde_json::{Map, Value as Json};

use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Number(Rational),
    Integer(i64),
    Flag(bool),
    Record(Vec<(String, Value)>),
    List(Vec<Value>),
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Number(r)
    }
}

impl From<&Rational> for Value {
    fn from(r: &Rational) -> Self {
        Value::Number(r.clone())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Flag(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Integer(n as i64)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Integer(n)
    }
}

impl From<Record> for Value {
    fn from(r: Record) -> Self {
        Value::Record(r.0)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(items: Vec<T>) -> Self {
        Value::List(items.into_iter().map(Into::into).collect())
    }
}

/// Builder for an ordered record.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record(pub Vec<(String, Value)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub body: Record,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            body: Record::new().with("command", command),
        }
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.body.push(key, value);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.body.get(key)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec!["# exact values; decimals in parentheses are rendering only".to_string()];
        render_record(&self.body.0, 0, &mut lines);
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> String {
        let mut out =
            serde_json::to_string_pretty(&to_json(&Value::Record(self.body.0.clone()))).expect("report serializes");
        out.push('\n');
        out
    }
}

fn scalar(value: &Value) -> Option<String> {
    match value {
        Value::Text(s) => Some(s.clone()),
        Value::Number(r) => Some(rational::to_display(r)),
        Value::Integer(n) => Some(n.to_string()),
        Value::Flag(b) => Some(b.to_string()),
        Value::Record(r) if r.is_empty() => Some("{}".into()),
        Value::List(l) if l.is_empty() => Some("[]".into()),
        _ => None,
    }
}

fn render_record(fields: &[(String, Value)], indent: usize, lines: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    for (key, value) in fields {
        match scalar(value) {
            Some(s) => lines.push(format!("{pad}{key}: {s}")),
            None => {
                lines.push(format!("{pad}{key}:"));
                render_nested(value, indent + 2, lines);
            }
        }
    }
}

fn render_nested(value: &Value, indent: usize, lines: &mut Vec<String>) {
    match value {
        Value::Record(fields) => render_record(fields, indent, lines),
        Value::List(items) => {
            let pad = " ".repeat(indent);
            for item in items {
                match scalar(item) {
                    Some(s) => lines.push(format!("{pad}- {s}")),
                    None => {
                        let start = lines.len();
                        render_nested(item, indent + 2, lines);
                        // "- " takes the place of the first line's extra indent
                        if let Some(first) = lines.get_mut(start) {
                            *first = format!("{pad}- {}", &first[indent + 2..]);
                        }
                    }
                }
            }
        }
        other => lines.push(format!("{}{}", " ".repeat(indent), scalar(other).unwrap_or_default())),
    }
}

fn to_json(value: &Value) -> Json {
    match value {
        Value::Text(s) => Json::String(s.clone()),
        Value::Number(r) => {
            let mut m = Map::new();
            m.insert("exact".into(), Json::String(rational::to_exact(r)));
            m.insert("decimal".into(), Json::String(rational::to_decimal(r)));
            Json::Object(m)
        }
        Value::Integer(n) => Json::from(*n),
        Value::Flag(b) => Json::Bool(*b),
        Value::Record(fields) => Json::Object(fields.iter().map(|(k, v)| (k.clone(), to_json(v))).collect()),
        Value::List(items) => Json::Array(items.iter().map(to_json).collect()),
    }
}
