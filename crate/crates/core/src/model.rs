//! Line-oriented model files.
//!
//! ```text
//! # comments run to end of line
//! [carrier]
//! a b c
//!
//! [measure]
//! a = 1
//! b = 2
//! c = 3/2
//!
//! [statistic]
//! codomain = left right
//! a -> left
//! b -> left
//! c -> right
//!
//! [events]
//! ab = {a b}
//!
//! [functions]
//! f = a:1 c:5/2
//!
//! [bunch]
//! {a b}
//! {a b c}
//!
//! [tables]
//! {a b} : a=1/3 b=2/3
//! {a b c} : a=2/9 b=4/9 c=1/3
//!
//! [checks]
//! f | ab
//! ```
//!
//! Only `[carrier]` is required. Weights are integers or `p/q`; decimal
//! points are rejected. Function and table entries left out are zero. The
//! event name `all` is predefined as the whole carrier.

use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::measure::{Carrier, Event, NonNegFunction, SigmaFiniteMeasure, Statistic};
use crate::rational::{self, Rational};
use crate::state::Bunch;

/// Name of the predefined whole-carrier event.
pub const ALL: &str = "all";

const SECTIONS: [&str; 8] = [
    "carrier",
    "measure",
    "statistic",
    "events",
    "functions",
    "bunch",
    "tables",
    "checks",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: [{section}] {message}")]
pub struct ParseError {
    pub line: usize,
    pub section: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub carrier: Carrier,
    pub measure: Option<SigmaFiniteMeasure>,
    pub statistic: Option<Statistic>,
    pub events: Vec<(String, Event)>,
    pub functions: Vec<(String, NonNegFunction)>,
    pub bunch: Option<Bunch>,
    pub tables: Vec<(Event, Vec<Rational>)>,
    pub checks: Vec<(String, String)>,
}

impl ModelSpec {
    pub fn new(carrier: Carrier) -> Self {
        ModelSpec {
            carrier,
            measure: None,
            statistic: None,
            events: Vec::new(),
            functions: Vec::new(),
            bunch: None,
            tables: Vec::new(),
            checks: Vec::new(),
        }
    }

    /// Looks up a named event; `all` is the whole carrier.
    pub fn event(&self, name: &str) -> Option<Event> {
        self.events
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.clone())
            .or_else(|| (name == ALL).then(|| Event::full(&self.carrier)))
    }

    /// A named function, or the indicator of a named event.
    pub fn function(&self, name: &str) -> Option<NonNegFunction> {
        self.functions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f.clone())
            .or_else(|| self.event(name).map(|e| e.indicator()))
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

pub fn parse_model(text: &str) -> Result<ModelSpec, ParseError> {
    let mut sections: Vec<(&str, usize, Vec<Line>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(err(number, name, "unknown section"));
            }
            if sections.iter().any(|(s, _, _)| *s == name) {
                return Err(err(number, name, "duplicate section"));
            }
            sections.push((name, number, Vec::new()));
            continue;
        }
        match sections.last_mut() {
            Some((_, _, lines)) => lines.push(Line { number, text: content }),
            None => return Err(err(number, "-", "content before the first section header")),
        }
    }

    let section = |name: &str| {
        sections
            .iter()
            .find(|(s, _, _)| *s == name)
            .map(|(_, n, lines)| (*n, lines))
    };

    let (header_line, carrier_lines) = section("carrier").ok_or_else(|| err(0, "carrier", "missing section"))?;
    let carrier = parse_carrier(header_line, carrier_lines)?;
    let mut model = ModelSpec::new(carrier.clone());

    if let Some((n, lines)) = section("measure") {
        model.measure = Some(parse_measure(&carrier, n, lines)?);
    }
    if let Some((n, lines)) = section("statistic") {
        model.statistic = Some(parse_statistic(&carrier, n, lines)?);
    }
    if let Some((_, lines)) = section("events") {
        for line in lines {
            let (name, body) = split_assignment(line, "events")?;
            check_name(&model, name, line.number, "events")?;
            let event = parse_event(&carrier, body, line.number, "events")?;
            model.events.push((name.to_string(), event));
        }
    }
    if let Some((_, lines)) = section("functions") {
        for line in lines {
            let (name, body) = split_assignment(line, "functions")?;
            check_name(&model, name, line.number, "functions")?;
            let values = parse_entries(&carrier, body, ':', line.number, "functions")?;
            let f = NonNegFunction::new(&carrier, values).map_err(|e| err(line.number, "functions", e))?;
            model.functions.push((name.to_string(), f));
        }
    }
    if let Some((_, lines)) = section("bunch") {
        let events = lines
            .iter()
            .map(|l| parse_event(&carrier, l.text, l.number, "bunch"))
            .collect::<Result<Vec<_>, _>>()?;
        model.bunch = Some(Bunch::new(&carrier, events).expect("events share the carrier"));
    }
    if let Some((_, lines)) = section("tables") {
        for line in lines {
            let (condition, entries) = line
                .text
                .split_once('}')
                .map(|(c, rest)| (format!("{c}}}"), rest.trim()))
                .ok_or_else(|| err(line.number, "tables", "expected `{atoms} : atom=p ...`"))?;
            let entries = entries
                .strip_prefix(':')
                .ok_or_else(|| err(line.number, "tables", "expected `:` after the condition"))?;
            let event = parse_event(&carrier, &condition, line.number, "tables")?;
            if model.tables.iter().any(|(e, _)| *e == event) {
                return Err(err(line.number, "tables", format!("duplicate table for {event}")));
            }
            let values = parse_entries(&carrier, entries, '=', line.number, "tables")?;
            model.tables.push((event, values));
        }
    }
    if let Some((_, lines)) = section("checks") {
        for line in lines {
            let (a, b) = line
                .text
                .split_once('|')
                .map(|(a, b)| (a.trim(), b.trim()))
                .ok_or_else(|| err(line.number, "checks", "expected `function | event`"))?;
            if model.function(a).is_none() {
                return Err(err(line.number, "checks", format!("unknown function or event `{a}`")));
            }
            if model.event(b).is_none() {
                return Err(err(line.number, "checks", format!("unknown event `{b}`")));
            }
            model.checks.push((a.to_string(), b.to_string()));
        }
    }
    Ok(model)
}

/// Canonical text for `model`; [`parse_model`] inverts it.
pub fn emit_model(model: &ModelSpec) -> String {
    let mut out = String::new();
    let carrier = &model.carrier;
    let _ = writeln!(out, "[carrier]\n{}", carrier.atoms().join(" "));

    if let Some(m) = &model.measure {
        out.push_str("\n[measure]\n");
        for (atom, w) in carrier.atoms().iter().zip(m.weights()) {
            let _ = writeln!(out, "{atom} = {}", rational::to_exact(w));
        }
    }
    if let Some(s) = &model.statistic {
        let _ = writeln!(out, "\n[statistic]\ncodomain = {}", s.codomain().atoms().join(" "));
        for (atom, &t) in carrier.atoms().iter().zip(s.map()) {
            let _ = writeln!(out, "{atom} -> {}", s.codomain().atom(t));
        }
    }
    if !model.events.is_empty() {
        out.push_str("\n[events]\n");
        for (name, e) in &model.events {
            let _ = writeln!(out, "{name} = {e}");
        }
    }
    if !model.functions.is_empty() {
        out.push_str("\n[functions]\n");
        for (name, f) in &model.functions {
            let _ = writeln!(out, "{name} ={}", entries_text(carrier, f.values(), ':'));
        }
    }
    if let Some(b) = &model.bunch {
        out.push_str("\n[bunch]\n");
        for e in b.conditions() {
            let _ = writeln!(out, "{e}");
        }
    }
    if !model.tables.is_empty() {
        out.push_str("\n[tables]\n");
        for (e, values) in &model.tables {
            let _ = writeln!(out, "{e} :{}", entries_text(carrier, values, '='));
        }
    }
    if !model.checks.is_empty() {
        out.push_str("\n[checks]\n");
        for (a, b) in &model.checks {
            let _ = writeln!(out, "{a} | {b}");
        }
    }
    out
}

fn entries_text(carrier: &Carrier, values: &[Rational], sep: char) -> String {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| format!(" {}{sep}{}", carrier.atom(i), rational::to_exact(v)))
        .collect()
}

/// Parses a standalone table of `label = weight` lines (an optional section
/// header is ignored) into a measure on `carrier`. Unlisted atoms weigh 0.
pub fn parse_weights(carrier: &Carrier, text: &str) -> Result<SigmaFiniteMeasure, ParseError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| Line {
            number: i + 1,
            text: raw.split('#').next().unwrap_or("").trim(),
        })
        .filter(|l| !l.text.is_empty() && !l.text.starts_with('['))
        .collect();
    let mut weights = vec![Rational::zero(); carrier.len()];
    let mut seen = vec![false; carrier.len()];
    for line in &lines {
        let (atom, value) = split_assignment(line, "nu")?;
        let i = atom_index(carrier, atom, line.number, "nu")?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(err(line.number, "nu", format!("duplicate weight for `{atom}`")));
        }
        weights[i] = parse_weight(value, line.number, "nu", atom)?;
    }
    SigmaFiniteMeasure::new(carrier, weights).map_err(|e| err(0, "nu", e))
}

fn parse_carrier(header: usize, lines: &[Line]) -> Result<Carrier, ParseError> {
    let mut atoms: Vec<&str> = Vec::new();
    for line in lines {
        for token in line.text.split_whitespace() {
            if !valid_label(token) {
                return Err(err(line.number, "carrier", format!("invalid atom label `{token}`")));
            }
            if atoms.contains(&token) {
                return Err(err(line.number, "carrier", format!("duplicate atom `{token}`")));
            }
            atoms.push(token);
        }
    }
    if atoms.is_empty() {
        return Err(err(header, "carrier", "empty carrier"));
    }
    Ok(Carrier::new(atoms).expect("atoms checked"))
}

fn parse_measure(carrier: &Carrier, header: usize, lines: &[Line]) -> Result<SigmaFiniteMeasure, ParseError> {
    let mut weights: Vec<Option<Rational>> = vec![None; carrier.len()];
    for line in lines {
        let (atom, value) = split_assignment(line, "measure")?;
        let i = atom_index(carrier, atom, line.number, "measure")?;
        if weights[i].is_some() {
            return Err(err(line.number, "measure", format!("duplicate weight for `{atom}`")));
        }
        weights[i] = Some(parse_weight(value, line.number, "measure", atom)?);
    }
    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| err(header, "measure", format!("missing weight for `{}`", carrier.atom(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    SigmaFiniteMeasure::new(carrier, weights).map_err(|e| err(header, "measure", e))
}

fn parse_statistic(carrier: &Carrier, header: usize, lines: &[Line]) -> Result<Statistic, ParseError> {
    let (first, rest) = lines
        .split_first()
        .ok_or_else(|| err(header, "statistic", "missing `codomain = ...`"))?;
    let (key, labels) = split_assignment(first, "statistic")?;
    if key != "codomain" {
        return Err(err(first.number, "statistic", "first line must be `codomain = ...`"));
    }
    let labels: Vec<&str> = labels.split_whitespace().collect();
    if let Some(bad) = labels.iter().find(|l| !valid_label(l)) {
        return Err(err(
            first.number,
            "statistic",
            format!("invalid codomain label `{bad}`"),
        ));
    }
    let codomain = Carrier::new(labels.iter().copied()).map_err(|e| err(first.number, "statistic", e))?;

    let mut images: Vec<Option<usize>> = vec![None; carrier.len()];
    for line in rest {
        let (atom, image) = line
            .text
            .split_once("->")
            .map(|(a, t)| (a.trim(), t.trim()))
            .ok_or_else(|| err(line.number, "statistic", "expected `atom -> label`"))?;
        let i = atom_index(carrier, atom, line.number, "statistic")?;
        let t = codomain
            .index_of(image)
            .map_err(|_| err(line.number, "statistic", format!("unknown codomain label `{image}`")))?;
        if images[i].replace(t).is_some() {
            return Err(err(line.number, "statistic", format!("duplicate image for `{atom}`")));
        }
    }
    let map = images
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| err(header, "statistic", format!("no image for `{}`", carrier.atom(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Statistic::from_indices(carrier, &codomain, map).expect("indices checked"))
}

fn parse_event(carrier: &Carrier, text: &str, line: usize, section: &str) -> Result<Event, ParseError> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| err(line, section, format!("expected `{{atoms}}`, got `{text}`")))?;
    let atoms: Vec<&str> = inner.split_whitespace().collect();
    for atom in &atoms {
        atom_index(carrier, atom, line, section)?;
    }
    Ok(Event::from_atoms(carrier, atoms).expect("atoms checked"))
}

fn parse_entries(
    carrier: &Carrier,
    text: &str,
    sep: char,
    line: usize,
    section: &str,
) -> Result<Vec<Rational>, ParseError> {
    let mut values = vec![Rational::zero(); carrier.len()];
    let mut seen = vec![false; carrier.len()];
    for token in text.split_whitespace() {
        let (atom, value) = token
            .split_once(sep)
            .ok_or_else(|| err(line, section, format!("expected `atom{sep}value`, got `{token}`")))?;
        let i = atom_index(carrier, atom, line, section)?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(err(line, section, format!("duplicate entry for `{atom}`")));
        }
        values[i] = parse_weight(value, line, section, atom)?;
    }
    Ok(values)
}

fn parse_weight(text: &str, line: usize, section: &str, atom: &str) -> Result<Rational, ParseError> {
    let value = rational::parse(text.trim()).ok_or_else(|| {
        err(
            line,
            section,
            format!("malformed rational `{}` for `{atom}`", text.trim()),
        )
    })?;
    if value < Rational::zero() {
        return Err(err(
            line,
            section,
            format!("negative weight `{}` for `{atom}`", text.trim()),
        ));
    }
    Ok(value)
}

fn split_assignment<'a>(line: &Line<'a>, section: &str) -> Result<(&'a str, &'a str), ParseError> {
    line.text
        .split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| err(line.number, section, "expected `name = value`"))
}

fn atom_index(carrier: &Carrier, atom: &str, line: usize, section: &str) -> Result<usize, ParseError> {
    carrier
        .index_of(atom)
        .map_err(|_| err(line, section, format!("unknown atom `{atom}`")))
}

fn check_name(model: &ModelSpec, name: &str, line: usize, section: &str) -> Result<(), ParseError> {
    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if !valid {
        return Err(err(line, section, format!("invalid name `{name}`")));
    }
    if name == ALL {
        return Err(err(line, section, "`all` is reserved for the whole carrier"));
    }
    if model.events.iter().any(|(n, _)| n == name) || model.functions.iter().any(|(n, _)| n == name) {
        return Err(err(line, section, format!("duplicate name `{name}`")));
    }
    Ok(())
}

pub(crate) fn valid_label(token: &str) -> bool {
    !token.is_empty()
        && !token.contains(|c: char| c.is_whitespace() || matches!(c, '{' | '}' | '=' | ':' | '|' | '#' | '[' | ']'))
        && !token.contains("->")
}

fn err(line: usize, section: &str, message: impl ToString) -> ParseError {
    ParseError {
        line,
        section: section.to_string(),
        message: message.to_string(),
    }
}
