//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! kind lrp
//! k 2
//! location 0 0 0 10 2
//! client 0 1 1
//! ```
//!
//! The first non-comment line names the kind; every later line is a record
//! whose first token is its key. Unknown keys are rejected. Identifiers for
//! locations, clients and products are dense and in order (`0, 1, 2, …`);
//! machine ids are 0-based.

use std::fmt::Write as _;

use mcdep_core::lrp::{Client, LrpData, Location};
use mcdep_core::schedpack::{Operation, Product, SchedPackData};
use mcdep_core::synthetic::{Link, LinkKind, SyntheticComponent, SyntheticSpec};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceFile {
    Lrp(LrpData),
    SchedPack(SchedPackData),
    Synthetic(SyntheticSpec),
}

impl InstanceFile {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceFile::Lrp(_) => "lrp",
            InstanceFile::SchedPack(_) => "schedpack",
            InstanceFile::Synthetic(_) => "synthetic",
        }
    }
}

type Res<T> = Result<T, CliError>;

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::parse(self.number, message)
    }

    fn arity(&self, expected: usize, usage: &str) -> Res<()> {
        if self.tokens.len() != expected {
            return Err(self.err(format!("expected `{usage}`")));
        }
        Ok(())
    }

    fn int(&self, k: usize, what: &str) -> Res<u64> {
        let t = self.tokens[k];
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(format!("{what} must be a non-negative integer, got `{t}`")));
        }
        t.parse().map_err(|_| self.err(format!("{what} `{t}` is out of range")))
    }

    fn real(&self, k: usize, what: &str) -> Res<f64> {
        decimal(self.tokens[k]).ok_or_else(|| self.err(format!("{what} must be a decimal number, got `{}`", self.tokens[k])))
    }
}

/// Plain decimal: optional sign, digits, optional fraction. No exponents,
/// no `inf`/`nan`.
fn decimal(t: &str) -> Option<f64> {
    let body = t.strip_prefix(['-', '+']).unwrap_or(t);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || frac.is_some_and(|f| !digits(f)) {
        return None;
    }
    t.parse().ok()
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(k, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line { number: k + 1, tokens })
        })
        .collect()
}

pub fn parse(text: &str) -> Res<InstanceFile> {
    let lines = lines(text);
    let Some(header) = lines.first() else {
        return Err(CliError::parse(1, "missing `kind` header"));
    };
    if header.tokens[0] != "kind" || header.tokens.len() != 2 {
        return Err(header.err("first record must be `kind <lrp|schedpack|synthetic>`"));
    }
    let body = &lines[1..];
    let file = match header.tokens[1] {
        "lrp" => InstanceFile::Lrp(parse_lrp(body, header.number)?),
        "schedpack" => InstanceFile::SchedPack(parse_schedpack(body, header.number)?),
        "synthetic" => InstanceFile::Synthetic(parse_synthetic(body, header.number)?),
        other => return Err(header.err(format!("unknown kind `{other}`"))),
    };
    validate(&file)?;
    Ok(file)
}

/// Model invariants, reported as validation errors.
pub fn validate(file: &InstanceFile) -> Res<()> {
    let r = match file {
        InstanceFile::Lrp(d) => d.validate(),
        InstanceFile::SchedPack(d) => d.validate(),
        InstanceFile::Synthetic(s) => s.validate(),
    };
    r.map_err(|e| CliError::Validation(e.to_string()))
}

fn once<T>(slot: &mut Option<T>, line: &Line<'_>, value: T) -> Res<()> {
    if slot.is_some() {
        return Err(line.err(format!("duplicate `{}` record", line.tokens[0])));
    }
    *slot = Some(value);
    Ok(())
}

fn expect_id(line: &Line<'_>, got: u64, next: usize, what: &str) -> Res<()> {
    if got != next as u64 {
        return Err(line.err(format!("expected {what} id {next}, got {got}")));
    }
    Ok(())
}

fn parse_lrp(body: &[Line<'_>], header: usize) -> Res<LrpData> {
    let mut k = None;
    let mut alpha = None;
    let mut locations = Vec::new();
    let mut clients = Vec::new();
    for line in body {
        match line.tokens[0] {
            "k" => {
                line.arity(2, "k <int>")?;
                once(&mut k, line, line.int(1, "k")? as usize)?;
            }
            "location" => {
                line.arity(6, "location <id> <x> <y> <base_cost> <per_client_cost>")?;
                expect_id(line, line.int(1, "location id")?, locations.len(), "location")?;
                locations.push(Location {
                    x: line.real(2, "x")?,
                    y: line.real(3, "y")?,
                    base_cost: line.real(4, "base_cost")?,
                    per_client_cost: line.real(5, "per_client_cost")?,
                });
            }
            "client" => {
                line.arity(4, "client <id> <x> <y>")?;
                expect_id(line, line.int(1, "client id")?, clients.len(), "client")?;
                clients.push(Client { x: line.real(2, "x")?, y: line.real(3, "y")? });
            }
            "alpha" => {
                line.arity(3, "alpha <a1> <a2>")?;
                once(&mut alpha, line, [line.real(1, "alpha")?, line.real(2, "alpha")?])?;
            }
            other => return Err(line.err(format!("unknown key `{other}` for kind lrp"))),
        }
    }
    let Some(k) = k else {
        return Err(CliError::parse(header, "missing `k` record"));
    };
    Ok(LrpData { locations, clients, k, alpha })
}

fn parse_schedpack(body: &[Line<'_>], header: usize) -> Res<SchedPackData> {
    let mut machines = None;
    let mut week_hours = None;
    let mut container = None;
    let mut alpha = None;
    let mut products = Vec::new();
    let mut demand: Vec<(usize, u64, usize)> = Vec::new();
    for line in body {
        match line.tokens[0] {
            "machines" => {
                line.arity(2, "machines <int>")?;
                once(&mut machines, line, line.int(1, "machines")? as usize)?;
            }
            "week_hours" => {
                line.arity(2, "week_hours <int>")?;
                once(&mut week_hours, line, line.int(1, "week_hours")?)?;
            }
            "product" => {
                if line.tokens.len() < 4 {
                    return Err(line.err("expected `product <id> <volume> <machine,hours> ...`"));
                }
                expect_id(line, line.int(1, "product id")?, products.len(), "product")?;
                let volume = line.int(2, "volume")?;
                let operations = line.tokens[3..]
                    .iter()
                    .map(|t| {
                        let (m, h) = t
                            .split_once(',')
                            .ok_or_else(|| line.err(format!("operation `{t}` must be `machine,hours`")))?;
                        let int = |s: &str, what: &str| {
                            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                                return Err(line.err(format!("{what} in `{t}` must be a non-negative integer")));
                            }
                            s.parse::<u64>().map_err(|_| line.err(format!("{what} in `{t}` is out of range")))
                        };
                        Ok(Operation { machine: int(m, "machine")? as usize, hours: int(h, "hours")? })
                    })
                    .collect::<Res<Vec<_>>>()?;
                products.push(Product { volume, operations });
            }
            "demand" => {
                line.arity(3, "demand <product_id> <count>")?;
                let pid = line.int(1, "product id")? as usize;
                if demand.iter().any(|&(p, _, _)| p == pid) {
                    return Err(line.err(format!("duplicate demand for product {pid}")));
                }
                demand.push((pid, line.int(2, "count")?, line.number));
            }
            "container" => {
                line.arity(3, "container <capacity> <rent>")?;
                once(&mut container, line, (line.int(1, "capacity")?, line.real(2, "rent")?))?;
            }
            "alpha" => {
                line.arity(3, "alpha <delay> <rent>")?;
                once(&mut alpha, line, [line.real(1, "alpha")?, line.real(2, "alpha")?])?;
            }
            other => return Err(line.err(format!("unknown key `{other}` for kind schedpack"))),
        }
    }
    let missing = |what| CliError::parse(header, format!("missing `{what}` record"));
    let machines = machines.ok_or_else(|| missing("machines"))?;
    let week_hours = week_hours.ok_or_else(|| missing("week_hours"))?;
    let (capacity, rent) = container.ok_or_else(|| missing("container"))?;
    let mut counts = vec![0; products.len()];
    for (pid, count, number) in demand {
        let slot = counts
            .get_mut(pid)
            .ok_or_else(|| CliError::parse(number, format!("demand for unknown product {pid}")))?;
        *slot = count;
    }
    Ok(SchedPackData { machines, week_hours, products, demand: counts, capacity, rent, alpha })
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

fn parse_synthetic(body: &[Line<'_>], header: usize) -> Res<SyntheticSpec> {
    let mut components: Vec<SyntheticComponent> = Vec::new();
    let mut links = Vec::new();
    let mut alpha = None;
    for line in body {
        match line.tokens[0] {
            "component" => {
                if line.tokens.len() < 3 {
                    return Err(line.err("expected `component <name> <width> [costs ...]`"));
                }
                let name = line.tokens[1];
                if !valid_name(name) {
                    return Err(line.err(format!("component name `{name}` must be [A-Za-z0-9_-]+")));
                }
                if components.iter().any(|c| c.name == name) {
                    return Err(line.err(format!("duplicate component `{name}`")));
                }
                let width = line.int(2, "width")?;
                let width = u32::try_from(width).map_err(|_| line.err("width out of range"))?;
                let costs = if line.tokens.len() > 3 {
                    Some((3..line.tokens.len()).map(|k| line.real(k, "cost")).collect::<Res<Vec<_>>>()?)
                } else {
                    None
                };
                components.push(SyntheticComponent { name: name.to_string(), width, costs });
            }
            "link" => {
                line.arity(4, "link <source> <target> <fitness|feasibility>")?;
                let find = |name: &str| {
                    components
                        .iter()
                        .position(|c| c.name == name)
                        .ok_or_else(|| line.err(format!("unknown component `{name}`")))
                };
                let kind = match line.tokens[3] {
                    "fitness" => LinkKind::Fitness,
                    "feasibility" => LinkKind::Feasibility,
                    other => return Err(line.err(format!("link kind must be fitness or feasibility, got `{other}`"))),
                };
                links.push(Link { source: find(line.tokens[1])?, target: find(line.tokens[2])?, kind });
            }
            "alpha" => {
                if line.tokens.len() < 2 {
                    return Err(line.err("expected `alpha <a1> ...`"));
                }
                let values = (1..line.tokens.len()).map(|k| line.real(k, "alpha")).collect::<Res<Vec<_>>>()?;
                once(&mut alpha, line, values)?;
            }
            other => return Err(line.err(format!("unknown key `{other}` for kind synthetic"))),
        }
    }
    if components.len() < 2 {
        return Err(CliError::parse(header, "a synthetic problem needs at least two components"));
    }
    Ok(SyntheticSpec { components, links, alpha })
}

/// Canonical text: records in a fixed order, no comments.
pub fn serialize(file: &InstanceFile) -> String {
    let mut out = String::new();
    writeln!(out, "kind {}", file.kind()).unwrap();
    match file {
        InstanceFile::Lrp(d) => {
            writeln!(out, "k {}", d.k).unwrap();
            for (id, l) in d.locations.iter().enumerate() {
                writeln!(out, "location {id} {} {} {} {}", l.x, l.y, l.base_cost, l.per_client_cost).unwrap();
            }
            for (id, c) in d.clients.iter().enumerate() {
                writeln!(out, "client {id} {} {}", c.x, c.y).unwrap();
            }
            if let Some([a, b]) = d.alpha {
                writeln!(out, "alpha {a} {b}").unwrap();
            }
        }
        InstanceFile::SchedPack(d) => {
            writeln!(out, "machines {}", d.machines).unwrap();
            writeln!(out, "week_hours {}", d.week_hours).unwrap();
            for (id, p) in d.products.iter().enumerate() {
                write!(out, "product {id} {}", p.volume).unwrap();
                for op in &p.operations {
                    write!(out, " {},{}", op.machine, op.hours).unwrap();
                }
                out.push('\n');
            }
            for (id, n) in d.demand.iter().enumerate() {
                writeln!(out, "demand {id} {n}").unwrap();
            }
            writeln!(out, "container {} {}", d.capacity, d.rent).unwrap();
            if let Some([a, b]) = d.alpha {
                writeln!(out, "alpha {a} {b}").unwrap();
            }
        }
        InstanceFile::Synthetic(s) => {
            for c in &s.components {
                write!(out, "component {} {}", c.name, c.width).unwrap();
                for v in c.costs.iter().flatten() {
                    write!(out, " {v}").unwrap();
                }
                out.push('\n');
            }
            for l in &s.links {
                writeln!(
                    out,
                    "link {} {} {}",
                    s.components[l.source].name,
                    s.components[l.target].name,
                    l.kind.as_str()
                )
                .unwrap();
            }
            if let Some(a) = &s.alpha {
                let text: Vec<String> = a.iter().map(f64::to_string).collect();
                writeln!(out, "alpha {}", text.join(" ")).unwrap();
            }
        }
    }
    out
}
