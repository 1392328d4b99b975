//! Plain-text case files.
//!
//! ```text
//! [limits]
//! name = garver6
//! base_mva = 100
//! cost_unit = 1e3 USD
//!
//! [buses]
//! id kind  p_demand q_demand q_reac v_set v_min v_max v_min_ctg v_max_ctg
//! 1  slack 80       16       0      1.0   0.95  1.05  0.90      1.10
//!
//! [generators]
//! bus kind    p_min p_max q_min q_max p_base participation
//! 1   thermal 0     150   -10   48    50     0.2
//!
//! [corridors]
//! id from to r    x    b s_max cost n0 n_max for_rate
//! 1  1    2  0.10 0.40 0 100   40   1  3     0.01
//!
//! [uncertainty]
//! wind bus=3 alpha=9 beta=2 u_ci=3 u_rt=12 u_co=25 p_rt=120
//! load bus=* sigma_pct=10
//! for corridor=* rate=0.01
//! ```
//!
//! Table sections start with a header row naming the columns, in any order.
//! `#` starts a comment. In `[uncertainty]`, `bus=*` and `corridor=*` apply
//! to every bus or corridor and later rows override earlier ones; a wind row
//! may give `mean=` and `sd=` of the wind speed instead of `alpha=`/`beta=`.
//! `for` rows write into the corridors' `for_rate`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use thiserror::Error;

use crate::network::{
    Bus, BusKind, Corridor, GenKind, Generator, NetworkCase, UncertaintyData, VoltageBand, WindSite,
};
use crate::uncertainty::WindModel;

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("missing section [{0}]")]
    MissingSection(&'static str),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CaseError {
    CaseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// A whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Limits,
    Buses,
    Generators,
    Corridors,
    Uncertainty,
}

struct Row<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
}

struct Table<'a> {
    header: Vec<Token<'a>>,
    header_line: usize,
    rows: Vec<Row<'a>>,
}

/// Column lookup for one table section.
struct Columns<'t, 'a> {
    name: &'static str,
    index: HashMap<&'a str, usize>,
    table: &'t Table<'a>,
}

impl<'t, 'a> Columns<'t, 'a> {
    fn new(
        name: &'static str,
        table: &'t Table<'a>,
        required: &[&str],
        optional: &[&str],
    ) -> Result<Self, CaseError> {
        let mut index = HashMap::new();
        for (i, t) in table.header.iter().enumerate() {
            if !required.contains(&t.text) && !optional.contains(&t.text) {
                return Err(syntax(
                    table.header_line,
                    t.column,
                    format!("unknown column `{}` in [{name}]", t.text),
                ));
            }
            if index.insert(t.text, i).is_some() {
                return Err(syntax(
                    table.header_line,
                    t.column,
                    format!("duplicate column `{}`", t.text),
                ));
            }
        }
        for r in required {
            if !index.contains_key(r) {
                return Err(syntax(
                    table.header_line,
                    1,
                    format!("[{name}] is missing column `{r}`"),
                ));
            }
        }
        Ok(Columns { name, index, table })
    }

    fn check_width(&self, row: &Row<'a>) -> Result<(), CaseError> {
        let n = self.table.header.len();
        if row.tokens.len() != n {
            let column = row.tokens.get(n).map_or(1, |t| t.column);
            return Err(syntax(
                row.line,
                column,
                format!(
                    "[{}] row has {} fields, header has {n}",
                    self.name,
                    row.tokens.len()
                ),
            ));
        }
        Ok(())
    }

    fn token(&self, row: &Row<'a>, col: &str) -> Option<Token<'a>> {
        self.index.get(col).map(|&i| row.tokens[i])
    }

    fn f64(&self, row: &Row<'a>, col: &str) -> Result<f64, CaseError> {
        let t = self.token(row, col).expect("required column");
        parse_f64(row.line, t)
    }

    fn f64_or(&self, row: &Row<'a>, col: &str, default: f64) -> Result<f64, CaseError> {
        match self.token(row, col) {
            Some(t) => parse_f64(row.line, t),
            None => Ok(default),
        }
    }

    fn u32(&self, row: &Row<'a>, col: &str) -> Result<u32, CaseError> {
        let t = self.token(row, col).expect("required column");
        parse_u32(row.line, t)
    }
}

fn parse_f64(line: usize, t: Token<'_>) -> Result<f64, CaseError> {
    let v: f64 = t.text.parse().map_err(|_| {
        syntax(
            line,
            t.column,
            format!("expected a number, found `{}`", t.text),
        )
    })?;
    if !v.is_finite() {
        return Err(syntax(line, t.column, "value must be finite"));
    }
    Ok(v)
}

fn parse_u32(line: usize, t: Token<'_>) -> Result<u32, CaseError> {
    t.text.parse().map_err(|_| {
        syntax(
            line,
            t.column,
            format!("expected a non-negative integer, found `{}`", t.text),
        )
    })
}

pub fn parse_case(text: &str) -> Result<NetworkCase, CaseError> {
    let mut limits: Vec<(usize, &str, &str, usize)> = Vec::new();
    let mut tables: HashMap<&'static str, Table<'_>> = HashMap::new();
    let mut uncertainty_rows: Vec<Row<'_>> = Vec::new();
    let mut seen_uncertainty = false;
    let mut current: Option<Section> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            let col = line.find('[').unwrap_or(0) + 1;
            let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                return Err(syntax(line_no, col, "unterminated section header"));
            };
            let section = match name.trim() {
                "limits" => Section::Limits,
                "buses" => Section::Buses,
                "generators" => Section::Generators,
                "corridors" => Section::Corridors,
                "uncertainty" => Section::Uncertainty,
                other => {
                    return Err(syntax(line_no, col, format!("unknown section [{other}]")));
                }
            };
            let key = section_key(section);
            if tables.contains_key(key)
                || (section == Section::Uncertainty && seen_uncertainty)
                || (section == Section::Limits && !limits.is_empty())
            {
                return Err(syntax(
                    line_no,
                    col,
                    format!("section [{key}] appears twice"),
                ));
            }
            seen_uncertainty |= section == Section::Uncertainty;
            current = Some(section);
            continue;
        }
        let Some(section) = current else {
            return Err(syntax(
                line_no,
                1,
                "content before the first section header",
            ));
        };
        match section {
            Section::Limits => {
                let Some((k, v)) = line.split_once('=') else {
                    return Err(syntax(
                        line_no,
                        line.len() - line.trim_start().len() + 1,
                        "expected `key = value`",
                    ));
                };
                let vcol = k.len() + 1 + (v.len() - v.trim_start().len()) + 1;
                limits.push((line_no, k.trim(), v.trim(), vcol));
            }
            Section::Uncertainty => uncertainty_rows.push(Row {
                line: line_no,
                tokens: tokenize(line),
            }),
            _ => {
                let key = section_key(section);
                let tokens = tokenize(line);
                match tables.get_mut(key) {
                    Some(t) => t.rows.push(Row {
                        line: line_no,
                        tokens,
                    }),
                    None => {
                        tables.insert(
                            key,
                            Table {
                                header: tokens,
                                header_line: line_no,
                                rows: Vec::new(),
                            },
                        );
                    }
                }
            }
        }
    }

    let mut name = String::from("case");
    let mut base_mva = 100.0;
    let mut cost_unit = String::from("1");
    for (line, k, v, vcol) in limits {
        match k {
            "name" => name = v.to_string(),
            "cost_unit" => cost_unit = v.to_string(),
            "base_mva" => {
                base_mva = parse_f64(
                    line,
                    Token {
                        text: v,
                        column: vcol,
                    },
                )?;
            }
            other => {
                return Err(syntax(
                    line,
                    1,
                    format!("unknown key `{other}` in [limits]"),
                ))
            }
        }
    }

    let buses = parse_buses(tables.get("buses"))?;
    let bus_of = |line: usize, t: Token<'_>| -> Result<usize, CaseError> {
        let id = parse_u32(line, t)?;
        buses
            .iter()
            .position(|b| b.id == id)
            .ok_or_else(|| syntax(line, t.column, format!("unknown bus {id}")))
    };
    let generators = parse_generators(tables.get("generators"), &bus_of)?;
    let mut corridors = parse_corridors(tables.get("corridors"), &bus_of)?;

    let uncertainty = if seen_uncertainty {
        Some(parse_uncertainty(
            &uncertainty_rows,
            &buses,
            &generators,
            &mut corridors,
        )?)
    } else {
        None
    };

    Ok(NetworkCase {
        name,
        base_mva,
        cost_unit,
        buses,
        generators,
        corridors,
        uncertainty,
    })
}

fn section_key(s: Section) -> &'static str {
    match s {
        Section::Limits => "limits",
        Section::Buses => "buses",
        Section::Generators => "generators",
        Section::Corridors => "corridors",
        Section::Uncertainty => "uncertainty",
    }
}

fn missing(name: &'static str) -> CaseError {
    CaseError::MissingSection(name)
}

fn parse_buses(table: Option<&Table<'_>>) -> Result<Vec<Bus>, CaseError> {
    let table = table.ok_or_else(|| missing("buses"))?;
    let cols = Columns::new(
        "buses",
        table,
        &["id", "kind", "p_demand", "q_demand"],
        &[
            "q_reac",
            "v_set",
            "v_min",
            "v_max",
            "v_min_ctg",
            "v_max_ctg",
        ],
    )?;
    let mut out: Vec<Bus> = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        cols.check_width(row)?;
        let id = cols.u32(row, "id")?;
        if out.iter().any(|b| b.id == id) {
            let t = cols.token(row, "id").expect("required");
            return Err(syntax(row.line, t.column, format!("duplicate bus id {id}")));
        }
        let kt = cols.token(row, "kind").expect("required");
        let kind = match kt.text.to_ascii_lowercase().as_str() {
            "slack" | "ref" => BusKind::Slack,
            "pv" => BusKind::Pv,
            "pq" => BusKind::Pq,
            other => {
                return Err(syntax(
                    row.line,
                    kt.column,
                    format!("bus kind must be slack, pv or pq, found `{other}`"),
                ))
            }
        };
        out.push(Bus {
            id,
            kind,
            p_demand: cols.f64(row, "p_demand")?,
            q_demand: cols.f64(row, "q_demand")?,
            q_reac: cols.f64_or(row, "q_reac", 0.0)?,
            v_set: cols.f64_or(row, "v_set", 1.0)?,
            normal: VoltageBand::new(
                cols.f64_or(row, "v_min", 0.95)?,
                cols.f64_or(row, "v_max", 1.05)?,
            ),
            outage: VoltageBand::new(
                cols.f64_or(row, "v_min_ctg", 0.90)?,
                cols.f64_or(row, "v_max_ctg", 1.10)?,
            ),
        });
    }
    Ok(out)
}

fn parse_generators(
    table: Option<&Table<'_>>,
    bus_of: &dyn Fn(usize, Token<'_>) -> Result<usize, CaseError>,
) -> Result<Vec<Generator>, CaseError> {
    let table = table.ok_or_else(|| missing("generators"))?;
    let cols = Columns::new(
        "generators",
        table,
        &["bus", "kind", "p_max"],
        &["p_min", "q_min", "q_max", "p_base", "participation"],
    )?;
    let mut out = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        cols.check_width(row)?;
        let bus = bus_of(row.line, cols.token(row, "bus").expect("required"))?;
        let kt = cols.token(row, "kind").expect("required");
        let kind = match kt.text.to_ascii_lowercase().as_str() {
            "thermal" => GenKind::Thermal,
            "wind" => GenKind::Wind,
            other => {
                return Err(syntax(
                    row.line,
                    kt.column,
                    format!("generator kind must be thermal or wind, found `{other}`"),
                ))
            }
        };
        out.push(Generator {
            bus,
            kind,
            p_min: cols.f64_or(row, "p_min", 0.0)?,
            p_max: cols.f64(row, "p_max")?,
            q_min: cols.f64_or(row, "q_min", 0.0)?,
            q_max: cols.f64_or(row, "q_max", 0.0)?,
            p_base: cols.f64_or(row, "p_base", 0.0)?,
            participation: cols.f64_or(row, "participation", 0.0)?,
        });
    }
    Ok(out)
}

fn parse_corridors(
    table: Option<&Table<'_>>,
    bus_of: &dyn Fn(usize, Token<'_>) -> Result<usize, CaseError>,
) -> Result<Vec<Corridor>, CaseError> {
    let table = table.ok_or_else(|| missing("corridors"))?;
    let cols = Columns::new(
        "corridors",
        table,
        &["id", "from", "to", "x", "s_max", "cost", "n0", "n_max"],
        &["r", "b", "for_rate"],
    )?;
    let mut out: Vec<Corridor> = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        cols.check_width(row)?;
        let id = cols.u32(row, "id")?;
        if out.iter().any(|c| c.id == id) {
            let t = cols.token(row, "id").expect("required");
            return Err(syntax(
                row.line,
                t.column,
                format!("duplicate corridor id {id}"),
            ));
        }
        out.push(Corridor {
            id,
            from: bus_of(row.line, cols.token(row, "from").expect("required"))?,
            to: bus_of(row.line, cols.token(row, "to").expect("required"))?,
            r: cols.f64_or(row, "r", 0.0)?,
            x: cols.f64(row, "x")?,
            b: cols.f64_or(row, "b", 0.0)?,
            s_max: cols.f64(row, "s_max")?,
            cost: cols.f64(row, "cost")?,
            n0: cols.u32(row, "n0")?,
            n_max: cols.u32(row, "n_max")?,
            for_rate: cols.f64_or(row, "for_rate", 0.0)?,
        });
    }
    Ok(out)
}

/// `key=value` fields of one uncertainty row.
struct Fields<'a> {
    line: usize,
    map: HashMap<&'a str, Token<'a>>,
    key_cols: HashMap<&'a str, usize>,
}

impl<'a> Fields<'a> {
    fn new(row: &Row<'a>, allowed: &[&str]) -> Result<Self, CaseError> {
        let mut map = HashMap::new();
        let mut key_cols = HashMap::new();
        for t in &row.tokens[1..] {
            let Some((k, v)) = t.text.split_once('=') else {
                return Err(syntax(
                    row.line,
                    t.column,
                    format!("expected key=value, found `{}`", t.text),
                ));
            };
            if !allowed.contains(&k) {
                return Err(syntax(row.line, t.column, format!("unknown key `{k}`")));
            }
            if v.is_empty() {
                return Err(syntax(row.line, t.column, format!("`{k}` has no value")));
            }
            let value = Token {
                text: v,
                column: t.column + k.len() + 1,
            };
            if map.insert(k, value).is_some() {
                return Err(syntax(row.line, t.column, format!("`{k}` given twice")));
            }
            key_cols.insert(k, t.column);
        }
        Ok(Fields {
            line: row.line,
            map,
            key_cols,
        })
    }

    fn get(&self, k: &str) -> Option<Token<'a>> {
        self.map.get(k).copied()
    }

    fn require(&self, k: &str, first_col: usize) -> Result<Token<'a>, CaseError> {
        self.get(k)
            .ok_or_else(|| syntax(self.line, first_col, format!("missing `{k}=`")))
    }

    fn f64(&self, k: &str, first_col: usize) -> Result<f64, CaseError> {
        parse_f64(self.line, self.require(k, first_col)?)
    }

    fn col(&self, k: &str) -> usize {
        self.key_cols.get(k).copied().unwrap_or(1)
    }
}

fn parse_uncertainty(
    rows: &[Row<'_>],
    buses: &[Bus],
    generators: &[Generator],
    corridors: &mut [Corridor],
) -> Result<UncertaintyData, CaseError> {
    let mut data = UncertaintyData {
        wind: Vec::new(),
        load_sigma_pct: vec![None; buses.len()],
    };
    for row in rows {
        let head = row.tokens[0];
        match head.text {
            "wind" => {
                let f = Fields::new(
                    row,
                    &[
                        "bus", "alpha", "beta", "mean", "sd", "u_ci", "u_rt", "u_co", "p_rt",
                    ],
                )?;
                let bt = f.require("bus", head.column)?;
                let id = parse_u32(row.line, bt)?;
                let generator = generators
                    .iter()
                    .position(|g| g.kind == GenKind::Wind && buses[g.bus].id == id)
                    .ok_or_else(|| {
                        syntax(
                            row.line,
                            bt.column,
                            format!("no wind generator at bus {id}"),
                        )
                    })?;
                if data.wind.iter().any(|w| w.generator == generator) {
                    return Err(syntax(
                        row.line,
                        bt.column,
                        format!("wind model for bus {id} given twice"),
                    ));
                }
                let (alpha, beta) =
                    match (f.get("alpha"), f.get("beta"), f.get("mean"), f.get("sd")) {
                        (Some(a), Some(b), None, None) => {
                            (parse_f64(row.line, a)?, parse_f64(row.line, b)?)
                        }
                        (None, None, Some(m), Some(s)) => {
                            let (mean, sd) = (parse_f64(row.line, m)?, parse_f64(row.line, s)?);
                            WindModel::weibull_from_mean_sd(mean, sd)
                                .map_err(|e| syntax(row.line, f.col("mean"), e.to_string()))?
                        }
                        _ => {
                            return Err(syntax(
                                row.line,
                                head.column,
                                "wind needs either alpha= and beta= or mean= and sd=",
                            ))
                        }
                    };
                data.wind.push(WindSite {
                    generator,
                    model: WindModel {
                        alpha,
                        beta,
                        u_ci: f.f64("u_ci", head.column)?,
                        u_rt: f.f64("u_rt", head.column)?,
                        u_co: f.f64("u_co", head.column)?,
                        p_rt: f.f64("p_rt", head.column)?,
                    },
                });
            }
            "load" => {
                let f = Fields::new(row, &["bus", "sigma_pct"])?;
                let sigma = f.f64("sigma_pct", head.column)?;
                if sigma < 0.0 {
                    return Err(syntax(
                        row.line,
                        f.col("sigma_pct"),
                        "sigma_pct must be ≥ 0",
                    ));
                }
                let bt = f.require("bus", head.column)?;
                if bt.text == "*" {
                    data.load_sigma_pct
                        .iter_mut()
                        .for_each(|s| *s = Some(sigma));
                } else {
                    let id = parse_u32(row.line, bt)?;
                    let i = buses
                        .iter()
                        .position(|b| b.id == id)
                        .ok_or_else(|| syntax(row.line, bt.column, format!("unknown bus {id}")))?;
                    data.load_sigma_pct[i] = Some(sigma);
                }
            }
            "for" => {
                let f = Fields::new(row, &["corridor", "rate"])?;
                let rate = f.f64("rate", head.column)?;
                let ct = f.require("corridor", head.column)?;
                if ct.text == "*" {
                    corridors.iter_mut().for_each(|c| c.for_rate = rate);
                } else {
                    let id = parse_u32(row.line, ct)?;
                    let c = corridors.iter_mut().find(|c| c.id == id).ok_or_else(|| {
                        syntax(row.line, ct.column, format!("unknown corridor {id}"))
                    })?;
                    c.for_rate = rate;
                }
            }
            other => {
                return Err(syntax(
                    row.line,
                    head.column,
                    format!("uncertainty rows start with wind, load or for, found `{other}`"),
                ))
            }
        }
    }
    Ok(data)
}

pub fn read_case(path: &Path) -> Result<NetworkCase, CaseError> {
    parse_case(&std::fs::read_to_string(path)?)
}

/// Writes a case in the format read by [`parse_case`]. Numbers use the
/// shortest representation that parses back to the same value.
pub fn serialize_case(case: &NetworkCase) -> String {
    let mut s = String::new();
    write_case(&mut s, case).expect("writing to a String cannot fail");
    s
}

fn write_case(s: &mut String, case: &NetworkCase) -> fmt::Result {
    writeln!(s, "[limits]")?;
    writeln!(s, "name = {}", case.name)?;
    writeln!(s, "base_mva = {}", case.base_mva)?;
    writeln!(s, "cost_unit = {}", case.cost_unit)?;

    writeln!(s, "\n[buses]")?;
    let mut rows = vec![str_row(&[
        "id",
        "kind",
        "p_demand",
        "q_demand",
        "q_reac",
        "v_set",
        "v_min",
        "v_max",
        "v_min_ctg",
        "v_max_ctg",
    ])];
    for b in &case.buses {
        rows.push(vec![
            b.id.to_string(),
            b.kind.as_str().to_string(),
            b.p_demand.to_string(),
            b.q_demand.to_string(),
            b.q_reac.to_string(),
            b.v_set.to_string(),
            b.normal.min.to_string(),
            b.normal.max.to_string(),
            b.outage.min.to_string(),
            b.outage.max.to_string(),
        ]);
    }
    write_table(s, &rows)?;

    writeln!(s, "\n[generators]")?;
    let mut rows = vec![str_row(&[
        "bus",
        "kind",
        "p_min",
        "p_max",
        "q_min",
        "q_max",
        "p_base",
        "participation",
    ])];
    for g in &case.generators {
        rows.push(vec![
            case.buses[g.bus].id.to_string(),
            match g.kind {
                GenKind::Thermal => "thermal".into(),
                GenKind::Wind => "wind".into(),
            },
            g.p_min.to_string(),
            g.p_max.to_string(),
            g.q_min.to_string(),
            g.q_max.to_string(),
            g.p_base.to_string(),
            g.participation.to_string(),
        ]);
    }
    write_table(s, &rows)?;

    writeln!(s, "\n[corridors]")?;
    let mut rows = vec![str_row(&[
        "id", "from", "to", "r", "x", "b", "s_max", "cost", "n0", "n_max", "for_rate",
    ])];
    for c in &case.corridors {
        rows.push(vec![
            c.id.to_string(),
            case.buses[c.from].id.to_string(),
            case.buses[c.to].id.to_string(),
            c.r.to_string(),
            c.x.to_string(),
            c.b.to_string(),
            c.s_max.to_string(),
            c.cost.to_string(),
            c.n0.to_string(),
            c.n_max.to_string(),
            c.for_rate.to_string(),
        ]);
    }
    write_table(s, &rows)?;

    if let Some(u) = &case.uncertainty {
        writeln!(s, "\n[uncertainty]")?;
        for w in &u.wind {
            let m = &w.model;
            writeln!(
                s,
                "wind bus={} alpha={} beta={} u_ci={} u_rt={} u_co={} p_rt={}",
                case.buses[case.generators[w.generator].bus].id,
                m.alpha,
                m.beta,
                m.u_ci,
                m.u_rt,
                m.u_co,
                m.p_rt
            )?;
        }
        for (b, sigma) in case.buses.iter().zip(&u.load_sigma_pct) {
            if let Some(sigma) = sigma {
                writeln!(s, "load bus={} sigma_pct={sigma}", b.id)?;
            }
        }
    }
    Ok(())
}

fn str_row(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

fn write_table(s: &mut String, rows: &[Vec<String>]) -> fmt::Result {
    let ncol = rows[0].len();
    let widths: Vec<usize> = (0..ncol)
        .map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let mut line = String::new();
        for (j, cell) in r.iter().enumerate() {
            if j + 1 == ncol {
                line.push_str(cell);
            } else {
                write!(line, "{cell:<w$} ", w = widths[j])?;
            }
        }
        writeln!(s, "{}", line.trim_end())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SMALL: &str = "\
[limits]
name = tiny
base_mva = 100
cost_unit = 1e3 USD

[buses]
id kind p_demand q_demand
1 slack 0 0
2 pq 50 10   # load bus

[generators]
bus kind p_max q_min q_max p_base participation
1 thermal 200 -50 50 50 1
2 wind 30 0 0 10 0

[corridors]
id from to x s_max cost n0 n_max
1 1 2 0.1 100 10 1 3

[uncertainty]
wind bus=2 alpha=9 beta=2 u_ci=3 u_rt=12 u_co=25 p_rt=30
load bus=* sigma_pct=10
for corridor=* rate=0.01
";

    #[test]
    fn parses_small_case() {
        let case = parse_case(SMALL).unwrap();
        assert_eq!(case.name, "tiny");
        assert_eq!(case.cost_unit, "1e3 USD");
        assert_eq!(case.buses.len(), 2);
        assert_eq!(case.buses[1].p_demand, 50.0);
        assert_eq!(case.buses[1].normal, VoltageBand::new(0.95, 1.05));
        assert_eq!(case.generators[1].kind, GenKind::Wind);
        assert_eq!(case.corridors[0].for_rate, 0.01);
        let u = case.uncertainty.as_ref().unwrap();
        assert_eq!(u.wind[0].generator, 1);
        assert_eq!(u.load_sigma_pct, vec![Some(10.0), Some(10.0)]);
    }

    #[test]
    fn round_trip_is_exact() {
        let case = parse_case(SMALL).unwrap();
        let text = serialize_case(&case);
        assert_eq!(parse_case(&text).unwrap(), case);
        assert_eq!(serialize_case(&parse_case(&text).unwrap()), text);
    }

    #[test]
    fn bad_number_reports_line_and_column() {
        let text = SMALL.replace("2 pq 50 10", "2 pq 5x0 10");
        match parse_case(&text) {
            Err(CaseError::Syntax { line, column, .. }) => {
                assert_eq!(line, 9);
                assert_eq!(column, 6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_count_is_rejected() {
        let text = SMALL.replace("1 1 2 0.1 100 10 1 3", "1 1 2 0.1 100 10 1 -3");
        let err = parse_case(&text).unwrap_err().to_string();
        assert!(err.contains("non-negative integer"), "{err}");
    }

    #[test]
    fn unknown_bus_and_section() {
        let text = SMALL.replace("1 1 2 0.1", "1 1 7 0.1");
        assert!(parse_case(&text)
            .unwrap_err()
            .to_string()
            .contains("unknown bus 7"));
        let text = format!("{SMALL}\n[extras]\n");
        assert!(parse_case(&text)
            .unwrap_err()
            .to_string()
            .contains("unknown section"));
    }

    #[test]
    fn wind_from_mean_and_sd() {
        let text = SMALL.replace("alpha=9 beta=2", "mean=7.975 sd=4.169");
        let case = parse_case(&text).unwrap();
        let m = case.uncertainty.unwrap().wind[0].model;
        assert!((m.mean_speed() - 7.975).abs() < 1e-9);
    }

    #[test]
    fn ragged_row_is_rejected() {
        let text = SMALL.replace("2 pq 50 10", "2 pq 50 10 4");
        assert!(parse_case(&text)
            .unwrap_err()
            .to_string()
            .contains("row has 5 fields"));
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6f64..1e6, Just(0.0), Just(0.1), Just(1e-9)]
    }

    proptest! {
        #[test]
        fn round_trip_random_values(
            pd in finite(), q in finite(), x in 1e-4f64..10.0, cost in 0.0f64..1e5,
            rate in 0.0f64..=1.0, n0 in 0u32..4, sigma in 0.0f64..30.0,
        ) {
            let mut case = parse_case(SMALL).unwrap();
            case.buses[1].p_demand = pd;
            case.buses[1].q_demand = q;
            case.corridors[0].x = x;
            case.corridors[0].cost = cost;
            case.corridors[0].for_rate = rate;
            case.corridors[0].n0 = n0;
            case.uncertainty.as_mut().unwrap().load_sigma_pct[0] = Some(sigma);
            let once = serialize_case(&case);
            let back = parse_case(&once).unwrap();
            prop_assert_eq!(&back, &case);
            prop_assert_eq!(serialize_case(&back), once);
        }
    }
}
