//! Deterministic rendering of classification, verification and spec reports.
//!
//! JSON keys are sorted, CSV headers are fixed per report kind, and the text
//! table pads every column to its widest cell.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::dsl::Session;
use crate::error::{Error, Result};
use crate::module::{ModuleCtx, Submodule};
use crate::phi::{phi_eval, Characterizer, PhiSpec, PrimenessReport, Witness};
use crate::theorems::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidArgument(format!(
                "unknown format `{other}` (expected table, json or csv)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Rows of strings under a header.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: impl IntoIterator<Item = impl Into<String>>) -> Table {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Space-aligned text with a dashed rule under the header.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&line(&rule));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        w.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv input was UTF-8"))
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
fn to_json<T: Serialize>(value: &T) -> String {
    // `Value` maps are ordered, so a round trip through it sorts every key
    let v = serde_json::to_value(value).expect("report values serialize");
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn yes_no(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

fn witness_cell(ctx: &ModuleCtx, w: Option<&Witness>) -> String {
    w.map(|w| w.render(ctx)).unwrap_or_default()
}

// ---------------------------------------------------------------- classify

/// Primeness flags for every submodule of one context.
#[derive(Clone, Debug)]
pub struct ClassifyReport {
    pub ctx: ModuleCtx,
    /// Column labels, one per flag.
    pub columns: Vec<String>,
    pub reports: Vec<PrimenessReport>,
}

impl ClassifyReport {
    /// Labels flags by `names` where given, by [`PhiSpec::column`] otherwise.
    pub fn new(
        ctx: &ModuleCtx,
        reports: Vec<PrimenessReport>,
        names: &[(String, PhiSpec)],
    ) -> ClassifyReport {
        let columns = reports
            .first()
            .map(|r| {
                r.flags
                    .iter()
                    .map(|f| {
                        let builtin = matches!(f.phi, PhiSpec::Empty | PhiSpec::Zero);
                        match names.iter().find(|(_, p)| p == &f.phi) {
                            Some((n, _)) if !builtin => n.clone(),
                            _ => f.phi.column(),
                        }
                    })
                    .collect()
            })
            .unwrap_or_else(|| vec![PhiSpec::Empty.column(), PhiSpec::Zero.column()]);
        ClassifyReport {
            ctx: ctx.clone(),
            columns,
            reports,
        }
    }

    fn table(&self) -> Table {
        let mut headers = vec![
            "context".to_string(),
            "submodule".into(),
            "size".into(),
            "proper".into(),
        ];
        headers.extend(self.columns.iter().cloned());
        headers.extend(self.columns.iter().map(|c| format!("witness_{c}")));
        let mut t = Table::new(headers);
        let context = self.ctx.descriptor();
        for r in &self.reports {
            let mut row = vec![
                context.clone(),
                r.submodule.label(),
                r.submodule.len().to_string(),
                yes_no(true),
            ];
            row.extend(r.flags.iter().map(|f| yes_no(f.holds)));
            row.extend(
                r.flags
                    .iter()
                    .map(|f| witness_cell(&self.ctx, f.witness.as_ref())),
            );
            t.push(row);
        }
        // M itself is never proper, so no flag holds
        let whole = self.ctx.whole();
        let mut row = vec![
            context,
            whole.label(),
            whole.len().to_string(),
            yes_no(false),
        ];
        row.extend(self.columns.iter().map(|_| yes_no(false)));
        row.extend(self.columns.iter().map(|_| String::new()));
        t.push(row);
        t
    }

    fn json(&self) -> Value {
        let row = |s: &Submodule, proper: bool, flags: Vec<Value>| json!({ "submodule": s.label(), "size": s.len(), "proper": proper, "flags": flags });
        let mut rows: Vec<Value> = self
            .reports
            .iter()
            .map(|r| {
                let flags = r
                    .flags
                    .iter()
                    .zip(&self.columns)
                    .map(|(f, c)| {
                        json!({
                            "phi": c,
                            "holds": f.holds,
                            "witness": f.witness.map(|w| w.render(&self.ctx)),
                        })
                    })
                    .collect();
                row(&r.submodule, true, flags)
            })
            .collect();
        let flags = self
            .columns
            .iter()
            .map(|c| json!({ "phi": c, "holds": false, "witness": null }))
            .collect();
        rows.push(row(&self.ctx.whole(), false, flags));
        json!({ "context": self.ctx.descriptor(), "columns": self.columns, "rows": rows })
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Table => Ok(self.table().to_text()),
            Format::Csv => self.table().to_csv(),
            Format::Json => Ok(to_json(&self.json())),
        }
    }
}

/// Several classifications in one document. Text and CSV concatenate rows;
/// JSON is a list.
pub fn render_classifications(reports: &[ClassifyReport], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let all: Vec<Value> = reports.iter().map(ClassifyReport::json).collect();
            Ok(to_json(&all))
        }
        Format::Table => Ok(reports
            .iter()
            .map(|r| r.table().to_text())
            .collect::<Vec<_>>()
            .join("\n")),
        Format::Csv => {
            // columns differ between contexts only if the φ lists do
            let mut out = String::new();
            for (i, r) in reports.iter().enumerate() {
                let csv = r.table().to_csv()?;
                let skip_header = i > 0 && r.columns == reports[i - 1].columns;
                out.push_str(if skip_header {
                    csv.split_once('\n').map_or("", |(_, rest)| rest)
                } else {
                    &csv
                });
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------- verification

const VERIFY_CSV: [&str; 9] = [
    "kind",
    "subject",
    "context",
    "instances",
    "violations",
    "submodule",
    "phi",
    "elements",
    "detail",
];

fn verification_rows(r: &VerificationReport, t: &mut Table) {
    t.push(vec![
        "summary".into(),
        r.subject.clone(),
        String::new(),
        r.instances_checked.to_string(),
        r.violations.len().to_string(),
        String::new(),
        String::new(),
        String::new(),
        r.schema.clone(),
    ]);
    for c in &r.contexts {
        t.push(vec![
            "tally".into(),
            r.subject.clone(),
            c.context.clone(),
            c.instances.to_string(),
            c.violations.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }
    for v in &r.violations {
        t.push(vec![
            "violation".into(),
            r.subject.clone(),
            v.context.clone(),
            String::new(),
            String::new(),
            v.submodule.clone(),
            v.phi.clone(),
            v.elements.join(" "),
            v.detail.clone(),
        ]);
    }
}

fn verification_text(r: &VerificationReport) -> String {
    let status = if r.passed() { "pass" } else { "FAIL" };
    let mut out = format!(
        "{}: {status}\n  statement: {}\n  instances: {} over {} contexts\n  violations: {}\n",
        r.subject,
        r.schema,
        r.instances_checked,
        r.contexts.len(),
        r.violations.len()
    );
    if !r.violations.is_empty() {
        let mut t = Table::new(["context", "submodule", "phi", "elements", "detail"]);
        for v in &r.violations {
            t.push(vec![
                v.context.clone(),
                v.submodule.clone(),
                v.phi.clone(),
                v.elements.join(" "),
                v.detail.clone(),
            ]);
        }
        for line in t.to_text().lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// One report renders as a JSON object, several as a list.
pub fn render_verification(reports: &[VerificationReport], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(match reports {
            [one] => to_json(one),
            many => to_json(&many),
        }),
        Format::Csv => {
            let mut t = Table::new(VERIFY_CSV);
            for r in reports {
                verification_rows(r, &mut t);
            }
            t.to_csv()
        }
        Format::Table => Ok(reports
            .iter()
            .map(verification_text)
            .collect::<Vec<_>>()
            .join("")),
    }
}

// ---------------------------------------------------------------- spec report

/// One row of a spec report: a named submodule against a named φ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecRow {
    pub submodule: String,
    pub members: String,
    pub phi: String,
    pub value: String,
    pub holds: bool,
    pub witness: Option<String>,
    pub definition: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecReport {
    pub context: String,
    pub size: usize,
    pub submodules: usize,
    pub rows: Vec<SpecRow>,
}

impl SpecReport {
    /// Checks every named proper submodule against every named φ, or against
    /// prime and weak prime when the spec names none.
    pub fn build(session: &Session, cap: usize) -> Result<SpecReport> {
        let ctx = &session.ctx;
        let chars = Characterizer::new(ctx, cap)?;
        let phis: Vec<(String, PhiSpec)> = if session.phis.is_empty() {
            vec![
                ("prime".into(), PhiSpec::Empty),
                ("weak_prime".into(), PhiSpec::Zero),
            ]
        } else {
            session.phis.clone()
        };
        let mut rows = Vec::new();
        for (name, p) in session.submodules.iter().filter(|(_, p)| p.is_proper()) {
            for (phi_name, phi) in &phis {
                let value = phi_eval(phi, p)?;
                let c = chars.characterize(p, phi)?;
                rows.push(SpecRow {
                    submodule: name.clone(),
                    members: p.label(),
                    phi: phi_name.clone(),
                    value: value.as_ref().map_or("empty".into(), Submodule::label),
                    holds: c.definition,
                    witness: c.definition_witness.map(|w| w.render(ctx)),
                    definition: c.definition,
                    ii: c.ii,
                    iii: c.iii,
                    iv: c.iv,
                });
            }
        }
        Ok(SpecReport {
            context: ctx.descriptor(),
            size: ctx.size(),
            submodules: chars.lattice().len(),
            rows,
        })
    }

    fn table(&self) -> Table {
        let mut t = Table::new([
            "submodule",
            "generated",
            "phi",
            "phi_value",
            "phi_prime",
            "witness",
            "def",
            "ii",
            "iii",
            "iv",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.submodule.clone(),
                r.members.clone(),
                r.phi.clone(),
                r.value.clone(),
                yes_no(r.holds),
                r.witness.clone().unwrap_or_default(),
                yes_no(r.definition),
                yes_no(r.ii),
                yes_no(r.iii),
                yes_no(r.iv),
            ]);
        }
        t
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(to_json(self)),
            Format::Csv => self.table().to_csv(),
            Format::Table => Ok(format!(
                "context {} ({} elements, {} submodules)\n{}",
                self.context,
                self.size,
                self.submodules,
                self.table().to_text()
            )),
        }
    }
}
