//! Markdown, CSV and JSON rendering.

use std::fmt::Write as _;

use clap::ValueEnum;
use deltader_core::catalog::FamilyInfo;
use deltader_core::forms::{FormComparison, FormNote};
use deltader_core::locder::Certification;
use deltader_core::{LieAlgebra, Mat, Rational};
use serde::Serialize;

use crate::reports::{AnalyzeReport, DerReport, JacobiReport, LocderReport, TwoLocalSummary};
use crate::table::TableRow;
use crate::witness::WitnessOutcome;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Md,
    Csv,
    Json,
}

pub trait Render: Serialize {
    fn markdown(&self) -> String;
    /// Header and records.
    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>);
}

pub fn render<T: Render + ?Sized>(value: &T, format: Format) -> String {
    match format {
        Format::Md => value.markdown(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let (header, records) = value.csv();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory write");
            for r in records {
                w.write_record(&r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 output")
        }
    }
}

fn kv(pairs: Vec<(&str, String)>) -> (Vec<String>, Vec<Vec<String>>) {
    (
        vec!["key".into(), "value".into()],
        pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect(),
    )
}

/// `Σ c_i e_i` with basis names, e.g. `2x - 1/2e_3`.
pub fn vector_string(v: &[Rational], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in v.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs != Rational::one() {
            let _ = write!(out, "{abs}");
            out.push('·');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Nonzero images of basis vectors, e.g. `x ↦ e_1; e_2 ↦ e_2`.
pub fn operator_string(m: &Mat, names: &[String]) -> String {
    let parts: Vec<String> = (0..m.cols())
        .filter_map(|c| {
            let col = m.column(c);
            col.iter()
                .any(|a| !a.is_zero())
                .then(|| format!("{} ↦ {}", names[c], vector_string(&col, names)))
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}

fn default_names(d: usize) -> Vec<String> {
    (0..d).map(|i| format!("b{i}")).collect()
}

fn notes_md(out: &mut String, notes: &[FormNote]) {
    if notes.is_empty() {
        return;
    }
    out.push_str("\nNotes:\n\n");
    for n in notes {
        let _ = writeln!(out, "- `{}`: {}", n.code, n.message);
    }
}

fn comparisons_md(out: &mut String, title: &str, cmp: &[(String, FormComparison)]) {
    if cmp.is_empty() {
        return;
    }
    let _ = writeln!(out, "\n{title}:\n");
    out.push_str("| reading | printed dim | computed dim | agrees | printed generators outside |\n");
    out.push_str("|---|---|---|---|---|\n");
    for (name, c) in cmp {
        let _ = writeln!(
            out,
            "| {name} | {} | {} | {} | {} |",
            c.printed_dim,
            c.computed_dim,
            yes_no(c.agrees()),
            if c.printed_outside.is_empty() {
                "none".to_string()
            } else {
                c.printed_outside.join(", ")
            }
        );
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
pub struct FamilyList(pub &'static [FamilyInfo]);

impl Render for FamilyList {
    fn markdown(&self) -> String {
        let mut out = String::from("| id | name | parameters | description |\n|---|---|---|---|\n");
        for f in self.0 {
            let params: Vec<String> = f.params.iter().map(|p| format!("{p:?}").to_lowercase()).collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                f.id,
                f.display_name,
                params.join(", "),
                f.description
            );
        }
        out
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let header = ["id", "name", "parameters", "description"].map(String::from).to_vec();
        let rows = self
            .0
            .iter()
            .map(|f| {
                let params: Vec<String> = f.params.iter().map(|p| format!("{p:?}").to_lowercase()).collect();
                vec![
                    f.id.to_string(),
                    f.display_name.to_string(),
                    params.join(" "),
                    f.description.to_string(),
                ]
            })
            .collect();
        (header, rows)
    }
}

/// An algebra rendered for `build`. JSON output is the algebra file itself.
pub struct AlgebraView<'a>(pub &'a LieAlgebra);

impl Serialize for AlgebraView<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.to_file().serialize(s)
    }
}

impl Render for AlgebraView<'_> {
    fn markdown(&self) -> String {
        let a = self.0;
        let names = a.basis_names();
        let mut out = format!("# {}\n\ndimension {}; basis {}\n\n", a.name(), a.dim(), names.join(", "));
        out.push_str("| bracket | value |\n|---|---|\n");
        for (i, j, terms) in a.brackets() {
            let mut v = vec![Rational::zero(); a.dim()];
            for (k, c) in terms {
                v[*k] = c.clone();
            }
            let _ = writeln!(out, "| [{}, {}] | {} |", names[i], names[j], vector_string(&v, names));
        }
        out
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let a = self.0;
        let names = a.basis_names();
        let header = ["i", "j", "k", "coefficient"].map(String::from).to_vec();
        let rows = a
            .brackets()
            .flat_map(|(i, j, terms)| {
                terms
                    .iter()
                    .map(move |(k, c)| vec![names[i].clone(), names[j].clone(), names[*k].clone(), c.to_string()])
            })
            .collect();
        (header, rows)
    }
}

impl Render for JacobiReport {
    fn markdown(&self) -> String {
        match &self.violation {
            None => format!("Jacobi identity holds for {} (dimension {}).\n", self.algebra, self.dim),
            Some(v) => format!(
                "Jacobi identity FAILS for {} on ({}, {}, {}); residual [{}].\n",
                self.algebra,
                v.names[0],
                v.names[1],
                v.names[2],
                v.residual.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
            ),
        }
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut pairs = vec![
            ("algebra", self.algebra.clone()),
            ("dim", self.dim.to_string()),
            ("holds", self.holds.to_string()),
        ];
        if let Some(v) = &self.violation {
            pairs.push(("triple", v.names.join(" ")));
        }
        kv(pairs)
    }
}

/// Names are not part of the JSON report, so renderers take them separately.
pub struct Named<'a, T> {
    pub report: &'a T,
    pub names: Option<&'a [String]>,
}

impl<T: Serialize> Serialize for Named<'_, T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.report.serialize(s)
    }
}

impl<T> Named<'_, T> {
    fn names(&self, d: usize) -> Vec<String> {
        self.names.map_or_else(|| default_names(d), <[String]>::to_vec)
    }
}

fn der_md(r: &DerReport, names: &[String]) -> String {
    let mut out = format!(
        "## {}-derivations of {}\n\ndimension {}{}\n\n",
        r.delta,
        r.algebra,
        r.dim,
        if r.trivial { " (scalar multiples of the identity only)" } else { "" }
    );
    for (i, b) in r.basis.iter().enumerate() {
        let _ = writeln!(out, "{}. {}", i + 1, operator_string(b, names));
    }
    comparisons_md(&mut out, "Printed form", &r.printed_form);
    notes_md(&mut out, &r.form_notes);
    out
}

impl Render for Named<'_, DerReport> {
    fn markdown(&self) -> String {
        let d = self.report.basis.first().map_or(0, Mat::rows);
        der_md(self.report, &self.names(d))
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let r = self.report;
        let names = self.names(r.basis.first().map_or(0, Mat::rows));
        let header = ["index", "operator"].map(String::from).to_vec();
        let rows = r
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| vec![(i + 1).to_string(), operator_string(b, &names)])
            .collect();
        (header, rows)
    }
}

fn locder_md(r: &LocderReport, names: &[String]) -> String {
    let mut out = format!(
        "## Local {}-derivations of {}\n\n| quantity | value |\n|---|---|\n",
        r.delta, r.family
    );
    let _ = writeln!(out, "| dim Der | {} |", r.der_dim);
    let _ = writeln!(out, "| dim LocDer (sampled) | {} |", r.locder_dim);
    let _ = writeln!(out, "| stabilized | {} |", yes_no(r.stabilized));
    let _ = writeln!(out, "| samples | {} |", r.samples);
    let _ = writeln!(out, "| pencil rank-drop points | {} |", r.pencil_points);
    let _ = writeln!(out, "| skipped pencils | {} |", r.skipped_pencils.len());
    let history: Vec<String> = r.dim_history.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "| dimension per sweep | {} |", history.join(" "));
    let failed: Vec<String> = r
        .strata
        .iter()
        .filter(|s| !s.certified)
        .map(|s| s.stratum.to_string())
        .collect();
    let _ = writeln!(
        out,
        "| holdout strata certified | {}/{} |",
        r.strata.len() - failed.len(),
        r.strata.len()
    );
    if !failed.is_empty() {
        let _ = writeln!(out, "\nHoldout failures: {}", failed.join(", "));
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "\nSampled element outside Der: {}", operator_string(w, names));
    }
    comparisons_md(&mut out, "Printed local form", &r.printed_form);
    notes_md(&mut out, &r.form_notes);
    out
}

fn locder_pairs(r: &LocderReport) -> Vec<(&'static str, String)> {
    vec![
        ("family", r.family.clone()),
        ("delta", r.delta.to_string()),
        ("der_dim", r.der_dim.to_string()),
        ("locder_dim", r.locder_dim.to_string()),
        ("stabilized", r.stabilized.to_string()),
        ("samples", r.samples.to_string()),
        ("pencil_points", r.pencil_points.to_string()),
    ]
}

impl Render for Named<'_, LocderReport> {
    fn markdown(&self) -> String {
        let d = self.report.basis.first().map_or(0, Mat::rows);
        locder_md(self.report, &self.names(d))
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        kv(locder_pairs(self.report))
    }
}

fn twolocal_md(r: &TwoLocalSummary) -> String {
    let mut out = format!("## 2-local 1/2-derivations of {}\n\nstatus: {}\n", r.algebra, r.status);
    match &r.detail.certificate {
        Some(c) => {
            let _ = writeln!(
                out,
                "separating tuple: ({}) from {:?} candidates; stacked rank {} = dim Der {}",
                c.labels.join(", "),
                c.source,
                c.stacked_rank,
                c.der_dim
            );
            out.push_str("Every 2-local 1/2-derivation agreeing with a 1/2-derivation on this tuple equals it.\n");
        }
        None => {
            let _ = writeln!(
                out,
                "no separating tuple among {} candidates (budget {})",
                r.detail.tuples_tried, r.detail.budget
            );
        }
    }
    out
}

impl Render for TwoLocalSummary {
    fn markdown(&self) -> String {
        twolocal_md(self)
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        kv(vec![
            ("algebra", self.algebra.clone()),
            ("der_dim", self.der_dim.to_string()),
            ("status", self.status.to_string()),
            ("tuple", self.tuple_labels.join(" ")),
        ])
    }
}

impl Render for Named<'_, AnalyzeReport> {
    fn markdown(&self) -> String {
        let r = self.report;
        let names = self.names(r.jacobi.dim);
        let mut out = format!("# Analysis of {} (seed {})\n\n## Jacobi\n\n", r.algebra, r.seed);
        out.push_str(&r.jacobi.markdown());
        if let Some(d) = &r.der {
            out.push('\n');
            out.push_str(&der_md(d, &names));
        }
        if let Some(l) = &r.locder {
            out.push('\n');
            out.push_str(&locder_md(l, &names));
        }
        if let Some(t) = &r.twolocal {
            out.push('\n');
            out.push_str(&twolocal_md(t));
        }
        out
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let r = self.report;
        let mut pairs = vec![
            ("algebra", r.algebra.clone()),
            ("jacobi", r.jacobi.holds.to_string()),
        ];
        if let Some(d) = &r.der {
            pairs.push(("der_dim", d.dim.to_string()));
        }
        if let Some(l) = &r.locder {
            pairs.push(("locder_dim", l.locder_dim.to_string()));
            pairs.push(("stabilized", l.stabilized.to_string()));
        }
        if let Some(t) = &r.twolocal {
            pairs.push(("twolocal", t.status.to_string()));
        }
        pairs.push(("exit_code", r.exit_code.to_string()));
        kv(pairs)
    }
}

#[derive(Serialize)]
pub struct Table {
    pub seed: u64,
    pub rows: Vec<TableRow>,
    pub all_match: bool,
}

impl Render for Table {
    fn markdown(&self) -> String {
        let mut out = String::from(
            "| algebra | Der expected | Der computed | LocDer expected | LocDer computed | match | 2-local |\n\
             |---|---|---|---|---|---|---|\n",
        );
        let mut notes: Vec<&FormNote> = Vec::new();
        for r in &self.rows {
            let mut marks = String::new();
            for n in &r.form_notes {
                let idx = match notes.iter().position(|m| m.code == n.code) {
                    Some(i) => i,
                    None => {
                        notes.push(n);
                        notes.len() - 1
                    }
                };
                let _ = write!(marks, " [{}]", idx + 1);
            }
            let stab = if r.stabilized { "" } else { " (not stabilized)" };
            let _ = writeln!(
                out,
                "| {}{marks} | {} | {} | {} | {}{stab} | {} | {} |",
                r.family,
                r.der_dim_expected,
                r.der_dim_computed,
                r.locder_dim_expected,
                r.locder_dim_computed,
                yes_no(r.matches),
                r.twolocal_status
            );
        }
        if !notes.is_empty() {
            out.push('\n');
            for (i, n) in notes.iter().enumerate() {
                let _ = writeln!(out, "[{}] `{}`: {}", i + 1, n.code, n.message);
            }
        }
        let mismatches = self.rows.iter().filter(|r| !r.matches).count();
        let _ = writeln!(
            out,
            "\n{} rows, {} mismatches (seed {})",
            self.rows.len(),
            mismatches,
            self.seed
        );
        out
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let header = [
            "family",
            "der_dim_expected",
            "der_dim_computed",
            "locder_dim_expected",
            "locder_dim_computed",
            "match",
            "stabilized",
            "twolocal_status",
            "notes",
        ]
        .map(String::from)
        .to_vec();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.family.clone(),
                    r.der_dim_expected.to_string(),
                    r.der_dim_computed.to_string(),
                    r.locder_dim_expected.to_string(),
                    r.locder_dim_computed.to_string(),
                    r.matches.to_string(),
                    r.stabilized.to_string(),
                    r.twolocal_status.to_string(),
                    r.form_notes.iter().map(|n| n.code.as_str()).collect::<Vec<_>>().join(" "),
                ]
            })
            .collect();
        (header, rows)
    }
}

impl Render for Named<'_, WitnessOutcome> {
    fn markdown(&self) -> String {
        match self.report {
            WitnessOutcome::Refused(r) => format!(
                "No witness for {}: {} (dim Der {}, dim LocDer {}).\n",
                r.family, r.reason, r.der_dim, r.locder_dim
            ),
            WitnessOutcome::Witness(w) => {
                let names = self.names(w.delta.rows());
                let mut out = format!("## Local, non-derivation witness for {}\n\n", w.family);
                let _ = writeln!(out, "Δ: {}\n", operator_string(&w.delta, &names));
                match &w.certification {
                    Certification::Pass { samples, .. } => {
                        let _ = writeln!(
                            out,
                            "Stratified certificate: Δx ∈ S_x at all {samples} sampled points (probabilistic evidence)."
                        );
                    }
                    Certification::Counterexample { x, .. } => {
                        let _ = writeln!(out, "Counterexample at {}", vector_string(x, &names));
                    }
                }
                let _ = writeln!(
                    out,
                    "Der membership: {} (dim Der {}, dim LocDer {})",
                    if w.der_member { "member" } else { "not a member" },
                    w.der_dim,
                    w.locder_dim
                );
                out
            }
        }
    }

    fn csv(&self) -> (Vec<String>, Vec<Vec<String>>) {
        match self.report {
            WitnessOutcome::Refused(r) => kv(vec![
                ("family", r.family.clone()),
                ("outcome", "refused".into()),
                ("reason", r.reason.clone()),
            ]),
            WitnessOutcome::Witness(w) => {
                let names = self.names(w.delta.rows());
                kv(vec![
                    ("family", w.family.clone()),
                    ("outcome", "witness".into()),
                    ("delta", operator_string(&w.delta, &names)),
                    ("certified", w.certification.passed().to_string()),
                    ("der_member", w.der_member.to_string()),
                ])
            }
        }
    }
}
