//! One function per subcommand. Each returns an [`Output`] for rendering.

use csd_core::corpus;
use csd_core::degrees::CyclicDegrees;
use csd_core::density::{self, ApproachWitness, Construction};
use csd_core::lattice;
use csd_core::spec::{self, GroupExpr};
use csd_core::spectra::{self, ClassRow, DegreeSpectrum, GroupAnalysis, ScanReport};
use csd_core::verify::{self, Status, Suite, SuiteReport, VerifyConfig};
use csd_core::{Degree, GroupError, GroupTable, Limits};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cache::Cache;
use crate::error::CliError;
use crate::report::{frac, show, table, Output, Row};

pub struct Context {
    pub limits: Limits,
    pub prime_horizon: u64,
    pub cache: Cache,
}

/// Parse every spec up front so that input errors surface before any work.
fn parse_specs(specs: &[String]) -> Result<Vec<GroupExpr>, CliError> {
    specs
        .iter()
        .map(|s| spec::parse(s).map_err(|source| CliError::Spec { spec: s.clone(), source }))
        .collect()
}

fn canonical(exprs: &[GroupExpr]) -> Vec<String> {
    exprs.iter().map(|e| e.to_string()).collect()
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report payloads serialize")
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// `Ok(None)` when the full lattice is over its bound.
fn lattice_if_bounded<T>(r: Result<T, GroupError>) -> Result<Option<T>, GroupError> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(GroupError::LatticeBound { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Info {
    pub spec: String,
    pub order: usize,
    pub cyclic_subgroups: usize,
    /// `None` when the order is over the full-lattice bound.
    pub subgroups: Option<usize>,
    pub normal_cyclic_subgroups: usize,
    pub gamma: Option<usize>,
    pub iwasawa: bool,
}

fn compute_info(expr: &GroupExpr, limits: &Limits) -> Result<Info, CliError> {
    let g = spec::build(expr, limits)?;
    let poset = lattice::cyclic_subgroups(&g);
    let full = lattice_if_bounded(lattice::all_subgroups(&g, limits))?;
    Ok(Info {
        spec: expr.to_string(),
        order: g.order(),
        cyclic_subgroups: poset.len(),
        subgroups: full.as_ref().map(|l| l.len()),
        normal_cyclic_subgroups: poset.normal_count(),
        gamma: full.as_ref().map(|l| l.gamma()),
        iwasawa: spectra::is_iwasawa(&g),
    })
}

pub fn info(ctx: &mut Context, specs: &[String]) -> Result<Output, CliError> {
    let exprs = parse_specs(specs)?;
    let limits = ctx.limits;
    let kind = format!("info;lattice<={}", limits.max_lattice_order);
    let infos = exprs
        .iter()
        .map(|e| ctx.cache.get_or_compute(&e.to_string(), &kind, || compute_info(e, &limits)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for i in &infos {
        let fields: [(&str, String); 6] = [
            ("order", i.order.to_string()),
            ("cyclic_subgroups", i.cyclic_subgroups.to_string()),
            ("subgroups", opt(i.subgroups)),
            ("normal_cyclic_subgroups", i.normal_cyclic_subgroups.to_string()),
            ("gamma", opt(i.gamma)),
            ("iwasawa", i.iwasawa.to_string()),
        ];
        rows.extend(fields.into_iter().map(|(m, v)| Row::new(&i.spec, "G", m, v)));
    }
    let text = table(
        &["spec", "order", "|L1|", "|L|", "|N∩L1|", "gamma", "Iwasawa"],
        &infos
            .iter()
            .map(|i| {
                vec![
                    i.spec.clone(),
                    i.order.to_string(),
                    i.cyclic_subgroups.to_string(),
                    opt(i.subgroups),
                    i.normal_cyclic_subgroups.to_string(),
                    opt(i.gamma),
                    yes_no(i.iwasawa),
                ]
            })
            .collect::<Vec<_>>(),
    );
    Ok(Output {
        command: json!({"name": "info"}),
        specs: canonical(&exprs),
        results: to_value(&infos),
        rows,
        text,
        failed: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DegreeKind {
    /// Cyclic subgroup commutativity degree
    Csd,
    /// Subgroup commutativity degree
    Sd,
}

impl DegreeKind {
    fn id(self) -> &'static str {
        match self {
            DegreeKind::Csd => "csd",
            DegreeKind::Sd => "sd",
        }
    }
}

/// `all` or a single class id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassSelector {
    All,
    Class(usize),
}

impl std::str::FromStr for ClassSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(ClassSelector::All);
        }
        s.parse()
            .map(ClassSelector::Class)
            .map_err(|_| format!("expected `all` or a class id, got `{s}`"))
    }
}

impl std::fmt::Display for ClassSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassSelector::All => f.write_str("all"),
            ClassSelector::Class(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub spec: String,
    pub kind: DegreeKind,
    /// The degree of the whole group, without `--relative`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Degree>,
    /// One row per selected conjugacy class of subgroups, with `--relative`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative: Option<Vec<ClassRow>>,
}

fn compute_degree(expr: &GroupExpr, kind: DegreeKind, relative: bool, limits: &Limits) -> Result<DegreeResult, CliError> {
    let g = spec::build(expr, limits)?;
    let mut out = DegreeResult {
        spec: expr.to_string(),
        kind,
        value: None,
        relative: None,
    };
    match (kind, relative) {
        (DegreeKind::Csd, false) => out.value = Some(CyclicDegrees::new(&g).csd()),
        (DegreeKind::Sd, false) => out.value = Some(csd_core::degrees::sd(&g, limits)?),
        (_, true) => {
            let a = GroupAnalysis::new(&g, limits)?;
            let s = match kind {
                DegreeKind::Csd => a.relative_csd_spectrum(),
                DegreeKind::Sd => a.relative_sd_spectrum(),
            };
            out.relative = Some(s.table);
        }
    }
    Ok(out)
}

pub fn degree(
    ctx: &mut Context,
    kind: DegreeKind,
    specs: &[String],
    relative: Option<ClassSelector>,
) -> Result<Output, CliError> {
    let exprs = parse_specs(specs)?;
    let limits = ctx.limits;
    let cache_kind = format!("degree;{};relative={}", kind.id(), relative.is_some());
    let mut results = Vec::new();
    for e in &exprs {
        let mut r = ctx.cache.get_or_compute(&e.to_string(), &cache_kind, || {
            compute_degree(e, kind, relative.is_some(), &limits)
        })?;
        if let (Some(ClassSelector::Class(id)), Some(rows)) = (relative, r.relative.as_mut()) {
            if id >= rows.len() {
                return Err(CliError::Input(format!(
                    "{}: class {id} does not exist (classes are 0..{})",
                    r.spec,
                    rows.len()
                )));
            }
            rows.retain(|row| row.class_id == id);
        }
        results.push(r);
    }

    let label = match kind {
        DegreeKind::Csd => "csd",
        DegreeKind::Sd => "sd",
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    if relative.is_none() {
        let mut lines = Vec::new();
        for r in &results {
            let v = r.value.as_ref().expect("group degree present");
            rows.push(Row::new(&r.spec, "G", label, v));
            lines.push(vec![r.spec.clone(), show(v)]);
        }
        text = table(&["spec", label], &lines);
    } else {
        let measure = format!("{label}(H,G)");
        for r in &results {
            let classes = r.relative.as_deref().unwrap_or_default();
            if !text.is_empty() {
                text.push('\n');
            }
            text.push_str(&format!("{}: {measure} by conjugacy class of subgroups\n", r.spec));
            text.push_str(&class_table(classes, &[(measure.as_str(), classes)]));
            for c in classes {
                rows.push(Row::new(&r.spec, class_label(c), measure.as_str(), &c.value));
            }
        }
    }
    Ok(Output {
        command: json!({"name": "degree", "kind": kind.id(), "relative": relative.map(|s| s.to_string())}),
        specs: canonical(&exprs),
        results: to_value(&results),
        rows,
        text,
        failed: false,
    })
}

fn class_label(c: &ClassRow) -> String {
    format!("#{} {}", c.class_id, c.representative)
}

/// One line per class; each named column holds the value a map takes on it.
fn class_table(classes: &[ClassRow], columns: &[(&str, &[ClassRow])]) -> String {
    let mut headers = vec!["class", "representative", "order", "size", "normal"];
    headers.extend(columns.iter().map(|(name, _)| *name));
    let lines: Vec<Vec<String>> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut line = vec![
                c.class_id.to_string(),
                c.representative.clone(),
                c.order.to_string(),
                c.class_size.to_string(),
                yes_no(c.normal),
            ];
            line.extend(columns.iter().map(|(_, col)| show(&col[i].value)));
            line
        })
        .collect();
    table(&headers, &lines)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSizes {
    pub im_f1: usize,
    pub im_g1: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_f: Option<usize>,
    pub gamma: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub spec: String,
    pub sizes: SpectrumSizes,
    /// `H -> csd(H, G)`
    pub im_f1: DegreeSpectrum,
    /// `H -> csd(H)`
    pub im_g1: DegreeSpectrum,
    /// `H -> sd(H, G)`, with `--sd`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_f: Option<DegreeSpectrum>,
}

fn compute_spectrum(expr: &GroupExpr, with_sd: bool, limits: &Limits) -> Result<SpectrumResult, CliError> {
    let g: GroupTable = spec::build(expr, limits)?;
    let a = GroupAnalysis::new(&g, limits)?;
    let im_f1 = a.relative_csd_spectrum();
    let im_g1 = a.csd_spectrum();
    let im_f = with_sd.then(|| a.relative_sd_spectrum());
    Ok(SpectrumResult {
        spec: expr.to_string(),
        sizes: SpectrumSizes {
            im_f1: im_f1.len(),
            im_g1: im_g1.len(),
            im_f: im_f.as_ref().map(DegreeSpectrum::len),
            gamma: a.lattice().gamma(),
        },
        im_f1,
        im_g1,
        im_f,
    })
}

pub fn spectrum(ctx: &mut Context, specs: &[String], with_sd: bool) -> Result<Output, CliError> {
    let exprs = parse_specs(specs)?;
    let limits = ctx.limits;
    let kind = format!("spectrum;sd={with_sd}");
    let results = exprs
        .iter()
        .map(|e| ctx.cache.get_or_compute(&e.to_string(), &kind, || compute_spectrum(e, with_sd, &limits)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    let mut text = String::new();
    for r in &results {
        let mut columns: Vec<(&str, &[ClassRow])> = vec![("csd(H,G)", &r.im_f1.table), ("csd(H)", &r.im_g1.table)];
        if let Some(f) = &r.im_f {
            columns.push(("sd(H,G)", &f.table));
        }
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&format!(
            "{}: |Im f1| = {}, |Im g1| = {}{}, gamma = {}\n",
            r.spec,
            r.sizes.im_f1,
            r.sizes.im_g1,
            r.sizes.im_f.map(|n| format!(", |Im f| = {n}")).unwrap_or_default(),
            r.sizes.gamma,
        ));
        let values = |s: &DegreeSpectrum| s.distinct_values.iter().map(frac).collect::<Vec<_>>().join(", ");
        text.push_str(&format!("Im f1 = {{{}}}\n", values(&r.im_f1)));
        text.push_str(&format!("Im g1 = {{{}}}\n", values(&r.im_g1)));
        if let Some(f) = &r.im_f {
            text.push_str(&format!("Im f = {{{}}}\n", values(f)));
        }
        text.push_str(&class_table(&r.im_f1.table, &columns));
        for (name, col) in &columns {
            for c in col.iter() {
                rows.push(Row::new(&r.spec, class_label(c), *name, &c.value));
            }
        }
    }
    Ok(Output {
        command: json!({"name": "spectrum", "sd": with_sd}),
        specs: canonical(&exprs),
        results: to_value(&results),
        rows,
        text,
        failed: false,
    })
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::DocumentedDeviation => "deviation",
    }
}

pub fn verify(ctx: &mut Context, selection: &str) -> Result<Output, CliError> {
    let suites = Suite::parse_selection(selection).map_err(CliError::Input)?;
    let cfg = VerifyConfig {
        limits: ctx.limits,
        prime_horizon: ctx.prime_horizon,
    };
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| verify::run(s, &cfg)).collect();

    let mut rows = Vec::new();
    let mut text = String::new();
    for r in &reports {
        let id = r.suite.id();
        text.push_str(&format!(
            "{id}: {} ({} pass, {} fail, {} documented deviation)\n  {}\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.count(Status::Pass),
            r.count(Status::Fail),
            r.count(Status::DocumentedDeviation),
            r.suite.describe(),
        ));
        let lines: Vec<Vec<String>> = r
            .checks
            .iter()
            .map(|c| {
                vec![
                    format!("  {}", status_label(c.status)),
                    c.name.clone(),
                    c.expected.clone(),
                    c.observed.clone(),
                ]
            })
            .collect();
        text.push_str(&table(&["  status", "check", "expected", "observed"], &lines));
        for c in r.checks.iter().filter(|c| c.note.is_some()) {
            text.push_str(&format!("  note ({}): {}\n", c.name, c.note.as_deref().unwrap_or_default()));
        }
        text.push('\n');
        for c in &r.checks {
            rows.push(Row::new(id, c.name.as_str(), status_label(c.status), &c.observed));
        }
    }
    let failed = reports.iter().any(|r| !r.passed());
    text.push_str(if failed { "result: FAIL\n" } else { "result: PASS\n" });
    Ok(Output {
        command: json!({"name": "verify", "suite": selection}),
        specs: Vec::new(),
        results: to_value(&reports),
        rows,
        text,
        failed,
    })
}

/// `a/b` with `0 <= a <= b`, kept unreduced.
pub fn parse_target(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Input(format!("expected a rational a/b with 0 <= a <= b, got `{s}`"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if b == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn parse_degree(s: &str) -> Result<Degree, CliError> {
    s.parse().map_err(|e: csd_core::degree::ParseDegreeError| CliError::Input(e.0))
}

/// Concrete-group check of a witness against its formula values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub spec: String,
    pub terms: Vec<Degree>,
    pub product: Degree,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproachResult {
    pub witness: ApproachWitness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

fn oracle_check(w: &ApproachWitness, limits: &Limits) -> Result<OracleCheck, CliError> {
    let terms = w.oracle_terms(limits)?;
    let (g, h) = w.product_group(limits)?;
    let product = csd_core::degrees::csd_relative(&g, &h);
    let formula: Vec<Degree> = w.terms.iter().map(|t| t.value.clone()).collect();
    let matches = terms == formula && product == w.value;
    Ok(OracleCheck {
        spec: g.spec().to_string(),
        terms,
        product,
        matches,
    })
}

pub fn density_approach(ctx: &mut Context, target: &str, tol: &str, oracle: bool) -> Result<Output, CliError> {
    let (a, b) = parse_target(target)?;
    let tol = parse_degree(tol)?;
    let witness = density::approach_rational(a, b, &tol, ctx.prime_horizon)?;
    witness.check()?;
    let oracle = if oracle { Some(oracle_check(&witness, &ctx.limits)?) } else { None };

    let mut text = format!(
        "target {a}/{b}, tolerance {}\nconstruction: {}\n",
        frac(&witness.tolerance),
        match witness.construction {
            Construction::Iwasawa => "Iwasawa group (every relative degree is 1)".to_string(),
            Construction::QuaternionTail { n } => format!("generalized quaternion group Q{}", 1u64 << n),
            Construction::Product if witness.terms.len() == 1 => "a single term".to_string(),
            Construction::Product => format!("product of {} terms", witness.terms.len()),
        }
    );
    let mut rows = Vec::new();
    if !witness.terms.is_empty() {
        let lines: Vec<Vec<String>> = witness
            .terms
            .iter()
            .map(|t| {
                vec![
                    t.q.to_string(),
                    t.n.to_string(),
                    t.p.to_string(),
                    t.spec(),
                    show(&t.value),
                    show(&t.limit),
                ]
            })
            .collect();
        text.push_str(&table(&["q", "n", "p", "factor", "term", "limit"], &lines));
        for t in &witness.terms {
            rows.push(Row::new(&t.spec(), "Z_q^n", "term", &t.value));
        }
    }
    text.push_str(&format!("value  {}\nerror  {}\n", show(&witness.value), show(&witness.error)));
    rows.push(Row::new("", "", "value", &witness.value));
    rows.push(Row::new("", "", "error", &witness.error));
    let mut failed = false;
    if let Some(o) = &oracle {
        text.push_str(&format!(
            "oracle {}: {} ({})\n",
            o.spec,
            show(&o.product),
            if o.matches { "matches" } else { "MISMATCH" }
        ));
        rows.push(Row::new(&o.spec, "", "oracle", &o.product));
        failed = !o.matches;
    }
    Ok(Output {
        command: json!({
            "name": "density approach",
            "target": format!("{a}/{b}"),
            "tol": tol.to_string(),
            "oracle": oracle.is_some(),
        }),
        specs: witness.terms.iter().map(|t| t.spec()).collect(),
        results: to_value(&ApproachResult { witness, oracle }),
        rows,
        text,
        failed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailEntry {
    pub n: u32,
    pub spec: String,
    pub value: Degree,
}

pub fn density_qtail(max_n: u32) -> Result<Output, CliError> {
    let tail: Vec<TailEntry> = density::quaternion_tail(max_n)?
        .into_iter()
        .map(|(n, value)| TailEntry {
            n,
            spec: format!("Q{}", 1u64 << n),
            value,
        })
        .collect();
    let text = table(
        &["n", "group", "csd"],
        &tail
            .iter()
            .map(|t| vec![t.n.to_string(), t.spec.clone(), show(&t.value)])
            .collect::<Vec<_>>(),
    );
    let rows = tail.iter().map(|t| Row::new(&t.spec, "G", "csd", &t.value)).collect();
    Ok(Output {
        command: json!({"name": "density qtail", "max_n": max_n}),
        specs: tail.iter().map(|t| t.spec.clone()).collect(),
        results: to_value(&tail),
        rows,
        text,
        failed: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    /// Groups with exactly two relative cyclic degrees
    TwoValued,
    /// Non-Iwasawa groups with as many relative degrees as relative cyclic degrees
    EqualDegrees,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub condition: ScanKind,
    pub max_order: usize,
    pub corpus_size: usize,
    #[serde(flatten)]
    pub report: ScanReport,
}

pub fn scan(ctx: &mut Context, kind: ScanKind, max_order: usize) -> Result<Output, CliError> {
    let specs = corpus::builtin_corpus(max_order as u64);
    let report = match kind {
        ScanKind::TwoValued => spectra::scan_two_valued(&specs, max_order, &ctx.limits),
        ScanKind::EqualDegrees => spectra::scan_equal_degrees(&specs, max_order, &ctx.limits),
    };
    let (name, condition) = match kind {
        ScanKind::TwoValued => ("two-valued", "|Im f1| = 2"),
        ScanKind::EqualDegrees => ("equal-degrees", "|Im f| = |Im f1| > 1"),
    };

    let mut text = format!(
        "scanned {} groups of order <= {max_order}: {} with {condition}, {} failures\n",
        report.census.len(),
        report.findings.len(),
        report.failures.len(),
    );
    if !report.findings.is_empty() {
        let lines: Vec<Vec<String>> = report
            .findings
            .iter()
            .map(|e| {
                vec![
                    e.spec.clone(),
                    e.order.to_string(),
                    e.im_f1.to_string(),
                    opt(e.im_f),
                    e.gamma.to_string(),
                ]
            })
            .collect();
        text.push_str(&table(&["spec", "order", "|Im f1|", "|Im f|", "gamma"], &lines));
    }
    for f in &report.failures {
        text.push_str(&format!("failed: {}: {}\n", f.spec, f.error));
    }
    let mut rows = Vec::new();
    for e in &report.census {
        rows.push(Row::new(&e.spec, "G", "im_f1", e.im_f1));
        if let Some(f) = e.im_f {
            rows.push(Row::new(&e.spec, "G", "im_f", f));
        }
        rows.push(Row::new(&e.spec, "G", "gamma", e.gamma));
    }
    let result = ScanResult {
        condition: kind,
        max_order,
        corpus_size: report.census.len() + report.failures.len(),
        report,
    };
    Ok(Output {
        command: json!({"name": "scan", "condition": name, "max_order": max_order}),
        specs: result.report.findings.iter().map(|e| e.spec.clone()).collect(),
        results: to_value(&result),
        rows,
        text,
        failed: false,
    })
}
