//! Named verification suites: each check recomputes a published value or
//! inequality by enumeration and compares exactly.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::degrees::permutes;
use crate::density::{self, ApproachWitness};
use crate::formulas::{self, Family, FormulaAuditReport, Point};
use crate::group::{product_index, Elem, GroupError, GroupTable, Limits};
use crate::lattice::{generated_subgroup, normal_cyclic_count, Subgroup};
use crate::spec;
use crate::spectra::{self, criterion_holds, GroupAnalysis};
use crate::Degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A formula mismatch with a known, recorded cause.
    DocumentedDeviation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub observed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn compare<T: PartialEq + fmt::Display>(name: impl Into<String>, expected: T, observed: T) -> Self {
        let status = if expected == observed { Status::Pass } else { Status::Fail };
        Check {
            name: name.into(),
            status,
            expected: expected.to_string(),
            observed: observed.to_string(),
            note: None,
        }
    }

    fn holds(name: impl Into<String>, expected: impl Into<String>, ok: bool, observed: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: expected.into(),
            observed: observed.into(),
            note: None,
        }
    }

    fn error(name: impl Into<String>, expected: impl fmt::Display, err: impl fmt::Display) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            expected: expected.to_string(),
            observed: format!("error: {err}"),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn from_audit(r: &FormulaAuditReport) -> Self {
        let name = format!("{} {} at {}", r.family, r.display, r.point);
        let mut c = Check::compare(name, r.formula.clone(), r.oracle.clone());
        c.expected = format!("formula {}", r.formula);
        c.observed = format!("enumeration {}", r.oracle);
        if let Some(why) = r.documented_deviation() {
            c.status = Status::DocumentedDeviation;
            c.note = Some(why.to_string());
        }
        c
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    QuaternionF1,
    QuaternionG1,
    TwoGroups,
    OneClass,
    TwoClasses,
    Bounds,
    Criterion,
    SpotValues,
    Density,
    TwoValued,
    Formulas,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::QuaternionF1,
        Suite::QuaternionG1,
        Suite::TwoGroups,
        Suite::OneClass,
        Suite::TwoClasses,
        Suite::Bounds,
        Suite::Criterion,
        Suite::SpotValues,
        Suite::Density,
        Suite::TwoValued,
        Suite::Formulas,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::QuaternionF1 => "quaternion-f1",
            Suite::QuaternionG1 => "quaternion-g1",
            Suite::TwoGroups => "two-groups",
            Suite::OneClass => "one-class",
            Suite::TwoClasses => "two-classes",
            Suite::Bounds => "bounds",
            Suite::Criterion => "criterion",
            Suite::SpotValues => "spot-values",
            Suite::Density => "density",
            Suite::TwoValued => "two-valued",
            Suite::Formulas => "formulas",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Suite::QuaternionF1 => "|Im f1| of generalized quaternion groups and the r_i values",
            Suite::QuaternionG1 => "|Im g1| of generalized quaternion groups",
            Suite::TwoGroups => "closed forms and spectrum sizes for D, Q and SD 2-groups",
            Suite::OneClass => "groups with one class of non-normal subgroups",
            Suite::TwoClasses => "groups with two classes of non-normal subgroups",
            Suite::Bounds => "lower bounds, sd/csd equivalence, multiplicativity, class constancy, symmetry",
            Suite::Criterion => "the |Im f1| > 2 criterion and its thresholds",
            Suite::SpotValues => "gamma and spectrum spot values",
            Suite::Density => "density witnesses and the quaternion tail",
            Suite::TwoValued => "corpus scan for groups with exactly two relative degrees",
            Suite::Formulas => "audit of every transcribed closed form",
        }
    }

    /// `all` or a single suite id.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>, String> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.parse().map(|x| vec![x])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // short names accepted by the command line
        match s {
            "thm33" => return Ok(Suite::QuaternionF1),
            "thm312" => return Ok(Suite::QuaternionG1),
            _ => {}
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub limits: Limits,
    pub prime_horizon: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            limits: Limits::default(),
            prime_horizon: density::DEFAULT_PRIME_HORIZON,
        }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let checks = match suite {
        Suite::QuaternionF1 => quaternion_f1(cfg),
        Suite::QuaternionG1 => quaternion_g1(cfg),
        Suite::TwoGroups => two_groups(cfg),
        Suite::OneClass => one_class(cfg),
        Suite::TwoClasses => two_classes(cfg),
        Suite::Bounds => property_checks(&corpus::property_corpus(), &cfg.limits),
        Suite::Criterion => criterion_checks(cfg),
        Suite::SpotValues => spot_values(cfg),
        Suite::Density => density_checks(cfg),
        Suite::TwoValued => two_valued(cfg),
        Suite::Formulas => formula_checks(cfg),
    };
    SuiteReport { suite, checks }
}

fn build(s: &str, limits: &Limits) -> Result<GroupTable, GroupError> {
    let expr = spec::parse(s).map_err(|e| GroupError::InvalidTable {
        spec: s.to_string(),
        reason: e.to_string(),
    })?;
    spec::build(&expr, limits)
}

fn with_analysis<T>(
    s: &str,
    limits: &Limits,
    f: impl FnOnce(&GroupAnalysis) -> T,
) -> Result<T, GroupError> {
    let g = build(s, limits)?;
    let a = GroupAnalysis::new(&g, limits)?;
    Ok(f(&a))
}

fn im_f1_check(s: &str, expected: usize, limits: &Limits) -> Check {
    let name = format!("|Im f1|({s})");
    match with_analysis(s, limits, |a| a.relative_csd_spectrum().len()) {
        Ok(v) => Check::compare(name, expected, v),
        Err(e) => Check::error(name, expected, e),
    }
}

fn gamma_check(s: &str, expected: usize, limits: &Limits) -> Check {
    let name = format!("gamma({s})");
    match with_analysis(s, limits, |a| a.lattice().gamma()) {
        Ok(v) => Check::compare(name, expected, v),
        Err(e) => Check::error(name, expected, e),
    }
}

fn set_string(values: &[Degree]) -> String {
    let parts: Vec<String> = values.iter().map(Degree::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn quaternion_f1(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 3..=7u32 {
        let s = format!("Q{}", 1u64 << n);
        let expected = if n == 3 { 1 } else { n as usize };
        out.push(im_f1_check(&s, expected, &cfg.limits));
        if n >= 4 {
            let name = format!("Im f1({s}) = {{1, r_2, ..., r_n}}");
            let predicted: Vec<Degree> = formulas::formula_spectrum(Family::Quaternion, Point::Exponent { n })
                .ok()
                .flatten()
                .unwrap_or_default()
                .into_iter()
                .collect();
            match with_analysis(&s, &cfg.limits, |a| a.relative_csd_spectrum().distinct_values) {
                Ok(v) => out.push(Check::compare(name, set_string(&predicted), set_string(&v))),
                Err(e) => out.push(Check::error(name, set_string(&predicted), e)),
            }
        }
    }
    out
}

fn quaternion_g1(cfg: &VerifyConfig) -> Vec<Check> {
    (1..=5u32)
        .map(|n| {
            let s = format!("Q{}", 1u64 << (n + 2));
            let name = format!("|Im g1|({s})");
            match with_analysis(&s, &cfg.limits, |a| a.csd_spectrum().len()) {
                Ok(v) => Check::compare(name, n as usize, v),
                Err(e) => Check::error(name, n, e),
            }
        })
        .collect()
}

fn two_groups(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for family in [Family::Dihedral, Family::Quaternion, Family::Quasidihedral] {
        let run = formulas::audit_formula(family, &family.default_points(), &cfg.limits);
        out.extend(run.reports.iter().map(Check::from_audit));
        out.extend(run.skipped.iter().map(|s| {
            Check::error(format!("{} at {}", s.family, s.point), "audited", &s.reason)
        }));
    }
    for (s, v) in [("D8", 3), ("D16", 4), ("Q16", 4), ("Q32", 5), ("SD16", 6)] {
        out.push(im_f1_check(s, v, &cfg.limits));
    }
    let families: [(&str, u32); 3] = [("D", 3), ("Q", 4), ("SD", 4)];
    for (prefix, from) in families {
        for n in from..=7u32 {
            let s = format!("{prefix}{}", 1u64 << n);
            let name = format!("|N(G) ∩ L1(G)|({s})");
            match build(&s, &cfg.limits) {
                Ok(g) => out.push(Check::compare(name, n as usize, normal_cyclic_count(&g))),
                Err(e) => out.push(Check::error(name, n, e)),
            }
        }
    }
    out
}

fn one_class(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (s, f1, gamma) in [
        ("Zsd(7,3,2)", 3, 1),
        ("Zsd(13,9,3)", 3, 1),
        ("M(3,3)", 1, 1),
        ("M(2,4)", 1, 1),
    ] {
        out.push(im_f1_check(s, f1, &cfg.limits));
        out.push(gamma_check(s, gamma, &cfg.limits));
    }
    let points = [Point::Primes { p: 7, q: 3, n: 1 }, Point::Primes { p: 13, q: 3, n: 2 }];
    let run = formulas::audit_formula(Family::G1, &points, &cfg.limits);
    out.extend(run.reports.iter().map(Check::from_audit));
    out
}

/// The smallest admissible instance of each family with two classes of
/// non-normal subgroups, with the stated `|Im f1|`.
pub const TWO_CLASS_CENSUS: [(&str, usize); 9] = [
    ("A4", 5),
    ("Zsd(5,4,2)", 5),
    ("Zsd(3,2,2) x Z5", 3),
    ("Zsd(9,2,8)", 4),
    ("M(3,3) x Z2", 1),
    ("Zsd(4,4,3)", 3),
    ("Q16", 4),
    ("Zsd(8,4,5)", 1),
    ("D8", 3),
];

fn two_classes(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (s, v) in TWO_CLASS_CENSUS {
        out.push(gamma_check(s, 2, &cfg.limits));
        let mut c = im_f1_check(s, v, &cfg.limits);
        if s == "A4" && c.status == Status::Fail {
            c = c.with_note(
                "csd(V4, A4) = csd(Z3, A4) = 5/8, so the Klein four class and the \
                 order-3 classes share a value",
            );
        }
        out.push(c);
    }
    for (family, point) in [
        (Family::G2, Point::Primes { p: 2, q: 5, n: 2 }),
        (Family::G4, Point::Primes { p: 2, q: 3, n: 1 }),
    ] {
        match formulas::audit_point(family, point, &cfg.limits) {
            Ok(reports) => out.extend(reports.iter().map(Check::from_audit)),
            Err(e) => out.push(Check::error(format!("{family} at {point}"), "audited", e)),
        }
    }
    out
}

fn criterion_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (prefix, from, threshold) in [("D", 3u32, 5u32), ("Q", 3, 6), ("SD", 4, 5)] {
        for n in from..=7 {
            let s = format!("{prefix}{}", 1u64 << n);
            let name = format!("criterion({s})");
            match build(&s, &cfg.limits) {
                Ok(g) => out.push(Check::compare(name, n >= threshold, spectra::many_degrees_criterion(&g))),
                Err(e) => out.push(Check::error(name, n >= threshold, e)),
            }
        }
    }
    let mut specs = corpus::builtin_corpus(64);
    specs.extend(corpus::property_corpus());
    specs.sort();
    specs.dedup();
    let results: Vec<Result<(bool, usize), (String, String)>> = specs
        .par_iter()
        .map(|s| {
            with_analysis(s, &cfg.limits, |a| {
                (criterion_holds(a.cyclic()), a.relative_csd_spectrum().len())
            })
            .map_err(|e| (s.clone(), e.to_string()))
        })
        .collect();
    let mut holds = 0;
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    for (s, r) in specs.iter().zip(results) {
        match r {
            Ok((true, f1)) => {
                holds += 1;
                if f1 <= 2 {
                    violations.push(format!("{s} (|Im f1| = {f1})"));
                }
            }
            Ok(_) => {}
            Err((s, e)) => errors.push(format!("{s}: {e}")),
        }
    }
    out.push(
        Check::holds(
            "criterion implies |Im f1| > 2 over the corpus",
            "no violations",
            violations.is_empty() && errors.is_empty(),
            if violations.is_empty() && errors.is_empty() {
                "no violations".to_string()
            } else {
                [violations, errors].concat().join("; ")
            },
        )
        .with_note(format!("{} groups, criterion holds for {holds}", specs.len())),
    );
    out
}

fn spot_values(cfg: &VerifyConfig) -> Vec<Check> {
    vec![
        gamma_check("Zsd(3,2,2) x Z3", 3, &cfg.limits),
        gamma_check("D8 x Z3", 4, &cfg.limits),
        im_f1_check("D8 x Z3", 3, &cfg.limits),
        gamma_check("D8 x Z9", 6, &cfg.limits),
        im_f1_check("D8 x Z9", 3, &cfg.limits),
        im_f1_check("Q32 x Z3", 5, &cfg.limits),
    ]
}

fn density_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let h = cfg.prime_horizon;
    match density::approach_rational(1, 2, &Degree::new(1, 100), h) {
        Ok(w) => {
            let terms: Vec<_> = w.terms.iter().map(|t| (t.q, t.n, t.p)).collect();
            out.push(Check::compare("approach 1/2 tol 1/100: terms", format!("{:?}", [(3, 1, 151)]), format!("{terms:?}")));
            out.push(Check::compare("approach 1/2 tol 1/100: error", Degree::new(1, 102), w.error.clone()));
            out.push(oracle_terms_check("approach 1/2", &w, &cfg.limits));
        }
        Err(e) => out.push(Check::error("approach 1/2 tol 1/100", "witness", e)),
    }
    match density::approach_rational(2, 5, &Degree::new(1, 20), h) {
        Ok(w) => {
            out.push(Check::compare("approach 2/5 tol 1/20: term count", 3, w.terms.len()));
            out.push(Check::holds(
                "approach 2/5 tol 1/20: error below tolerance",
                "< 1/20",
                w.error < Degree::new(1, 20),
                w.error.to_string(),
            ));
            out.push(oracle_terms_check("approach 2/5", &w, &cfg.limits));
        }
        Err(e) => out.push(Check::error("approach 2/5 tol 1/20", "witness", e)),
    }
    match ApproachWitness::from_terms(1, 3, &Degree::new(1, 2), &[(3, 1, 7), (2, 2, 5)]) {
        Ok(w) => {
            let name = "Zsd(7,3,2) x Zsd(5,4,4): csd(H, G) equals the product of term values";
            match w.product_group(&cfg.limits) {
                Ok((g, sub)) => out.push(Check::compare(name, w.value.clone(), crate::degrees::csd_relative(&g, &sub))),
                Err(e) => out.push(Check::error(name, &w.value, e)),
            }
        }
        Err(e) => out.push(Check::error("small product witness", "witness", e)),
    }
    match density::quaternion_tail(20) {
        Ok(tail) => {
            let decreasing = tail[1..].windows(2).all(|w| w[1].1 < w[0].1);
            out.push(Check::holds("qtail strictly decreasing from n = 4", "true", decreasing, decreasing.to_string()));
            let at10 = tail.iter().find(|(n, _)| *n == 10).map(|(_, v)| v.clone()).unwrap_or_else(Degree::zero);
            out.push(Check::compare("qtail at n = 10", Degree::new(5732, 70756), at10.clone()));
            out.push(Check::holds("qtail at n = 10 below 1/10", "< 1/10", at10 < Degree::new(1, 10), at10.to_string()));
        }
        Err(e) => out.push(Check::error("qtail", "table", e)),
    }
    out
}

/// Per-term enumeration for the factors within the order limit.
fn oracle_terms_check(label: &str, w: &ApproachWitness, limits: &Limits) -> Check {
    let name = format!("{label}: enumeration of factors within the order limit");
    let mut checked = Vec::new();
    let mut skipped = Vec::new();
    let mut bad = Vec::new();
    for t in &w.terms {
        if t.order() > limits.max_order as u64 {
            skipped.push(t.spec());
            continue;
        }
        let value = crate::group::semidirect_cyclic(t.p, t.q.pow(t.n), t.k, limits).map(|g| {
            let h = generated_subgroup(&g, &[t.p as Elem]);
            crate::degrees::csd_relative(&g, &h)
        });
        match value {
            Ok(v) if v == t.value => checked.push(t.spec()),
            Ok(v) => bad.push(format!("{}: {v} != {}", t.spec(), t.value)),
            Err(e) => bad.push(format!("{}: {e}", t.spec())),
        }
    }
    let c = Check::holds(
        name,
        "enumeration equals formula term",
        bad.is_empty(),
        if bad.is_empty() { format!("{} factors agree", checked.len()) } else { bad.join("; ") },
    );
    if skipped.is_empty() {
        c
    } else {
        c.with_note(format!("above the order limit: {}", skipped.join(", ")))
    }
}

fn two_valued(cfg: &VerifyConfig) -> Vec<Check> {
    let specs = corpus::builtin_corpus(64);
    let report = spectra::scan_two_valued(&specs, 64, &cfg.limits);
    let hits: Vec<&str> = report.findings.iter().map(|e| e.spec.as_str()).collect();
    vec![
        Check::compare("corpus groups of order <= 64 with |Im f1| = 2", 0, hits.len())
            .with_note(format!(
                "scan result over a census of {} groups, not a proof; hits: [{}]",
                report.census.len(),
                hits.join(", ")
            )),
        Check::compare("scan failures", 0, report.failures.len()),
    ]
}

fn formula_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let run = formulas::audit_all(&cfg.limits);
    let mut out: Vec<Check> = run.reports.iter().map(Check::from_audit).collect();
    out.extend(run.skipped.iter().map(|s| {
        Check::error(format!("{} at {}", s.family, s.point), "audited", &s.reason)
    }));
    for family in [Family::Quaternion, Family::G1, Family::G2, Family::G4] {
        for pt in family.default_points() {
            let name = format!("{family} at {pt}: |Im f1| from displays");
            let predicted = match formulas::formula_spectrum(family, pt) {
                Ok(Some(v)) => v.len(),
                Ok(None) => continue,
                Err(e) => {
                    out.push(Check::error(name, "a value set", e));
                    continue;
                }
            };
            let observed = formulas::oracle_group(family, pt, &cfg.limits)
                .map_err(|e| e.to_string())
                .and_then(|g| spectra::relative_csd_spectrum(&g, &cfg.limits).map_err(|e| e.to_string()));
            match observed {
                Ok(s) => out.push(Check::compare(name, predicted, s.len())),
                Err(e) => out.push(Check::error(name, predicted, e)),
            }
        }
    }
    let decreasing = (4..=12).all(|n| {
        (2..n).all(|i| formulas::quaternion_relative(n, i).ok() > formulas::quaternion_relative(n, i + 1).ok())
    });
    out.push(Check::holds("r_i strictly decreasing in i, n <= 12", "true", decreasing, decreasing.to_string()));
    let outside: Vec<&FormulaAuditReport> = run
        .reports
        .iter()
        .filter(|r| r.display != "|L1|" && !(r.formula > Degree::zero() && r.formula <= Degree::one()))
        .collect();
    let names: Vec<String> = outside.iter().map(|r| format!("{} {} at {} = {}", r.family, r.display, r.point, r.formula)).collect();
    let mut c = Check::holds(
        "every transcribed degree lies in (0, 1]",
        "none outside",
        outside.is_empty(),
        if outside.is_empty() { "none outside".to_string() } else { names.join("; ") },
    );
    if !outside.is_empty() && outside.iter().all(|r| r.documented_deviation().is_some()) {
        c.status = Status::DocumentedDeviation;
        c.note = Some("only displays with a documented deviation leave (0, 1]".into());
    }
    out.push(c);
    out
}

const SHOWN_VIOLATIONS: usize = 5;

#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    /// The first few failures, described.
    examples: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < SHOWN_VIOLATIONS {
                self.examples.push(what());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        let room = SHOWN_VIOLATIONS.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
    }

    fn into_check(self, name: &str) -> Check {
        let observed = if self.failed == 0 {
            "0 violations".to_string()
        } else {
            format!("{} violations: {}", self.failed, self.examples.join("; "))
        };
        Check::holds(name, "0 violations", self.failed == 0, observed)
            .with_note(format!("{} instances", self.checked))
    }
}

#[derive(Default)]
struct PropertyTallies {
    symmetry: Tally,
    bound1: Tally,
    bound2: Tally,
    equivalence: Tally,
    constancy: Tally,
    iwasawa: Tally,
    multiplicative: Tally,
    spectrum_product: Tally,
    collisions: Vec<String>,
    errors: Vec<String>,
}

impl PropertyTallies {
    fn merge(&mut self, o: PropertyTallies) {
        self.symmetry.merge(o.symmetry);
        self.bound1.merge(o.bound1);
        self.bound2.merge(o.bound2);
        self.equivalence.merge(o.equivalence);
        self.constancy.merge(o.constancy);
        self.iwasawa.merge(o.iwasawa);
        self.multiplicative.merge(o.multiplicative);
        self.spectrum_product.merge(o.spectrum_product);
        self.collisions.extend(o.collisions);
        self.errors.extend(o.errors);
    }
}

/// Generators of `H` inside `G1 x G2`, on the left or right factor.
fn embed(h: &Subgroup, left: bool, right_order: usize) -> Vec<Elem> {
    h.generators()
        .iter()
        .map(|&e| if left { product_index(e, 0, right_order) } else { product_index(0, e, right_order) })
        .collect()
}

fn properties_of(s: &str, limits: &Limits) -> PropertyTallies {
    let mut t = PropertyTallies::default();
    let g = match build(s, limits) {
        Ok(g) => g,
        Err(e) => {
            t.errors.push(format!("{s}: {e}"));
            return t;
        }
    };
    let a = match GroupAnalysis::new(&g, limits) {
        Ok(a) => a,
        Err(e) => {
            t.errors.push(format!("{s}: {e}"));
            return t;
        }
    };
    let cd = a.cyclic();
    let lat = a.lattice();
    let full = a.full();
    let subs = lat.subgroups();
    let l1 = cd.poset().len() as u64;
    let floor = Degree::new(cd.poset().normal_count() as u64, l1);
    let csd_g = cd.csd();

    for class in lat.classes() {
        let rep = class[0];
        for j in 0..subs.len() {
            let (h, k) = (&subs[rep], &subs[j]);
            let hk = permutes(&g, h, k);
            let kh = permutes(&g, k, h);
            t.symmetry.record(hk == kh && hk == full.permutes(rep, j), || format!("{s}: subgroups {rep}, {j}"));
        }
    }
    let cyc = cd.poset().subgroups();
    for i in 0..cyc.len() {
        for j in 0..cyc.len() {
            t.symmetry.record(cd.permutes(i, j) == permutes(&g, &cyc[i], &cyc[j]), || format!("{s}: cyclic {i}, {j}"));
        }
    }
    for (class_id, class) in lat.classes().iter().enumerate() {
        let values: Vec<(Degree, Degree)> = class
            .iter()
            .map(|&i| (cd.csd_relative(&subs[i]), full.sd_relative(&subs[i])))
            .collect();
        t.constancy.record(values.windows(2).all(|w| w[0] == w[1]), || format!("{s}: class {class_id}"));
    }
    for (i, h) in subs.iter().enumerate() {
        let rel = cd.csd_relative(h);
        t.bound1.record(rel >= floor, || format!("{s}: subgroup {i} has {rel} < {floor}"));
        if h.order() != g.order() {
            let inside = cd.poset().within(h).len() as u64;
            let lower = &Degree::new(inside, l1) * &cd.csd_of(h);
            t.bound2.record(rel >= lower, || format!("{s}: subgroup {i} has {rel} < {lower}"));
        }
        let sd = full.sd_relative(h);
        t.equivalence.record(rel.is_one() == sd.is_one(), || format!("{s}: subgroup {i} csd {rel}, sd {sd}"));
    }
    let spectrum = a.relative_csd_spectrum();
    t.iwasawa.record((spectrum.len() == 1) == csd_g.is_one(), || format!("{s}: |Im f1| = {}, csd = {csd_g}", spectrum.len()));

    let expr = spec::parse(s).expect("built above");
    if let [left, right] = expr.factors() {
        if crate::primes::gcd(left.order(), right.order()) == 1 {
            multiplicativity(s, &g, &a, *left, *right, limits, &mut t);
        }
    }
    t
}

fn multiplicativity(
    s: &str,
    g: &GroupTable,
    a: &GroupAnalysis,
    left: spec::Atom,
    right: spec::Atom,
    limits: &Limits,
    t: &mut PropertyTallies,
) {
    let (g1, g2) = match (left.build(limits), right.build(limits)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            t.errors.push(format!("{s}: {e}"));
            return;
        }
    };
    let (a1, a2) = match (GroupAnalysis::new(&g1, limits), GroupAnalysis::new(&g2, limits)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            t.errors.push(format!("{s}: {e}"));
            return;
        }
    };
    let o2 = g2.order();
    for c1 in a1.lattice().classes() {
        let h1 = &a1.lattice().subgroups()[c1[0]];
        for c2 in a2.lattice().classes() {
            let h2 = &a2.lattice().subgroups()[c2[0]];
            let mut seeds = embed(h1, true, o2);
            seeds.extend(embed(h2, false, o2));
            let h = generated_subgroup(g, &seeds);
            let whole = a.cyclic().csd_relative(&h);
            let parts = &a1.cyclic().csd_relative(h1) * &a2.cyclic().csd_relative(h2);
            t.multiplicative.record(whole == parts, || format!("{s}: {whole} != {parts}"));
        }
    }
    let s1 = a1.relative_csd_spectrum().distinct_values;
    let s2 = a2.relative_csd_spectrum().distinct_values;
    let products: BTreeSet<Degree> = s1.iter().flat_map(|u| s2.iter().map(move |v| u * v)).collect();
    let observed: BTreeSet<Degree> = a.relative_csd_spectrum().distinct_values.into_iter().collect();
    t.spectrum_product.record(products == observed, || format!("{s}: value sets differ"));
    if observed.len() != s1.len() * s2.len() {
        t.collisions.push(format!("{s}: {} values, {} x {}", observed.len(), s1.len(), s2.len()));
    }
}

/// The property suite over `specs`, one aggregated check per property.
pub fn property_checks(specs: &[String], limits: &Limits) -> Vec<Check> {
    let parts: Vec<PropertyTallies> = specs.par_iter().map(|s| properties_of(s, limits)).collect();
    let mut t = PropertyTallies::default();
    for p in parts {
        t.merge(p);
    }
    let mut out = vec![
        t.symmetry.into_check("permutability is symmetric and matches the precomputed table"),
        t.bound1.into_check("csd(H,G) >= |N(G) ∩ L1(G)| / |L1(G)|"),
        t.bound2.into_check("csd(H,G) >= |L1(H)|/|L1(G)| * csd(H) for H != G"),
        t.equivalence.into_check("csd(H,G) = 1 iff sd(H,G) = 1"),
        t.constancy.into_check("csd(H,G) and sd(H,G) constant on conjugacy classes"),
        t.iwasawa.into_check("|Im f1| = 1 iff csd(G) = 1"),
        t.multiplicative.into_check("csd(H1 x H2, G1 x G2) = csd(H1,G1) csd(H2,G2) for coprime orders"),
        t.spectrum_product.into_check("Im f1 of a coprime product is the set of pairwise products"),
    ];
    out.push(
        Check::compare("coprime products whose spectrum size is not the product of sizes", 0, t.collisions.len())
            .with_note(if t.collisions.is_empty() { "none observed".to_string() } else { t.collisions.join("; ") }),
    );
    out.push(Check::holds(
        "corpus groups analysed without error",
        format!("{} groups", specs.len()),
        t.errors.is_empty(),
        if t.errors.is_empty() { format!("{} groups", specs.len()) } else { t.errors.join("; ") },
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> VerifyConfig {
        VerifyConfig::default()
    }

    #[test]
    fn suite_ids_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.id().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 11);
        assert!(Suite::parse_selection("thm99").is_err());
        assert_eq!("thm33".parse::<Suite>().unwrap(), Suite::QuaternionF1);
        assert_eq!("thm312".parse::<Suite>().unwrap(), Suite::QuaternionG1);
    }

    #[test]
    fn quaternion_suites_pass() {
        assert!(run(Suite::QuaternionF1, &cfg()).passed());
        assert!(run(Suite::QuaternionG1, &cfg()).passed());
    }

    #[test]
    fn two_groups_pass_with_quasidihedral_deviations() {
        let r = run(Suite::TwoGroups, &cfg());
        assert!(r.passed(), "{:?}", r.checks.iter().filter(|c| !c.passed()).collect::<Vec<_>>());
        assert_eq!(r.count(Status::DocumentedDeviation), 4);
    }

    #[test]
    fn two_classes_fail_only_on_a4() {
        let r = run(Suite::TwoClasses, &cfg());
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["|Im f1|(A4)"]);
    }

    #[test]
    fn property_suite_on_small_corpus() {
        let specs: Vec<String> = ["D8", "Q8", "A4", "Zsd(7,3,2) x Z4", "D8 x Z3", "Z6"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let checks = property_checks(&specs, &Limits::default());
        assert!(checks.iter().all(Check::passed), "{checks:?}");
        let mult = checks.iter().find(|c| c.name.starts_with("csd(H1 x H2")).unwrap();
        assert_ne!(mult.note.as_deref(), Some("0 instances"));
    }

    #[test]
    fn spot_values_and_density_pass() {
        assert!(run(Suite::SpotValues, &cfg()).passed());
        let d = run(Suite::Density, &cfg());
        assert!(d.passed(), "{:?}", d.checks);
    }
}
