//! Acceptance criteria AC1 to AC11, one line each.
//!
//! Every criterion is evaluated and printed as PASS or FAIL. The process
//! exits nonzero only when a criterion outside `KNOWN_FAILURES` fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use csd_core::corpus;
use csd_core::degrees::{csd_relative, CyclicDegrees};
use csd_core::density::{self, ApproachWitness};
use csd_core::formulas;
use csd_core::lattice::generated_subgroup;
use csd_core::spec;
use csd_core::spectra::{self, GroupAnalysis};
use csd_core::verify::{self, Status, Suite, VerifyConfig, TWO_CLASS_CENSUS};
use csd_core::{Degree, GroupTable, Limits};

/// Criteria that fail against the published statements, with the reason.
const KNOWN_FAILURES: &[(&str, &str)] = &[
    ("AC1", "the quasidihedral closed form disagrees with enumeration for n = 4..7"),
    ("AC6", "A4 has four relative cyclic degrees, not five"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type ClosedForm = fn(u32) -> Result<Degree, formulas::FormulaError>;
type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Result<Outcome, String> + 'a>);

fn deg(n: u64, d: u64) -> Degree {
    Degree::new(n, d)
}

fn build(s: &str, limits: &Limits) -> Result<GroupTable, String> {
    let expr = spec::parse(s).map_err(|e| format!("{s}: {e}"))?;
    spec::build(&expr, limits).map_err(|e| format!("{s}: {e}"))
}

fn im_f1(s: &str, limits: &Limits) -> Result<spectra::DegreeSpectrum, String> {
    let g = build(s, limits)?;
    spectra::relative_csd_spectrum(&g, limits).map_err(|e| e.to_string())
}

fn ac1(limits: &Limits) -> Result<Outcome, String> {
    let families: [(&str, u32, ClosedForm); 3] = [
        ("D", 3, formulas::csd_dihedral),
        ("Q", 3, formulas::csd_quaternion),
        ("SD", 4, formulas::csd_quasidihedral),
    ];
    let mut parts = Vec::new();
    let mut first_mismatch = None;
    let mut all = true;
    for (prefix, from, formula) in families {
        let mut matched = 0;
        for n in from..=7 {
            let s = format!("{prefix}{}", 1u64 << n);
            let oracle = CyclicDegrees::new(&build(&s, limits)?).csd();
            let printed = formula(n).map_err(|e| e.to_string())?;
            if oracle == printed {
                matched += 1;
            } else {
                all = false;
                first_mismatch.get_or_insert(format!("{s}: formula {printed}, enumeration {oracle}"));
            }
        }
        parts.push(format!("{prefix} {matched}/{}", 8 - from));
    }
    let mut detail = format!("closed forms matching enumeration: {}", parts.join(", "));
    if let Some(m) = first_mismatch {
        detail.push_str(&format!("; first mismatch {m}"));
    }
    Ok(outcome(all, detail))
}

fn ac2(limits: &Limits) -> Result<Outcome, String> {
    let mut sizes = Vec::new();
    let mut ok = im_f1("Q8", limits)?.len() == 1;
    sizes.push(format!("Q8:{}", im_f1("Q8", limits)?.len()));
    for n in 4..=7u32 {
        let s = format!("Q{}", 1u64 << n);
        let spectrum = im_f1(&s, limits)?;
        let mut expected: BTreeSet<Degree> = (2..=n)
            .map(|i| formulas::quaternion_relative(n, i).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        expected.insert(Degree::one());
        let observed: BTreeSet<Degree> = spectrum.distinct_values.iter().cloned().collect();
        ok &= spectrum.len() == n as usize && observed == expected;
        sizes.push(format!("{s}:{}", spectrum.len()));
    }
    let q16: BTreeSet<Degree> = im_f1("Q16", limits)?.distinct_values.into_iter().collect();
    let want: BTreeSet<Degree> = [deg(1, 1), deg(11, 12), deg(9, 10), deg(7, 8)].into_iter().collect();
    ok &= q16 == want;
    Ok(outcome(ok, format!("|Im f1| {}; value sets equal {{1}} plus r_2..r_n", sizes.join(" "))))
}

fn ac3(limits: &Limits) -> Result<Outcome, String> {
    let mut ok = true;
    let mut sizes = Vec::new();
    for n in 1..=5u32 {
        let s = format!("Q{}", 1u64 << (n + 2));
        let g = build(&s, limits)?;
        let size = spectra::csd_spectrum(&g, limits).map_err(|e| e.to_string())?.len();
        ok &= size == n as usize;
        sizes.push(format!("{s}:{size}"));
    }
    Ok(outcome(ok, format!("|Im g1| {}", sizes.join(" "))))
}

fn spot_sizes(cases: &[(&str, usize)], limits: &Limits) -> Result<(bool, Vec<String>), String> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(s, want) in cases {
        let got = im_f1(s, limits)?.len();
        ok &= got == want;
        parts.push(if got == want { format!("{s}:{got}") } else { format!("{s}:{got} (want {want})") });
    }
    Ok((ok, parts))
}

fn ac4(limits: &Limits) -> Result<Outcome, String> {
    let (ok, parts) = spot_sizes(&[("D8", 3), ("D16", 4), ("Q16", 4), ("Q32", 5), ("SD16", 6)], limits)?;
    Ok(outcome(ok, format!("|Im f1| {}", parts.join(" "))))
}

fn ac5(limits: &Limits) -> Result<Outcome, String> {
    let (mut ok, parts) = spot_sizes(
        &[("Zsd(7,3,2)", 3), ("Zsd(13,9,3)", 3), ("M(3,3)", 1), ("M(2,4)", 1)],
        limits,
    )?;
    let mut matched = 0;
    for (p, q, n) in [(7u64, 3u64, 1u32), (13, 3, 2)] {
        let spec = format!("Zsd({p},{},{})", q.pow(n), if n == 1 { 2 } else { 3 });
        let g = build(&spec, limits)?;
        let cd = CyclicDegrees::new(&g);
        // y = x^0 y^1 sits at index m = p
        let h = generated_subgroup(&g, &[p as u32]);
        let printed = formulas::g1_family_formulas(p, q, n).map_err(|e| e.to_string())?;
        let oracle = [cd.csd_relative(&h), cd.csd()];
        for (f, o) in printed.iter().zip(&oracle) {
            if &f.value == o {
                matched += 1;
            } else {
                ok = false;
            }
        }
    }
    Ok(outcome(ok, format!("|Im f1| {}; G1 formulas matching enumeration {matched}/4", parts.join(" "))))
}

fn ac6(limits: &Limits) -> Result<Outcome, String> {
    let (ok, parts) = spot_sizes(&TWO_CLASS_CENSUS, limits)?;
    let mut detail = format!("|Im f1| {}", parts.join(" "));
    if !ok {
        // the mismatching entries are not explained by any formula transcription
        let a4 = build("A4", limits)?;
        let a = GroupAnalysis::new(&a4, limits).map_err(|e| e.to_string())?;
        let values: Vec<String> = a.relative_csd_spectrum().distinct_values.iter().map(|d| d.to_string()).collect();
        detail.push_str(&format!("; Im f1(A4) = {{{}}}", values.join(", ")));
    }
    Ok(outcome(ok, detail))
}

fn suite(s: Suite, cfg: &VerifyConfig) -> Outcome {
    let r = verify::run(s, cfg);
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let mut detail = format!(
        "{} checks, {} pass, {} fail, {} documented deviation",
        r.checks.len(),
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::DocumentedDeviation)
    );
    if !failed.is_empty() {
        detail.push_str(&format!("; failing: {}", failed.join(", ")));
    }
    outcome(r.passed(), detail)
}

fn ac7(cfg: &VerifyConfig) -> Result<Outcome, String> {
    let corpus = corpus::property_corpus();
    let random = corpus::random_coprime_products(corpus::PROPERTY_SEED, 10, 128);
    let mut o = suite(Suite::Bounds, cfg);
    let sized = corpus.len() >= 40 && random.len() == 10;
    o.pass &= sized;
    o.detail = format!("corpus of {} groups ({} random coprime products); {}", corpus.len(), random.len(), o.detail);
    Ok(o)
}

fn ac8(cfg: &VerifyConfig) -> Result<Outcome, String> {
    Ok(suite(Suite::Criterion, cfg))
}

fn ac9(limits: &Limits) -> Result<Outcome, String> {
    let gamma = |s: &str| -> Result<usize, String> {
        let g = build(s, limits)?;
        csd_core::lattice::gamma(&g, limits).map_err(|e| e.to_string())
    };
    let g1 = gamma("Zsd(3,2,2) x Z3")?;
    let g2 = gamma("D8 x Z3")?;
    let f1 = im_f1("D8 x Z3", limits)?.len();
    Ok(outcome(
        g1 == 3 && g2 == 4 && f1 == 3,
        format!("gamma(Zsd(3,2,2) x Z3) = {g1}; gamma(D8 x Z3) = {g2}, |Im f1|(D8 x Z3) = {f1}"),
    ))
}

fn ac10(limits: &Limits, horizon: u64) -> Result<Outcome, String> {
    let mut ok = true;
    let mut parts = Vec::new();

    let w = density::approach_rational(1, 2, &deg(1, 100), horizon).map_err(|e| e.to_string())?;
    let p = w.terms.first().map(|t| t.p);
    ok &= w.terms.len() == 1 && p == Some(151) && w.error == deg(1, 102) && w.check().is_ok();
    parts.push(format!("1/2: p = {}, error {}", p.map_or("-".into(), |p| p.to_string()), w.error));

    let w = density::approach_rational(2, 5, &deg(1, 20), horizon).map_err(|e| e.to_string())?;
    ok &= w.terms.len() == 3 && w.error < deg(1, 20) && w.check().is_ok();
    parts.push(format!("2/5: {} terms, error {}", w.terms.len(), w.error));

    // small primes so every factor and the product are enumerable
    let mut oracle_ok = true;
    for (a, b, tol, terms) in [
        (1u64, 3u64, deg(1, 2), vec![(3u64, 1u32, 7u64), (2, 2, 5)]),
        (1, 2, deg(1, 5), vec![(3, 1, 7)]),
        (2, 3, deg(1, 5), vec![(3, 2, 19)]),
    ] {
        let w = ApproachWitness::from_terms(a, b, &tol, &terms).map_err(|e| e.to_string())?;
        let oracle = w.oracle_terms(limits).map_err(|e| e.to_string())?;
        let formula: Vec<Degree> = w.terms.iter().map(|t| t.value.clone()).collect();
        let (g, h) = w.product_group(limits).map_err(|e| e.to_string())?;
        oracle_ok &= oracle == formula && csd_relative(&g, &h) == w.value;
    }
    ok &= oracle_ok;
    parts.push(format!("small-prime products {}", if oracle_ok { "match enumeration" } else { "MISMATCH" }));

    let tail = density::quaternion_tail(10).map_err(|e| e.to_string())?;
    let from4: Vec<&Degree> = tail.iter().filter(|(n, _)| *n >= 4).map(|(_, v)| v).collect();
    let decreasing = from4.windows(2).all(|w| w[1] < w[0]);
    let last = tail.last().map(|(_, v)| v.clone()).unwrap_or_else(Degree::one);
    ok &= decreasing && last < deg(1, 10);
    parts.push(format!("qtail decreasing {decreasing}, csd(Q1024) = {last}"));
    Ok(outcome(ok, parts.join("; ")))
}

fn ac11(limits: &Limits) -> Result<Outcome, String> {
    let specs = corpus::builtin_corpus(64);
    let r = spectra::scan_two_valued(&specs, 64, limits);
    Ok(outcome(
        r.findings.is_empty() && r.failures.is_empty(),
        format!(
            "scan of {} groups up to order 64: {} with |Im f1| = 2, {} failures",
            r.census.len(),
            r.findings.len(),
            r.failures.len()
        ),
    ))
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let limits = cfg.limits;
    let criteria: Vec<Criterion> = vec![
        ("AC1", "closed forms for D, Q, SD", Box::new(|| ac1(&limits))),
        ("AC2", "relative degrees of Q_{2^n}", Box::new(|| ac2(&limits))),
        ("AC3", "|Im g1| of Q_{2^{n+2}}", Box::new(|| ac3(&limits))),
        ("AC4", "spectrum spot values", Box::new(|| ac4(&limits))),
        ("AC5", "one class of non-normal subgroups", Box::new(|| ac5(&limits))),
        ("AC6", "two classes of non-normal subgroups", Box::new(|| ac6(&limits))),
        ("AC7", "property suite", Box::new(|| ac7(&cfg))),
        ("AC8", "|Im f1| > 2 criterion", Box::new(|| ac8(&cfg))),
        ("AC9", "gamma and spectrum spot values", Box::new(|| ac9(&limits))),
        ("AC10", "density witnesses", Box::new(|| ac10(&limits, cfg.prime_horizon))),
        ("AC11", "two-valued scan", Box::new(|| ac11(&limits))),
    ];

    let mut unexpected = Vec::new();
    for (id, title, check) in &criteria {
        let start = Instant::now();
        let o = check().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let ms = start.elapsed().as_millis();
        println!("{id} {} {title}: {} [{ms} ms]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let known = KNOWN_FAILURES.iter().find(|(k, _)| k == id);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("    known failure: {why}"),
            (false, None) => unexpected.push(*id),
            (true, Some(_)) => println!("    listed as a known failure but passed"),
            (true, None) => {}
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
