//! Degree spectra over the subgroup lattice: `Im f_1` (`H ↦ csd(H, G)`),
//! `Im g_1` (`H ↦ csd(H)`) and `Im f` (`H ↦ sd(H, G)`), plus corpus scans.
//!
//! All three maps are constant on conjugacy classes of subgroups, so each
//! spectrum evaluates one representative per class. A second member of every
//! class of size > 1 is re-evaluated as a guard on that shortcut.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degrees::{CyclicDegrees, LatticeDegrees};
use crate::group::{Elem, GroupError, GroupTable, Limits};
use crate::lattice::{self, Subgroup, SubgroupLattice};
use crate::spec;
use crate::Degree;

/// One conjugacy class of subgroups and the value the map takes on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class_id: usize,
    /// Short description of the representative, e.g. `Z4 <9>` or `H8 <1,8>`.
    pub representative: String,
    pub order: usize,
    pub cyclic: bool,
    pub normal: bool,
    pub class_size: usize,
    pub value: Degree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSpectrum {
    /// Distinct values, ascending.
    pub distinct_values: Vec<Degree>,
    pub table: Vec<ClassRow>,
}

impl DegreeSpectrum {
    pub fn len(&self) -> usize {
        self.distinct_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distinct_values.is_empty()
    }

    pub fn contains(&self, d: &Degree) -> bool {
        self.distinct_values.binary_search(d).is_ok()
    }
}

/// `(|Im f|, |Im f_1|, |Im g_1|, γ)`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumCounts {
    pub im_f: usize,
    pub im_f1: usize,
    pub im_g1: usize,
    pub gamma: usize,
}

pub fn describe(h: &Subgroup) -> String {
    let gens = match h.cyclic_witness() {
        Some(w) if h.order() > 1 => vec![w],
        Some(_) => vec![],
        None => h.generators().to_vec(),
    };
    let gens: Vec<String> = gens.iter().map(Elem::to_string).collect();
    let kind = if h.is_cyclic() { "Z" } else { "H" };
    format!("{kind}{} <{}>", h.order(), gens.join(","))
}

/// Lattice-level data for one group, shared by all spectra.
pub struct GroupAnalysis<'g> {
    group: &'g GroupTable,
    cyclic: CyclicDegrees,
    lattice: SubgroupLattice,
    full: OnceLock<LatticeDegrees>,
}

impl<'g> GroupAnalysis<'g> {
    pub fn new(group: &'g GroupTable, limits: &Limits) -> Result<Self, GroupError> {
        let lattice = lattice::all_subgroups(group, limits)?;
        Ok(GroupAnalysis {
            group,
            cyclic: CyclicDegrees::new(group),
            lattice,
            full: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &GroupTable {
        self.group
    }

    pub fn cyclic(&self) -> &CyclicDegrees {
        &self.cyclic
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn full(&self) -> &LatticeDegrees {
        self.full
            .get_or_init(|| LatticeDegrees::from_lattice(self.group, self.lattice.clone()))
    }

    fn spectrum(&self, value: impl Fn(&Subgroup) -> Degree + Sync) -> DegreeSpectrum {
        let subs = self.lattice.subgroups();
        let table: Vec<ClassRow> = self
            .lattice
            .classes()
            .par_iter()
            .enumerate()
            .map(|(class_id, members)| {
                let rep = &subs[members[0]];
                let v = value(rep);
                if members.len() > 1 {
                    let other = value(&subs[*members.last().unwrap()]);
                    assert_eq!(v, other, "degree not constant on class {class_id} of {}", self.group.spec());
                }
                ClassRow {
                    class_id,
                    representative: describe(rep),
                    order: rep.order(),
                    cyclic: rep.is_cyclic(),
                    normal: self.lattice.is_normal(members[0]),
                    class_size: members.len(),
                    value: v,
                }
            })
            .collect();
        let mut distinct_values: Vec<Degree> = table.iter().map(|r| r.value.clone()).collect();
        distinct_values.sort();
        distinct_values.dedup();
        DegreeSpectrum {
            distinct_values,
            table,
        }
    }

    /// `Im f_1`
    pub fn relative_csd_spectrum(&self) -> DegreeSpectrum {
        self.spectrum(|h| self.cyclic.csd_relative(h))
    }

    /// `Im g_1`
    pub fn csd_spectrum(&self) -> DegreeSpectrum {
        self.spectrum(|h| self.cyclic.csd_of(h))
    }

    /// `Im f`
    pub fn relative_sd_spectrum(&self) -> DegreeSpectrum {
        let full = self.full();
        self.spectrum(|h| full.sd_relative(h))
    }

    pub fn counts(&self) -> SpectrumCounts {
        SpectrumCounts {
            im_f: self.relative_sd_spectrum().len(),
            im_f1: self.relative_csd_spectrum().len(),
            im_g1: self.csd_spectrum().len(),
            gamma: self.lattice.gamma(),
        }
    }
}

pub fn relative_csd_spectrum(g: &GroupTable, limits: &Limits) -> Result<DegreeSpectrum, GroupError> {
    Ok(GroupAnalysis::new(g, limits)?.relative_csd_spectrum())
}

pub fn csd_spectrum(g: &GroupTable, limits: &Limits) -> Result<DegreeSpectrum, GroupError> {
    Ok(GroupAnalysis::new(g, limits)?.csd_spectrum())
}

pub fn relative_sd_spectrum(g: &GroupTable, limits: &Limits) -> Result<DegreeSpectrum, GroupError> {
    Ok(GroupAnalysis::new(g, limits)?.relative_sd_spectrum())
}

pub fn spectrum_counts(g: &GroupTable, limits: &Limits) -> Result<SpectrumCounts, GroupError> {
    Ok(GroupAnalysis::new(g, limits)?.counts())
}

/// `csd(G) = 1`
pub fn is_iwasawa(g: &GroupTable) -> bool {
    CyclicDegrees::new(g).csd().is_one()
}

/// `csd(G) < 1/2 + |N(G) ∩ L_1(G)| / (2 |L_1(G)|)`, compared exactly. When it
/// holds, `|Im f_1| > 2`.
pub fn many_degrees_criterion(g: &GroupTable) -> bool {
    let cd = CyclicDegrees::new(g);
    criterion_holds(&cd)
}

pub(crate) fn criterion_holds(cd: &CyclicDegrees) -> bool {
    let l1 = cd.poset().len() as u64;
    let normal = cd.poset().normal_count() as u64;
    let threshold = Degree::new(l1 + normal, 2 * l1);
    cd.csd() < threshold
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub spec: String,
    pub order: usize,
    pub im_f1: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_f: Option<usize>,
    pub gamma: usize,
    pub iwasawa: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFailure {
    pub spec: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ScanReport {
    pub census: Vec<CensusEntry>,
    /// Entries meeting the scan's condition.
    pub findings: Vec<CensusEntry>,
    pub failures: Vec<ScanFailure>,
}

fn scan(
    specs: &[String],
    max_order: usize,
    limits: &Limits,
    with_sd: bool,
    hit: impl Fn(&CensusEntry) -> bool,
) -> ScanReport {
    let results: Vec<Option<Result<CensusEntry, ScanFailure>>> = specs
        .par_iter()
        .map(|s| {
            let fail = |e: String| ScanFailure { spec: s.clone(), error: e };
            let expr = match spec::parse(s) {
                Ok(e) => e,
                Err(e) => return Some(Err(fail(e.to_string()))),
            };
            if expr.order() > max_order as u64 {
                return None;
            }
            let run = || -> Result<CensusEntry, GroupError> {
                let g = spec::build(&expr, limits)?;
                let a = GroupAnalysis::new(&g, limits)?;
                let f1 = a.relative_csd_spectrum().len();
                Ok(CensusEntry {
                    spec: expr.to_string(),
                    order: g.order(),
                    im_f1: f1,
                    im_f: with_sd.then(|| a.relative_sd_spectrum().len()),
                    gamma: a.lattice().gamma(),
                    iwasawa: f1 == 1,
                })
            };
            Some(run().map_err(|e| fail(e.to_string())))
        })
        .collect();
    let mut report = ScanReport::default();
    for r in results.into_iter().flatten() {
        match r {
            Ok(entry) => {
                if hit(&entry) {
                    report.findings.push(entry.clone());
                }
                report.census.push(entry);
            }
            Err(f) => report.failures.push(f),
        }
    }
    report
}

/// Census of `|Im f_1|` over `specs` of order at most `max_order`; groups
/// with exactly two values are reported as findings (counterexample
/// candidates), never filtered.
pub fn scan_two_valued(specs: &[String], max_order: usize, limits: &Limits) -> ScanReport {
    scan(specs, max_order, limits, false, |e| e.im_f1 == 2)
}

/// Census of non-Iwasawa groups with `|Im f| = |Im f_1|`.
pub fn scan_equal_degrees(specs: &[String], max_order: usize, limits: &Limits) -> ScanReport {
    scan(specs, max_order, limits, true, |e| !e.iwasawa && e.im_f == Some(e.im_f1))
}
