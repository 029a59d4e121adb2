//! Runs catalog claims against exact expansions and reports the outcome of
//! every instance.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::{find_entry, instantiate, Claim, Instance, SweepConfig, TheoremEntry};
use crate::error::{Error, Result};
use crate::families::{family_series, legacy_series, Family};
use crate::identities::{is_vanishing, progression_len, Vanishing};
use crate::series::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
    SkippedDegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlStatus {
    NonzeroElsewhereConfirmed,
    AllZeroWarning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub exponent: i64,
    /// Decimal, since coefficients outgrow every fixed-width integer.
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entry_id: String,
    pub ell: Option<i64>,
    pub t: Option<u32>,
    pub family: Option<Family>,
    /// The instantiated product, e.g. `X(1,2,5,15,1,2,1)` or `hirschhorn-a`.
    pub series: String,
    pub modulus: u32,
    pub residue: i64,
    pub order: i64,
    pub checked_indices: u64,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub control_status: Option<ControlStatus>,
}

impl VerificationReport {
    /// A pass whose negative control found a nonzero coefficient elsewhere.
    pub fn is_confirmed_pass(&self) -> bool {
        self.status == Status::Pass && self.control_status == Some(ControlStatus::NonzeroElsewhereConfirmed)
    }

    fn sort_key(&self) -> (&str, Option<i64>, Option<u32>, &str, i64) {
        (&self.entry_id, self.ell, self.t, &self.series, self.residue)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Serial,
    Parallel,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub entries: usize,
    pub reports: usize,
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub skipped_degenerate: usize,
    /// `(entry, ell, t)` triples left out because an exponent is not positive.
    pub excluded_t: usize,
    pub failing_entries: Vec<String>,
}

impl Summary {
    fn from_reports(entries: usize, excluded_t: usize, reports: &[VerificationReport]) -> Summary {
        let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
        let mut failing_entries: Vec<String> = reports
            .iter()
            .filter(|r| r.status == Status::Fail)
            .map(|r| r.entry_id.clone())
            .collect();
        failing_entries.dedup();
        Summary {
            entries,
            reports: reports.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            vacuous: count(Status::Vacuous),
            skipped_degenerate: count(Status::SkippedDegenerate),
            excluded_t,
            failing_entries,
        }
    }

    /// No failure and no pass: only vacuous or skipped instances were seen.
    pub fn degenerate_only(&self) -> bool {
        self.fail == 0 && self.pass == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

/// Checks the residue class `l` mod `p` of `x`, plus the negative control
/// outside it.
pub fn check_progression(x: &QSeries, p: u32, l: i64) -> (Status, u64, Option<Counterexample>, ControlStatus) {
    let p = p as i64;
    let l = l.rem_euclid(p);
    let control = if x.terms().any(|(e, _)| e.rem_euclid(p) != l) {
        ControlStatus::NonzeroElsewhereConfirmed
    } else {
        ControlStatus::AllZeroWarning
    };
    let checked = progression_len(x, p, l);
    match is_vanishing(x, p, l) {
        Vanishing::Vanishes { checked } if checked > 0 => (Status::Pass, checked, None, control),
        Vanishing::Vanishes { .. } | Vanishing::Vacuous => (Status::Vacuous, checked, None, control),
        Vanishing::Fails { exponent, coefficient } => (
            Status::Fail,
            checked,
            Some(Counterexample {
                exponent,
                coefficient: coefficient.to_string(),
            }),
            control,
        ),
    }
}

fn family_report(entry_id: &str, ell: i64, t: u32, inst: &Instance, order: i64) -> VerificationReport {
    let mut report = VerificationReport {
        entry_id: entry_id.to_string(),
        ell: Some(ell),
        t: Some(t),
        family: Some(inst.spec.family),
        series: inst.spec.to_string(),
        modulus: inst.p,
        residue: inst.residue,
        order,
        checked_indices: 0,
        status: Status::SkippedDegenerate,
        counterexample: None,
        control_status: None,
    };
    if let Ok(x) = family_series(&inst.spec, order) {
        let (status, checked, cx, control) = check_progression(&x, inst.p, inst.residue);
        report.status = status;
        report.checked_indices = checked;
        report.counterexample = cx;
        report.control_status = Some(control);
    }
    report
}

/// Reports for one family entry at one `(ell, t)`, one per family.
pub fn verify_instance(entry: &TheoremEntry, ell: i64, t: u32, order: i64) -> Result<Vec<VerificationReport>> {
    let instances = instantiate(entry, ell, t)?;
    Ok(instances
        .iter()
        .map(|inst| family_report(&entry.id, ell, t, inst, order))
        .collect())
}

/// Reports for a fixed-parameter entry, one per residue.
pub fn verify_legacy(entry: &TheoremEntry, order: i64) -> Result<Vec<VerificationReport>> {
    let Claim::Legacy {
        series,
        p,
        ref residues,
    } = entry.claim
    else {
        return Err(Error::InvalidParameters(format!(
            "`{}` is not a fixed-parameter entry",
            entry.id
        )));
    };
    let x = legacy_series(&series, order);
    Ok(residues
        .iter()
        .map(|&r| {
            let residue = r.rem_euclid(p as i64);
            let mut report = VerificationReport {
                entry_id: entry.id.clone(),
                ell: None,
                t: None,
                family: None,
                series: series.to_string(),
                modulus: p,
                residue,
                order,
                checked_indices: 0,
                status: Status::SkippedDegenerate,
                counterexample: None,
                control_status: None,
            };
            if let Ok(x) = &x {
                let (status, checked, cx, control) = check_progression(x, p, residue);
                report.status = status;
                report.checked_indices = checked;
                report.counterexample = cx;
                report.control_status = Some(control);
            }
            report
        })
        .collect())
}

enum Job<'a> {
    Family { entry: &'a TheoremEntry, ell: i64, t: u32 },
    Legacy(&'a TheoremEntry),
}

impl Job<'_> {
    fn run(&self, order: i64) -> Result<Vec<VerificationReport>> {
        match *self {
            Job::Family { entry, ell, t } => verify_instance(entry, ell, t, order),
            Job::Legacy(entry) => verify_legacy(entry, order),
        }
    }
}

/// Verifies every selected entry over the sweep. An empty selection means
/// the whole catalog.
pub fn run_suite(
    catalog: &[TheoremEntry],
    config: &SweepConfig,
    selection: &[String],
    mode: ExecMode,
) -> Result<SuiteOutcome> {
    if config.order < 1 {
        return Err(Error::InvalidParameters(format!(
            "order {} must be at least 1",
            config.order
        )));
    }
    let entries: Vec<&TheoremEntry> = if selection.is_empty() {
        catalog.iter().collect()
    } else {
        selection
            .iter()
            .map(|id| find_entry(catalog, id))
            .collect::<Result<_>>()?
    };

    let mut jobs = Vec::new();
    let mut excluded_t = 0;
    for &entry in &entries {
        if entry.is_legacy() {
            jobs.push(Job::Legacy(entry));
            continue;
        }
        for &ell in &config.ell_values {
            for t in config.admissible_t(entry) {
                if entry.is_degenerate_t(ell, t) && !config.allow_degenerate_t {
                    excluded_t += 1;
                } else {
                    jobs.push(Job::Family { entry, ell, t });
                }
            }
        }
    }

    let order = config.order;
    let results: Vec<Result<Vec<VerificationReport>>> = match mode {
        ExecMode::Serial => jobs.iter().map(|j| j.run(order)).collect(),
        ExecMode::Parallel => run_parallel(&jobs, order),
    };
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let summary = Summary::from_reports(entries.len(), excluded_t, &reports);
    Ok(SuiteOutcome { reports, summary })
}

#[cfg(feature = "parallel")]
fn run_parallel(jobs: &[Job<'_>], order: i64) -> Vec<Result<Vec<VerificationReport>>> {
    use rayon::prelude::*;
    jobs.par_iter().map(|j| j.run(order)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_parallel(jobs: &[Job<'_>], order: i64) -> Vec<Result<Vec<VerificationReport>>> {
    jobs.iter().map(|j| j.run(order)).collect()
}

/// One JSON object per report, then a `{"summary": ...}` line.
pub fn to_records(outcome: &SuiteOutcome) -> Result<String> {
    let mut out = String::new();
    for r in &outcome.reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(
        &serde_json::json!({ "summary": outcome.summary }),
    )?);
    out.push('\n');
    Ok(out)
}

/// Parses the output of [`to_records`].
pub fn from_records(text: &str) -> Result<(Vec<VerificationReport>, Summary)> {
    #[derive(Deserialize)]
    struct Wrapped {
        summary: Summary,
    }
    let mut reports = Vec::new();
    let mut summary = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        if line.starts_with("{\"summary\"") {
            summary = Some(serde_json::from_str::<Wrapped>(line)?.summary);
        } else {
            reports.push(serde_json::from_str(line)?);
        }
    }
    let summary = summary.ok_or_else(|| Error::InvalidParameters("records have no summary line".into()))?;
    Ok((reports, summary))
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Vacuous => "vacuous",
        Status::SkippedDegenerate => "skipped-degenerate",
    }
}

pub fn to_table(outcome: &SuiteOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<22} {:>3} {:>3} {:<28} {:>10} {:>6} {:>8} {:<18} counterexample",
        "entry", "ell", "t", "series", "progress", "order", "checked", "status"
    );
    for r in &outcome.reports {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let cx = r
            .counterexample
            .as_ref()
            .map(|c| format!("q^{} -> {}", c.exponent, c.coefficient))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<22} {:>3} {:>3} {:<28} {:>10} {:>6} {:>8} {:<18} {}",
            r.entry_id,
            opt(r.ell.map(|v| v.to_string())),
            opt(r.t.map(|v| v.to_string())),
            r.series,
            format!("{}n+{}", r.modulus, r.residue),
            r.order,
            r.checked_indices,
            status_label(r.status),
            cx
        );
    }
    let s = &outcome.summary;
    let _ = writeln!(
        out,
        "\n{} entries, {} reports: {} pass, {} fail, {} vacuous, {} skipped-degenerate, {} degenerate t excluded",
        s.entries, s.reports, s.pass, s.fail, s.vacuous, s.skipped_degenerate, s.excluded_t
    );
    if !s.failing_entries.is_empty() {
        let _ = writeln!(out, "failing entries: {}", s.failing_entries.join(", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::default_catalog;

    #[test]
    fn single_instance_passes() {
        let cat = default_catalog();
        let e = find_entry(&cat, "vcres2.2").unwrap();
        let reports = verify_instance(e, 1, 1, 500).unwrap();
        let x = &reports[0];
        assert_eq!(x.family, Some(Family::X));
        assert_eq!(x.series, "X(1,6,7,21,1,2,1)");
        assert_eq!((x.modulus, x.residue), (7, 4));
        assert_eq!(x.checked_indices, (500 - 4) / 7 + 1);
        assert!(x.is_confirmed_pass());
    }

    #[test]
    fn wrong_residue_reports_smallest_counterexample() {
        let cat = default_catalog();
        let e = find_entry(&cat, "vcres2.2").unwrap();
        let inst = instantiate(e, 1, 1).unwrap();
        let x = family_series(&inst[0].spec, 500).unwrap();
        let (status, _, cx, _) = check_progression(&x, 7, 3);
        assert_eq!(status, Status::Fail);
        let cx = cx.unwrap();
        let first = x.terms().find(|(e, _)| e % 7 == 3).unwrap();
        assert_eq!(cx.exponent, first.0);
        assert_eq!(cx.coefficient, first.1.to_string());
    }

    #[test]
    fn legacy_with_control() {
        let cat = default_catalog();
        let e = find_entry(&cat, "hirschhorn-a").unwrap();
        let reports = verify_legacy(e, 500).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.is_confirmed_pass()));
        let a = legacy_series(&"hirschhorn-a".parse().unwrap(), 5).unwrap();
        assert_eq!(a.coeff(1).unwrap(), (-2).into());
    }

    #[test]
    fn zero_series_is_vacuous() {
        let (status, _, _, control) = check_progression(&QSeries::zero(50), 5, 2);
        assert_eq!(status, Status::Vacuous);
        assert_eq!(control, ControlStatus::AllZeroWarning);
    }

    #[test]
    fn selection_and_bookkeeping() {
        let cat = default_catalog();
        let cfg = SweepConfig::with_order(120);
        let out = run_suite(&cat, &cfg, &["vcres2.0".to_string()], ExecMode::Serial).unwrap();
        assert!(out.reports.iter().all(|r| r.entry_id == "vcres2.0"));
        let e = find_entry(&cat, "vcres2.0").unwrap();
        let admissible: usize = cfg
            .ell_values
            .iter()
            .map(|&ell| {
                cfg.admissible_t(e)
                    .into_iter()
                    .filter(|&t| !e.is_degenerate_t(ell, t))
                    .count()
            })
            .sum();
        assert_eq!(out.summary.pass, 2 * admissible);
        assert_eq!(out.summary.fail, 0);
        assert!(run_suite(&cat, &cfg, &["nosuch".to_string()], ExecMode::Serial).is_err());
    }

    #[test]
    fn parallel_matches_serial() {
        let cat = default_catalog();
        let cfg = SweepConfig::with_order(100);
        let sel: Vec<String> = ["vcres1.1", "vcres1.3", "tang-a2"].map(String::from).to_vec();
        let a = run_suite(&cat, &cfg, &sel, ExecMode::Serial).unwrap();
        let b = run_suite(&cat, &cfg, &sel, ExecMode::Parallel).unwrap();
        assert_eq!(to_records(&a).unwrap(), to_records(&b).unwrap());
    }

    #[test]
    fn records_round_trip() {
        let cat = default_catalog();
        let cfg = SweepConfig::with_order(60);
        let out = run_suite(&cat, &cfg, &["vcres1.9".to_string()], ExecMode::Serial).unwrap();
        let text = to_records(&out).unwrap();
        let (reports, summary) = from_records(&text).unwrap();
        assert_eq!(reports, out.reports);
        assert_eq!(summary, out.summary);
    }
}
