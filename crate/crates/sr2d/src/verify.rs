//! Parallel batch runs of the randomized theory checks.

use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use sr2d_core::theory::suite::{instance_seed, random_instance, BatchSummary, CheckKind, SuiteGroup};
use sr2d_core::theory::{BoundReport, Relation, Verdict};

/// Selection for `verify-theory --suite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteSelection {
    All,
    Geometry,
    Vandermonde,
    Approximation,
}

impl SuiteSelection {
    pub fn kinds(self) -> Vec<CheckKind> {
        let group = match self {
            Self::All => return CheckKind::ALL.to_vec(),
            Self::Geometry => SuiteGroup::Geometry,
            Self::Vandermonde => SuiteGroup::Vandermonde,
            Self::Approximation => SuiteGroup::Approximation,
        };
        CheckKind::in_group(group).collect()
    }
}

/// All reports of one check kind.
#[derive(Clone, Debug)]
pub struct KindRun {
    pub kind: CheckKind,
    pub summary: BatchSummary,
    pub reports: Vec<BoundReport>,
    pub errors: Vec<String>,
}

/// Runs `count` instances of `kind` (its default batch size when `None`).
pub fn run_kind(kind: CheckKind, seed: u64, count: Option<usize>) -> KindRun {
    let count = count.unwrap_or_else(|| kind.default_instances());
    let outcomes: Vec<_> =
        (0..count as u64).into_par_iter().map(|i| random_instance(kind, instance_seed(seed, kind, i))).collect();
    let mut run = KindRun { kind, summary: BatchSummary::default(), reports: Vec::new(), errors: Vec::new() };
    for outcome in outcomes {
        run.summary.record(&outcome);
        match outcome {
            Ok(r) => run.reports.push(r),
            Err(e) => run.errors.push(e.to_string()),
        }
    }
    run
}

pub fn run_suite(selection: SuiteSelection, seed: u64, count: Option<usize>) -> Vec<KindRun> {
    selection.kinds().into_iter().map(|k| run_kind(k, seed, count)).collect()
}

fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::AtMost => "at_most",
        Relation::AtLeast => "at_least",
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Violated => "violated",
        Verdict::NotApplicable => "not_applicable",
    }
}

pub fn write_reports_csv(runs: &[KindRun], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["check", "name", "lhs", "rhs", "relation", "verdict", "satisfied", "instance"])?;
    for run in runs {
        for r in &run.reports {
            w.write_record([
                run.kind.name(),
                r.name,
                &format!("{:e}", r.lhs),
                &format!("{:e}", r.rhs),
                relation_name(r.relation),
                verdict_name(r.verdict),
                if r.satisfied() { "true" } else { "false" },
                &r.instance,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
