//! Subcommands. Each `compute_*` returns a typed outcome; `report()` turns
//! it into tables and a summary.

mod count;
mod diagnose;
mod domain;
mod gallery;
mod groups;
mod zeta;

pub use count::{compute_count, CountOutcome};
pub use diagnose::{compute_diagnose, DiagnoseOutcome, DistortionRow};
pub use domain::{compute_domain_audit, BasicRow, DomainOutcome, PeriodicRow};
pub use gallery::{compute_hilbert_check, compute_hpq_check, HilbertOutcome, HpqOutcome};
pub use groups::{compute_gap_check, compute_limit_set, GapOutcome, LimitOutcome};
pub use zeta::{compute_zeta, DoublingRow, ZetaOutcome};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    GapCheck,
    LimitSet,
    DomainAudit,
    Diagnose,
    Count,
    Zeta,
    HilbertCheck,
    HpqCheck,
}

pub fn run(cmd: Command, cfg: &RunConfig) -> CliResult<Report> {
    Ok(match cmd {
        Command::GapCheck => compute_gap_check(cfg)?.report(),
        Command::LimitSet => compute_limit_set(cfg)?.report(),
        Command::DomainAudit => compute_domain_audit(cfg)?.report(),
        Command::Diagnose => compute_diagnose(cfg)?.report(),
        Command::Count => compute_count(cfg)?.report(),
        Command::Zeta => compute_zeta(cfg)?.report(),
        Command::HilbertCheck => compute_hilbert_check(cfg)?.report(),
        Command::HpqCheck => compute_hpq_check(cfg)?.report(),
    })
}
