use anosovlab::groups::{primitive_conj_classes, ClassSeed};
use anosovlab::thermo::{counting_table, entropy_fit, period_envelope, CountingTable, EntropyFit, PeriodEnvelope};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::{fmt_f64, fmt_opt, Report, Table};

#[derive(Clone, Debug)]
pub struct CountOutcome {
    pub classes: usize,
    pub envelope: PeriodEnvelope,
    pub fit: EntropyFit,
    pub table: CountingTable,
}

impl CountOutcome {
    /// (min, max) of N/Li over the top decade.
    pub fn top_decade_range(&self) -> Option<(f64, f64)> {
        let r = self.table.top_decade_ratios();
        if r.is_empty() {
            return None;
        }
        Some(r.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, x)| (lo.min(x), hi.max(x))))
    }
}

/// Classes up to the configured radius with their trusted period range and
/// the fitted entropy.
pub(crate) fn classes_and_fit(
    cfg: &RunConfig,
) -> CliResult<(Vec<ClassSeed<f64>>, PeriodEnvelope, EntropyFit, CountingTable)> {
    let g = cfg.group()?;
    let r = cfg.enumeration.radius;
    let classes = primitive_conj_classes(g, r, cfg.enumeration.cap)?;
    let envelope = period_envelope(classes.iter().map(|c| (c.word.len(), c.period)), r)?;
    let n = cfg.count.grid_points.max(2);
    let grid: Vec<f64> = (1..=n).map(|i| envelope.t_max * i as f64 / n as f64).collect();
    let table = counting_table(&classes, &grid, envelope.t_max);
    let fit = entropy_fit(&table)?;
    let table = table.with_entropy(fit.h)?;
    Ok((classes, envelope, fit, table))
}

pub fn compute_count(cfg: &RunConfig) -> CliResult<CountOutcome> {
    let (classes, envelope, fit, table) = classes_and_fit(cfg)?;
    Ok(CountOutcome { classes: classes.len(), envelope, fit, table })
}

impl CountOutcome {
    pub fn report(&self) -> Report {
        let mut t = Table::new("counting.csv", &["t", "count", "li", "ratio"]);
        for r in &self.table.rows {
            t.push(vec![fmt_f64(r.t), r.count.to_string(), fmt_opt(r.li), fmt_opt(r.ratio)]);
        }
        let mut rep = Report::new("count");
        rep.tables.push(t);
        rep.set("classes", self.classes);
        rep.set("envelope", self.envelope);
        rep.set("entropy", self.fit);
        rep.set("top_decade_range", self.top_decade_range());
        rep
    }
}
