use anosovlab::groups::{enumerate_ball, format_word, gap_fit, limit_set_sample, transversality_audit, GapFit, TransversalityAudit, DEDUP_TOL};
use anosovlab::LimitSample;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::{fmt_f64, Report, Table};

#[derive(Clone, Debug)]
pub struct GapRow {
    pub word: String,
    pub word_len: usize,
    pub cyclic_len: usize,
    pub lambda1: f64,
    pub gap: f64,
    pub proximal: bool,
}

#[derive(Clone, Debug)]
pub struct GapOutcome {
    pub rows: Vec<GapRow>,
    pub fit: GapFit,
    pub nonproximal_fraction: f64,
}

pub fn compute_gap_check(cfg: &RunConfig) -> CliResult<GapOutcome> {
    let g = cfg.group()?;
    let ball = enumerate_ball(g, cfg.enumeration.radius, cfg.enumeration.cap)?;
    let mut rows = Vec::with_capacity(ball.len());
    let mut failed = 0usize;
    for e in ball.iter().filter(|e| !e.is_identity_word()) {
        match e.eigen() {
            Ok(eig) => {
                if !eig.simple_top {
                    failed += 1;
                }
                rows.push(GapRow {
                    word: g.format(e.word()),
                    word_len: e.word_len(),
                    cyclic_len: e.cyclic_len(),
                    lambda1: eig.lambda1(),
                    gap: eig.gap(),
                    proximal: eig.simple_top,
                });
            }
            Err(_) => failed += 1,
        }
    }
    let total = ball.len().saturating_sub(1).max(1);
    let nonproximal_fraction = failed as f64 / total as f64;
    if nonproximal_fraction > cfg.enumeration.max_nonproximal_fraction {
        return Err(CliError::Numerical(anosovlab::Error::NotProximal(format!(
            "{failed} of {total} elements are not proximal"
        ))));
    }
    let fit = gap_fit(&ball, g.presentation())?;
    Ok(GapOutcome { rows, fit, nonproximal_fraction })
}

impl GapOutcome {
    pub fn report(&self) -> Report {
        let mut t = Table::new("gap_check.csv", &["word", "word_len", "cyclic_len", "lambda1", "gap", "proximal"]);
        for r in &self.rows {
            t.push(vec![
                r.word.clone(),
                r.word_len.to_string(),
                r.cyclic_len.to_string(),
                fmt_f64(r.lambda1),
                fmt_f64(r.gap),
                r.proximal.to_string(),
            ]);
        }
        let mut rep = Report::new("gap-check");
        rep.tables.push(t);
        rep.set("fit", self.fit);
        rep.set("elements", self.rows.len());
        rep.set("nonproximal_fraction", self.nonproximal_fraction);
        rep
    }
}

#[derive(Clone, Debug)]
pub struct LimitOutcome {
    pub labels: Vec<String>,
    pub samples: Vec<LimitSample>,
    pub audit: TransversalityAudit,
}

pub fn compute_limit_set(cfg: &RunConfig) -> CliResult<LimitOutcome> {
    let g = cfg.group()?;
    let samples = limit_set_sample(g, cfg.atlas.depth, cfg.enumeration.cap, DEDUP_TOL)?;
    let audit = transversality_audit(&samples, cfg.atlas.floor);
    Ok(LimitOutcome { labels: g.labels().to_vec(), samples, audit })
}

impl LimitOutcome {
    pub fn report(&self) -> Report {
        let d = self.samples.first().map_or(0, |s| s.xi.dim());
        let mut header = vec!["word".to_string()];
        header.extend((0..d).map(|i| format!("xi_{i}")));
        header.extend((0..d).map(|i| format!("xi_star_{i}")));
        header.push("quality".to_string());
        let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut t = Table::new("limit_set.csv", &hdr);
        for s in &self.samples {
            let mut row = vec![format_word(&s.source, &self.labels)];
            row.extend(s.xi.coords().iter().map(|&x| fmt_f64(x)));
            row.extend(s.xi_star.coords().iter().map(|&x| fmt_f64(x)));
            row.push(fmt_f64(s.quality));
            t.push(row);
        }
        let mut rep = Report::new("limit-set");
        rep.tables.push(t);
        rep.set("samples", self.samples.len());
        rep.set("transversality", &self.audit);
        rep
    }
}
