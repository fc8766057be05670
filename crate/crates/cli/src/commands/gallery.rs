use anosovlab::gallery::{adjoint_audit, klein_audit, phi_audit, psi_audit, AdjointAudit, KleinAudit, MinkowskiForm, PhiAudit, PsiAudit};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::Report;

#[derive(Clone, Debug)]
pub struct HilbertOutcome {
    pub psi: PsiAudit,
    pub klein: KleinAudit,
    pub adjoint: AdjointAudit,
}

pub fn compute_hilbert_check(cfg: &RunConfig) -> CliResult<HilbertOutcome> {
    let gl = &cfg.gallery;
    Ok(HilbertOutcome {
        psi: psi_audit(gl.dim, gl.samples, cfg.sub_seed(11))?,
        klein: klein_audit(gl.dim, gl.samples, cfg.sub_seed(12))?,
        adjoint: adjoint_audit(gl.dim, gl.samples, cfg.sub_seed(13))?,
    })
}

impl HilbertOutcome {
    pub fn report(&self) -> Report {
        let mut rep = Report::new("hilbert-check");
        rep.set("psi", self.psi);
        rep.set("klein", self.klein);
        rep.set("adjoint", self.adjoint);
        rep
    }
}

#[derive(Clone, Debug)]
pub struct HpqOutcome {
    pub p: usize,
    pub q: usize,
    pub phi: PhiAudit,
}

pub fn compute_hpq_check(cfg: &RunConfig) -> CliResult<HpqOutcome> {
    let gl = &cfg.gallery;
    let form = MinkowskiForm::new(gl.p, gl.q)?;
    Ok(HpqOutcome { p: gl.p, q: gl.q, phi: phi_audit(&form, gl.samples, &gl.times, cfg.sub_seed(14))? })
}

impl HpqOutcome {
    pub fn report(&self) -> Report {
        let mut rep = Report::new("hpq-check");
        rep.set("p", self.p);
        rep.set("q", self.q);
        rep.set("phi", self.phi);
        rep
    }
}
