//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use anosovlab::basic::{linearization_defect, periodicity_check};
use anosovlab::flow::{act, chart_distance, flow, flow_tangent, hbi_cocycle, hopf, hopf_inv, FlowPoint, Norm, TangentVector};
use anosovlab::gallery::reference_pair;
use anosovlab::groups::primitive_conj_classes;
use anosovlab::linalg::{Covector, Matrix, Vector};
use anosovlab::thermo::{counting_table, entropy_fit};
use anosovlab_cli::commands::{
    compute_count, compute_diagnose, compute_domain_audit, compute_hilbert_check, compute_hpq_check, compute_zeta,
};
use anosovlab_cli::RunConfig;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn config(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml"));
    RunConfig::from_file(&path, &[]).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn uniform<const N: usize>(rng: &mut ChaCha8Rng, r: f64) -> [f64; N] {
    std::array::from_fn(|_| rng.gen_range(-r..r))
}

fn random_point(rng: &mut ChaCha8Rng) -> FlowPoint<f64> {
    loop {
        let (v, a) = (Vector::from_f64(&uniform::<3>(rng, 2.0)), Covector::from_f64(&uniform::<3>(rng, 2.0)));
        if a.pair(&v) >= 1e-3 * v.norm() * a.norm() {
            return FlowPoint::new(v, a).unwrap();
        }
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Matrix<f64> {
    loop {
        let g = Matrix::from_row_major(3, uniform::<9>(rng, 2.0).to_vec()).unwrap();
        if g.det() >= 0.1 {
            return g.normalize_unimodular().unwrap();
        }
    }
}

fn exact_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let e = Norm::Euclidean;
    let (mut round, mut trans, mut hbi, mut lin, mut split) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut lin_abs = 0.0f64;
    let mut structural = true;
    for _ in 0..1000 {
        let x = random_point(&mut rng);
        let h = hopf(&x, &e);
        round = round.max(chart_distance(&x, &hopf_inv(&h, &e).map_err(|e| e.to_string())?));

        let t: f64 = rng.gen_range(-5.0..5.0);
        let hf = hopf(&flow(&x, t), &e);
        structural &= hf.ell == h.ell && hf.h == h.h;
        trans = trans.max((hf.tau - h.tau - t).abs() / (1.0 + t.abs()));

        let g = random_unimodular(&mut rng);
        let gx = act(&g, &x).map_err(|e| e.to_string())?;
        hbi = hbi.max((hopf(&gx, &e).tau - h.tau - hbi_cocycle(&g, &h.ell, &h.h, &e)).abs());

        let (v, a) = (x.v(), x.alpha());
        let raw = Vector::from_f64(&uniform::<3>(&mut rng, 2.0));
        let w = &raw - &v.scale(a.pair(&raw));
        // a point of the local leaf: |w| ≤ 2|v|
        let w = w.scale(rng.gen_range(0.0..2.0) * v.norm() / w.norm());
        if a.pair(&(&v + &w)) > 0.0 {
            let s: f64 = rng.gen_range(-3.0..3.0);
            let d = linearization_defect(&x, &w, s).map_err(|e| e.to_string())?;
            // rounding scale of the operands entering both sides
            let scale = s.abs().exp() * (v.norm() + w.norm()) + a.norm();
            lin = lin.max(d / scale);
            lin_abs = lin_abs.max(d);
        }

        let w = Vector::from_f64(&uniform::<3>(&mut rng, 1.0));
        let mut beta = Covector::from_f64(&uniform::<3>(&mut rng, 1.0));
        beta = &beta - &a.scale((a.pair(&w) + beta.pair(&v)) / a.pair(&v));
        let u = TangentVector::new(x, w, beta).map_err(|e| e.to_string())?;
        let s: f64 = rng.gen_range(-3.0..3.0);
        let f = flow_tangent(&u, s);
        let (eu, es) = (s.exp(), (-s).exp());
        split = split
            .max((f.u_part() - &u.u_part().scale(eu)).norm_inf() / eu)
            .max((f.s_part() - &u.s_part().scale(es)).norm_inf() / es)
            .max((f.c_part() - u.c_part()).abs());
    }
    let pass = round <= 1e-12 && structural && trans <= 1e-12 && hbi <= 1e-10 && lin <= 1e-12 && split <= 1e-10;
    Ok((
        pass,
        format!(
            "hopf round-trip {round:.2e}, flow translation {trans:.2e} (base fixed: {structural}), HBI {hbi:.2e}, \
             exp^u linearization {lin:.2e} relative ({lin_abs:.2e} absolute), splitting {split:.2e}"
        ),
    ))
}

fn periodic_points() -> Outcome {
    let g = reference_pair();
    let classes = primitive_conj_classes(&g, 10, 1_000_000).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    let picked = sample(&mut rng, classes.len(), 100);
    for i in picked.iter() {
        let p = periodicity_check(&g.element(&classes[i].word)).map_err(|e| e.to_string())?;
        worst = worst.max(p.residual);
    }
    Ok((worst <= 1e-7, format!("100 of {} classes, max residual {worst:.2e}", classes.len())))
}

fn domain_audit() -> Outcome {
    let cfg = config("reference");
    let o = compute_domain_audit(&cfg).map_err(|e| e.to_string())?;
    let inside = o.basic.iter().filter(|r| r.inside).count();
    let floor = o.min_properness();
    let pass = cfg.audit.properness_radius == 6 && o.basic.len() == 50 && o.all_inside() && floor > 0.0;
    Ok((
        pass,
        format!("{inside}/{} basic points in Omega, properness floor {floor:.4} over {} elements", o.basic.len(), o.ball_size),
    ))
}

fn diagnostics() -> Outcome {
    let sym2 = config("sym2");
    let a = &sym2.audit;
    let grid_ok = a.delta.len() == 8
        && a.eps.len() == 8
        && a.horizons.first() == Some(&0.0)
        && a.horizons.last() == Some(&10.0);
    let s = compute_diagnose(&sym2).map_err(|e| e.to_string())?;
    let b = compute_diagnose(&config("barbot")).map_err(|e| e.to_string())?;
    let (ks, kb) = (s.slnic.kappa, b.slnic.kappa);
    let pass = grid_ok
        && s.holonomy_pairs > 0
        && s.holonomy_residual <= 1e-9
        && b.holonomy_residual <= 1e-9
        && s.sandwich_failures.is_empty()
        && s.degenerate_cells() == 0
        && s.max_distortion_spread() <= 10.0
        && ks > 0.0
        && ks >= 10.0 * kb;
    Ok((
        pass,
        format!(
            "holonomy {:.2e}/{:.2e}, sandwich failures {} of {} (L0 {:.3}), distortion spread {:.3}, kappa {ks:.3e} vs control {kb:.3e}",
            s.holonomy_residual,
            b.holonomy_residual,
            s.sandwich_failures.len(),
            s.sandwich_checks,
            s.l0,
            s.max_distortion_spread()
        ),
    ))
}

/// Ei(x) by its power series, for Li(t) = Ei(ln t) − Ei(ln 2).
fn ei_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..400 {
        term *= x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add < 1e-18 * sum {
            break;
        }
    }
    0.577_215_664_901_532_9 + x.ln() + sum
}

/// Periods whose counting function is round(Li(e^{ht})).
fn synthetic_periods(h: f64, n: usize) -> Vec<f64> {
    let li = |u: f64| ei_series(u) - ei_series(2f64.ln());
    (1..=n)
        .map(|k| {
            let target = k as f64 - 0.5;
            let (mut lo, mut hi) = (2f64.ln(), 40.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if li(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi / h
        })
        .collect()
}

fn counting() -> Outcome {
    let cfg = config("reference");
    let o = compute_count(&cfg).map_err(|e| e.to_string())?;
    let (lo, hi) = o.top_decade_range().ok_or("empty top decade")?;
    let h = 0.7;
    let p = synthetic_periods(h, 20_000);
    let t_max = p.last().unwrap() * 0.999;
    let grid: Vec<f64> = (1..=200).map(|i| t_max * i as f64 / 200.0).collect();
    let fit = entropy_fit(&counting_table(&p, &grid, t_max)).map_err(|e| e.to_string())?;
    let err = (fit.h / h - 1.0).abs();
    let pass = cfg.enumeration.radius == 14 && lo >= 0.85 && hi <= 1.15 && err <= 0.05;
    Ok((
        pass,
        format!(
            "R=14: {} classes, h {:.5}, top-decade N/Li in [{lo:.4}, {hi:.4}]; synthetic h=0.7 -> {:.5} ({:.2}%)",
            o.classes,
            o.fit.h,
            fit.h,
            100.0 * err
        ),
    ))
}

fn zeta() -> Outcome {
    let cfg = config("long-period");
    let o = compute_zeta(&cfg).map_err(|e| e.to_string())?;
    let change = o.last_change().ok_or("no doubling")?;
    let changes: Vec<String> = o.doubling.iter().filter_map(|r| r.change).map(|c| format!("{:.1}%", 100.0 * c)).collect();
    let modulus = o.min_scan_modulus();
    let pass = (cfg.zeta.pole_offset - 0.05).abs() < 1e-15
        && (cfg.zeta.scan_offset - 0.1).abs() < 1e-15
        && cfg.zeta.im_max >= 20.0
        && change < 0.05
        && modulus >= 1e-6;
    Ok((
        pass,
        format!(
            "h {:.4}, T_max {:.1}, doubling changes [{}], min |zeta| on the scan line {modulus:.3e}",
            o.h_hat,
            o.t_max,
            changes.join(", ")
        ),
    ))
}

fn gallery() -> Outcome {
    let cfg = config("gallery");
    let hpq = compute_hpq_check(&cfg).map_err(|e| e.to_string())?;
    let h = compute_hilbert_check(&cfg).map_err(|e| e.to_string())?;
    let pass = h.psi.samples >= 1000
        && hpq.phi.max_intertwining <= 1e-10
        && h.psi.max_residual <= 1e-9
        && h.klein.max_error <= 1e-10
        && h.adjoint.max_error <= 1e-7;
    Ok((
        pass,
        format!(
            "Phi intertwining {:.2e}, Psi conjugacy {:.2e}, Klein {:.2e}, adjoint {:.2e}",
            hpq.phi.max_intertwining, h.psi.max_residual, h.klein.max_error, h.adjoint.max_error
        ),
    ))
}

const SUITE: [(&str, &str); 9] = [
    ("gap-check", "schottky"),
    ("limit-set", "schottky"),
    ("count", "schottky"),
    ("domain-audit", "reference"),
    ("count", "reference"),
    ("diagnose", "sym2"),
    ("diagnose", "barbot"),
    ("zeta", "long-period"),
    ("hilbert-check", "gallery"),
];

fn run_suite(root: &Path, threads: &str) -> Result<(), String> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for (cmd, cfg) in SUITE.iter().chain(&[("hpq-check", "gallery")]) {
        let out = Command::new(env!("CARGO_BIN_EXE_anosovlab"))
            .env_clear()
            .arg(cmd)
            .arg("--config")
            .arg(configs.join(format!("{cfg}.toml")))
            .arg("--out")
            .arg(root.join(format!("{cmd}-{cfg}")))
            .args(["--seed", "17", "--threads", threads])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{cmd} {cfg}: {}", String::from_utf8_lossy(&out.stderr)));
        }
    }
    Ok(())
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .flat_map(|e| {
            let p = e.unwrap().path();
            if p.is_dir() {
                files(&p)
            } else {
                vec![p]
            }
        })
        .collect();
    v.sort();
    v
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
    run_suite(a.path(), "1")?;
    run_suite(b.path(), "4")?;
    let (fa, fb) = (files(a.path()), files(b.path()));
    let rel = |r: &Path, v: &[PathBuf]| v.iter().map(|p| p.strip_prefix(r).unwrap().to_path_buf()).collect::<Vec<_>>();
    if rel(a.path(), &fa) != rel(b.path(), &fb) {
        return Ok((false, "different file sets".into()));
    }
    let mut bytes = 0;
    let mut differing = Vec::new();
    for (x, y) in fa.iter().zip(&fb) {
        let (p, q) = (std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        bytes += p.len();
        if p != q {
            differing.push(x.strip_prefix(a.path()).unwrap().display().to_string());
        }
    }
    Ok((
        differing.is_empty(),
        format!("{} files, {bytes} bytes, 1 vs 4 threads; differing: {differing:?}", fa.len()),
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("exact-formula identities", Duration::from_secs(5), exact_identities),
        ("periodic-point lemma", Duration::from_secs(10), periodic_points),
        ("domain audit", Duration::from_secs(60), domain_audit),
        ("diagnostics suite", Duration::from_secs(300), diagnostics),
        ("counting and entropy", Duration::from_secs(600), counting),
        ("zeta surrogates", Duration::from_secs(300), zeta),
        ("geometry gallery", Duration::from_secs(60), gallery),
        ("determinism", Duration::from_secs(900), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let (pass, detail) = match res {
            Ok((p, d)) => (p && took < *limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {detail} [{:.2} s, limit {} s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
