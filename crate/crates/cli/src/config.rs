//! Run configuration: a TOML file of `key = value` sections, with
//! `ANOSOVLAB_<SECTION>_<KEY>` environment overrides.

use std::path::PathBuf;

use anosovlab::gallery::{barbot_pair, long_period_pair, reference_pair, symmetric_power};
use anosovlab::groups::{GeneratorSet, Presentation};
use anosovlab::linalg::Matrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const MAX_RADIUS: usize = 16;
pub const MAX_ATLAS_DEPTH: usize = 8;
pub const MAX_DIM: usize = 8;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub label: String,
    /// Row-major entries separated by whitespace; `;` may separate rows.
    pub matrix: String,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub builtin: Option<String>,
    #[serde(default)]
    pub shear: Option<f64>,
    pub dimension: Option<usize>,
    pub presentation: Option<String>,
    #[serde(default)]
    pub generator: Vec<GeneratorEntry>,
    /// Symmetric-power lift to SL(lift).
    pub lift: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnumerationSection {
    pub radius: usize,
    pub cap: usize,
    pub max_nonproximal_fraction: f64,
}

impl Default for EnumerationSection {
    fn default() -> Self {
        Self { radius: 8, cap: 5_000_000, max_nonproximal_fraction: 0.5 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtlasSection {
    pub depth: usize,
    pub refine: usize,
    pub floor: f64,
}

impl Default for AtlasSection {
    fn default() -> Self {
        Self { depth: 4, refine: 0, floor: 1e-6 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditSection {
    pub horizons: Vec<f64>,
    pub delta: Vec<f64>,
    pub eps: Vec<f64>,
    pub times: Vec<f64>,
    pub profile_steps: usize,
    pub basic_points: usize,
    pub properness_radius: usize,
    pub periodic_classes: usize,
    pub periodic_radius: usize,
    pub holonomy_samples: usize,
    /// Largest Euclidean norm of the holonomy test points' vector lift.
    pub holonomy_radius: f64,
    pub contraction_horizon: f64,
    pub contraction_steps: usize,
    pub slnic_eps: f64,
    pub slnic_eps_prime: f64,
    pub slnic_cone: f64,
    pub slnic_directions: usize,
    pub slnic_depth: usize,
    pub slnic_refine: usize,
    pub chart_radius: f64,
    /// Gram matrix of the norm used for Hopf coordinates.
    pub norm: Option<String>,
}

impl Default for AuditSection {
    fn default() -> Self {
        let geo: Vec<f64> = (0..8).map(|i| 0.05 * 1.5f64.powi(i)).collect();
        Self {
            horizons: (0..=8).map(|k| 1.25 * k as f64).collect(),
            delta: geo.clone(),
            eps: geo,
            times: vec![-5.0, -1.0, -0.1, 0.1, 1.0, 5.0],
            profile_steps: 64,
            basic_points: 50,
            properness_radius: 6,
            periodic_classes: 100,
            periodic_radius: 10,
            holonomy_samples: 200,
            holonomy_radius: 100.0,
            contraction_horizon: 10.0,
            contraction_steps: 200,
            slnic_eps: 0.5,
            slnic_eps_prime: 0.25,
            slnic_cone: 0.5,
            slnic_directions: 8,
            slnic_depth: 5,
            slnic_refine: 1,
            chart_radius: 1.0,
            norm: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct CountSection {
    pub grid_points: usize,
}

impl Default for CountSection {
    fn default() -> Self {
        Self { grid_points: 200 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZetaSection {
    pub pole_offset: f64,
    pub scan_offset: f64,
    pub im_max: f64,
    pub im_steps: usize,
    pub doublings: usize,
    /// Extra evaluation points such as "1.5+2i" or "0.3".
    pub points: Vec<String>,
    pub bound: f64,
}

impl Default for ZetaSection {
    fn default() -> Self {
        Self { pole_offset: 0.05, scan_offset: 0.1, im_max: 20.0, im_steps: 800, doublings: 3, points: Vec::new(), bound: 1e6 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct GallerySection {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    pub samples: usize,
    pub times: Vec<f64>,
}

impl Default for GallerySection {
    fn default() -> Self {
        Self { p: 2, q: 1, dim: 3, samples: 1000, times: vec![-5.0, -1.0, -0.1, 0.1, 1.0, 5.0] }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    #[serde(default)]
    group: GroupSection,
    #[serde(default)]
    enumeration: EnumerationSection,
    #[serde(default)]
    atlas: AtlasSection,
    #[serde(default)]
    audit: AuditSection,
    #[serde(default)]
    count: CountSection,
    #[serde(default)]
    zeta: ZetaSection,
    #[serde(default)]
    gallery: GallerySection,
}

/// Validated configuration. Everything except the output directory enters
/// the config hash.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub group: GroupSection,
    pub enumeration: EnumerationSection,
    pub atlas: AtlasSection,
    pub audit: AuditSection,
    pub count: CountSection,
    pub zeta: ZetaSection,
    pub gallery: GallerySection,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub generators: Option<GeneratorSet<f64>>,
    #[serde(skip)]
    pub norm: Option<Matrix<f64>>,
    #[serde(skip)]
    pub zeta_points: Vec<Complex64>,
}

fn line_of(text: &str, needle: &str) -> Option<usize> {
    let pos = text.find(needle)?;
    Some(text[..pos].matches('\n').count() + 1)
}

fn located(text: &str, needle: &str, msg: String) -> CliError {
    match line_of(text, needle) {
        Some(l) => CliError::Config(format!("line {l}: {msg}")),
        None => CliError::Config(msg),
    }
}

/// Parses a d×d matrix; rows may be separated by `;`.
pub fn parse_matrix(s: &str, d: usize) -> Result<Matrix<f64>, String> {
    let rows: Vec<&str> = s.split(';').map(str::trim).filter(|r| !r.is_empty()).collect();
    let mut data = Vec::with_capacity(d * d);
    for (i, row) in rows.iter().enumerate() {
        let vals: Vec<f64> = row
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| format!("row {}: '{t}' is not a number", i + 1)))
            .collect::<Result<_, _>>()?;
        if rows.len() > 1 && vals.len() != d {
            return Err(format!("row {} has {} entries, expected {d}", i + 1, vals.len()));
        }
        data.extend(vals);
    }
    if data.len() != d * d {
        return Err(format!("expected {} entries ({d}×{d} row-major), found {}", d * d, data.len()));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err("non-finite entry".into());
    }
    Matrix::from_row_major(d, data).map_err(|e| e.to_string())
}

/// Parses "a+bi", "a-bi", "bi" or "a".
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{s}' is not a complex number");
    if let Some(body) = t.strip_suffix('i') {
        let split = body.char_indices().skip(1).filter(|&(i, c)| (c == '+' || c == '-') && !body[..i].ends_with(['e', 'E'])).last();
        let (re, im) = match split {
            Some((i, _)) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re.parse().map_err(|_| bad())?, im))
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}

fn env_overrides(table: &mut toml::Table, vars: &[(String, String)]) -> CliResult<bool> {
    const RESERVED: [&str; 4] = ["CONFIG", "OUT", "SEED", "THREADS"];
    let mut any = false;
    for (k, v) in vars {
        let Some(rest) = k.strip_prefix("ANOSOVLAB_") else { continue };
        if RESERVED.contains(&rest) {
            continue;
        }
        let lower = rest.to_ascii_lowercase();
        let Some((section, key)) = lower.split_once('_') else {
            return Err(CliError::Config(format!("env {k}: expected ANOSOVLAB_<SECTION>_<KEY>")));
        };
        let value: toml::Value = match format!("x = {v}").parse::<toml::Table>() {
            Ok(mut t) => t.remove("x").expect("parsed key"),
            Err(_) => toml::Value::String(v.clone()),
        };
        let entry = table.entry(section.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        let Some(sec) = entry.as_table_mut() else {
            return Err(CliError::Config(format!("env {k}: '{section}' is not a section")));
        };
        sec.insert(key.to_string(), value);
        any = true;
    }
    Ok(any)
}

fn builtin_group(name: &str, shear: f64) -> Option<GeneratorSet<f64>> {
    match name {
        "reference" => Some(reference_pair()),
        "long-period" => Some(long_period_pair()),
        "barbot" => Some(barbot_pair(shear)),
        _ => None,
    }
}

impl RunConfig {
    /// Parses `text`, applies the `ANOSOVLAB_*` overrides in `vars` and validates.
    pub fn parse(text: &str, vars: &[(String, String)]) -> CliResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))?;
        // Matrices are checked against the file first so errors carry its line numbers.
        let d = raw.group.dimension;
        if let Some(d) = d {
            for g in &raw.group.generator {
                parse_matrix(&g.matrix, d)
                    .map_err(|m| located(text, &g.matrix, format!("generator {}: {m}", g.label)))?;
            }
        }
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let raw = if env_overrides(&mut table, vars)? {
            RawConfig::deserialize(toml::Value::Table(table))
                .map_err(|e| CliError::Config(format!("after environment overrides: {e}")))?
        } else {
            raw
        };
        Self::validate(raw, text)
    }

    pub fn from_file(path: &std::path::Path, vars: &[(String, String)]) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, vars)
    }

    fn validate(raw: RawConfig, text: &str) -> CliResult<Self> {
        let cfg_err = |m: String| CliError::Config(m);
        let g = &raw.group;
        let generators = match (&g.builtin, g.generator.is_empty()) {
            (Some(_), false) => return Err(cfg_err("[group] give either builtin or generator entries, not both".into())),
            (Some(name), true) => Some(builtin_group(name, g.shear.unwrap_or(0.7)).ok_or_else(|| {
                located(text, name, format!("unknown builtin group '{name}' (reference, long-period, barbot)"))
            })?),
            (None, false) => {
                let d = g.dimension.ok_or_else(|| cfg_err("[group] dimension is required with generators".into()))?;
                if !(2..=MAX_DIM).contains(&d) {
                    return Err(cfg_err(format!("[group] dimension {d} outside 2..={MAX_DIM}")));
                }
                let presentation = match g.presentation.as_deref().unwrap_or("free") {
                    "free" => Presentation::Free,
                    "unknown" => Presentation::Unknown,
                    other => return Err(located(text, other, format!("unknown presentation '{other}'"))),
                };
                let mut labels = Vec::new();
                let mut mats = Vec::new();
                for e in &g.generator {
                    let m = parse_matrix(&e.matrix, d)
                        .map_err(|m| located(text, &e.matrix, format!("generator {}: {m}", e.label)))?;
                    let m = m.normalize_unimodular().map_err(|err| {
                        located(text, &e.matrix, format!("generator {}: {err}", e.label))
                    })?;
                    labels.push(e.label.clone());
                    mats.push(m);
                }
                Some(GeneratorSet::new(labels, mats, presentation).map_err(|e| cfg_err(format!("[group] {e}")))?)
            }
            (None, true) => None,
        };
        let generators = match (generators, g.lift) {
            (Some(gs), Some(k)) => {
                if gs.dim() != 2 || !(2..=MAX_DIM).contains(&k) {
                    return Err(cfg_err(format!("[group] lift {k} needs SL(2) generators and 2 ≤ lift ≤ {MAX_DIM}")));
                }
                Some(symmetric_power(&gs, k).map_err(|e| cfg_err(format!("[group] lift: {e}")))?)
            }
            (gs, _) => gs,
        };
        if raw.enumeration.radius > MAX_RADIUS || raw.audit.periodic_radius > MAX_RADIUS || raw.audit.properness_radius > MAX_RADIUS {
            return Err(cfg_err(format!("word radii are capped at {MAX_RADIUS}")));
        }
        if raw.atlas.depth > MAX_ATLAS_DEPTH {
            return Err(cfg_err(format!("[atlas] depth is capped at {MAX_ATLAS_DEPTH}")));
        }
        let norm = match (&raw.audit.norm, &generators) {
            (Some(s), Some(gs)) => {
                let m = parse_matrix(s, gs.dim()).map_err(|m| located(text, s, format!("[audit] norm: {m}")))?;
                Some(m)
            }
            (Some(_), None) => return Err(cfg_err("[audit] norm needs a group".into())),
            _ => None,
        };
        let zeta_points = raw
            .zeta
            .points
            .iter()
            .map(|p| parse_complex(p).map_err(|m| located(text, p, format!("[zeta] points: {m}"))))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(RunConfig {
            seed: raw.seed.unwrap_or(0),
            group: raw.group,
            enumeration: raw.enumeration,
            atlas: raw.atlas,
            audit: raw.audit,
            count: raw.count,
            zeta: raw.zeta,
            gallery: raw.gallery,
            out: PathBuf::from("."),
            generators,
            norm,
            zeta_points,
        })
    }

    pub fn group(&self) -> CliResult<&GeneratorSet<f64>> {
        self.generators.as_ref().ok_or_else(|| CliError::Config("this command needs a [group] section".into()))
    }

    /// SHA-256 of the canonical JSON form of the configuration and seed.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Seed for an independent audit stream.
    pub fn sub_seed(&self, stream: u64) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream)
    }
}

/// `ANOSOVLAB_*` variables from the process environment, sorted.
pub fn env_vars() -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = std::env::vars().filter(|(k, _)| k.starts_with("ANOSOVLAB_")).collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5+2i").unwrap(), Complex64::new(1.5, 2.0));
        assert_eq!(parse_complex("0.3").unwrap(), Complex64::new(0.3, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("1e-3-1e-2i").unwrap(), Complex64::new(1e-3, -1e-2));
        assert!(parse_complex("x+i").is_err());
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "[group]\ndimension = 2\n\n[[group.generator]]\nlabel = \"a\"\nmatrix = \"3 0 ; 0 0.5 1\"\n";
        let err = RunConfig::parse(text, &[]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("line 6"), "{err}");
        assert!(err.to_string().contains("row 2 has 3 entries"), "{err}");
    }

    #[test]
    fn env_override_wins() {
        let text = "[group]\nbuiltin = \"reference\"\n[enumeration]\nradius = 6\n";
        let cfg = RunConfig::parse(text, &[("ANOSOVLAB_ENUMERATION_RADIUS".into(), "9".into())]).unwrap();
        assert_eq!(cfg.enumeration.radius, 9);
        let plain = RunConfig::parse(text, &[]).unwrap();
        assert_ne!(plain.hash(), cfg.hash());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::parse("[count]\ngrid = 3\n", &[]).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
