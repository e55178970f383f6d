//! Parameter-plane scans: rectangular (eta, xi) grids evaluated in
//! parallel, serialized to CSV or JSON with byte-deterministic output.
//!
//! Row-major order with eta as the outer loop; rows are distributed over a
//! rayon pool but collected by index, and each point's arithmetic has a
//! fixed summation order, so the output bytes do not depend on the worker
//! count.

use crate::error::{PtError, Result};
use crate::phase::{classify, LaplacianGrid, PhaseLabel};
use crate::response::response_bundle;
use crate::spectrum::{energy_density_refined, Mode};
use crate::model::FieldPoint;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};

/// Inclusive linear range with `count` points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl RangeSpec {
    fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(PtError::Config(format!("{name}: range must be finite")));
        }
        if self.count < 2 {
            return Err(PtError::Config(format!(
                "{name}: count must be >= 2, got {}",
                self.count
            )));
        }
        if self.min >= self.max {
            return Err(PtError::Config(format!(
                "{name}: need min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + i as f64 * step
                }
            })
            .collect()
    }
}

/// Quantities a scan can evaluate per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Energy,
    Laplacian,
    BerrySum,
    BerryDiff,
    Magnetization,
    Phase,
}

/// Ensemble selection in config files: `{"sites": 600}` or
/// `"thermodynamic"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModeSpec {
    Sites { sites: usize },
    Keyword(String),
}

impl ModeSpec {
    pub fn to_mode(&self) -> Result<Mode> {
        match self {
            ModeSpec::Sites { sites } => {
                if *sites < 4 || *sites % 2 != 0 {
                    return Err(PtError::Config(format!(
                        "sites must be an even number >= 4, got {sites}"
                    )));
                }
                Ok(Mode::FiniteN { two_n: *sites })
            }
            ModeSpec::Keyword(s) if s == "thermodynamic" => Ok(Mode::Thermodynamic),
            ModeSpec::Keyword(s) => Err(PtError::Config(format!(
                "unknown mode keyword {s:?}; use \"thermodynamic\" or {{\"sites\": N}}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn default_coupling() -> f64 {
    1.0
}

fn default_phase_tol() -> f64 {
    1e-6
}

/// Scan configuration, deserializable from a JSON file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanConfig {
    pub eta: RangeSpec,
    pub xi: RangeSpec,
    pub mode: ModeSpec,
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub output_format: OutputFormat,
    /// Worker threads; 0 means all available cores.
    #[serde(default)]
    pub parallelism: usize,
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    #[serde(default = "default_phase_tol")]
    pub phase_tol: f64,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.eta.validate("eta")?;
        self.xi.validate("xi")?;
        self.mode.to_mode()?;
        if self.quantities.is_empty() {
            return Err(PtError::Config("select at least one quantity".into()));
        }
        if !(self.coupling.is_finite() && self.coupling > 0.0) {
            return Err(PtError::Config(format!(
                "coupling must be finite and positive, got {}",
                self.coupling
            )));
        }
        if !(self.phase_tol.is_finite() && self.phase_tol > 0.0) {
            return Err(PtError::Config(format!(
                "phase_tol must be positive, got {}",
                self.phase_tol
            )));
        }
        if self.parallelism > 1024 {
            return Err(PtError::Config(format!(
                "parallelism {} is unreasonably large",
                self.parallelism
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScanConfig =
            serde_json::from_str(text).map_err(|e| PtError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn wants(&self, q: Quantity) -> bool {
        self.quantities.contains(&q)
    }
}

/// One evaluated grid point.  `None` marks quantities that were not
/// selected or not computable; `error` carries the short code of the first
/// failure at this point.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub eta: f64,
    pub xi: f64,
    pub r: f64,
    pub phi: f64,
    pub eps_g: Option<Complex64>,
    pub laplacian: Option<Complex64>,
    pub c_sum: Option<Complex64>,
    pub c_diff: Option<Complex64>,
    pub m_a: Option<Complex64>,
    pub phase: Option<PhaseLabel>,
    pub error: Option<&'static str>,
}

/// Completed scan: rows in row-major order (eta outer, xi inner).
#[derive(Debug, Clone)]
pub struct ScanTable {
    pub etas: Vec<f64>,
    pub xis: Vec<f64>,
    pub rows: Vec<ScanRow>,
    pub config: ScanConfig,
}

fn evaluate_point(cfg: &ScanConfig, mode: Mode, eta: f64, xi: f64) -> ScanRow {
    let p = FieldPoint {
        eta,
        xi,
        j: cfg.coupling,
    };
    let (r, phi) = p.to_polar();
    let mut row = ScanRow {
        eta,
        xi,
        r,
        phi,
        eps_g: None,
        laplacian: None,
        c_sum: None,
        c_diff: None,
        m_a: None,
        phase: None,
        error: None,
    };
    if cfg.wants(Quantity::Phase) {
        // Tolerance was validated with the config; classification cannot
        // fail on a finite point.
        row.phase = classify(&p, cfg.phase_tol).ok();
    }
    let needs_bundle = cfg.wants(Quantity::Energy)
        || cfg.wants(Quantity::Laplacian)
        || cfg.wants(Quantity::BerrySum)
        || cfg.wants(Quantity::BerryDiff)
        || cfg.wants(Quantity::Magnetization);
    if !needs_bundle {
        return row;
    }
    match response_bundle(&p, mode) {
        Ok(b) => {
            if cfg.wants(Quantity::Energy) {
                row.eps_g = Some(Complex64::new(b.eps_g, 0.0));
            }
            if cfg.wants(Quantity::Laplacian) {
                row.laplacian = Some(Complex64::new(b.d2_eta + b.d2_xi, 0.0));
            }
            if cfg.wants(Quantity::BerrySum) {
                row.c_sum = Some(2.0 * Complex64::i() * Complex64::new(b.d2_mixed - b.d2_eta, 0.0));
            }
            if cfg.wants(Quantity::BerryDiff) {
                row.c_diff = Some(Complex64::new(2.0 * (b.d2_mixed - b.d2_xi), 0.0));
            }
            if cfg.wants(Quantity::Magnetization) {
                row.m_a = Some(Complex64::new(2.0 * b.d_eta, 2.0 * b.d_xi));
            }
        }
        Err(e) => {
            row.error = Some(e.code());
            // The energy density itself stays finite on the gapless ray;
            // recover it so energy columns remain usable there.
            if cfg.wants(Quantity::Energy) {
                if let PtError::Gapless { .. } = e {
                    row.eps_g = match mode {
                        Mode::Thermodynamic => energy_density_refined(&p).ok(),
                        Mode::FiniteN { two_n } => crate::spectrum::ground_energy(two_n, &p)
                            .ok()
                            .map(|r| r.density),
                    };
                }
            }
        }
    }
    row
}

/// Run a validated scan.  Progress (completed row count) goes to stderr at
/// ~10% increments.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanTable> {
    cfg.validate()?;
    let mode = cfg.mode.to_mode()?;
    let etas = cfg.eta.values();
    let xis = cfg.xi.values();
    let n_rows = etas.len();
    let progress_step = (n_rows / 10).max(1);
    let done = AtomicUsize::new(0);

    let compute_rows = || -> Vec<Vec<ScanRow>> {
        etas.par_iter()
            .map(|&eta| {
                let out: Vec<ScanRow> = xis
                    .iter()
                    .map(|&xi| evaluate_point(cfg, mode, eta, xi))
                    .collect();
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                if d % progress_step == 0 || d == n_rows {
                    eprintln!("scan: {d}/{n_rows} rows");
                }
                out
            })
            .collect()
    };

    let nested: Vec<Vec<ScanRow>> = if cfg.parallelism == 0 {
        compute_rows()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .map_err(|e| PtError::Config(format!("thread pool: {e}")))?;
        pool.install(compute_rows)
    };
    let rows: Vec<ScanRow> = nested.into_iter().flatten().collect();
    Ok(ScanTable {
        etas,
        xis,
        rows,
        config: cfg.clone(),
    })
}

/// View of the scan's Laplacian real parts for ridge detection.
pub fn laplacian_view(table: &ScanTable) -> LaplacianGrid {
    LaplacianGrid {
        etas: table.etas.clone(),
        xis: table.xis.clone(),
        re_lap: table
            .rows
            .iter()
            .map(|r| r.laplacian.map(|z| z.re))
            .collect(),
    }
}

const CSV_HEADER: &str = "eta,xi,r,phi,re_eps_g,im_eps_g,re_lap,im_lap,re_c_sum,im_c_sum,re_c_diff,im_c_diff,re_m_a,im_m_a,phase,error";

fn push_f64(out: &mut String, v: f64) {
    use std::fmt::Write;
    write!(out, "{v:.16e}").unwrap();
}

fn push_opt_complex(out: &mut String, v: Option<Complex64>) {
    if let Some(z) = v {
        push_f64(out, z.re);
        out.push(',');
        push_f64(out, z.im);
    } else {
        out.push(',');
    }
}

/// Serialize to the fixed 16-column CSV schema; unselected or failed
/// quantities leave their fields empty.
pub fn to_csv(table: &ScanTable) -> String {
    let mut out = String::with_capacity(64 + table.rows.len() * 256);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        push_f64(&mut out, row.eta);
        out.push(',');
        push_f64(&mut out, row.xi);
        out.push(',');
        push_f64(&mut out, row.r);
        out.push(',');
        push_f64(&mut out, row.phi);
        out.push(',');
        push_opt_complex(&mut out, row.eps_g);
        out.push(',');
        push_opt_complex(&mut out, row.laplacian);
        out.push(',');
        push_opt_complex(&mut out, row.c_sum);
        out.push(',');
        push_opt_complex(&mut out, row.c_diff);
        out.push(',');
        push_opt_complex(&mut out, row.m_a);
        out.push(',');
        if let Some(ph) = row.phase {
            use std::fmt::Write;
            write!(out, "{ph}").unwrap();
        }
        out.push(',');
        if let Some(code) = row.error {
            out.push_str(code);
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    eta: f64,
    xi: f64,
    r: f64,
    phi: f64,
    re_eps_g: Option<f64>,
    im_eps_g: Option<f64>,
    re_lap: Option<f64>,
    im_lap: Option<f64>,
    re_c_sum: Option<f64>,
    im_c_sum: Option<f64>,
    re_c_diff: Option<f64>,
    im_c_diff: Option<f64>,
    re_m_a: Option<f64>,
    im_m_a: Option<f64>,
    phase: Option<PhaseLabel>,
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    metadata: JsonMeta<'a>,
    rows: Vec<JsonRow<'a>>,
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    version: &'a str,
    config: &'a ScanConfig,
}

/// Serialize to JSON with a metadata block echoing the config.
pub fn to_json(table: &ScanTable) -> String {
    let rows: Vec<JsonRow> = table
        .rows
        .iter()
        .map(|row| JsonRow {
            eta: row.eta,
            xi: row.xi,
            r: row.r,
            phi: row.phi,
            re_eps_g: row.eps_g.map(|z| z.re),
            im_eps_g: row.eps_g.map(|z| z.im),
            re_lap: row.laplacian.map(|z| z.re),
            im_lap: row.laplacian.map(|z| z.im),
            re_c_sum: row.c_sum.map(|z| z.re),
            im_c_sum: row.c_sum.map(|z| z.im),
            re_c_diff: row.c_diff.map(|z| z.re),
            im_c_diff: row.c_diff.map(|z| z.im),
            re_m_a: row.m_a.map(|z| z.re),
            im_m_a: row.m_a.map(|z| z.im),
            phase: row.phase,
            error: row.error,
        })
        .collect();
    let doc = JsonDoc {
        metadata: JsonMeta {
            version: env!("CARGO_PKG_VERSION"),
            config: &table.config,
        },
        rows,
    };
    serde_json::to_string_pretty(&doc).expect("scan table serializes")
}

/// Serialize per the config's output format.
pub fn serialize(table: &ScanTable) -> String {
    match table.config.output_format {
        OutputFormat::Csv => to_csv(table),
        OutputFormat::Json => to_json(table),
    }
}
