//! Command-line front end: point evaluations, oracle cross-checks, and
//! parameter-plane scans.
//!
//! Output is `key = value` text by default (complex values get a second
//! `key_im` line when the imaginary part is nonzero) or JSON with
//! `--format json`.  Exit codes: 0 success, 1 domain/runtime error, 2
//! usage error.

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use ptising::model::FieldPoint;
use ptising::oracle::{block, chain, matrix};
use ptising::response::{self, DEFAULT_FD_STEP};
use ptising::scan::{self, OutputFormat};
use ptising::spectrum::{self, Mode, DEFAULT_QUAD_POINTS};
use ptising::{berry, phase};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ptising", version, about = "PT-symmetric staggered-field Ising chain toolkit")]
struct Cli {
    /// Output format for results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct PointArgs {
    /// Real part of the staggered field.
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    /// Imaginary part of the staggered field.
    #[arg(long, allow_hyphen_values = true)]
    xi: f64,
    /// Ising coupling J.
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
}

impl PointArgs {
    fn point(&self) -> anyhow::Result<FieldPoint> {
        Ok(FieldPoint::with_coupling(self.eta, self.xi, self.coupling)?)
    }
}

#[derive(Args)]
struct ModeArgs {
    /// Evaluate on a periodic ring with this many sites (even, >= 4).
    #[arg(long, conflicts_with = "thermodynamic")]
    sites: Option<usize>,
    /// Evaluate in the thermodynamic limit (the default).
    #[arg(long)]
    thermodynamic: bool,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        match self.sites {
            Some(two_n) => Mode::FiniteN { two_n },
            None => Mode::Thermodynamic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a dispersion branch at one momentum.
    Dispersion {
        #[command(flatten)]
        point: PointArgs,
        /// Momentum in [-pi, pi].
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        /// Branch index 1..=6.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Ground-state energy (density, and total on finite rings).
    Energy {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// Gauss-Legendre node count for the thermodynamic integral.
        #[arg(long)]
        quad_points: Option<usize>,
    },
    /// Gradient of the energy density with respect to (eta, xi).
    Gradient {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Field-space Laplacian of the energy density.
    Laplacian {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// Cross-check with central finite differences instead of the
        /// closed-form second derivatives.
        #[arg(long)]
        fd: bool,
        /// Finite-difference step (only with --fd).
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        step: f64,
    },
    /// Staggered sublattice magnetizations.
    Magnetization {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Berry curvature density for a preset parameter loop.
    Berry {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// Loop preset.
        #[arg(long, value_enum)]
        preset: Preset,
    },
    /// Classify the phase at a field point.
    Phase {
        #[command(flatten)]
        point: PointArgs,
        /// Boundary tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run a parameter-plane scan from a JSON config file.
    Scan {
        /// Path to the scan config (JSON).
        #[arg(long)]
        config: String,
        /// Output path (CSV or JSON per the config).
        #[arg(long)]
        out: String,
        /// Override the config's worker-thread count.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Slow independent cross-checks against exact diagonalization.
    Oracle {
        /// Which check to run.
        #[arg(value_enum)]
        check: OracleCheck,
        #[command(flatten)]
        point: PointArgs,
        /// Ring size for chain-level checks.
        #[arg(long, default_value_t = 8)]
        sites: usize,
        /// Momentum for block-level checks.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
        k: f64,
        /// Finite-difference step for the overlap check.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Closed-form near-boundary ridge predictions.
    Asymptotics {
        /// Which boundary family.
        #[arg(value_enum)]
        family: AsymptoticFamily,
        /// Field radius r = sqrt(eta^2 + xi^2).
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        /// Field angle phi (radians).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        /// Distance from the gapless ray (axis family).
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
        /// Field radius on the ray for the axis family.
        #[arg(long, default_value_t = 1.5)]
        radius: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Sum,
    Diff,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleCheck {
    /// Sector ground energies of the spin chain vs the free-fermion sum.
    Chain,
    /// Momentum-block spectrum and composite-eigenvector residuals.
    Block,
    /// PT defects for the chain matrix and the momentum block.
    Pt,
    /// Left/right biorthonormality of the block eigenbasis.
    Biortho,
    /// Antisymmetrized derivative overlap of the block ground pair.
    Overlap,
    /// Even-sector spectrum reconstruction from block pairs (8 sites).
    Spectrum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AsymptoticFamily {
    Circle,
    Axis,
}

/// Ordered key/value report rendered as text or JSON.
struct Report {
    entries: Vec<(String, ReportValue)>,
}

enum ReportValue {
    Real(f64),
    Complex(Complex64),
    Int(i64),
    Text(String),
}

impl Report {
    fn new() -> Self {
        Report { entries: Vec::new() }
    }

    fn real(&mut self, key: &str, v: f64) -> &mut Self {
        self.entries.push((key.into(), ReportValue::Real(v)));
        self
    }

    fn complex(&mut self, key: &str, z: Complex64) -> &mut Self {
        self.entries.push((key.into(), ReportValue::Complex(z)));
        self
    }

    fn int(&mut self, key: &str, v: i64) -> &mut Self {
        self.entries.push((key.into(), ReportValue::Int(v)));
        self
    }

    fn text(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), ReportValue::Text(v.into())));
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => self.render_json(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            match value {
                ReportValue::Real(v) => writeln!(out, "{key} = {v}").unwrap(),
                ReportValue::Complex(z) => {
                    writeln!(out, "{key} = {}", z.re).unwrap();
                    if z.im != 0.0 {
                        writeln!(out, "{key}_im = {}", z.im).unwrap();
                    }
                }
                ReportValue::Int(v) => writeln!(out, "{key} = {v}").unwrap(),
                ReportValue::Text(v) => writeln!(out, "{key} = {v}").unwrap(),
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (key, value) in &self.entries {
            match value {
                ReportValue::Real(v) => {
                    map.insert(key.clone(), serde_json::json!(v));
                }
                ReportValue::Complex(z) => {
                    map.insert(key.clone(), serde_json::json!(z.re));
                    map.insert(format!("{key}_im"), serde_json::json!(z.im));
                }
                ReportValue::Int(v) => {
                    map.insert(key.clone(), serde_json::json!(v));
                }
                ReportValue::Text(v) => {
                    map.insert(key.clone(), serde_json::json!(v));
                }
            }
        }
        let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("report serializes");
        text.push('\n');
        text
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command) -> anyhow::Result<Report> {
    let mut report = Report::new();
    match command {
        Command::Dispersion { point, k, n } => {
            let p = point.point()?;
            let eps = ptising::dispersion(*n, *k, &p)?;
            report.int("branch", *n as i64);
            report.real("k", *k);
            report.complex("eps", eps);
            report.real("eps_min_at_zero", spectrum::eps1_at_zero(&p));
        }
        Command::Energy {
            point,
            mode,
            quad_points,
        } => {
            let p = point.point()?;
            match mode.mode() {
                Mode::FiniteN { two_n } => {
                    let result = spectrum::ground_energy(two_n, &p)?;
                    report.int("sites", two_n as i64);
                    report.complex("energy_total", result.total);
                    report.complex("energy_density", result.density);
                }
                Mode::Thermodynamic => {
                    let points = quad_points.unwrap_or(DEFAULT_QUAD_POINTS);
                    let density = spectrum::energy_density_limit(&p, points)?;
                    report.text("mode", "thermodynamic");
                    report.int("quad_points", points as i64);
                    report.complex("energy_density", density);
                }
            }
        }
        Command::Gradient { point, mode } => {
            let p = point.point()?;
            let (d_eta, d_xi) = response::gradient(&p, mode.mode())?;
            report.complex("d_eta", d_eta);
            report.complex("d_xi", d_xi);
        }
        Command::Laplacian {
            point,
            mode,
            fd,
            step,
        } => {
            let p = point.point()?;
            let value = if *fd {
                response::laplacian_fd(&p, *step, mode.mode())?
            } else {
                response::laplacian(&p, mode.mode())?
            };
            report.text("method", if *fd { "finite_difference" } else { "closed_form" });
            report.complex("laplacian", value);
        }
        Command::Magnetization { point, mode } => {
            let p = point.point()?;
            let (m_a, m_b) = response::magnetizations(&p, mode.mode())?;
            report.complex("m_a", m_a);
            report.complex("m_b", m_b);
        }
        Command::Berry {
            point,
            mode,
            preset,
        } => {
            let p = point.point()?;
            let c = match preset {
                Preset::Sum => berry::curvature_preset_sum(&p, mode.mode())?,
                Preset::Diff => berry::curvature_preset_diff(&p, mode.mode())?,
            };
            report.text(
                "preset",
                match preset {
                    Preset::Sum => "sum",
                    Preset::Diff => "diff",
                },
            );
            report.complex("curvature", c);
        }
        Command::Phase { point, tol } => {
            let p = point.point()?;
            let label = phase::classify(&p, *tol)?;
            let (r, phi) = p.to_polar();
            report.text("phase", label.to_string());
            report.real("r", r);
            report.real("phi", phi);
            report.real("boundary_distance", phase::boundary_distance(&p));
        }
        Command::Scan { config, out, jobs } => {
            let text = std::fs::read_to_string(config)
                .with_context(|| format!("reading config {config}"))?;
            let mut cfg = scan::ScanConfig::from_json(&text)?;
            if let Some(jobs) = jobs {
                cfg.parallelism = *jobs;
            }
            let table = scan::run_scan(&cfg)?;
            let serialized = scan::serialize(&table);
            std::fs::write(out, serialized.as_bytes())
                .with_context(|| format!("writing {out}"))?;
            report.int("rows", table.rows.len() as i64);
            report.text(
                "format",
                match table.config.output_format {
                    OutputFormat::Csv => "csv",
                    OutputFormat::Json => "json",
                },
            );
            report.text("out", out.clone());
        }
        Command::Oracle {
            check,
            point,
            sites,
            k,
            step,
        } => {
            let p = point.point()?;
            run_oracle(&mut report, *check, &p, *sites, *k, *step)?;
        }
        Command::Asymptotics {
            family,
            r,
            phi,
            eta,
            radius,
        } => match family {
            AsymptoticFamily::Circle => {
                let r = r.ok_or_else(|| anyhow::anyhow!("--r is required for the circle family"))?;
                report.text("family", "circle");
                report.real("r", r);
                report.real("phi", *phi);
                report.real(
                    "re_lap_predicted",
                    response::asymptotic_laplacian_circle(r, *phi)?,
                );
            }
            AsymptoticFamily::Axis => {
                let eta =
                    eta.ok_or_else(|| anyhow::anyhow!("--eta is required for the axis family"))?;
                report.text("family", "axis");
                report.real("eta", eta);
                report.real("radius", *radius);
                report.real(
                    "re_lap_predicted",
                    response::asymptotic_laplacian_axis(eta)?,
                );
            }
        },
    }
    Ok(report)
}

fn run_oracle(
    report: &mut Report,
    check: OracleCheck,
    p: &FieldPoint,
    sites: usize,
    k: f64,
    step: f64,
) -> anyhow::Result<()> {
    match check {
        OracleCheck::Chain => {
            let cmp = chain::sector_ground_compare(sites, p)?;
            report.int("sites", sites as i64);
            report.complex("ed_even_min", cmp.ed_even_min);
            report.complex("ed_odd_min", cmp.ed_odd_min);
            report.complex("free_fermion", cmp.free_fermion);
            report.real("defect", cmp.defect);
        }
        OracleCheck::Block => {
            report.real("k", k);
            report.real("spectrum_defect", block::block_spectrum_defect(k, p)?);
            let mut max_residual = 0.0f64;
            let mut max_pairing = 0.0f64;
            for n in 1..=6 {
                let state = block::composite_state(n, k, p)?;
                max_residual = max_residual.max(state.residual);
                let pairing = (block::dot(&state.left, &state.right) - 1.0).norm();
                max_pairing = max_pairing.max(pairing);
            }
            report.real("max_residual", max_residual);
            report.real("max_pairing_defect", max_pairing);
        }
        OracleCheck::Pt => {
            let chain_report = matrix::pt_check(sites.min(8), p)?;
            report.int("sites", sites.min(8) as i64);
            report.real("chain_pt_defect", chain_report.pt_defect);
            report.real("parity_comm_defect", chain_report.parity_comm_defect);
            report.real("k", k);
            report.real("block_pt_defect", block::block_pt_defect(k, p));
            let (flip_norm, overlap_mag) = block::pt_state_invariance(k, p)?;
            report.real("ground_pt_flip_defect", flip_norm);
            report.real("ground_pt_overlap_mag", overlap_mag);
        }
        OracleCheck::Biortho => {
            report.real("k", k);
            report.real("biortho_defect", block::biorthonormality_defect(k, p)?);
        }
        OracleCheck::Overlap => {
            report.real("k", k);
            report.real("fd_step", step);
            report.real(
                "antisymmetry_defect",
                block::overlap_antisymmetry_defect(k, p, step)?,
            );
        }
        OracleCheck::Spectrum => {
            report.real("reconstruction_defect", chain::even_spectrum_reconstruction(p)?);
        }
    }
    Ok(())
}
