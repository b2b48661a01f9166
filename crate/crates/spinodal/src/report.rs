//! Deterministic report and table serialization.
//!
//! Reports are flat `path = value` text: insertion-ordered, floats printed
//! with 17 significant digits, strings quoted. The format re-parses
//! losslessly, so identical runs produce byte-identical files and a parsed
//! report re-serializes to the same bytes.

use crate::domain::{DomainKind, DomainSpec, ModeIndex};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::solver::BifurcationBranch;
use std::fmt::Write as _;
use std::path::Path;

/// A report value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Str(String),
    Num(f64),
    Int(i64),
    Bool(bool),
}

/// An ordered list of `(dotted path, value)` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push_str(&mut self, path: &str, v: impl Into<String>) {
        self.entries.push((path.to_string(), Value::Str(v.into())));
    }

    pub fn push_num(&mut self, path: &str, v: f64) {
        self.entries.push((path.to_string(), Value::Num(v)));
    }

    pub fn push_int(&mut self, path: &str, v: i64) {
        self.entries.push((path.to_string(), Value::Int(v)));
    }

    pub fn push_bool(&mut self, path: &str, v: bool) {
        self.entries.push((path.to_string(), Value::Bool(v)));
    }

    pub fn push_opt_num(&mut self, path: &str, v: Option<f64>) {
        if let Some(x) = v {
            self.push_num(path, x);
        }
    }

    pub fn get(&self, path: &str) -> Option<&Value> {
        self.entries.iter().find(|(p, _)| p == path).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    /// Serializes to the flat text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (path, value) in &self.entries {
            match value {
                Value::Str(s) => {
                    let escaped = s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
                    let _ = writeln!(out, "{path} = \"{escaped}\"");
                }
                Value::Num(x) => {
                    let _ = writeln!(out, "{path} = {}", format_f64(*x));
                }
                Value::Int(i) => {
                    let _ = writeln!(out, "{path} = {i}");
                }
                Value::Bool(b) => {
                    let _ = writeln!(out, "{path} = {b}");
                }
            }
        }
        out
    }

    /// Parses the flat text form back into a report.
    pub fn parse(text: &str) -> Result<Report> {
        let mut report = Report::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let eq = line.find(" = ").ok_or(Error::Config {
                line: line_no,
                msg: "expected 'path = value'".into(),
            })?;
            let path = line[..eq].to_string();
            let raw = &line[eq + 3..];
            let value = if let Some(body) = raw.strip_prefix('"') {
                let body = body.strip_suffix('"').ok_or(Error::Config {
                    line: line_no,
                    msg: "unterminated string".into(),
                })?;
                let mut s = String::new();
                let mut chars = body.chars();
                while let Some(c) = chars.next() {
                    if c == '\\' {
                        match chars.next() {
                            Some('n') => s.push('\n'),
                            Some(other) => s.push(other),
                            None => {
                                return Err(Error::Config {
                                    line: line_no,
                                    msg: "dangling escape".into(),
                                })
                            }
                        }
                    } else {
                        s.push(c);
                    }
                }
                Value::Str(s)
            } else if raw == "true" || raw == "false" {
                Value::Bool(raw == "true")
            } else if raw == "nan" {
                Value::Num(f64::NAN)
            } else if raw == "inf" {
                Value::Num(f64::INFINITY)
            } else if raw == "-inf" {
                Value::Num(f64::NEG_INFINITY)
            } else if raw.contains(['e', '.']) {
                Value::Num(raw.parse().map_err(|_| Error::Config {
                    line: line_no,
                    msg: format!("bad number '{raw}'"),
                })?)
            } else {
                Value::Int(raw.parse().map_err(|_| Error::Config {
                    line: line_no,
                    msg: format!("bad integer '{raw}'"),
                })?)
            };
            report.entries.push((path, value));
        }
        Ok(report)
    }
}

fn csv_f64(x: f64) -> String {
    format_f64(x)
}

/// Writes branch rows as CSV with the documented header
/// `t_or_lambda,amp_<mode>...,energy,mass,status` (plus a leading
/// `temperature` column when rows carry one).
pub fn write_branch_csv(path: &Path, branch: &BifurcationBranch) -> Result<()> {
    let mut out = String::new();
    let with_t = branch.rows.iter().any(|r| r.temperature.is_some());
    let amps: Vec<String> = branch.tracked.iter().map(|m| format!("amp_{}", m.label())).collect();
    if with_t {
        let _ = writeln!(out, "t_or_lambda,temperature,{},energy,mass,status", amps.join(","));
    } else {
        let _ = writeln!(out, "t_or_lambda,{},energy,mass,status", amps.join(","));
    }
    for row in &branch.rows {
        let mut cols = vec![csv_f64(row.lambda)];
        if with_t {
            cols.push(csv_f64(row.temperature.unwrap_or(f64::NAN)));
        }
        cols.extend(row.amplitudes.iter().map(|&a| csv_f64(a)));
        cols.push(csv_f64(row.energy));
        cols.push(csv_f64(row.mass));
        cols.push(row.status.as_str().to_string());
        let _ = writeln!(out, "{}", cols.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes a time series with the same schema as a branch table, rows keyed
/// by time.
pub fn write_timeseries_csv(
    path: &Path,
    tracked: &[ModeIndex],
    rows: &[(f64, Vec<f64>, f64, f64, &str)],
) -> Result<()> {
    let mut out = String::new();
    let amps: Vec<String> = tracked.iter().map(|m| format!("amp_{}", m.label())).collect();
    let _ = writeln!(out, "t_or_lambda,{},energy,mass,status", amps.join(","));
    for (t, amplitudes, energy, mass, status) in rows {
        let mut cols = vec![csv_f64(*t)];
        cols.extend(amplitudes.iter().map(|&a| csv_f64(a)));
        cols.push(csv_f64(*energy));
        cols.push(csv_f64(*mass));
        cols.push(status.to_string());
        let _ = writeln!(out, "{}", cols.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes the reduced-system equilibrium table.
pub fn write_equilibria_csv(path: &Path, eqs: &[crate::reduced::Equilibrium]) -> Result<()> {
    let mut out = String::new();
    let dim = eqs.first().map(|e| e.y.len()).unwrap_or(0);
    let ys: Vec<String> = (1..=dim).map(|i| format!("y{i}")).collect();
    let evs: Vec<String> = (1..=dim).map(|i| format!("eig{i}")).collect();
    let _ = writeln!(out, "{},{},stability,class", ys.join(","), evs.join(","));
    for e in eqs {
        let mut cols: Vec<String> = e.y.iter().map(|&v| csv_f64(v)).collect();
        cols.extend(e.eigenvalues.iter().map(|&v| csv_f64(v)));
        cols.push(e.stability.as_str().to_string());
        cols.push(e.class.as_str().to_string());
        let _ = writeln!(out, "{}", cols.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes a reduced trajectory `(t, y..., V)`.
pub fn write_trajectory_csv(
    path: &Path,
    system: &crate::reduced::ReducedSystem,
    trajectory: &crate::reduced::Trajectory,
) -> Result<()> {
    let mut out = String::new();
    let dim = system.dim();
    let ys: Vec<String> = (1..=dim).map(|i| format!("y{i}")).collect();
    let _ = writeln!(out, "t,{},potential", ys.join(","));
    for (t, y) in trajectory.times.iter().zip(&trajectory.states) {
        let mut cols = vec![csv_f64(*t)];
        cols.extend(y.iter().map(|&v| csv_f64(v)));
        cols.push(csv_f64(crate::reduced::potential(system, y)));
        let _ = writeln!(out, "{}", cols.join(","));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes the phase-diagram table `(u0, T, T0, Tstar, region)`.
pub fn write_diagram_csv(path: &Path, rows: &[crate::phase::DiagramRow]) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "u0,T,T0,Tstar,region");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_f64(r.u0),
            csv_f64(r.t),
            csv_f64(r.t0),
            csv_f64(r.t_star),
            r.region.as_str()
        );
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes a `(x, y)` curve.
pub fn write_curve_csv(path: &Path, header: &str, rows: &[(f64, f64)]) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{header}");
    for (x, y) in rows {
        let _ = writeln!(out, "{},{}", csv_f64(*x), csv_f64(*y));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn domain_label(domain: &DomainSpec) -> String {
    match &domain.kind {
        DomainKind::Rectangular { lengths } => {
            let ls: Vec<String> = lengths.iter().map(|l| format!("{l}")).collect();
            format!("rectangular lengths={}", ls.join(","))
        }
        DomainKind::Loop { r0 } => format!("loop r0={r0}"),
        DomainKind::Torus { dim } => format!("torus dim={dim}"),
    }
}

/// Writes a nodal snapshot as a plain-text grid with a one-line header
/// `# <domain> grid=<n>^<rank> t=<time>`. 1-D fields are one value per
/// line; higher ranks emit one row per line, slices separated by blank
/// lines.
pub fn write_snapshot(path: &Path, field: &SpectralField, t: f64) -> Result<()> {
    let domain = field.domain();
    let n = domain.grid_points_per_dim;
    let rank = domain.dims();
    let nodal = field.to_nodal();
    let mut out = String::new();
    let _ = writeln!(out, "# {} grid={}^{} t={}", domain_label(domain), n, rank, format_f64(t));
    match rank {
        1 => {
            for v in &nodal {
                let _ = writeln!(out, "{}", csv_f64(*v));
            }
        }
        2 => {
            for row in nodal.chunks(n) {
                let cols: Vec<String> = row.iter().map(|&v| csv_f64(v)).collect();
                let _ = writeln!(out, "{}", cols.join(" "));
            }
        }
        _ => {
            for (slice_idx, slice) in nodal.chunks(n * n).enumerate() {
                let _ = writeln!(out, "# slice {slice_idx}");
                for row in slice.chunks(n) {
                    let cols: Vec<String> = row.iter().map(|&v| csv_f64(v)).collect();
                    let _ = writeln!(out, "{}", cols.join(" "));
                }
                let _ = writeln!(out);
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
