//! Sectioned key=value run configuration.
//!
//! The format is deliberately plain: `[section]` headers, one `key = value`
//! per line, `#` comments. Unknown sections or keys, duplicate keys, and
//! malformed numbers are rejected with their line number.
//!
//! ```text
//! [domain]
//! kind = rectangular
//! lengths = 3.141592653589793
//! grid = 64
//!
//! [params]
//! lambda = 1.03
//! gamma2 = 0.0
//! gamma3 = 2.0
//! ```

use crate::classify::{CoupledParams, EntropyCoupling, ModelParams};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::solver::{InitialCondition, SolverConfig, Stabilization};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Classify,
    Reduce,
    Simulate,
    Sweep,
    Diagram,
}

impl Subcommand {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "classify" => Some(Subcommand::Classify),
            "reduce" => Some(Subcommand::Reduce),
            "simulate" => Some(Subcommand::Simulate),
            "sweep" => Some(Subcommand::Sweep),
            "diagram" => Some(Subcommand::Diagram),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Subcommand::Classify => "classify",
            Subcommand::Reduce => "reduce",
            Subcommand::Simulate => "simulate",
            Subcommand::Sweep => "sweep",
            Subcommand::Diagram => "diagram",
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    value: String,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

/// A parsed (but not yet validated) config file.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    sections: Vec<Section>,
}

/// Parses the sectioned text, checking syntax and duplicate keys.
pub fn parse_config_text(text: &str) -> Result<ConfigFile> {
    let mut file = ConfigFile::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or(Error::Config { line: line_no, msg: "unterminated section header".into() })?
                .trim()
                .to_string();
            if name.is_empty() {
                return Err(Error::Config { line: line_no, msg: "empty section name".into() });
            }
            if file.sections.iter().any(|s| s.name == name) {
                return Err(Error::Config {
                    line: line_no,
                    msg: format!("section [{name}] appears twice"),
                });
            }
            file.sections.push(Section { name, line: line_no, entries: Vec::new() });
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::Config { line: line_no, msg: format!("expected key = value, got '{line}'") });
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        if key.is_empty() {
            return Err(Error::Config { line: line_no, msg: "empty key".into() });
        }
        let section = file.sections.last_mut().ok_or(Error::Config {
            line: line_no,
            msg: "key before any [section] header".into(),
        })?;
        if let Some(dup) = section.entries.iter().find(|e| e.key == key) {
            return Err(Error::Config {
                line: line_no,
                msg: format!("duplicate key '{key}' (first set at line {})", dup.line),
            });
        }
        section.entries.push(Entry { line: line_no, key, value });
    }
    Ok(file)
}

struct SectionReader<'a> {
    section: Option<&'a Section>,
    used: Vec<&'a str>,
}

impl<'a> SectionReader<'a> {
    fn get(&mut self, key: &'a str) -> Option<&'a Entry> {
        self.used.push(key);
        self.section.and_then(|s| s.entries.iter().find(|e| e.key == key))
    }

    fn f64(&mut self, key: &'a str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => {
                let v: f64 = e.value.parse().map_err(|_| Error::Config {
                    line: e.line,
                    msg: format!("'{}' is not a number for key '{key}'", e.value),
                })?;
                if !v.is_finite() {
                    return Err(Error::Config {
                        line: e.line,
                        msg: format!("key '{key}' must be finite"),
                    });
                }
                Ok(Some(v))
            }
        }
    }

    fn usize(&mut self, key: &'a str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => Ok(Some(e.value.parse().map_err(|_| Error::Config {
                line: e.line,
                msg: format!("'{}' is not a nonnegative integer for key '{key}'", e.value),
            })?)),
        }
    }

    fn u64(&mut self, key: &'a str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => Ok(Some(e.value.parse().map_err(|_| Error::Config {
                line: e.line,
                msg: format!("'{}' is not an integer for key '{key}'", e.value),
            })?)),
        }
    }

    fn bool(&mut self, key: &'a str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => match e.value.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(Error::Config {
                    line: e.line,
                    msg: format!("'{}' is not true/false for key '{key}'", e.value),
                }),
            },
        }
    }

    fn string(&mut self, key: &'a str) -> Option<(usize, String)> {
        self.get(key).map(|e| (e.line, e.value.clone()))
    }

    fn f64_list(&mut self, key: &'a str) -> Result<Option<Vec<f64>>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => {
                let mut out = Vec::new();
                for part in e.value.split(',') {
                    let v: f64 = part.trim().parse().map_err(|_| Error::Config {
                        line: e.line,
                        msg: format!("'{}' is not a number list for key '{key}'", e.value),
                    })?;
                    out.push(v);
                }
                Ok(Some(out))
            }
        }
    }

    fn finish(mut self) -> Result<()> {
        if let Some(s) = self.section {
            for e in &s.entries {
                if !self.used.contains(&e.key.as_str()) {
                    return Err(Error::Config {
                        line: e.line,
                        msg: format!("unknown key '{}' in section [{}]", e.key, s.name),
                    });
                }
            }
        }
        self.used.clear();
        Ok(())
    }
}

/// Domain block including the general-domain escape hatch.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainConfig {
    Spec(DomainSpec),
    /// General smooth domain: caller-supplied spectral data for `classify`.
    General { m: usize, a: Option<f64>, rho1: Option<f64> },
}

/// Sweep block.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub lambdas: Vec<f64>,
    pub continuation: bool,
    pub fit_exponent: bool,
    /// Temperatures backing the lambda rows, when driven by a material.
    pub temperatures: Option<Vec<f64>>,
}

/// Reduce block.
#[derive(Debug, Clone, PartialEq)]
pub struct ReduceSpec {
    /// Initial state for an optional trajectory.
    pub y0: Option<Vec<f64>>,
    pub t_end: f64,
    pub dt: f64,
    /// Scalar normal-form coefficients (quadratic, cubic); when present the
    /// reduce run analyzes the scalar family instead of the geometry.
    pub scalar: Option<(f64, f64)>,
}

/// Diagram block.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramSpec {
    pub u0_min: f64,
    pub u0_max: f64,
    pub u0_count: usize,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_count: usize,
}

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub domain: Option<DomainConfig>,
    pub params: Option<crate::solver::RunParams>,
    pub solver: SolverConfig,
    pub sweep: Option<SweepSpec>,
    pub reduce: Option<ReduceSpec>,
    pub material: Option<crate::phase::MaterialParams>,
    pub diagram: Option<DiagramSpec>,
    pub out_dir: String,
    pub seed: u64,
    pub jobs: usize,
    /// The raw lines, re-emitted into reports.
    pub echo: Vec<(String, String, String)>,
}

impl ConfigFile {
    fn reader<'a>(&'a self, name: &str) -> SectionReader<'a> {
        SectionReader { section: self.sections.iter().find(|s| s.name == name), used: Vec::new() }
    }

    fn has(&self, name: &str) -> bool {
        self.sections.iter().any(|s| s.name == name)
    }

    fn known_sections(&self, allowed: &[&str]) -> Result<()> {
        for s in &self.sections {
            if !allowed.contains(&s.name.as_str()) {
                return Err(Error::Config {
                    line: s.line,
                    msg: format!("unknown section [{}]", s.name),
                });
            }
        }
        Ok(())
    }

    fn echo(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for s in &self.sections {
            for e in &s.entries {
                out.push((s.name.clone(), e.key.clone(), e.value.clone()));
            }
        }
        out
    }
}

fn require(file: &ConfigFile, section: &str, sub: Subcommand) -> Result<()> {
    if !file.has(section) {
        return Err(Error::Config {
            line: 0,
            msg: format!("subcommand '{}' requires a [{section}] section", sub.as_str()),
        });
    }
    Ok(())
}

/// Validates a parsed file against a subcommand and assembles the run
/// configuration.
pub fn build_run_config(sub: Subcommand, file: &ConfigFile) -> Result<RunConfig> {
    file.known_sections(&[
        "run", "domain", "params", "solver", "sweep", "reduce", "material", "diagram", "output",
    ])?;

    // [run]
    let mut run = file.reader("run");
    let seed = run.u64("seed")?.unwrap_or(0);
    let jobs = run.usize("jobs")?.unwrap_or(1).max(1);
    run.finish()?;

    // [output]
    let mut output = file.reader("output");
    let out_dir = output.string("dir").map(|(_, v)| v).unwrap_or_else(|| "out".to_string());
    output.finish()?;

    // [domain]
    let domain = if file.has("domain") {
        let mut d = file.reader("domain");
        let (kind_line, kind) = d
            .string("kind")
            .ok_or(Error::Config { line: 0, msg: "[domain] needs a 'kind' key".into() })?;
        let grid = d.usize("grid")?.unwrap_or(64);
        let dc = match kind.as_str() {
            "rectangular" => {
                let lengths = d.f64_list("lengths")?.ok_or(Error::Config {
                    line: kind_line,
                    msg: "rectangular domain needs 'lengths'".into(),
                })?;
                DomainConfig::Spec(DomainSpec::rectangular(&lengths, grid).map_err(cfg_err(kind_line))?)
            }
            "loop" => {
                let r0 = d.f64("r0")?.ok_or(Error::Config {
                    line: kind_line,
                    msg: "loop domain needs 'r0'".into(),
                })?;
                DomainConfig::Spec(DomainSpec::loop_domain(r0, grid).map_err(cfg_err(kind_line))?)
            }
            "torus" => {
                let dim = d.usize("dim")?.ok_or(Error::Config {
                    line: kind_line,
                    msg: "torus domain needs 'dim'".into(),
                })?;
                DomainConfig::Spec(DomainSpec::torus(dim, grid).map_err(cfg_err(kind_line))?)
            }
            "general" => {
                let m = d.usize("m")?.ok_or(Error::Config {
                    line: kind_line,
                    msg: "general domain needs 'm' (first-eigenvalue multiplicity)".into(),
                })?;
                let a = d.f64("a")?;
                let rho1 = d.f64("rho1")?;
                DomainConfig::General { m, a, rho1 }
            }
            other => {
                return Err(Error::Config {
                    line: kind_line,
                    msg: format!(
                        "unknown domain kind '{other}' (expected rectangular, loop, torus, general)"
                    ),
                })
            }
        };
        d.finish()?;
        Some(dc)
    } else {
        None
    };

    // [params]
    let params = if file.has("params") {
        let mut p = file.reader("params");
        let lambda = p.f64("lambda")?.unwrap_or(0.0);
        let gamma2 = p.f64("gamma2")?.unwrap_or(0.0);
        let gamma3_entry = p.get("gamma3").cloned();
        let gamma3 = match &gamma3_entry {
            Some(e) => e.value.parse::<f64>().map_err(|_| Error::Config {
                line: e.line,
                msg: format!("'{}' is not a number for key 'gamma3'", e.value),
            })?,
            None => {
                return Err(Error::Config { line: 0, msg: "[params] needs 'gamma3'".into() })
            }
        };
        let base = ModelParams::new(lambda, gamma2, gamma3).map_err(|e| Error::Config {
            line: gamma3_entry.map(|e| e.line).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let mu = p.f64("mu")?;
        let alpha1 = p.f64("alpha1")?;
        let alpha2 = p.f64("alpha2")?;
        let gamma1 = p.f64("gamma1")?;
        let rp = match (mu, alpha1, alpha2, gamma1) {
            (None, None, None, None) => crate::solver::RunParams::Classic(base),
            (Some(mu), Some(a1), Some(a2), Some(g1)) => {
                let coupling = EntropyCoupling::new(mu, a1, a2, g1)
                    .map_err(|e| Error::Config { line: 0, msg: e.to_string() })?;
                crate::solver::RunParams::Coupled(CoupledParams { base, coupling })
            }
            _ => {
                return Err(Error::Config {
                    line: 0,
                    msg: "coupled runs need all of mu, alpha1, alpha2, gamma1".into(),
                })
            }
        };
        p.finish()?;
        Some(rp)
    } else {
        None
    };

    // [solver]
    let mut solver = SolverConfig::default();
    if file.has("solver") {
        let mut s = file.reader("solver");
        if let Some(dt) = s.f64("dt")? {
            if dt <= 0.0 {
                return Err(Error::Config { line: 0, msg: "dt must be > 0".into() });
            }
            solver.dt = dt;
        }
        if let Some((line, v)) = s.string("stabilization") {
            solver.stabilization = if v == "auto" {
                Stabilization::Auto
            } else {
                let x: f64 = v.parse().map_err(|_| Error::Config {
                    line,
                    msg: format!("'{v}' is not 'auto' or a number"),
                })?;
                if x < 0.0 {
                    return Err(Error::Config { line, msg: "stabilization must be >= 0".into() });
                }
                Stabilization::Fixed(x)
            };
        }
        if let Some(v) = s.bool("dealias")? {
            solver.dealias = v;
        }
        if let Some(v) = s.f64("steady_tol")? {
            solver.steady_tol = v;
        }
        if let Some(v) = s.f64("max_time")? {
            solver.max_time = v;
        }
        let init_kind = s.string("init").map(|(_, v)| v);
        let amplitude = s.f64("init_amplitude")?.unwrap_or(1e-4);
        let perturbation = s.f64("perturb_amplitude")?.unwrap_or(1e-6);
        solver.initial = match init_kind.as_deref() {
            None | Some("mode") => InitialCondition::SeededMode { amplitude, perturbation, seed },
            Some("random") => InitialCondition::Random { amplitude, seed },
            Some(other) => {
                return Err(Error::Config {
                    line: 0,
                    msg: format!("unknown init '{other}' (expected mode or random)"),
                })
            }
        };
        s.finish()?;
    }

    // [sweep]
    let sweep = if file.has("sweep") {
        let mut s = file.reader("sweep");
        let lambdas = if let Some(list) = s.f64_list("lambdas")? {
            let _ = (s.f64("lambda_start")?, s.f64("lambda_stop")?, s.usize("rows")?);
            list
        } else {
            let start = s.f64("lambda_start")?.ok_or(Error::Config {
                line: 0,
                msg: "[sweep] needs 'lambdas' or lambda_start/lambda_stop/rows".into(),
            })?;
            let stop = s.f64("lambda_stop")?.ok_or(Error::Config {
                line: 0,
                msg: "[sweep] needs 'lambda_stop'".into(),
            })?;
            let rows = s.usize("rows")?.unwrap_or(10).max(2);
            (0..rows)
                .map(|i| start + (stop - start) * i as f64 / (rows - 1) as f64)
                .collect()
        };
        let continuation = s.bool("continuation")?.unwrap_or(true);
        let fit = s.bool("fit_exponent")?.unwrap_or(false);
        s.finish()?;
        Some(SweepSpec { lambdas, continuation, fit_exponent: fit, temperatures: None })
    } else {
        None
    };

    // [reduce]
    let reduce = if file.has("reduce") {
        let mut r = file.reader("reduce");
        let y0 = r.f64_list("y0")?;
        let t_end = r.f64("t_end")?.unwrap_or(20.0);
        let dt = r.f64("dt")?.unwrap_or(1e-2);
        let quadratic = r.f64("quadratic")?;
        let cubic = r.f64("cubic")?;
        let scalar = match (quadratic, cubic) {
            (Some(q), Some(c)) => Some((q, c)),
            (None, None) => None,
            _ => {
                return Err(Error::Config {
                    line: 0,
                    msg: "scalar reduce needs both 'quadratic' and 'cubic'".into(),
                })
            }
        };
        r.finish()?;
        Some(ReduceSpec { y0, t_end, dt, scalar })
    } else {
        None
    };

    // [material]
    let material = if file.has("material") {
        let mut m = file.reader("material");
        let a = m.f64("a")?.unwrap_or(1.0);
        let gas_constant = m.f64("gas_constant")?.unwrap_or(1.0);
        let u0 = m.f64("u0")?.unwrap_or(0.5);
        let l = m.f64("l")?.unwrap_or(1.0);
        let k = m.f64("k")?.unwrap_or(1.0);
        let c_geom = m.f64("c_geom")?.unwrap_or(std::f64::consts::PI * std::f64::consts::PI);
        let mat = crate::phase::MaterialParams::new(a, gas_constant, u0, l, k, c_geom)
            .map_err(|e| Error::Config { line: 0, msg: e.to_string() })?;
        m.finish()?;
        Some(mat)
    } else {
        None
    };

    // [diagram]
    let diagram = if file.has("diagram") {
        let mut d = file.reader("diagram");
        let spec = DiagramSpec {
            u0_min: d.f64("u0_min")?.unwrap_or(0.05),
            u0_max: d.f64("u0_max")?.unwrap_or(0.95),
            u0_count: d.usize("u0_count")?.unwrap_or(50).max(1),
            t_min: d.f64("t_min")?,
            t_max: d.f64("t_max")?,
            t_count: d.usize("t_count")?.unwrap_or(200).max(1),
        };
        d.finish()?;
        Some(spec)
    } else {
        None
    };

    // presence checks per subcommand
    match sub {
        Subcommand::Classify => {
            require(file, "domain", sub)?;
            require(file, "params", sub)?;
        }
        Subcommand::Simulate => {
            require(file, "domain", sub)?;
            require(file, "params", sub)?;
        }
        Subcommand::Sweep => {
            require(file, "domain", sub)?;
            require(file, "params", sub)?;
            require(file, "sweep", sub)?;
        }
        Subcommand::Reduce => {
            if reduce.as_ref().map(|r| r.scalar.is_none()).unwrap_or(true) {
                require(file, "domain", sub)?;
                require(file, "params", sub)?;
            }
        }
        Subcommand::Diagram => {
            require(file, "material", sub)?;
        }
    }
    if matches!(sub, Subcommand::Simulate | Subcommand::Sweep) {
        if let Some(DomainConfig::General { .. }) = domain {
            return Err(Error::Config {
                line: 0,
                msg: "general domains support classification only".into(),
            });
        }
    }

    Ok(RunConfig {
        subcommand: sub,
        domain,
        params,
        solver,
        sweep,
        reduce,
        material,
        diagram,
        out_dir,
        seed,
        jobs,
        echo: file.echo(),
    })
}

fn cfg_err(line: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Config { line, msg: e.to_string() }
}

/// Parses text and validates it for a subcommand in one step.
pub fn parse_config(sub: Subcommand, text: &str) -> Result<RunConfig> {
    let file = parse_config_text(text)?;
    build_run_config(sub, &file)
}
