//! Flat `key=value` run configuration and the batch commands behind the
//! `rosen-morse` binary.
//!
//! ```text
//! # reference set
//! V1 = 10
//! V2 = 2.5
//! q = 1
//! command = spectrum
//! ```
//!
//! Every command writes CSV with a header row, `\n` line endings and floats
//! at 17 significant digits, so identical configurations give byte-identical
//! files.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::greens::{greens_delta_perturbed, greens_dirichlet, greens_full_line};
use crate::hyperbolic::{potential_r, PotentialParams};
use crate::oracle::{fd_eigen, shoot_eigen, GridSpec};
use crate::spectrum::{
    bound_states, count_nodes, find_bound_states, sample, wavefunction, BoundState, NodeGrid,
    SearchConfig, Window,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Potential,
    Spectrum,
    Wavefunction,
    Greens,
    Validate,
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "potential" => Ok(Command::Potential),
            "spectrum" => Ok(Command::Spectrum),
            "wavefunction" => Ok(Command::Wavefunction),
            "greens" => Ok(Command::Greens),
            "validate" => Ok(Command::Validate),
            other => Err(format!(
                "unknown command '{other}' (expected potential, spectrum, wavefunction, greens or validate)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensKind {
    FullLine,
    Dirichlet,
    Delta,
}

impl FromStr for GreensKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(GreensKind::FullLine),
            "dirichlet" => Ok(GreensKind::Dirichlet),
            "delta" => Ok(GreensKind::Delta),
            other => Err(format!("unknown kind '{other}' (expected full, dirichlet or delta)")),
        }
    }
}

/// Parsed configuration; lengths are in the same units as `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PotentialParams,
    pub command: Command,
    /// Sampling range and size for `potential` and `wavefunction`.
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    /// `potential` writes `r/a, V/V1` instead of `r, V`.
    pub scaled: bool,
    pub window: Window,
    pub scan_points: Option<usize>,
    pub root_tol: Option<f64>,
    pub e_lo: Option<f64>,
    pub e_hi: Option<f64>,
    pub energy: Option<f64>,
    pub u_prime: Option<f64>,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub kind: GreensKind,
    pub lambda: f64,
    pub grid_r_max: Option<f64>,
    pub grid_h: Option<f64>,
}

const KEYS: &[&str] = &[
    "M", "hbar", "a", "V1", "V2", "q", "command", "r_min", "r_max", "points", "scaled", "window",
    "scan_points", "root_tol", "e_lo", "e_hi", "energy", "u_prime", "u_min", "u_max", "kind",
    "lambda", "grid_r_max", "grid_h",
];

struct Entries {
    values: HashMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected key=value, got '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Parse { line, message: format!("unknown key '{key}'") });
            }
            if let Some((first, _)) = values.get(key) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate key '{key}' (first set on line {first})"),
                });
            }
            values.insert(key.to_string(), (line, value.to_string()));
        }
        Ok(Self { values })
    }

    fn line(&self, key: &str) -> usize {
        self.values.get(key).map_or(0, |(l, _)| *l)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        let Some((line, value)) = self.values.get(key) else {
            return Ok(None);
        };
        if value.is_empty() {
            return Err(Error::Parse { line: *line, message: format!("empty value for '{key}'") });
        }
        value.parse::<T>().map(Some).map_err(|e| Error::Parse {
            line: *line,
            message: format!("invalid value '{value}' for '{key}': {e}"),
        })
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.get::<f64>(key)? {
            Some(v) if !v.is_finite() => Err(Error::Parse {
                line: self.line(key),
                message: format!("'{key}' must be finite"),
            }),
            v => Ok(v),
        }
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("missing required key '{key}'"),
        })
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64> {
        match self.number(key)? {
            None => Ok(default),
            Some(v) if v > 0.0 => Ok(v),
            Some(v) => Err(Error::Parse {
                line: self.line(key),
                message: format!("'{key}' must be > 0, got {v}"),
            }),
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, None)
}

/// As [`parse_config`], with `command` taking precedence over the file.
pub fn parse_config_with(text: &str, command: Option<Command>) -> Result<RunConfig> {
    let e = Entries::parse(text)?;
    let mass = e.positive("M", 1.0)?;
    let hbar = e.positive("hbar", 1.0)?;
    let a = e.positive("a", 1.0)?;
    let q = e.positive("q", 1.0)?;
    let v1 = e.required("V1")?;
    let v2 = e.required("V2")?;
    let params = PotentialParams::new(v1, v2, q)
        .and_then(|p| p.with_units(mass, hbar, a))
        .map_err(|err| Error::Parse { line: 0, message: err.to_string() })?;
    let command = match command {
        Some(c) => c,
        None => e.get::<Command>("command")?.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing required key 'command'".into(),
        })?,
    };
    let points = e.get::<usize>("points")?.unwrap_or(601);
    if points < 2 {
        return Err(Error::Parse { line: e.line("points"), message: "'points' must be >= 2".into() });
    }
    let r_min = e.number("r_min")?.unwrap_or(0.0);
    let r_max = e.number("r_max")?.unwrap_or(6.0 * a);
    if !(r_min >= 0.0 && r_max > r_min) {
        return Err(Error::Parse {
            line: e.line("r_max").max(e.line("r_min")),
            message: format!("need 0 <= r_min < r_max, got {r_min}, {r_max}"),
        });
    }
    let window = match e.get::<String>("window")?.as_deref() {
        None | Some("real") => Window::Real,
        Some("extended") => Window::Extended,
        Some(other) => {
            return Err(Error::Parse {
                line: e.line("window"),
                message: format!("unknown window '{other}' (expected real or extended)"),
            })
        }
    };
    let cfg = RunConfig {
        params,
        command,
        r_min,
        r_max,
        points,
        scaled: e.get::<bool>("scaled")?.unwrap_or(false),
        window,
        scan_points: e.get::<usize>("scan_points")?,
        root_tol: e.number("root_tol")?,
        e_lo: e.number("e_lo")?,
        e_hi: e.number("e_hi")?,
        energy: e.number("energy")?,
        u_prime: e.number("u_prime")?,
        u_min: e.number("u_min")?,
        u_max: e.number("u_max")?,
        kind: e.get::<GreensKind>("kind")?.unwrap_or(GreensKind::FullLine),
        lambda: e.number("lambda")?.unwrap_or(-1e3),
        grid_r_max: e.number("grid_r_max")?,
        grid_h: e.number("grid_h")?,
    };
    if command == Command::Greens {
        for key in ["energy", "u_prime"] {
            if e.number(key)?.is_none() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("missing required key '{key}' for command greens"),
                });
            }
        }
    }
    Ok(cfg)
}

/// Outcome of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub files: Vec<PathBuf>,
    /// Human-readable summary for stdout.
    pub summary: String,
    /// Set when `validate` found a deviation beyond tolerance.
    pub failure: Option<String>,
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 48 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
}

fn states_for(cfg: &RunConfig) -> Result<Vec<BoundState>> {
    let p = &cfg.params;
    let mut states = match cfg.window {
        Window::Real => Vec::new(),
        Window::Extended => bound_states(p)?,
    };
    let window = match cfg.window {
        Window::Real => SearchConfig::real_window(p),
        Window::Extended => SearchConfig::extended_window(p),
    };
    let base = match (window, cfg.e_lo, cfg.e_hi) {
        (Ok(base), _, _) => base,
        (Err(Error::Domain(msg)), None, None) if msg.starts_with("empty") => return Ok(states),
        (Err(Error::Domain(msg)), Some(e_lo), Some(e_hi)) if msg.starts_with("empty") => {
            SearchConfig { e_lo, e_hi, scan_points: 2000, root_tol: 1e-13, max_bisections: 200, window: cfg.window }
        }
        (Err(e), _, _) => return Err(e),
    };
    let search = SearchConfig {
        e_lo: cfg.e_lo.unwrap_or(base.e_lo),
        e_hi: cfg.e_hi.unwrap_or(base.e_hi),
        scan_points: cfg.scan_points.unwrap_or(base.scan_points),
        root_tol: cfg.root_tol.unwrap_or(base.root_tol),
        ..base
    };
    states.extend(find_bound_states(p, &search)?);
    Ok(states)
}

/// Runs the configured command, writing its CSV files into `out_dir`.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<Report> {
    fs::create_dir_all(out_dir)?;
    let p = &cfg.params;
    let mut report = Report { files: Vec::new(), summary: String::new(), failure: None };
    match cfg.command {
        Command::Potential => {
            let (a, v1) = (p.length_scale, p.well_depth);
            let mut rows = Vec::with_capacity(cfg.points);
            for r in linspace(cfg.r_min, cfg.r_max, cfg.points) {
                let v = potential_r(p, r)?;
                rows.push(if cfg.scaled {
                    format!("{},{}", float(r / a), float(v / v1))
                } else {
                    format!("{},{}", float(r), float(v))
                });
            }
            let path = out_dir.join("potential.csv");
            write_csv(&path, if cfg.scaled { "r_over_a,V_over_V1" } else { "r,V" }, &rows)?;
            writeln!(report.summary, "potential: {} points", rows.len()).unwrap();
            report.files.push(path);
        }
        Command::Spectrum => {
            let states = states_for(cfg)?;
            let rows: Vec<String> = states
                .iter()
                .map(|s| format!("{},{},{}", s.n_r, float(s.energy), float(s.normalization)))
                .collect();
            let path = out_dir.join("spectrum.csv");
            write_csv(&path, "n_r,E,C", &rows)?;
            writeln!(report.summary, "spectrum: {} bound states", states.len()).unwrap();
            for s in &states {
                writeln!(report.summary, "  n_r={} E={}", s.n_r, float(s.energy)).unwrap();
                if s.full_line_coincidence {
                    writeln!(report.summary, "  note: n_r={} coincides with a full-line Gamma pole", s.n_r).unwrap();
                }
            }
            report.files.push(path);
        }
        Command::Wavefunction => {
            let states = states_for(cfg)?;
            for s in &states {
                let mut rows = Vec::with_capacity(cfg.points);
                for r in linspace(cfg.r_min, cfg.r_max, cfg.points) {
                    rows.push(format!("{},{}", float(r), float(wavefunction(s, r)?)));
                }
                let path = out_dir.join(format!("wavefunction_n{}.csv", s.n_r));
                write_csv(&path, "r,phi", &rows)?;
                report.files.push(path);
            }
            writeln!(report.summary, "wavefunction: {} states", states.len()).unwrap();
        }
        Command::Greens => {
            let energy = cfg.energy.expect("checked by parse_config");
            let u1 = cfg.u_prime.expect("checked by parse_config");
            let u0 = p.wall();
            let lo = cfg.u_min.unwrap_or(u0);
            let hi = cfg.u_max.unwrap_or(u0 + 6.0);
            let mut rows = Vec::with_capacity(cfg.points);
            for u in linspace(lo, hi, cfg.points) {
                let g = match cfg.kind {
                    GreensKind::FullLine => greens_full_line(p, energy, u1, u)?,
                    GreensKind::Dirichlet => greens_dirichlet(p, energy, u1, u)?,
                    GreensKind::Delta => greens_delta_perturbed(p, energy, cfg.lambda, u1, u)?,
                };
                rows.push(format!("{},{},{}", float(u), float(g.re), float(g.im)));
            }
            let path = out_dir.join("greens.csv");
            write_csv(&path, "u_second,re_G,im_G", &rows)?;
            writeln!(report.summary, "greens: {} points", rows.len()).unwrap();
            report.files.push(path);
        }
        Command::Validate => {
            let a = p.length_scale;
            let grid = GridSpec::new(cfg.grid_r_max.unwrap_or(40.0 * a), cfg.grid_h.unwrap_or(1e-3 * a))?;
            let checks = validation_checks(p, &grid)?;
            let rows: Vec<String> = checks
                .iter()
                .map(|c| format!("{},{},{},{}", c.name, float(c.deviation), float(c.tolerance), c.status()))
                .collect();
            let path = out_dir.join("validate.csv");
            write_csv(&path, "check,max_deviation,tolerance,status", &rows)?;
            report.files.push(path);
            writeln!(report.summary, "{:<14} {:>12} {:>10}  status", "check", "max_dev", "tol").unwrap();
            for c in &checks {
                writeln!(report.summary, "{:<14} {:>12.3e} {:>10.1e}  {}", c.name, c.deviation, c.tolerance, c.status())
                    .unwrap();
            }
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
            if failed.is_empty() {
                writeln!(report.summary, "PASS").unwrap();
            } else {
                writeln!(report.summary, "FAIL").unwrap();
                report.failure = Some(format!("failed checks: {}", failed.join(", ")));
            }
        }
    }
    Ok(report)
}

/// One row of the `validate` table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Closed-form spectrum and wave functions below `-|V2|` against
/// [`fd_eigen`] and [`shoot_eigen`] on `grid`.
pub fn validation_checks(p: &PotentialParams, grid: &GridSpec) -> Result<Vec<Check>> {
    let a = p.length_scale;
    let upper = -p.asymmetry.abs();
    let states = bound_states(p)?;
    let oracle = fd_eigen(p, grid, upper)?;
    let count = states.len().abs_diff(oracle.eigenvalues.len()) as f64;
    let mut checks = vec![Check { name: "state_count", deviation: count, tolerance: 0.0 }];
    let paired = states.iter().zip(&oracle.eigenvalues).enumerate();
    let mut energy = 0.0f64;
    let mut shooting = 0.0f64;
    let mut nodes = 0.0f64;
    let mut shape = 0.0f64;
    let mut origin = 0.0f64;
    let mut decay = 0.0f64;
    for (k, (state, &e)) in paired {
        energy = energy.max((state.energy - e).abs() / e.abs());
        let lo = if k == 0 { e - 0.5 * (e - upper).abs().max(1.0) } else { 0.5 * (e + oracle.eigenvalues[k - 1]) };
        let hi = oracle.eigenvalues.get(k + 1).map_or(0.5 * (e + upper), |next| 0.5 * (e + next));
        let shot = shoot_eigen(p, grid, (lo, hi))?;
        shooting = shooting.max((shot - e).abs() / e.abs());
        let closed_nodes = count_nodes(state, &NodeGrid::for_state(state))?;
        nodes = nodes
            .max(closed_nodes.abs_diff(state.n_r) as f64)
            .max(oracle.node_counts[k].abs_diff(state.n_r) as f64);
        let stride = 10;
        let values = sample(state, grid.h * stride as f64, grid.n / stride)?;
        let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (i, v) in values.iter().enumerate().skip(1) {
            shape = shape.max((v - oracle.eigenvectors[k][i * stride - 1]).abs());
        }
        origin = origin.max(values[0].abs() / peak);
        decay = decay.max(wavefunction(state, 30.0 * a)?.abs() / peak);
    }
    checks.extend([
        Check { name: "energy", deviation: energy, tolerance: 1e-5 },
        Check { name: "shooting", deviation: shooting, tolerance: 1e-6 },
        Check { name: "nodes", deviation: nodes, tolerance: 0.0 },
        Check { name: "wavefunction", deviation: shape, tolerance: 1e-4 },
        Check { name: "origin", deviation: origin, tolerance: 1e-9 },
        Check { name: "decay", deviation: decay, tolerance: 1e-10 },
    ]);
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = parse_config("V1=1\nV2=0.25\nq=0.5\ncommand=potential").unwrap();
        assert_eq!(cfg.command, Command::Potential);
        assert_eq!(cfg.params.mass, 1.0);
        assert_eq!(cfg.params.hbar, 1.0);
        assert_eq!(cfg.params.length_scale, 1.0);
        assert_eq!(cfg.params.deformation, 0.5);
        assert_eq!(cfg.params.asymmetry, 0.25);
    }

    #[test]
    fn comments_and_whitespace() {
        let cfg = parse_config("# header\n V1 = 10 # depth\n\nV2=2.5\ncommand = spectrum\n").unwrap();
        assert_eq!(cfg.params.well_depth, 10.0);
    }

    fn parse_error(text: &str) -> (usize, String) {
        match parse_config(text) {
            Err(Error::Parse { line, message }) => (line, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let (line, msg) = parse_error("V1=\nV2=0\ncommand=potential");
        assert_eq!(line, 1);
        assert!(msg.contains("V1"));
        let (line, msg) = parse_error("V1=1\nV2=0\nV1=2\ncommand=potential");
        assert_eq!(line, 3);
        assert!(msg.contains("duplicate"));
        let (line, _) = parse_error("V1=1\nV2=0\nq=-1\ncommand=potential");
        assert_eq!(line, 3);
        let (line, msg) = parse_error("V1=1\nV2=0\nfoo=1\ncommand=potential");
        assert_eq!(line, 3);
        assert!(msg.contains("foo"));
        let (_, msg) = parse_error("V2=0\ncommand=potential");
        assert!(msg.contains("V1"));
        let (line, _) = parse_error("V1=1\nV2=abc\ncommand=potential");
        assert_eq!(line, 2);
        let (_, msg) = parse_error("V1=1\nV2=0");
        assert!(msg.contains("command"));
        let (_, msg) = parse_error("V1=1\nV2=0\ncommand=greens\nenergy=-3");
        assert!(msg.contains("u_prime"));
        let (line, _) = parse_error("V1=1\nV2=0\ncommand=fly");
        assert_eq!(line, 3);
    }

    #[test]
    fn command_override() {
        let cfg = parse_config_with("V1=1\nV2=0", Some(Command::Spectrum)).unwrap();
        assert_eq!(cfg.command, Command::Spectrum);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Parse { line: 1, message: String::new() }.exit_code(), 2);
        assert_eq!(Error::Numeric(String::new()).exit_code(), 3);
        assert_eq!(Error::Validation(String::new()).exit_code(), 4);
    }
}
