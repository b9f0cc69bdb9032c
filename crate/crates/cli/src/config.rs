//! Command-line parameters and the flat key-value config file.
//!
//! Every parameter can come from a flag or from the file; flags win, then
//! the file, then the built-in defaults applied by each command.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use powergen::poly::{parse_poly, PolynomialZ};
use powergen::quad::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    IntegralRep,
    Watson,
    UpperBound,
    Asymptotic,
    Dominance,
    Winding,
    Derivative,
    All,
}

impl Check {
    pub const EACH: [Check; 7] = [
        Check::IntegralRep,
        Check::Watson,
        Check::UpperBound,
        Check::Asymptotic,
        Check::Dominance,
        Check::Winding,
        Check::Derivative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::IntegralRep => "integral-rep",
            Check::Watson => "watson",
            Check::UpperBound => "upper-bound",
            Check::Asymptotic => "asymptotic",
            Check::Dominance => "dominance",
            Check::Winding => "winding",
            Check::Derivative => "derivative",
            Check::All => "all",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Exponent alpha > 0
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Order m of the polynomial
    #[arg(long)]
    pub m: Option<usize>,

    /// Inclusive range of orders, written LO..HI
    #[arg(long = "m-range", value_name = "LO..HI")]
    pub m_range: Option<String>,

    /// Evaluation point z < -4/27
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,

    /// Comma-separated evaluation points
    #[arg(long = "z-grid", allow_hyphen_values = true)]
    pub z_grid: Option<String>,

    /// Angle in (2pi/3, pi); replaces the default grid of a check
    #[arg(long)]
    pub theta: Option<f64>,

    /// Coefficients of A(z), ascending, comma-separated
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<String>,

    /// Coefficients of B(z), ascending, comma-separated
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<String>,

    /// Number of grid points for density samples or the winding sweep
    #[arg(long)]
    pub grid: Option<usize>,

    /// Quadrature refinement levels
    #[arg(long = "quad-levels")]
    pub quad_levels: Option<u32>,

    /// Quadrature relative tolerance
    #[arg(long = "quad-rel-tol")]
    pub quad_rel_tol: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file (a directory for `figures`); standard output if absent
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Flat key = value file supplying any parameter not given as a flag
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Checks to run, comma-separated (verify only)
    #[arg(long, value_enum, value_delimiter = ',')]
    pub check: Vec<Check>,
}

fn float(key: &str, v: &toml::Value) -> Result<f64> {
    match v {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => bail!("config key `{key}` must be a number"),
    }
}

fn unsigned(key: &str, v: &toml::Value) -> Result<u64> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => bail!("config key `{key}` must be a non-negative integer"),
    }
}

fn text(key: &str, v: &toml::Value) -> Result<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        _ => bail!("config key `{key}` must be a string"),
    }
}

fn enum_value<T: ValueEnum>(key: &str, v: &toml::Value) -> Result<T> {
    let s = text(key, v)?;
    T::from_str(&s, false).map_err(|e| anyhow!("config key `{key}`: {e}"))
}

impl Params {
    /// Fills every unset field from the config file named by `--config`.
    pub fn resolve(mut self) -> Result<Self> {
        if let Some(path) = self.config.clone() {
            self.merge_file(&path)?;
        }
        Ok(self)
    }

    fn merge_file(&mut self, path: &Path) -> Result<()> {
        let body = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let table: toml::Table = body.parse().with_context(|| format!("parsing config {}", path.display()))?;
        for (key, v) in &table {
            let k = key.as_str();
            match k {
                "alpha" => fill(&mut self.alpha, || float(k, v))?,
                "m" => fill(&mut self.m, || unsigned(k, v).map(|u| u as usize))?,
                "m-range" | "m_range" => fill(&mut self.m_range, || text(k, v))?,
                "z" => fill(&mut self.z, || float(k, v))?,
                "z-grid" | "z_grid" => fill(&mut self.z_grid, || text(k, v))?,
                "theta" => fill(&mut self.theta, || float(k, v))?,
                "A" => fill(&mut self.a, || text(k, v))?,
                "B" => fill(&mut self.b, || text(k, v))?,
                "grid" => fill(&mut self.grid, || unsigned(k, v).map(|u| u as usize))?,
                "quad-levels" | "quad_levels" => fill(&mut self.quad_levels, || unsigned(k, v).map(|u| u as u32))?,
                "quad-rel-tol" | "quad_rel_tol" => fill(&mut self.quad_rel_tol, || float(k, v))?,
                "format" => fill(&mut self.format, || enum_value(k, v))?,
                "output" => fill(&mut self.output, || text(k, v).map(PathBuf::from))?,
                "check" => {
                    if self.check.is_empty() {
                        self.check = text(k, v)?
                            .split(',')
                            .map(|s| Check::from_str(s.trim(), false).map_err(|e| anyhow!("config key `check`: {e}")))
                            .collect::<Result<_>>()?;
                    }
                }
                _ => bail!("unknown config key `{k}` in {}", path.display()),
            }
        }
        Ok(())
    }

    pub fn alpha(&self) -> Result<f64> {
        self.alpha.ok_or_else(|| anyhow!("--alpha is required"))
    }

    pub fn m(&self) -> Result<usize> {
        self.m.ok_or_else(|| anyhow!("--m is required"))
    }

    /// `--m-range` if given, else the single `--m`, else `default`.
    pub fn orders(&self, default: Option<(usize, usize)>) -> Result<Vec<usize>> {
        if let Some(r) = &self.m_range {
            let (lo, hi) = r.split_once("..").ok_or_else(|| anyhow!("--m-range must look like LO..HI, got `{r}`"))?;
            let lo: usize = lo.trim().parse().with_context(|| format!("bad lower end in --m-range `{r}`"))?;
            let hi: usize = hi.trim().parse().with_context(|| format!("bad upper end in --m-range `{r}`"))?;
            if lo > hi {
                bail!("--m-range is empty: {lo} > {hi}");
            }
            return Ok((lo..=hi).collect());
        }
        match (self.m, default) {
            (Some(m), _) => Ok(vec![m]),
            (None, Some((lo, hi))) => Ok((lo..=hi).collect()),
            (None, None) => bail!("--m or --m-range is required"),
        }
    }

    /// `--z-grid` if given, else the single `--z`, else `default`.
    pub fn zs(&self, default: &[f64]) -> Result<Vec<f64>> {
        if let Some(g) = &self.z_grid {
            return g
                .split(',')
                .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad value `{s}` in --z-grid")))
                .collect();
        }
        Ok(self.z.map_or_else(|| default.to_vec(), |z| vec![z]))
    }

    pub fn thetas(&self, default: Vec<f64>) -> Vec<f64> {
        self.theta.map_or(default, |t| vec![t])
    }

    pub fn poly(&self, which: char) -> Result<Option<PolynomialZ>> {
        let (flag, text) = match which {
            'A' => ("--A", &self.a),
            _ => ("--B", &self.b),
        };
        text.as_deref()
            .map(|t| parse_poly(t).with_context(|| format!("{flag} `{t}`")))
            .transpose()
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        let mut spec = QuadratureSpec::default();
        if let Some(levels) = self.quad_levels {
            spec.levels = levels;
        }
        if let Some(tol) = self.quad_rel_tol {
            spec.rel_tol = tol;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    pub fn checks(&self) -> Result<Vec<Check>> {
        if self.check.is_empty() {
            bail!("--check is required (one or more of integral-rep, watson, upper-bound, asymptotic, dominance, winding, derivative, all)");
        }
        if self.check.contains(&Check::All) {
            return Ok(Check::EACH.to_vec());
        }
        let mut out = Vec::new();
        for &c in &self.check {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }
}

fn fill<T>(slot: &mut Option<T>, value: impl FnOnce() -> Result<T>) -> Result<()> {
    if slot.is_none() {
        *slot = Some(value()?);
    }
    Ok(())
}
