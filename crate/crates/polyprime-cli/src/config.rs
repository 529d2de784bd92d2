//! Run configuration: defaults, config file, command-line flags — later
//! sources override earlier ones, so a config file captures an experiment
//! and flags tweak one knob of it.
//!
//! The config file is a flat `key = value` text format whose keys are the
//! long flag names (`poly`, `form`, `n`, `trunc-p`, `trunc-q`, `format`,
//! `out`, `threads`, `fast-path`, `max-p`); `#` starts a comment. The `n`
//! value is a comma-separated list whose entries are either integers or
//! geometric ranges `lo:hi:factor`.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use polyprime::counting::{FastPath, LinearForm};
use polyprime::IntPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum PathChoice {
    #[default]
    Auto,
    Direct,
    Spectral,
}

impl From<PathChoice> for FastPath {
    fn from(choice: PathChoice) -> FastPath {
        match choice {
            PathChoice::Auto => FastPath::Auto,
            PathChoice::Direct => FastPath::Direct,
            PathChoice::Spectral => FastPath::Spectral,
        }
    }
}

/// Raw flags, shared by every subcommand. Everything is optional here;
/// [`RunConfig::resolve`] fills the gaps from the config file and the
/// per-command defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Polynomial, e.g. "x^2", "2x^3 - x + 1", or "[2,0,-1,1]" (descending)
    #[arg(long)]
    pub poly: Option<String>,

    /// Linear form coefficients "a1,a2" applied as a1·p1 + a2·p2
    #[arg(long)]
    pub form: Option<String>,

    /// Value(s) of N: an integer or a geometric range lo:hi:factor; repeatable
    #[arg(long = "n", value_name = "N")]
    pub n: Vec<String>,

    /// Euler-product truncation prime
    #[arg(long = "trunc-p", value_name = "P")]
    pub trunc_p: Option<u64>,

    /// Modulus-sum truncation for the series cross-check
    #[arg(long = "trunc-q", value_name = "Q")]
    pub trunc_q: Option<u64>,

    /// Report format
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads (0 = one per core)
    #[arg(long)]
    pub threads: Option<usize>,

    /// Counting engine selection
    #[arg(long = "fast-path", value_enum)]
    pub fast_path: Option<PathChoice>,

    /// Largest prime for the bias table
    #[arg(long = "max-p", value_name = "P")]
    pub max_p: Option<u64>,

    /// Config file with `key = value` lines mirroring the flags
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// A fully-resolved, validated experiment description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub poly: IntPolynomial,
    pub form: LinearForm,
    pub n_values: Vec<u64>,
    pub truncation_prime: u64,
    pub truncation_q: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: usize,
    pub fast_path: FastPath,
    pub max_p: u64,
}

/// The same fields as [`CommonArgs`], accumulated across sources.
#[derive(Debug, Clone, Default)]
struct Layers {
    poly: Option<String>,
    form: Option<String>,
    n: Vec<String>,
    trunc_p: Option<u64>,
    trunc_q: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    threads: Option<usize>,
    fast_path: Option<PathChoice>,
    max_p: Option<u64>,
}

impl Layers {
    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let parse_ctx = || format!("{}:{}: bad value for {key}", path.display(), lineno + 1);
            match key {
                "poly" => self.poly = Some(value.to_string()),
                "form" => self.form = Some(value.to_string()),
                "n" => self.n = value.split(',').map(|s| s.trim().to_string()).collect(),
                "trunc-p" => self.trunc_p = Some(value.parse().with_context(parse_ctx)?),
                "trunc-q" => self.trunc_q = Some(value.parse().with_context(parse_ctx)?),
                "format" => {
                    self.format =
                        Some(Format::from_str(value, true).map_err(|e| anyhow!("{}", e)).with_context(parse_ctx)?)
                }
                "out" => self.out = Some(PathBuf::from(value)),
                "threads" => self.threads = Some(value.parse().with_context(parse_ctx)?),
                "fast-path" => {
                    self.fast_path = Some(
                        PathChoice::from_str(value, true).map_err(|e| anyhow!("{}", e)).with_context(parse_ctx)?,
                    )
                }
                "max-p" => self.max_p = Some(value.parse().with_context(parse_ctx)?),
                other => bail!("{}:{}: unknown config key {other:?}", path.display(), lineno + 1),
            }
        }
        Ok(())
    }

    fn apply_flags(&mut self, args: &CommonArgs) {
        if args.poly.is_some() {
            self.poly = args.poly.clone();
        }
        if args.form.is_some() {
            self.form = args.form.clone();
        }
        if !args.n.is_empty() {
            self.n = args.n.clone();
        }
        if args.trunc_p.is_some() {
            self.trunc_p = args.trunc_p;
        }
        if args.trunc_q.is_some() {
            self.trunc_q = args.trunc_q;
        }
        if args.format.is_some() {
            self.format = args.format;
        }
        if args.out.is_some() {
            self.out = args.out.clone();
        }
        if args.threads.is_some() {
            self.threads = args.threads;
        }
        if args.fast_path.is_some() {
            self.fast_path = args.fast_path;
        }
        if args.max_p.is_some() {
            self.max_p = args.max_p;
        }
    }
}

impl RunConfig {
    /// Merges defaults ← config file ← flags and validates the result.
    /// `command` picks the default N list (the experiments have different
    /// natural scales).
    pub fn resolve(command: &str, args: &CommonArgs) -> Result<RunConfig> {
        let mut layers = Layers::default();
        if let Some(path) = &args.config {
            layers.apply_file(path)?;
        }
        layers.apply_flags(args);

        let poly_text = layers.poly.as_deref().ok_or_else(|| anyhow!("--poly is required"))?;
        let poly: IntPolynomial =
            poly_text.parse().map_err(|e| anyhow!("invalid --poly {poly_text:?}: {e}"))?;
        if !poly.is_normalized() {
            bail!(
                "polynomial {poly} has a negative leading coefficient; its value set is the \
                 mirror image of {} — for the difference form the pair count is identical \
                 (swap the pair), and for a general form mirror both form coefficients",
                poly.normalize()
            );
        }

        let form: LinearForm = match layers.form.as_deref() {
            None => LinearForm::DIFFERENCE,
            Some(text) => text.parse().map_err(|e| anyhow!("invalid --form {text:?}: {e}"))?,
        };

        let n_entries: Vec<String> = if layers.n.is_empty() {
            match command {
                "bias" => vec!["1000000".into()],
                "verify" => vec!["100".into(), "500".into(), "2000".into()],
                _ => vec!["1000".into()],
            }
        } else {
            layers.n
        };
        let mut n_values = Vec::new();
        for entry in &n_entries {
            expand_n_entry(entry, &mut n_values)?;
        }
        n_values.sort_unstable();
        n_values.dedup();
        if n_values.is_empty() {
            bail!("--n produced no values");
        }
        if let Some(&bad) = n_values.iter().find(|&&v| v < 2) {
            bail!("N must be at least 2, got {bad}");
        }

        let truncation_prime = layers.trunc_p.unwrap_or(100_000);
        let truncation_q = layers.trunc_q.unwrap_or(10_000);
        if truncation_prime < 2 || truncation_q < 2 {
            bail!("truncations must be at least 2 (got P = {truncation_prime}, Q = {truncation_q})");
        }
        let max_p = layers.max_p.unwrap_or(11);
        if max_p < 2 {
            bail!("--max-p must be at least 2, got {max_p}");
        }

        Ok(RunConfig {
            poly,
            form,
            n_values,
            truncation_prime,
            truncation_q,
            format: layers.format.unwrap_or_default(),
            out: layers.out,
            threads: layers.threads.unwrap_or(0),
            fast_path: layers.fast_path.unwrap_or_default().into(),
            max_p,
        })
    }
}

/// Accepts `"12345"` or the geometric range `"lo:hi:factor"` (all values
/// `lo·factor^i ≤ hi`).
fn expand_n_entry(entry: &str, out: &mut Vec<u64>) -> Result<()> {
    if !entry.contains(':') {
        let v: u64 = entry.parse().with_context(|| {
            format!("bad N value {entry:?} (repeat --n for several values, or use lo:hi:factor)")
        })?;
        out.push(v);
        return Ok(());
    }
    let parts: Vec<&str> = entry.split(':').collect();
    let [lo, hi, factor] = parts[..] else {
        bail!("range syntax is lo:hi:factor, got {entry:?}");
    };
    let lo: u64 = lo.parse().with_context(|| format!("bad range start in {entry:?}"))?;
    let hi: u64 = hi.parse().with_context(|| format!("bad range end in {entry:?}"))?;
    let factor: u64 = factor.parse().with_context(|| format!("bad range factor in {entry:?}"))?;
    if factor < 2 {
        bail!("range factor must be at least 2 in {entry:?}");
    }
    if lo > hi {
        bail!("empty range {entry:?}");
    }
    let mut v = lo;
    loop {
        out.push(v);
        match v.checked_mul(factor) {
            Some(next) if next <= hi => v = next,
            _ => break,
        }
    }
    Ok(())
}
