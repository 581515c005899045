//! Flag/config-file merging. Precedence: command defaults < config file
//! < flags. Every resolved value is echoed into the output header.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use facelab::series::SpaceSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Config file (JSON, same keys as the flags); flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Space kind: "hs" or "explicit".
    #[arg(long, global = true)]
    pub kind: Option<String>,

    /// Power-law exponent for kind "hs".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<f64>,

    /// Comma-separated kernel coefficients for kind "explicit".
    #[arg(long, global = true, value_delimiter = ',')]
    pub coeffs: Option<Vec<f64>>,

    /// Truncation depth (command-specific default when omitted).
    #[arg(long, global = true)]
    pub depth: Option<usize>,

    /// Pass/fail tolerance override for the command's main check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Angular grid size for numerical-range boundaries.
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// Node count for circle quadratures.
    #[arg(long, global = true)]
    pub quad_nodes: Option<usize>,

    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output path; relative paths resolve against $FACELAB_OUT_DIR.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format where a choice exists.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

/// Config-file schema: the space keys plus the run knobs.
#[derive(Debug, Default, Deserialize)]
pub struct ConfigFile {
    pub kind: Option<String>,
    pub s: Option<f64>,
    pub coeffs: Option<Vec<f64>>,
    pub depth: Option<usize>,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub quad_nodes: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<String>,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub grid: usize,
    pub quad_nodes: usize,
    pub seed: u64,
    pub format: String,
}

impl RunConfig {
    /// Merge defaults, config file, and flags; `default_depth` comes
    /// from the subcommand.
    pub fn resolve(opts: &GlobalOpts, default_depth: usize) -> Result<Self> {
        Self::resolve_with_format(opts, default_depth, OutputFormat::Json)
    }

    /// Like [`RunConfig::resolve`] with a command-specific default format.
    pub fn resolve_with_format(
        opts: &GlobalOpts,
        default_depth: usize,
        default_format: OutputFormat,
    ) -> Result<Self> {
        let file: ConfigFile = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => ConfigFile::default(),
        };

        let kind = opts
            .kind
            .clone()
            .or(file.kind)
            .unwrap_or_else(|| "hs".into());
        let s = opts.s.or(file.s).or(if kind == "hs" { Some(-2.0) } else { None });
        let coeffs = opts.coeffs.clone().or(file.coeffs);
        let depth = match (kind.as_str(), &coeffs, opts.depth.or(file.depth)) {
            // explicit lists carry their own depth
            ("explicit", Some(c), None) => c.len() - 1,
            ("explicit", Some(c), Some(d)) if d != c.len() - 1 => {
                bail!("depth {} disagrees with {} explicit coefficients", d, c.len())
            }
            (_, _, Some(d)) => d,
            _ => default_depth,
        };
        let format = match (opts.format, file.format.as_deref()) {
            (Some(f), _) => f.name().to_string(),
            (None, Some("csv")) => "csv".into(),
            (None, Some("json")) => "json".into(),
            (None, None) => default_format.name().to_string(),
            (None, Some(other)) => bail!("unknown format \"{other}\" in config file"),
        };
        Ok(RunConfig {
            kind,
            s,
            coeffs,
            depth,
            tol: opts.tol.or(file.tol),
            grid: opts.grid.or(file.grid).unwrap_or(720),
            quad_nodes: opts.quad_nodes.or(file.quad_nodes).unwrap_or(512),
            seed: opts.seed.or(file.seed).unwrap_or(0),
            format,
        })
    }

    pub fn space(&self) -> Result<SpaceSpec> {
        let config = facelab::io::SpaceConfig {
            kind: self.kind.clone(),
            s: self.s,
            coeffs: self.coeffs.clone(),
            depth: Some(self.depth),
        };
        Ok(config.to_spec()?)
    }
}

/// Resolve the output target against the default output directory.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var("FACELAB_OUT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}
