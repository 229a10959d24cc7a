//! Command-line front end: `info`, `export`, `histogram`, `compare`, `verify`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::lattice::{self, decode_into, TopologySpec};
use crate::metrics::{self, PathLengthHistogram, DEFAULT_PAIR_BUDGET};
use crate::oracle::{self, DEFAULT_VERIFY_NODES};
use crate::topology::{Topology, DEFAULT_EDGE_BUDGET};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const DOMAIN: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CAPACITY: u8 = 3;
    pub const IO: u8 = 4;
    pub const VERIFICATION_FAILED: u8 = 5;
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Capacity(_) => exit::CAPACITY,
        Error::Io(_) => exit::IO,
        Error::Parse { .. } | Error::InvalidSpec(_) => exit::USAGE,
        _ => exit::DOMAIN,
    }
}

impl FromStr for TopologySpec {
    type Err = Error;

    /// `mesh:mu=<int>,n=<int>`, `hypercube:n=<int>` or `symplectic:M=<int>,n=<int>`.
    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: String| Error::Parse {
            input: s.to_string(),
            reason,
        };
        let (family, params) = s
            .split_once(':')
            .ok_or_else(|| fail("expected '<family>:<key>=<value>,...'".into()))?;
        let keys: &[&str] = match family {
            "mesh" => &["mu", "n"],
            "hypercube" => &["n"],
            "symplectic" => &["M", "n"],
            other => {
                return Err(fail(format!(
                    "unknown family '{other}' (expected mesh, hypercube or symplectic)"
                )))
            }
        };
        let mut values: Vec<Option<u32>> = vec![None; keys.len()];
        for token in params.split(',') {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| fail(format!("'{token}' is not a key=value pair")))?;
            let slot = keys
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| fail(format!("unexpected parameter '{key}' for {family}")))?;
            if values[slot].is_some() {
                return Err(fail(format!("parameter '{key}' given twice")));
            }
            let parsed = value
                .parse::<u32>()
                .map_err(|_| fail(format!("'{value}' in '{token}' is not a non-negative integer")))?;
            values[slot] = Some(parsed);
        }
        if let Some(i) = values.iter().position(Option::is_none) {
            return Err(fail(format!("missing parameter '{}'", keys[i])));
        }
        let v: Vec<u32> = values.into_iter().flatten().collect();
        match family {
            "mesh" => TopologySpec::mesh(v[0], v[1]),
            "hypercube" => TopologySpec::hypercube(v[0]),
            _ => TopologySpec::symplectic(v[0], v[1]),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "symnet",
    version,
    about = "Mesh, hypercube and symplectic interconnect topologies"
)]
pub struct Cli {
    /// Maximum number of edges to materialize.
    #[arg(long, global = true, env = "SYMNET_BUDGET_EDGES", default_value_t = DEFAULT_EDGE_BUDGET)]
    pub budget_edges: u64,

    /// Maximum number of node pairs for exact histograms and distance exports.
    #[arg(long, global = true, env = "SYMNET_BUDGET_PAIRS", default_value_t = DEFAULT_PAIR_BUDGET)]
    pub budget_pairs: u64,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, env = "SYMNET_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print node count, diameter, degree extrema and density.
    Info {
        spec: TopologySpec,
        /// Emit key=value lines instead of the aligned table.
        #[arg(long)]
        kv: bool,
    },
    /// Write edges, the adjacency matrix or the distance matrix to a file.
    Export {
        spec: TopologySpec,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Write the path-length distribution as CSV.
    Histogram {
        spec: TopologySpec,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Compare two topologies side by side and write both histograms.
    Compare {
        a: TopologySpec,
        b: TopologySpec,
        #[command(flatten)]
        mode: ModeArgs,
        /// Directory for the two histogram CSVs.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check closed-form distances and degrees against breadth-first search.
    Verify {
        spec: TopologySpec,
        /// Largest node count accepted for all-pairs verification.
        #[arg(long, default_value_t = DEFAULT_VERIFY_NODES)]
        max_nodes: u64,
        /// Write mismatching pairs as CSV.
        #[arg(long)]
        mismatches: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Edges,
    Adjacency,
    Distances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Edgelist,
    Matrixmarket,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ModeArgs {
    /// All unordered node pairs (default).
    #[arg(long, conflicts_with = "sample")]
    pub exact: bool,
    /// Number of uniformly sampled node pairs.
    #[arg(long)]
    pub sample: Option<u64>,
    /// Seed for sampled mode.
    #[arg(long, requires = "sample")]
    pub seed: Option<u64>,
}

impl ModeArgs {
    fn histogram(&self, spec: &TopologySpec, pair_budget: u64) -> Result<PathLengthHistogram> {
        match self.sample {
            Some(size) => metrics::path_length_histogram_sampled(spec, size, self.seed.unwrap_or(0)),
            None => metrics::path_length_histogram(spec, pair_budget),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot write {}: {e}", path.display()),
        ))
    })?;
    Ok(BufWriter::new(file))
}

/// File name used by `compare`, e.g. `symplectic_M2_n5.csv`.
pub fn histogram_file_name(spec: &TopologySpec) -> String {
    let stem: String = spec
        .to_string()
        .chars()
        .filter(|&c| c != '=')
        .map(|c| if c == ':' || c == ',' { '_' } else { c })
        .collect();
    format!("{stem}.csv")
}

/// Runs a parsed command, writing human-readable output to `out`.
/// Returns the exit code for successful runs.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<u8> {
    match &cli.command {
        Command::Info { spec, kv } => {
            let s = metrics::summary(spec);
            if *kv {
                writeln!(out, "spec={spec}")?;
                writeln!(out, "nu={}", s.nu)?;
                writeln!(out, "L={}", s.diameter)?;
                writeln!(out, "eps_max={}", s.eps_max)?;
                writeln!(out, "eps_min={}", s.eps_min)?;
                writeln!(out, "rho={}", s.rho)?;
            } else {
                writeln!(out, "{s}")?;
            }
            Ok(exit::OK)
        }
        Command::Export {
            spec,
            what,
            format,
            out: path,
        } => {
            let mut w = create(path)?;
            export(spec, *what, *format, cli, &mut w)?;
            w.flush()?;
            writeln!(out, "wrote {}", path.display())?;
            Ok(exit::OK)
        }
        Command::Histogram {
            spec,
            mode,
            out: path,
        } => {
            let h = mode.histogram(spec, cli.budget_pairs)?;
            let mut w = create(path)?;
            h.write_csv(&mut w)?;
            w.flush()?;
            writeln!(out, "wrote {} (mean={})", path.display(), h.mean)?;
            Ok(exit::OK)
        }
        Command::Compare {
            a,
            b,
            mode,
            out_dir,
        } => {
            let (sa, sb) = (metrics::summary(a), metrics::summary(b));
            let (ha, hb) = (
                mode.histogram(a, cli.budget_pairs)?,
                mode.histogram(b, cli.budget_pairs)?,
            );
            let rows: [(&str, String, String); 7] = [
                ("topology", a.to_string(), b.to_string()),
                ("nodes", sa.nu.to_string(), sb.nu.to_string()),
                ("diameter", sa.diameter.to_string(), sb.diameter.to_string()),
                ("max_degree", sa.eps_max.to_string(), sb.eps_max.to_string()),
                ("min_degree", sa.eps_min.to_string(), sb.eps_min.to_string()),
                ("density", format!("{:e}", sa.rho), format!("{:e}", sb.rho)),
                ("mean_path", ha.mean.to_string(), hb.mean.to_string()),
            ];
            for (k, x, y) in rows {
                writeln!(out, "{k:<14}{x:<26}{y}")?;
            }
            writeln!(out, "{:<14}{}", "density_a/b", metrics::density_ratio(a, b))?;
            if let Some(closed) = metrics::matched_density_ratio(a, b) {
                writeln!(out, "{:<14}{closed}", "closed_form")?;
            }
            for (spec, h) in [(a, &ha), (b, &hb)] {
                let path = out_dir.join(histogram_file_name(spec));
                let mut w = create(&path)?;
                h.write_csv(&mut w)?;
                w.flush()?;
                writeln!(out, "wrote {}", path.display())?;
            }
            Ok(exit::OK)
        }
        Command::Verify {
            spec,
            max_nodes,
            mismatches,
        } => {
            let report = oracle::verify_distances(spec, *max_nodes)?;
            writeln!(out, "{report}")?;
            if let Some(path) = mismatches {
                let mut w = create(path)?;
                report.write_mismatch_csv(&mut w)?;
                w.flush()?;
            }
            Ok(if report.is_certified() {
                exit::OK
            } else {
                exit::VERIFICATION_FAILED
            })
        }
    }
}

fn check_pairs(spec: &TopologySpec, budget: u64) -> Result<u64> {
    let nu = lattice::node_count(spec);
    let pairs = nu as u128 * nu.saturating_sub(1) as u128 / 2;
    if pairs > budget as u128 {
        return Err(Error::Capacity(format!(
            "{spec}: {pairs} node pairs exceed the pair budget of {budget}"
        )));
    }
    Ok(nu)
}

/// Writes the requested artifact. Node indices are the adjacency-matrix
/// row indices: the label for mesh and hypercube, `p = kappa / 2` for
/// symplectic topologies.
pub fn export<W: Write>(
    spec: &TopologySpec,
    what: What,
    format: Format,
    cli: &Cli,
    w: &mut W,
) -> Result<()> {
    let topo = Topology::new(*spec);
    let idx = |k: u64| spec.index_of(k);
    match (what, format) {
        (What::Edges | What::Adjacency, Format::Edgelist) => {
            for e in topo.edges(cli.budget_edges)? {
                writeln!(w, "{} {}", idx(e.a.kappa), idx(e.b.kappa))?;
            }
        }
        (What::Edges, Format::Csv) => {
            writeln!(w, "u,v")?;
            for e in topo.edges(cli.budget_edges)? {
                writeln!(w, "{},{}", idx(e.a.kappa), idx(e.b.kappa))?;
            }
        }
        (What::Edges | What::Adjacency, Format::Matrixmarket) => {
            let count = topo.edge_count()?;
            let edges = topo.edges(cli.budget_edges)?;
            let nu = topo.node_count();
            writeln!(w, "%%MatrixMarket matrix coordinate pattern symmetric")?;
            writeln!(w, "% {spec}")?;
            writeln!(w, "{nu} {nu} {count}")?;
            for e in edges {
                // lower triangle, 1-based
                writeln!(w, "{} {}", idx(e.b.kappa) + 1, idx(e.a.kappa) + 1)?;
            }
        }
        (What::Adjacency, Format::Csv) => {
            let nu = check_pairs(spec, cli.budget_pairs)?;
            topo.check_edge_budget(cli.budget_edges)?;
            let mut row = vec![b'0'; nu as usize];
            for i in 0..nu {
                row.fill(b'0');
                for k in topo.neighbors(spec.kappa_at(i))? {
                    row[idx(k) as usize] = b'1';
                }
                write_row(w, row.iter().map(|&c| c as char))?;
            }
        }
        (What::Distances, _) => {
            let nu = check_pairs(spec, cli.budget_pairs)? as usize;
            let n = spec.n() as usize;
            let mut coords = vec![0u32; nu * n];
            for (i, slot) in coords.chunks_mut(n).enumerate() {
                decode_into(spec.kappa_at(i as u64), spec.mu() as u64, slot);
            }
            let half = if spec.is_symplectic() { 2 } else { 1 };
            let dist = |i: usize, j: usize| -> u64 {
                let (a, b) = (&coords[i * n..(i + 1) * n], &coords[j * n..(j + 1) * n]);
                a.iter().zip(b).map(|(x, y)| x.abs_diff(*y) as u64).sum::<u64>() / half
            };
            match format {
                Format::Edgelist => {
                    for i in 0..nu {
                        for j in i + 1..nu {
                            writeln!(w, "{i} {j} {}", dist(i, j))?;
                        }
                    }
                }
                Format::Matrixmarket => {
                    writeln!(w, "%%MatrixMarket matrix coordinate integer general")?;
                    writeln!(w, "% {spec}")?;
                    writeln!(w, "{nu} {nu} {}", nu * (nu - 1))?;
                    for i in 0..nu {
                        for j in (0..nu).filter(|&j| j != i) {
                            writeln!(w, "{} {} {}", i + 1, j + 1, dist(i, j))?;
                        }
                    }
                }
                Format::Csv => {
                    for i in 0..nu {
                        write_row(w, (0..nu).map(|j| dist(i, j)))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn write_row<W: Write, T: std::fmt::Display>(w: &mut W, items: impl Iterator<Item = T>) -> Result<()> {
    for (i, item) in items.enumerate() {
        if i > 0 {
            w.write_all(b",")?;
        }
        write!(w, "{item}")?;
    }
    writeln!(w)?;
    Ok(())
}
