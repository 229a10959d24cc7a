//! Closed-form graph metrics and path-length distributions.
//!
//! Distances are taxicab distances on the lattice: `sum |l_i - l'_i|` for
//! mesh and hypercube, half of that for symplectic topologies, where every
//! root moves two units of L1 length.

use std::fmt;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{self, check_range, decode_into, is_admissible, Family, NodeAddress, TopologySpec};
use crate::topology::Topology;

/// Default cap on closed-form distance evaluations for exact histograms.
pub const DEFAULT_PAIR_BUDGET: u64 = 1_000_000_000;

/// Pairs drawn per generator stream in sampled mode. Fixed so that the
/// sample does not depend on how many worker threads run.
pub const SAMPLE_CHUNK: u64 = 1 << 16;

/// Recorded in histogram metadata so sampled output can be regenerated.
pub const SAMPLER_ID: &str = "chacha8-stream-per-chunk-65536";

/// Summary row: node count, diameter, degree extrema and density.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologySummary {
    pub spec: TopologySpec,
    pub nu: u64,
    pub diameter: u64,
    pub eps_max: u64,
    pub eps_min: u64,
    pub rho: f64,
}

fn taxicab(a: &[u32], b: &[u32]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum()
}

#[inline]
fn lattice_distance(a: &[u32], b: &[u32], symplectic: bool) -> u64 {
    let l1 = taxicab(a, b);
    if symplectic {
        debug_assert_eq!(l1 % 2, 0, "odd taxicab length between symplectic nodes");
        l1 / 2
    } else {
        l1
    }
}

/// Shortest-path distance between two nodes.
pub fn distance(a: &NodeAddress, b: &NodeAddress, spec: &TopologySpec) -> Result<u64> {
    for x in [a, b] {
        check_range(x, spec)?;
        if !is_admissible(x, spec) {
            return Err(Error::Domain(format!("{x} is not a node of {spec}")));
        }
    }
    let l1 = taxicab(a.coords(), b.coords());
    if spec.is_symplectic() && !l1.is_multiple_of(2) {
        // admissible pairs always have an even number of odd differences
        return Err(Error::Domain(format!("odd taxicab length between {a} and {b}")));
    }
    Ok(lattice_distance(a.coords(), b.coords(), spec.is_symplectic()))
}

/// `n`, `(mu-1) n` or `M n`.
pub fn diameter(spec: &TopologySpec) -> u64 {
    let n = spec.n() as u64;
    match spec.family() {
        Family::Hypercube => n,
        Family::Mesh => (spec.mu() as u64 - 1) * n,
        Family::Symplectic => spec.highest_weight().unwrap_or(0) as u64 * n,
    }
}

/// `nu / L^n`.
pub fn density(spec: &TopologySpec) -> f64 {
    let nu = lattice::node_count(spec) as f64;
    nu / (diameter(spec) as f64).powi(spec.n() as i32)
}

pub fn density_ratio(a: &TopologySpec, b: &TopologySpec) -> f64 {
    density(a) / density(b)
}

/// The matched-parameter pairings with a closed-form density ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchedPair {
    /// hypercube(n) over mesh(mu, n).
    HypercubeOverMesh,
    /// symplectic(M, n) over hypercube(n).
    SymplecticOverHypercube,
    /// symplectic(mu - 1, n) over mesh(mu, n): equal dimension and diameter.
    SymplecticOverMesh,
}

impl MatchedPair {
    pub fn classify(a: &TopologySpec, b: &TopologySpec) -> Option<Self> {
        if a.n() != b.n() {
            return None;
        }
        match (a.family(), b.family()) {
            (Family::Hypercube, Family::Mesh) => Some(MatchedPair::HypercubeOverMesh),
            (Family::Symplectic, Family::Hypercube) => Some(MatchedPair::SymplecticOverHypercube),
            (Family::Symplectic, Family::Mesh)
                if a.highest_weight().map(|m| m + 1) == Some(b.mu()) =>
            {
                Some(MatchedPair::SymplecticOverMesh)
            }
            _ => None,
        }
    }
}

/// Closed form of `density(a) / density(b)` for the matched pairings:
///
/// * hypercube over mesh: `[2 (1 - 1/mu)]^n`
/// * symplectic over hypercube: `((2M+1)^n + 1) / (2 (2M)^n)`
/// * symplectic over mesh with `M = mu - 1`:
///   `2^(n-1) [(1 - 1/(2mu))^n + (2mu)^-n]`
///
/// Reversed pairs give the reciprocal.
pub fn matched_density_ratio(a: &TopologySpec, b: &TopologySpec) -> Option<f64> {
    match MatchedPair::classify(a, b) {
        Some(_) => matched_closed_form(a, b),
        None => matched_closed_form(b, a).map(|r| 1.0 / r),
    }
}

fn matched_closed_form(a: &TopologySpec, b: &TopologySpec) -> Option<f64> {
    let n = a.n() as i32;
    let pair = MatchedPair::classify(a, b)?;
    Some(match pair {
        MatchedPair::HypercubeOverMesh => {
            let mu = b.mu() as f64;
            (2.0 * (1.0 - 1.0 / mu)).powi(n)
        }
        MatchedPair::SymplecticOverHypercube => {
            let m = a.highest_weight()? as f64;
            0.5 * (((2.0 * m + 1.0).powi(n) + 1.0) / (2.0 * m).powi(n))
        }
        MatchedPair::SymplecticOverMesh => {
            let mu = b.mu() as f64;
            2f64.powi(n - 1) * ((1.0 - 1.0 / (2.0 * mu)).powi(n) + (2.0 * mu).powi(-n))
        }
    })
}

/// Nodes up to which [`summary`] confirms degree extrema by enumeration.
const SUMMARY_ENUMERATION_LIMIT: u64 = 10_000;

pub fn summary(spec: &TopologySpec) -> TopologySummary {
    let topo = Topology::new(*spec);
    let (mut eps_min, mut eps_max) = topo.degree_bounds();
    let nu = topo.node_count();
    // M = 1 never reaches 2n^2; report the attained maximum
    if spec.highest_weight() == Some(1) && nu <= SUMMARY_ENUMERATION_LIMIT {
        let degrees = (0..nu).map(|i| topo.degree(spec.kappa_at(i)).unwrap_or(0) as u64);
        let (lo, hi) = degrees.fold((u64::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
        eps_min = lo;
        eps_max = hi;
    }
    TopologySummary {
        spec: *spec,
        nu,
        diameter: diameter(spec),
        eps_max,
        eps_min,
        rho: density(spec),
    }
}

impl fmt::Display for TopologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12}{}", "topology", self.spec)?;
        writeln!(f, "{:<12}{}", "nodes", self.nu)?;
        writeln!(f, "{:<12}{}", "diameter", self.diameter)?;
        writeln!(f, "{:<12}{}", "max_degree", self.eps_max)?;
        writeln!(f, "{:<12}{}", "min_degree", self.eps_min)?;
        write!(f, "{:<12}{:e}", "density", self.rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramMode {
    Exact,
    Sampled { seed: u64, sample_size: u64 },
}

/// Number of node pairs at each distance `d = 1..=diameter`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLengthHistogram {
    pub spec: TopologySpec,
    pub mode: HistogramMode,
    /// Indexed by distance; entry 0 is always zero.
    counts: Vec<u64>,
    pub total_pairs: u64,
    pub mean: f64,
}

impl PathLengthHistogram {
    fn from_counts(spec: TopologySpec, mode: HistogramMode, counts: Vec<u64>) -> Self {
        let total_pairs = counts.iter().sum();
        let mut h = PathLengthHistogram {
            spec,
            mode,
            counts,
            total_pairs,
            mean: f64::NAN,
        };
        if let Ok(mean) = mean_path_length(&h) {
            h.mean = mean;
        }
        h
    }

    pub fn count(&self, d: u64) -> u64 {
        self.counts.get(d as usize).copied().unwrap_or(0)
    }

    /// `(d, count)` for `d = 1..=diameter`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, &c)| (d as u64, c))
    }

    pub fn diameter(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    /// Largest distance with a non-zero count.
    pub fn max_observed(&self) -> u64 {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0) as u64
    }

    pub fn fraction(&self, d: u64) -> f64 {
        self.count(d) as f64 / self.total_pairs as f64
    }

    pub fn variance(&self) -> f64 {
        let t = self.total_pairs as f64;
        let second: f64 = self.iter().map(|(d, c)| (d * d) as f64 * c as f64).sum::<f64>() / t;
        second - self.mean * self.mean
    }

    /// Standard error of the mean, treating the pairs as independent draws.
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.total_pairs as f64).sqrt()
    }

    /// Plot-ready CSV with `#` metadata lines.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# spec={}", self.spec)?;
        match self.mode {
            HistogramMode::Exact => writeln!(w, "# mode=exact")?,
            HistogramMode::Sampled { seed, sample_size } => {
                writeln!(w, "# mode=sampled")?;
                writeln!(w, "# seed={seed}")?;
                writeln!(w, "# sample_size={sample_size}")?;
                writeln!(w, "# sampler={SAMPLER_ID}")?;
            }
        }
        writeln!(w, "# total_pairs={}", self.total_pairs)?;
        writeln!(w, "# mean={}", self.mean)?;
        writeln!(w, "distance,count,fraction")?;
        for (d, c) in self.iter() {
            writeln!(w, "{d},{c},{}", self.fraction(d))?;
        }
        Ok(())
    }
}

/// `sum d * counts[d] / total_pairs`.
pub fn mean_path_length(h: &PathLengthHistogram) -> Result<f64> {
    if h.total_pairs == 0 {
        return Err(Error::Domain("mean of an empty path-length histogram".into()));
    }
    let weighted: u128 = h.iter().map(|(d, c)| d as u128 * c as u128).sum();
    Ok(weighted as f64 / h.total_pairs as f64)
}

fn unordered_pairs(nu: u64) -> Option<u64> {
    (nu as u128 * (nu as u128).saturating_sub(1) / 2).try_into().ok()
}

/// Exact histogram over all unordered pairs of distinct nodes.
pub fn path_length_histogram(spec: &TopologySpec, pair_budget: u64) -> Result<PathLengthHistogram> {
    let nu = lattice::node_count(spec);
    match unordered_pairs(nu) {
        Some(pairs) if pairs <= pair_budget => {}
        _ => {
            return Err(Error::Capacity(format!(
                "{spec} has {nu} nodes; all pairs exceed the pair budget of {pair_budget}, \
                 use the sampled histogram (--sample N --seed S)"
            )))
        }
    }
    let n = spec.n() as usize;
    let mu = spec.mu() as u64;
    let symplectic = spec.is_symplectic();
    let mut coords = vec![0u32; nu as usize * n];
    coords.par_chunks_mut(n).enumerate().for_each(|(i, slot)| {
        decode_into(spec.kappa_at(i as u64), mu, slot);
    });
    let bins = diameter(spec) as usize + 1;
    let counts = (0..nu as usize)
        .into_par_iter()
        .fold(
            || vec![0u64; bins],
            |mut acc, i| {
                let a = &coords[i * n..(i + 1) * n];
                for b in coords[(i + 1) * n..].chunks_exact(n) {
                    acc[lattice_distance(a, b, symplectic) as usize] += 1;
                }
                acc
            },
        )
        .reduce(|| vec![0u64; bins], add_counts);
    Ok(PathLengthHistogram::from_counts(*spec, HistogramMode::Exact, counts))
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

/// Histogram over `sample_size` uniform unordered pairs of distinct nodes.
///
/// Pairs are drawn in fixed chunks of [`SAMPLE_CHUNK`]; chunk `c` uses a
/// ChaCha8 generator seeded with `seed` on stream `c`. Symplectic nodes are
/// drawn through their weight index `p`, which is uniform over nodes.
pub fn path_length_histogram_sampled(
    spec: &TopologySpec,
    sample_size: u64,
    seed: u64,
) -> Result<PathLengthHistogram> {
    if sample_size == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let nu = lattice::node_count(spec);
    if nu < 2 {
        return Err(Error::Domain(format!("{spec} has fewer than two nodes")));
    }
    let n = spec.n() as usize;
    let mu = spec.mu() as u64;
    let symplectic = spec.is_symplectic();
    let bins = diameter(spec) as usize + 1;
    let chunks = sample_size.div_ceil(SAMPLE_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = SAMPLE_CHUNK.min(sample_size - c * SAMPLE_CHUNK);
            let mut acc = vec![0u64; bins];
            let (mut a, mut b) = (vec![0u32; n], vec![0u32; n]);
            for _ in 0..len {
                let (i, j) = loop {
                    let i = rng.gen_range(0..nu);
                    let j = rng.gen_range(0..nu);
                    if i != j {
                        break (i, j);
                    }
                };
                decode_into(spec.kappa_at(i), mu, &mut a);
                decode_into(spec.kappa_at(j), mu, &mut b);
                acc[lattice_distance(&a, &b, symplectic) as usize] += 1;
            }
            acc
        })
        .reduce(|| vec![0u64; bins], add_counts);
    Ok(PathLengthHistogram::from_counts(
        *spec,
        HistogramMode::Sampled { seed, sample_size },
        counts,
    ))
}
