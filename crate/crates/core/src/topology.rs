//! Neighbor enumeration and adjacency for the three topology families.
//!
//! Mesh and hypercube nodes are linked by unit steps `±e_i`; symplectic
//! nodes by the `2n^2` roots of `sp(2n, C)`. A step is accepted only when
//! every coordinate of the target stays inside `[0, mu - 1]`. Testing the
//! label range alone is not enough: on `mesh:mu=3,n=2` the label step
//! `2 -> 3` would link `(2,0)` to `(0,1)`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::lattice::{self, decode_into, Family, NodeAddress, NodeLabel, TopologySpec};
use crate::roots::{self, RootVector};

/// Default cap on the number of undirected edges materialized at once.
pub const DEFAULT_EDGE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    /// All coordinates even.
    Bosonic,
    /// A positive, even number of odd coordinates.
    Fermionic,
}

/// What produced an edge: a unit step along an axis, or a root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Axis { axis: usize, forward: bool },
    Root(RootVector),
}

/// An undirected edge, stored with `a.kappa < b.kappa`; `generator` maps `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: NodeLabel,
    pub b: NodeLabel,
    pub generator: Generator,
}

#[derive(Debug, Clone)]
struct Step {
    moves: Vec<(usize, i8)>,
    offset: i64,
    generator: Generator,
}

impl Step {
    fn target(&self, coords: &[u32], max: u32, kappa: u64) -> Option<u64> {
        for &(axis, d) in &self.moves {
            let v = coords[axis] as i64 + d as i64;
            if v < 0 || v > max as i64 {
                return None;
            }
        }
        Some((kappa as i64 + self.offset) as u64)
    }

    fn is_forward(&self) -> bool {
        self.offset > 0
    }
}

/// A topology with its generator set resolved against the label place values.
#[derive(Debug, Clone)]
pub struct Topology {
    spec: TopologySpec,
    places: Vec<u64>,
    steps: Vec<Step>,
}

impl Topology {
    pub fn new(spec: TopologySpec) -> Self {
        let places = spec.place_values();
        let n = spec.n() as usize;
        let offset = |moves: &[(usize, i8)]| -> i64 {
            moves
                .iter()
                .map(|&(axis, d)| d as i64 * places[axis] as i64)
                .sum()
        };
        let steps = match spec.family() {
            Family::Mesh | Family::Hypercube => (0..n)
                .flat_map(|axis| [(axis, false), (axis, true)])
                .map(|(axis, forward)| {
                    let moves = vec![(axis, if forward { 1 } else { -1 })];
                    Step {
                        offset: offset(&moves),
                        moves,
                        generator: Generator::Axis { axis, forward },
                    }
                })
                .collect(),
            Family::Symplectic => roots::all_roots(spec.n())
                .into_iter()
                .map(|root| {
                    let moves: Vec<_> = root.support().collect();
                    Step {
                        offset: offset(&moves),
                        moves,
                        generator: Generator::Root(root),
                    }
                })
                .collect(),
        };
        Topology {
            spec,
            places,
            steps,
        }
    }

    pub fn spec(&self) -> &TopologySpec {
        &self.spec
    }

    pub fn node_count(&self) -> u64 {
        lattice::node_count(&self.spec)
    }

    /// Number of generators (`2n` or `2n^2`).
    pub fn generator_count(&self) -> usize {
        self.steps.len()
    }

    fn check_node(&self, kappa: u64) -> Result<()> {
        let max = self.spec.lattice_size() - 1;
        if kappa > max {
            return Err(Error::LabelOutOfRange { kappa, max });
        }
        if self.spec.is_symplectic() && kappa % 2 == 1 {
            return Err(Error::Inadmissible(kappa));
        }
        Ok(())
    }

    pub(crate) fn decode(&self, kappa: u64, coords: &mut [u32]) {
        decode_into(kappa, self.spec.mu() as u64, coords);
    }

    /// Calls `f(neighbor_kappa, generator)` for every valid step from the
    /// node at `coords` (label `kappa`), in generator order.
    pub(crate) fn for_each_neighbor(
        &self,
        coords: &[u32],
        kappa: u64,
        mut f: impl FnMut(u64, &Generator),
    ) {
        let max = self.spec.mu() - 1;
        for step in &self.steps {
            if let Some(target) = step.target(coords, max, kappa) {
                f(target, &step.generator);
            }
        }
    }

    /// Sorted labels one generator step away from `kappa`.
    pub fn neighbors(&self, kappa: u64) -> Result<Vec<u64>> {
        self.check_node(kappa)?;
        let mut coords = vec![0; self.places.len()];
        self.decode(kappa, &mut coords);
        let mut out = Vec::with_capacity(self.steps.len());
        self.for_each_neighbor(&coords, kappa, |k, _| out.push(k));
        out.sort_unstable();
        Ok(out)
    }

    pub fn degree(&self, kappa: u64) -> Result<usize> {
        self.check_node(kappa)?;
        let mut coords = vec![0; self.places.len()];
        self.decode(kappa, &mut coords);
        let max = self.spec.mu() - 1;
        Ok(self
            .steps
            .iter()
            .filter(|s| s.target(&coords, max, kappa).is_some())
            .count())
    }

    /// Exact number of undirected edges, counted per generator without
    /// enumerating nodes.
    ///
    /// For a step `r` the valid origins `x` have each `x_k` in
    /// `[max(0, -r_k), min(mu-1, mu-1-r_k)]`. On the symplectic lattice `x`
    /// must also have an even coordinate sum; with `e_k`/`o_k` even/odd
    /// values per range that count is `(prod(e+o) + prod(e-o)) / 2`.
    pub fn edge_count(&self) -> Result<u64> {
        let max = self.spec.mu() as i64 - 1;
        let n = self.places.len();
        let mut total: u128 = 0;
        for step in self.steps.iter().filter(|s| s.is_forward()) {
            let mut all: i128 = 1;
            let mut signed: i128 = 1;
            for axis in 0..n {
                let d = step
                    .moves
                    .iter()
                    .find(|(a, _)| *a == axis)
                    .map_or(0, |&(_, d)| d as i64);
                let lo = 0.max(-d);
                let hi = max.min(max - d);
                let len = (hi - lo + 1).max(0);
                let evens = if len == 0 { 0 } else { hi / 2 - (lo + 1) / 2 + 1 };
                let odds = len - evens;
                all *= len as i128;
                signed *= (evens - odds) as i128;
            }
            total += match self.spec.family() {
                Family::Symplectic => ((all + signed) / 2) as u128,
                _ => all as u128,
            };
        }
        u64::try_from(total)
            .map_err(|_| Error::Capacity(format!("{}: edge count exceeds 64 bits", self.spec)))
    }

    pub fn check_edge_budget(&self, budget: u64) -> Result<u64> {
        let count = self.edge_count()?;
        if count > budget {
            return Err(Error::Capacity(format!(
                "{} has {count} edges, above the edge budget of {budget}; \
                 use the sampled path-length histogram instead of full enumeration",
                self.spec
            )));
        }
        Ok(count)
    }

    /// Edges whose lower endpoint has node index in `range`, ordered by
    /// `(lower, upper)` label. Disjoint ranges give disjoint shards.
    pub fn edges_in_range(&self, range: Range<u64>) -> impl Iterator<Item = Edge> + '_ {
        let end = range.end.min(self.node_count());
        (range.start..end).flat_map(move |index| self.upward_edges(self.spec.kappa_at(index)))
    }

    fn upward_edges(&self, kappa: u64) -> Vec<Edge> {
        let mut coords = vec![0; self.places.len()];
        self.decode(kappa, &mut coords);
        let mut out = Vec::new();
        let spec = &self.spec;
        self.for_each_neighbor(&coords, kappa, |k, g| {
            if k > kappa {
                out.push(Edge {
                    a: label_of(kappa, spec),
                    b: label_of(k, spec),
                    generator: g.clone(),
                });
            }
        });
        out.sort_by_key(|e| e.b.kappa);
        out
    }

    /// Every undirected edge exactly once, ordered by `(min, max)` label.
    pub fn edges(&self, budget: u64) -> Result<impl Iterator<Item = Edge> + '_> {
        self.check_edge_budget(budget)?;
        Ok(self.edges_in_range(0..self.node_count()))
    }

    /// Sparse adjacency with rows indexed by node index (`p` for symplectic).
    pub fn adjacency_matrix(&self, budget: u64) -> Result<SparseAdjacency> {
        let count = self.check_edge_budget(budget)?;
        let mut upper = Vec::with_capacity(count as usize);
        upper.extend(self.edges_in_range(0..self.node_count()).map(|e| {
            (self.spec.index_of(e.a.kappa), self.spec.index_of(e.b.kappa))
        }));
        Ok(SparseAdjacency {
            dim: self.node_count(),
            upper,
        })
    }

    /// Closed-form `(min, max)` degree over all nodes.
    pub fn degree_bounds(&self) -> (u64, u64) {
        let n = self.spec.n() as u64;
        match self.spec.family() {
            Family::Hypercube => (n, n),
            Family::Mesh if self.spec.mu() == 2 => (n, n),
            Family::Mesh => (n, 2 * n),
            Family::Symplectic => {
                let min = n * (n + 1) / 2;
                if self.spec.highest_weight() == Some(1) {
                    (min, symplectic_unit_weight_max_degree(n))
                } else {
                    (min, 2 * n * n)
                }
            }
        }
    }
}

fn label_of(kappa: u64, spec: &TopologySpec) -> NodeLabel {
    NodeLabel {
        kappa,
        p: spec.is_symplectic().then_some(kappa / 2),
    }
}

/// Largest degree on `symplectic:M=1,n`.
///
/// With `M = 1` each coordinate is either at a face (0 or 2: one long
/// move, one unit move) or in the middle (1: no long move, two unit moves).
/// A node with `k` middle coordinates (`k` even) has degree
/// `(n - k) + sum_{i<j} b_i b_j` where `b` is 2 in the middle and 1 at a face.
/// That is below `2n^2` for every `n`, since no node admits both long moves.
pub fn symplectic_unit_weight_max_degree(n: u64) -> u64 {
    (0..=n)
        .step_by(2)
        .map(|k| {
            let b_sum = 2 * k + (n - k);
            let b_sq = 4 * k + (n - k);
            (n - k) + (b_sum * b_sum - b_sq) / 2
        })
        .max()
        .unwrap_or(0)
}

/// Symmetric 0/1 matrix stored as its strict upper triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseAdjacency {
    dim: u64,
    upper: Vec<(u64, u64)>,
}

impl SparseAdjacency {
    pub fn dim(&self) -> u64 {
        self.dim
    }

    /// `(row, col)` with `row < col`, sorted.
    pub fn upper_entries(&self) -> &[(u64, u64)] {
        &self.upper
    }

    pub fn edge_count(&self) -> usize {
        self.upper.len()
    }

    /// Number of non-zero entries of the full symmetric matrix.
    pub fn nnz(&self) -> usize {
        2 * self.upper.len()
    }

    pub fn get(&self, i: u64, j: u64) -> bool {
        let key = (i.min(j), i.max(j));
        i != j && self.upper.binary_search(&key).is_ok()
    }

    pub fn row_degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.dim as usize];
        for &(i, j) in &self.upper {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        deg
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let d = self.dim as usize;
        let mut m = vec![vec![0u8; d]; d];
        for &(i, j) in &self.upper {
            m[i as usize][j as usize] = 1;
            m[j as usize][i as usize] = 1;
        }
        m
    }
}

/// Bosonic iff every coordinate is even.
pub fn classify(address: &NodeAddress) -> Result<NodeClass> {
    match address.odd_count() {
        0 => Ok(NodeClass::Bosonic),
        k if k % 2 == 0 => Ok(NodeClass::Fermionic),
        k => Err(Error::Domain(format!(
            "{address} has {k} odd coordinates and is not a symplectic lattice node"
        ))),
    }
}

pub fn neighbors(kappa: u64, spec: &TopologySpec) -> Result<Vec<u64>> {
    Topology::new(*spec).neighbors(kappa)
}

pub fn degree(kappa: u64, spec: &TopologySpec) -> Result<usize> {
    Topology::new(*spec).degree(kappa)
}

/// All edges under the default budget.
pub fn edges(spec: &TopologySpec) -> Result<Vec<Edge>> {
    let topo = Topology::new(*spec);
    let edges = topo.edges(DEFAULT_EDGE_BUDGET)?.collect();
    Ok(edges)
}

pub fn adjacency_matrix(spec: &TopologySpec) -> Result<SparseAdjacency> {
    Topology::new(*spec).adjacency_matrix(DEFAULT_EDGE_BUDGET)
}
