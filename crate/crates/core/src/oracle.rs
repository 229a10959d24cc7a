//! Brute-force verification of the closed-form metrics.
//!
//! Adjacency comes only from [`Topology`] neighbor enumeration and
//! distances only from plain BFS, so nothing here shares code with the
//! taxicab formulas in [`crate::metrics`].

use std::collections::VecDeque;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{unlabel, Family, TopologySpec};
use crate::metrics;
use crate::topology::{Topology, DEFAULT_EDGE_BUDGET};

/// Default node cap for all-pairs verification.
pub const DEFAULT_VERIFY_NODES: u64 = 2_000;

const UNREACHED: u32 = u32::MAX;

/// Adjacency lists indexed by node index.
#[derive(Debug, Clone)]
pub struct AdjacencyLists {
    spec: TopologySpec,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl AdjacencyLists {
    pub fn build(topo: &Topology, edge_budget: u64) -> Result<Self> {
        let spec = *topo.spec();
        let nu = topo.node_count();
        if topo.edge_count()? > edge_budget || nu > u32::MAX as u64 {
            return Err(Error::Capacity(format!(
                "{spec} is too large to materialize for breadth-first search"
            )));
        }
        let mut offsets = Vec::with_capacity(nu as usize + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for i in 0..nu {
            for k in topo.neighbors(spec.kappa_at(i))? {
                targets.push(spec.index_of(k) as u32);
            }
            offsets.push(targets.len());
        }
        Ok(AdjacencyLists {
            spec,
            offsets,
            targets,
        })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, index: usize) -> &[u32] {
        &self.targets[self.offsets[index]..self.offsets[index + 1]]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.offsets[index + 1] - self.offsets[index]
    }

    /// Hop counts from `source` (a node index) to every node index.
    pub fn bfs(&self, source: usize) -> Result<Vec<u32>> {
        let mut dist = vec![UNREACHED; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        let mut reached = 1u64;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                let v = v as usize;
                if dist[v] == UNREACHED {
                    dist[v] = dist[u] + 1;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        if reached != self.node_count() as u64 {
            return Err(Error::Disconnected {
                source_label: self.spec.kappa_at(source as u64),
                reached,
                total: self.node_count() as u64,
            });
        }
        Ok(dist)
    }
}

/// Single-source BFS distances, indexed by node index (`p` for symplectic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsDistances {
    spec: TopologySpec,
    dist: Vec<u32>,
}

impl BfsDistances {
    /// Distance to the node with label `kappa`.
    pub fn get(&self, kappa: u64) -> Option<u32> {
        self.dist.get(self.spec.index_of(kappa) as usize).copied()
    }

    pub fn by_index(&self) -> &[u32] {
        &self.dist
    }

    /// `(kappa, distance)` in label order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.dist
            .iter()
            .enumerate()
            .map(|(i, &d)| (self.spec.kappa_at(i as u64), d))
    }
}

pub fn bfs_distances(source: u64, spec: &TopologySpec) -> Result<BfsDistances> {
    let topo = Topology::new(*spec);
    topo.neighbors(source)?;
    let adj = AdjacencyLists::build(&topo, DEFAULT_EDGE_BUDGET)?;
    let dist = adj.bfs(spec.index_of(source) as usize)?;
    Ok(BfsDistances { spec: *spec, dist })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub kappa_a: u64,
    pub kappa_b: u64,
    pub closed_form: u64,
    pub bfs: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub spec: TopologySpec,
    pub pairs_checked: u64,
    pub mismatches: Vec<Mismatch>,
    pub max_degree_seen: u64,
    pub min_degree_seen: u64,
    /// Expected `(min, max)` degree from the closed forms.
    pub expected_degrees: (u64, u64),
    pub degree_violations: Vec<String>,
}

impl OracleReport {
    pub fn is_certified(&self) -> bool {
        self.mismatches.is_empty() && self.degree_violations.is_empty()
    }

    /// `kappa_a,kappa_b,closed_form,bfs`
    pub fn write_mismatch_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "kappa_a,kappa_b,closed_form,bfs")?;
        for m in &self.mismatches {
            writeln!(w, "{},{},{},{}", m.kappa_a, m.kappa_b, m.closed_form, m.bfs)?;
        }
        Ok(())
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "topology        {}", self.spec)?;
        writeln!(f, "nodes           {}", crate::lattice::node_count(&self.spec))?;
        writeln!(f, "pairs_checked   {}", self.pairs_checked)?;
        writeln!(f, "mismatches      {}", self.mismatches.len())?;
        writeln!(
            f,
            "degree_min      {} (expected {})",
            self.min_degree_seen, self.expected_degrees.0
        )?;
        writeln!(
            f,
            "degree_max      {} (expected {})",
            self.max_degree_seen, self.expected_degrees.1
        )?;
        for v in &self.degree_violations {
            writeln!(f, "violation       {v}")?;
        }
        write!(
            f,
            "status          {}",
            if self.is_certified() { "certified" } else { "FAILED" }
        )
    }
}

/// Degree extrema checked against the closed forms. For symplectic
/// topologies the minimum must be `n(n+1)/2` and, when `M >= 2`, the
/// maximum `2n^2`; with `M = 1` the attained maximum is only reported.
fn degree_check(spec: &TopologySpec, adj: &AdjacencyLists) -> (u64, u64, (u64, u64), Vec<String>) {
    let degrees = (0..adj.node_count()).map(|i| adj.degree(i) as u64);
    let (min, max) = degrees.fold((u64::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
    let n = spec.n() as u64;
    let mut violations = Vec::new();
    let expected = match spec.family() {
        Family::Symplectic => {
            let table_min = n * (n + 1) / 2;
            let table_max = 2 * n * n;
            if min != table_min {
                violations.push(format!("minimum degree {min} != n(n+1)/2 = {table_min}"));
            }
            if spec.highest_weight() == Some(1) {
                if max >= table_max {
                    violations.push(format!("M = 1 maximum degree {max} reaches 2n^2 = {table_max}"));
                }
                (table_min, Topology::new(*spec).degree_bounds().1)
            } else {
                if max != table_max {
                    violations.push(format!("maximum degree {max} != 2n^2 = {table_max}"));
                }
                (table_min, table_max)
            }
        }
        _ => {
            let bounds = Topology::new(*spec).degree_bounds();
            if (min, max) != bounds {
                violations.push(format!(
                    "degree range [{min}, {max}] != expected [{}, {}]",
                    bounds.0, bounds.1
                ));
            }
            bounds
        }
    };
    (min, max, expected, violations)
}

/// All-pairs BFS compared with the closed-form distance.
pub fn verify_distances(spec: &TopologySpec, max_nodes: u64) -> Result<OracleReport> {
    let topo = Topology::new(*spec);
    let nu = topo.node_count();
    if nu > max_nodes {
        return Err(Error::Capacity(format!(
            "{spec} has {nu} nodes, above the verification budget of {max_nodes}; try a smaller topology"
        )));
    }
    let adj = AdjacencyLists::build(&topo, u64::MAX)?;
    let nodes = (0..nu)
        .map(|i| unlabel(spec.kappa_at(i), spec))
        .collect::<Result<Vec<_>>>()?;
    let mut mismatches = (0..nu as usize)
        .into_par_iter()
        .map(|i| -> Result<Vec<Mismatch>> {
            let dist = adj.bfs(i)?;
            let mut bad = Vec::new();
            for j in i + 1..nodes.len() {
                let closed = metrics::distance(&nodes[i], &nodes[j], spec)?;
                if closed != dist[j] as u64 {
                    bad.push(Mismatch {
                        kappa_a: spec.kappa_at(i as u64),
                        kappa_b: spec.kappa_at(j as u64),
                        closed_form: closed,
                        bfs: dist[j] as u64,
                    });
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    mismatches.sort_by_key(|m| (m.kappa_a, m.kappa_b));
    let (min, max, expected, degree_violations) = degree_check(spec, &adj);
    Ok(OracleReport {
        spec: *spec,
        pairs_checked: nu * (nu - 1) / 2,
        mismatches,
        max_degree_seen: max,
        min_degree_seen: min,
        expected_degrees: expected,
        degree_violations,
    })
}

/// Degree enumeration only; no distances are checked.
pub fn verify_degree_bounds(spec: &TopologySpec, edge_budget: u64) -> Result<OracleReport> {
    let topo = Topology::new(*spec);
    let adj = AdjacencyLists::build(&topo, edge_budget)?;
    let (min, max, expected, degree_violations) = degree_check(spec, &adj);
    Ok(OracleReport {
        spec: *spec,
        pairs_checked: 0,
        mismatches: Vec::new(),
        max_degree_seen: max,
        min_degree_seen: min,
        expected_degrees: expected,
        degree_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(m: u32, n: u32) -> TopologySpec {
        TopologySpec::symplectic(m, n).unwrap()
    }

    #[test]
    fn bfs_examples() {
        let d = bfs_distances(0, &sp(1, 2)).unwrap();
        assert_eq!(
            d.iter().collect::<Vec<_>>(),
            vec![(0, 0), (2, 1), (4, 1), (6, 1), (8, 2)]
        );
        let h = bfs_distances(0, &TopologySpec::hypercube(3).unwrap()).unwrap();
        assert_eq!(h.get(7), Some(3));
        assert_eq!(h.get(0), Some(0));
        assert!(bfs_distances(1, &sp(1, 2)).is_err());
    }

    #[test]
    fn certification_examples() {
        for spec in [sp(2, 2), sp(3, 3), TopologySpec::mesh(4, 3).unwrap()] {
            let r = verify_distances(&spec, DEFAULT_VERIFY_NODES).unwrap();
            assert!(r.is_certified(), "{r}");
        }
        let r = verify_distances(&TopologySpec::mesh(4, 3).unwrap(), 100).unwrap();
        assert_eq!((r.min_degree_seen, r.max_degree_seen), (3, 6));
        assert_eq!(r.pairs_checked, 64 * 63 / 2);
    }

    #[test]
    fn degree_bound_examples() {
        let r = verify_degree_bounds(&sp(2, 2), DEFAULT_EDGE_BUDGET).unwrap();
        assert_eq!((r.min_degree_seen, r.max_degree_seen), (3, 8));
        assert!(r.is_certified());
        let r = verify_degree_bounds(&sp(1, 2), DEFAULT_EDGE_BUDGET).unwrap();
        assert_eq!((r.min_degree_seen, r.max_degree_seen), (3, 4));
        assert!(r.is_certified());
        let r = verify_degree_bounds(&TopologySpec::hypercube(5).unwrap(), DEFAULT_EDGE_BUDGET).unwrap();
        assert_eq!((r.min_degree_seen, r.max_degree_seen), (5, 5));
    }

    #[test]
    fn budget_rejects_large_specs() {
        assert!(matches!(
            verify_distances(&TopologySpec::hypercube(12).unwrap(), DEFAULT_VERIFY_NODES),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn bfs_is_symmetric_and_triangular() {
        let spec = sp(2, 3);
        let topo = Topology::new(spec);
        let adj = AdjacencyLists::build(&topo, u64::MAX).unwrap();
        let all: Vec<_> = (0..adj.node_count()).map(|i| adj.bfs(i).unwrap()).collect();
        for i in (0..all.len()).step_by(5) {
            for j in (0..all.len()).step_by(3) {
                assert_eq!(all[i][j], all[j][i]);
                for k in (0..all.len()).step_by(7) {
                    assert!(all[i][k] <= all[i][j] + all[j][k]);
                }
            }
        }
    }

    #[test]
    fn report_rendering() {
        let r = verify_distances(&sp(1, 2), 10).unwrap();
        let text = r.to_string();
        assert!(text.contains("mismatches      0"));
        assert!(text.ends_with("certified"));
        let mut buf = Vec::new();
        r.write_mismatch_csv(&mut buf).unwrap();
        assert_eq!(buf, b"kappa_a,kappa_b,closed_form,bfs\n");
    }
}
