//! Root system of `sp(2n, C)`: long roots `±2e_i` and short roots `±e_i ± e_j`.
//!
//! These are the edge generators of the symplectic topology. All lists are
//! returned sorted lexicographically by components so that neighbor and edge
//! enumeration is deterministic.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    Long,
    Short,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootSign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    components: Vec<i8>,
}

impl RootVector {
    fn long(n: usize, axis: usize, sign: i8) -> Self {
        let mut components = vec![0; n];
        components[axis] = 2 * sign;
        RootVector { components }
    }

    fn short(n: usize, i: usize, si: i8, j: usize, sj: i8) -> Self {
        let mut components = vec![0; n];
        components[i] = si;
        components[j] = sj;
        RootVector { components }
    }

    pub fn components(&self) -> &[i8] {
        &self.components
    }

    pub fn kind(&self) -> RootKind {
        if self.support().count() == 1 {
            RootKind::Long
        } else {
            RootKind::Short
        }
    }

    /// Sign of the first non-zero component.
    pub fn sign(&self) -> RootSign {
        match self.components.iter().find(|&&c| c != 0) {
            Some(&c) if c > 0 => RootSign::Positive,
            _ => RootSign::Negative,
        }
    }

    /// No negative component.
    pub fn is_strictly_positive(&self) -> bool {
        self.components.iter().all(|&c| c >= 0)
    }

    pub fn negated(&self) -> Self {
        RootVector {
            components: self.components.iter().map(|&c| -c).collect(),
        }
    }

    /// `(axis, component)` for every non-zero component.
    pub fn support(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
    }

    pub fn l1_norm(&self) -> u32 {
        self.components.iter().map(|&c| c.unsigned_abs() as u32).sum()
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn sorted(mut roots: Vec<RootVector>) -> Vec<RootVector> {
    roots.sort();
    roots
}

/// The `2n` long roots `±2e_i`.
pub fn long_roots(n: u32) -> Vec<RootVector> {
    let n = n as usize;
    sorted(
        (0..n)
            .flat_map(|i| [RootVector::long(n, i, 1), RootVector::long(n, i, -1)])
            .collect(),
    )
}

/// The `2n(n-1)` short roots `±e_i ± e_j`, `i < j`.
pub fn short_roots(n: u32) -> Vec<RootVector> {
    let n = n as usize;
    let mut roots = Vec::with_capacity(2 * n * n.saturating_sub(1));
    for i in 0..n {
        for j in i + 1..n {
            for si in [1, -1] {
                for sj in [1, -1] {
                    roots.push(RootVector::short(n, i, si, j, sj));
                }
            }
        }
    }
    sorted(roots)
}

/// All `2n^2` roots.
pub fn all_roots(n: u32) -> Vec<RootVector> {
    let mut roots = long_roots(n);
    roots.extend(short_roots(n));
    sorted(roots)
}

/// The `n^2` roots whose first non-zero component is positive.
pub fn positive_roots(n: u32) -> Vec<RootVector> {
    all_roots(n)
        .into_iter()
        .filter(|r| r.sign() == RootSign::Positive)
        .collect()
}

/// The `n(n+1)/2` roots with no negative component: `2e_i` and `e_i + e_j`.
/// These are the only moves available at the lattice origin.
pub fn strictly_positive_roots(n: u32) -> Vec<RootVector> {
    all_roots(n)
        .into_iter()
        .filter(RootVector::is_strictly_positive)
        .collect()
}
