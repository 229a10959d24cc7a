//! Node addressing on the lattice `[0, mu)^n`.
//!
//! A node is located by its coordinates `(l_1, ..., l_n)` and carries the
//! scalar label `kappa = l_1 + l_2 mu + ... + l_n mu^(n-1)`, so `l_1` is the
//! least significant digit. The choice only fixes how nodes are numbered;
//! every metric in this crate is independent of it.
//!
//! The symplectic lattice of the representation with highest weight
//! `(M, ..., M)` lives on `[0, 2M]^n` with `mu = 2M + 1`. Weight
//! coordinates are recovered as `m_i = l_i - M`. Because `mu` is odd the
//! parity of `kappa` equals the parity of `sum(l_i)`, and the symplectic
//! nodes are exactly the even labels `kappa = 2p`.

use std::fmt;

use crate::error::{Error, Result};

/// Topology family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Mesh,
    Hypercube,
    Symplectic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Mesh => "mesh",
            Family::Hypercube => "hypercube",
            Family::Symplectic => "symplectic",
        })
    }
}

/// A validated topology: family, dimension `n` and side length `mu`.
///
/// Construction guarantees that `mu^n` fits in a `u64`, so labels and node
/// counts never need wider arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TopologySpec {
    family: Family,
    n: u32,
    mu: u32,
    highest_weight: Option<u32>,
}

impl TopologySpec {
    pub fn mesh(mu: u32, n: u32) -> Result<Self> {
        if mu < 2 {
            return Err(Error::InvalidSpec(format!("mesh side length mu must be >= 2, got {mu}")));
        }
        Self::checked(Family::Mesh, n, mu, None)
    }

    pub fn hypercube(n: u32) -> Result<Self> {
        Self::checked(Family::Hypercube, n, 2, None)
    }

    /// The symplectic lattice of the representation with highest weight `(M, ..., M)`.
    pub fn symplectic(m: u32, n: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidSpec(format!("highest weight M must be >= 1, got {m}")));
        }
        let mu = m
            .checked_mul(2)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::Capacity(format!("2M+1 overflows for M = {m}")))?;
        Self::checked(Family::Symplectic, n, mu, Some(m))
    }

    fn checked(family: Family, n: u32, mu: u32, highest_weight: Option<u32>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSpec(format!("dimension n must be >= 1, got {n}")));
        }
        let spec = TopologySpec {
            family,
            n,
            mu,
            highest_weight,
        };
        if (mu as u64).checked_pow(n).is_none() {
            return Err(Error::Capacity(format!(
                "{spec}: lattice size {mu}^{n} does not fit in 64 bits"
            )));
        }
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Lattice dimension (algebra rank for symplectic topologies).
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    /// `M` for symplectic topologies.
    pub fn highest_weight(&self) -> Option<u32> {
        self.highest_weight
    }

    pub fn is_symplectic(&self) -> bool {
        self.family == Family::Symplectic
    }

    /// `mu^n`, the number of points of the enclosing lattice.
    pub fn lattice_size(&self) -> u64 {
        (self.mu as u64).pow(self.n)
    }

    /// `[1, mu, mu^2, ..., mu^(n-1)]`.
    pub fn place_values(&self) -> Vec<u64> {
        let mu = self.mu as u64;
        std::iter::successors(Some(1u64), |p| Some(p * mu))
            .take(self.n as usize)
            .collect()
    }

    /// Contiguous node index of an admissible label: `kappa` itself for
    /// mesh and hypercube, `p = kappa / 2` for symplectic.
    pub fn index_of(&self, kappa: u64) -> u64 {
        if self.is_symplectic() {
            kappa / 2
        } else {
            kappa
        }
    }

    /// Inverse of [`TopologySpec::index_of`].
    pub fn kappa_at(&self, index: u64) -> u64 {
        if self.is_symplectic() {
            index * 2
        } else {
            index
        }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Mesh => write!(f, "mesh:mu={},n={}", self.mu, self.n),
            Family::Hypercube => write!(f, "hypercube:n={}", self.n),
            Family::Symplectic => write!(
                f,
                "symplectic:M={},n={}",
                self.highest_weight.unwrap_or_default(),
                self.n
            ),
        }
    }
}

/// Lattice coordinates `(l_1, ..., l_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeAddress(Vec<u32>);

impl NodeAddress {
    pub fn new(coords: Vec<u32>) -> Self {
        NodeAddress(coords)
    }

    pub fn origin(n: u32) -> Self {
        NodeAddress(vec![0; n as usize])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Number of odd coordinates.
    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|&&l| l % 2 == 1).count()
    }

    /// Weight coordinates `m_i = l_i - M` for a symplectic spec.
    pub fn weight(&self, m: u32) -> Vec<i64> {
        self.0.iter().map(|&l| l as i64 - m as i64).collect()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for NodeAddress {
    fn from(coords: Vec<u32>) -> Self {
        NodeAddress(coords)
    }
}

impl fmt::Display for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// Scalar node label; `p` is the weight index for symplectic specs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeLabel {
    pub kappa: u64,
    pub p: Option<u64>,
}

impl NodeLabel {
    fn for_spec(kappa: u64, spec: &TopologySpec) -> Self {
        NodeLabel {
            kappa,
            p: spec.is_symplectic().then_some(kappa / 2),
        }
    }
}

/// Checks dimension and the coordinate range `0 <= l_i <= mu - 1`.
pub fn check_range(address: &NodeAddress, spec: &TopologySpec) -> Result<()> {
    if address.dim() != spec.n() as usize {
        return Err(Error::DimensionMismatch {
            expected: spec.n() as usize,
            got: address.dim(),
        });
    }
    let max = spec.mu() - 1;
    match address.coords().iter().position(|&l| l > max) {
        Some(i) => Err(Error::CoordinateOutOfRange {
            axis: i + 1,
            value: address.coords()[i],
            max: max as u64,
        }),
        None => Ok(()),
    }
}

/// `kappa = sum_i l_i mu^(i-1)`.
pub fn label(address: &NodeAddress, spec: &TopologySpec) -> Result<NodeLabel> {
    check_range(address, spec)?;
    let kappa = address
        .coords()
        .iter()
        .zip(spec.place_values())
        .map(|(&l, place)| l as u64 * place)
        .sum();
    if spec.is_symplectic() && kappa % 2 == 1 {
        return Err(Error::Inadmissible(kappa));
    }
    Ok(NodeLabel::for_spec(kappa, spec))
}

/// Inverse labeling: starting from `r_n = kappa`, peel off
/// `l_i = floor(r_i / mu^(i-1))` for `i = n, ..., 2` and finish with `l_1 = r_1`.
pub fn unlabel(kappa: u64, spec: &TopologySpec) -> Result<NodeAddress> {
    let max = spec.lattice_size() - 1;
    if kappa > max {
        return Err(Error::LabelOutOfRange { kappa, max });
    }
    if spec.is_symplectic() && kappa % 2 == 1 {
        return Err(Error::Inadmissible(kappa));
    }
    let places = spec.place_values();
    let mut coords = vec![0u32; places.len()];
    let mut rest = kappa;
    for i in (1..places.len()).rev() {
        let l = rest / places[i];
        rest -= l * places[i];
        coords[i] = l as u32;
    }
    coords[0] = rest as u32;
    Ok(NodeAddress(coords))
}

/// Mesh and hypercube nodes are always admissible; a symplectic node must
/// have an even number of odd coordinates (equivalently an even label).
pub fn is_admissible(address: &NodeAddress, spec: &TopologySpec) -> bool {
    !spec.is_symplectic() || address.odd_count().is_multiple_of(2)
}

/// `2^n`, `mu^n` or `((2M+1)^n + 1) / 2`.
pub fn node_count(spec: &TopologySpec) -> u64 {
    let size = spec.lattice_size();
    match spec.family() {
        Family::Mesh | Family::Hypercube => size,
        // size is odd, so (size + 1) / 2 cannot overflow when written this way
        Family::Symplectic => size / 2 + 1,
    }
}

/// Decodes `kappa` into `out` without allocating. The caller guarantees
/// `kappa < mu^n` and `out.len() == n`.
pub(crate) fn decode_into(mut kappa: u64, mu: u64, out: &mut [u32]) {
    for slot in out.iter_mut() {
        *slot = (kappa % mu) as u32;
        kappa /= mu;
    }
}
