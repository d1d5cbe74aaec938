use crate::bits::BitString;
use crate::error::{invalid, Result};

use super::Problem;

/// Ordered index pairs `(i, j)`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    pub fn new(edges: Vec<(usize, usize)>) -> Self {
        Self { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn as_slice(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn max_index(&self) -> Option<usize> {
        self.edges.iter().map(|&(i, j)| i.max(j)).max()
    }
}

/// Ring: every `i` paired with `(i + 1) mod s`.
pub fn edges_1d(s: usize) -> Result<EdgeSet> {
    if s < 3 {
        return invalid(format!("a ring needs at least 3 nodes, got {s}"));
    }
    Ok(EdgeSet::new((0..s).map(|i| (i, (i + 1) % s)).collect()))
}

/// Torus of side `N`, cell `a + b*N`: each cell paired with its right
/// (`a + 1 mod N`) and down (`b + 1 mod N`) neighbour. At `N = 2` this yields
/// both orientations of each adjacency; they are kept.
pub fn edges_2d(side: usize) -> Result<EdgeSet> {
    if side < 2 {
        return invalid(format!("a torus needs side >= 2, got {side}"));
    }
    let mut edges = Vec::with_capacity(2 * side * side);
    for b in 0..side {
        for a in 0..side {
            let cell = a + b * side;
            edges.push((cell, (a + 1) % side + b * side));
            edges.push((cell, a + ((b + 1) % side) * side));
        }
    }
    Ok(EdgeSet::new(edges))
}

/// Number of edges whose endpoints disagree.
pub fn ising(x: &BitString, edges: &EdgeSet) -> Result<u64> {
    if edges.max_index().is_some_and(|m| m >= x.len()) {
        return invalid(format!("edge index out of range for length {}", x.len()));
    }
    Ok(count_disagreements(x, edges))
}

fn count_disagreements(x: &BitString, edges: &EdgeSet) -> u64 {
    edges
        .edges
        .iter()
        .filter(|&&(i, j)| x.get(i) != x.get(j))
        .count() as u64
}

#[derive(Clone, Debug)]
pub struct Ising {
    name: &'static str,
    scale: usize,
    side: Option<usize>,
    edges: EdgeSet,
}

impl Ising {
    pub fn ring(s: usize) -> Result<Self> {
        Ok(Self {
            name: "ising1d",
            scale: s,
            side: None,
            edges: edges_1d(s)?,
        })
    }

    pub fn torus(side: usize) -> Result<Self> {
        Ok(Self {
            name: "ising2d",
            scale: side * side,
            side: Some(side),
            edges: edges_2d(side)?,
        })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }
}

impl Problem for Ising {
    fn name(&self) -> &str {
        self.name
    }

    fn instance(&self) -> String {
        match self.side {
            Some(n) => format!("s={},N={n}", self.scale),
            None => format!("s={}", self.scale),
        }
    }

    fn scale(&self) -> usize {
        self.scale
    }

    fn upper_bound(&self) -> u64 {
        self.edges.len() as u64
    }

    fn evaluate(&self, x: &BitString) -> u64 {
        count_disagreements(x, &self.edges)
    }
}
