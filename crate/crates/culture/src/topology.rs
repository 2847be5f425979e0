//! Neighbourhood structures for the field.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{CultureError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Neighborhood {
    /// Four orthogonal neighbours.
    #[default]
    VonNeumann,
    /// Eight neighbours, diagonals included.
    Moore,
}

/// How agents are laid out. Serialized with a `kind` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TopologySpec {
    /// Rectangular grid with hard edges.
    Square {
        width: usize,
        height: usize,
        #[serde(default)]
        neighborhood: Neighborhood,
    },
    /// A coiled strip: `i±1` along the coil, `i±turn` across turns, and the
    /// two ends joined. `turn` defaults to the rounded square root of `agents`.
    MobianCircle {
        agents: usize,
        #[serde(default)]
        turn: Option<usize>,
    },
    /// The non-empty subsets of `elements` items, each linked to the parent
    /// obtained by adding its smallest missing element.
    SubsetTree { elements: usize },
    /// The same subsets, linked whenever they differ by one element.
    SubsetLattice { elements: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    Square,
    MobianCircle,
    SubsetTree,
    SubsetLattice,
}

/// Symmetric neighbour lists plus a 2-D coordinate per position.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    kind: TopologyKind,
    neighbors: Vec<Vec<usize>>,
    coords: Vec<(usize, usize)>,
}

impl Topology {
    pub fn build(spec: &TopologySpec) -> Result<Topology> {
        match *spec {
            TopologySpec::Square { width, height, neighborhood } => square(width, height, neighborhood),
            TopologySpec::MobianCircle { agents, turn } => mobian_circle(agents, turn),
            TopologySpec::SubsetTree { elements } => subset_graph(elements, false),
            TopologySpec::SubsetLattice { elements } => subset_graph(elements, true),
        }
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn coords(&self, i: usize) -> (usize, usize) {
        self.coords[i]
    }

    pub fn degree_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut h = std::collections::BTreeMap::new();
        for n in &self.neighbors {
            *h.entry(n.len()).or_insert(0) += 1;
        }
        h
    }

    /// All unordered adjacent pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    fn from_sets(kind: TopologyKind, sets: Vec<BTreeSet<usize>>, coords: Vec<(usize, usize)>) -> Topology {
        Topology { kind, neighbors: sets.into_iter().map(|s| s.into_iter().collect()).collect(), coords }
    }
}

fn link(sets: &mut [BTreeSet<usize>], a: usize, b: usize) {
    if a != b {
        sets[a].insert(b);
        sets[b].insert(a);
    }
}

fn square(width: usize, height: usize, nb: Neighborhood) -> Result<Topology> {
    if width == 0 || height == 0 {
        return Err(CultureError::InvalidConfig("square field needs positive width and height".into()));
    }
    let n = width * height;
    let mut sets = vec![BTreeSet::new(); n];
    let offsets: &[(isize, isize)] = match nb {
        Neighborhood::VonNeumann => &[(1, 0), (0, 1)],
        Neighborhood::Moore => &[(1, 0), (0, 1), (1, 1), (1, -1)],
    };
    for y in 0..height {
        for x in 0..width {
            for &(dx, dy) in offsets {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx >= 0 && ny >= 0 && (nx as usize) < width && (ny as usize) < height {
                    link(&mut sets, y * width + x, ny as usize * width + nx as usize);
                }
            }
        }
    }
    let coords = (0..n).map(|i| (i % width, i / width)).collect();
    Ok(Topology::from_sets(TopologyKind::Square, sets, coords))
}

fn mobian_circle(agents: usize, turn: Option<usize>) -> Result<Topology> {
    let t = turn.unwrap_or_else(|| ((agents as f64).sqrt().round() as usize).max(1));
    if agents < 3 || t == 0 || 2 * t >= agents {
        return Err(CultureError::InvalidConfig(format!(
            "coil of {agents} agents cannot have turns of {t}"
        )));
    }
    let mut sets = vec![BTreeSet::new(); agents];
    for i in 0..agents {
        if i + 1 < agents {
            link(&mut sets, i, i + 1);
        }
        if i + t < agents {
            link(&mut sets, i, i + t);
        }
    }
    link(&mut sets, 0, agents - 1);
    let coords = (0..agents).map(|i| (i % t, i / t)).collect();
    Ok(Topology::from_sets(TopologyKind::MobianCircle, sets, coords))
}

/// Number of positions in a subset tree over `elements` items: Σ C(n, i) for
/// i = 1..n, i.e. 2ⁿ − 1.
pub fn subset_count(elements: usize) -> usize {
    (1usize << elements) - 1
}

/// Parent of a non-empty proper subset: add its smallest missing element.
/// The full set has no parent.
pub fn subset_parent(mask: u64, elements: usize) -> Option<u64> {
    let full = (1u64 << elements) - 1;
    if mask == full {
        return None;
    }
    let missing = !mask & full;
    Some(mask | (missing & missing.wrapping_neg()))
}

fn subset_graph(elements: usize, lattice: bool) -> Result<Topology> {
    if elements == 0 || elements > 20 {
        return Err(CultureError::InvalidConfig("subset topologies need 1..=20 elements".into()));
    }
    let n = subset_count(elements);
    // position i holds the subset with bitmask i + 1
    let mut sets = vec![BTreeSet::new(); n];
    for i in 0..n {
        let mask = i as u64 + 1;
        if lattice {
            for e in 0..elements {
                let other = mask ^ (1 << e);
                if other != 0 {
                    link(&mut sets, i, other as usize - 1);
                }
            }
        } else if let Some(p) = subset_parent(mask, elements) {
            link(&mut sets, i, p as usize - 1);
        }
    }
    let coords = (0..n).map(|i| (i + 1, (i as u64 + 1).count_ones() as usize)).collect();
    let kind = if lattice { TopologyKind::SubsetLattice } else { TopologyKind::SubsetTree };
    Ok(Topology::from_sets(kind, sets, coords))
}
