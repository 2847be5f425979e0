//! Digraphs, bigraphs, posets and take-grant graphs.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LabeledMatrix;
use crate::order::{PolicySet, PreferenceOrder};

/// Default cap on vertex count for Hamiltonian-path style enumerations.
pub const DEFAULT_PATH_CAP: usize = 10;

type BoolMatrix = Vec<Vec<bool>>;

fn closure_of(adj: &BoolMatrix) -> BoolMatrix {
    let n = adj.len();
    let mut r = adj.clone();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Directed graph over labelled vertices. Edges form a set.
#[derive(Clone, PartialEq, Debug)]
pub struct Digraph {
    vertices: PolicySet,
    adj: BoolMatrix,
}

#[derive(Serialize, Deserialize)]
struct DigraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Digraph {
    pub fn new(vertices: PolicySet, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
            }
            adj[u][v] = true;
        }
        Ok(Digraph { vertices, adj })
    }

    pub fn from_labels<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let ps = PolicySet::new(vertices.iter().map(|s| s.as_ref().to_string()))?;
        let idx = |l: &S| {
            ps.index_of(l.as_ref())
                .ok_or_else(|| Error::UnknownVertex(l.as_ref().to_string()))
        };
        let e = edges
            .iter()
            .map(|(u, v)| Ok((idx(u)?, idx(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Digraph::new(ps, e)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DigraphDoc = serde_json::from_str(text)?;
        Digraph::from_labels(&doc.vertices, &doc.edges)
    }

    pub fn to_json(&self) -> String {
        let doc = DigraphDoc {
            vertices: self.vertices.labels().to_vec(),
            edges: self
                .edges()
                .map(|(u, v)| (self.vertices.label(u).into(), self.vertices.label(v).into()))
                .collect(),
        };
        serde_json::to_string(&doc).expect("digraph serializes")
    }

    pub fn vertices(&self) -> &PolicySet {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    /// Edges in lexicographic index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |u| (0..n).filter(move |&v| self.adj[u][v]).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().flatten().filter(|&&b| b).count()
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.adj[u][v])
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adj
    }

    /// Strongly connected components via mutual reachability. Each component is sorted and
    /// components are listed by their smallest member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let reach = closure_of(&self.adj);
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for u in 0..n {
            if seen[u] {
                continue;
            }
            let comp: Vec<usize> = (0..n)
                .filter(|&v| v == u || (reach[u][v] && reach[v][u]))
                .collect();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }
}

/// Edge `(u,v)` present iff a directed path of length ≥ 1 joins `u` to `v`.
pub fn transitive_closure(g: &Digraph) -> Digraph {
    Digraph {
        vertices: g.vertices.clone(),
        adj: closure_of(&g.adj),
    }
}

/// `M[u][v] = 1` iff `v` is reachable from `u` by a path of length ≥ 1.
pub fn reach_matrix(g: &Digraph) -> LabeledMatrix<u64> {
    let r = closure_of(&g.adj);
    LabeledMatrix::from_fn(g.vertices.clone(), |i, j| u64::from(r[i][j]))
}

/// All directed Hamiltonian paths, ordered lexicographically by vertex index.
pub fn hamiltonian_paths(g: &Digraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.len();
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    fn extend(adj: &BoolMatrix, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = adj.len();
        if path.len() == n {
            out.push(path.clone());
            return;
        }
        let last = *path.last().expect("path starts non-empty");
        for v in 0..n {
            if !used[v] && adj[last][v] {
                used[v] = true;
                path.push(v);
                extend(adj, path, used, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    for s in 0..n {
        used[s] = true;
        extend(&g.adj, &mut vec![s], &mut used, &mut out);
        used[s] = false;
    }
    Ok(out)
}

/// Vertex set with directed preference edges `D` and undirected indifference
/// edges `C`. Undirected edges are stored with the smaller index first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bigraph {
    vertices: PolicySet,
    directed: BTreeSet<(usize, usize)>,
    undirected: BTreeSet<(usize, usize)>,
}

fn unordered(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Bigraph {
    pub fn new(
        vertices: PolicySet,
        directed: impl IntoIterator<Item = (usize, usize)>,
        undirected: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = vertices.len();
        let check = |u: usize, v: usize| -> Result<()> {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
            }
            if u == v {
                return Err(Error::SelfLoop(vertices.label(u).to_string()));
            }
            Ok(())
        };
        let mut d = BTreeSet::new();
        for (u, v) in directed {
            check(u, v)?;
            d.insert((u, v));
        }
        let mut c = BTreeSet::new();
        for (u, v) in undirected {
            check(u, v)?;
            c.insert(unordered(u, v));
        }
        for &(u, v) in &d {
            if c.contains(&unordered(u, v)) {
                return Err(Error::OverlappingEdge(
                    vertices.label(u).to_string(),
                    vertices.label(v).to_string(),
                ));
            }
        }
        Ok(Bigraph {
            vertices,
            directed: d,
            undirected: c,
        })
    }

    pub fn from_labels(vertices: &[&str], directed: &[(&str, &str)], undirected: &[(&str, &str)]) -> Result<Self> {
        let ps = PolicySet::new(vertices.iter().copied())?;
        let idx = |l: &str| ps.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()));
        let d = directed
            .iter()
            .map(|(u, v)| Ok((idx(u)?, idx(v)?)))
            .collect::<Result<Vec<_>>>()?;
        let c = undirected
            .iter()
            .map(|(u, v)| Ok((idx(u)?, idx(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Bigraph::new(ps, d, c)
    }

    pub fn vertices(&self) -> &PolicySet {
        &self.vertices
    }

    pub fn directed(&self) -> &BTreeSet<(usize, usize)> {
        &self.directed
    }

    pub fn undirected(&self) -> &BTreeSet<(usize, usize)> {
        &self.undirected
    }

    pub fn has_undirected(&self, u: usize, v: usize) -> bool {
        self.undirected.contains(&unordered(u, v))
    }

    /// Directed view in which each undirected edge may be walked both ways.
    pub fn mixed_digraph(&self) -> Digraph {
        let edges = self
            .directed
            .iter()
            .copied()
            .chain(self.undirected.iter().flat_map(|&(u, v)| [(u, v), (v, u)]));
        Digraph::new(self.vertices.clone(), edges).expect("bigraph edges are in range")
    }

    /// True when every pair of distinct vertices is joined by some edge.
    pub fn is_semi_complete(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|u| {
            (u + 1..n).all(|v| {
                self.has_undirected(u, v)
                    || self.directed.contains(&(u, v))
                    || self.directed.contains(&(v, u))
            })
        })
    }

    /// A circuit is a cycle that uses at least one directed edge; undirected
    /// edges may be walked either way.
    pub fn is_circuit_free(&self) -> bool {
        let reach = closure_of(&self.mixed_digraph().adj);
        self.directed.iter().all(|&(u, v)| !reach[v][u])
    }
}

/// The maximal circuit-free sub-bigraphs of a semi-complete bigraph, each
/// paired with the weak order it determines.
///
/// Every Hamiltonian path of the bigraph (undirected edges walkable both
/// ways) is read as an order: consecutive vertices joined by an undirected
/// edge are tied, all others strictly ranked. The sub-bigraph kept for that
/// order holds the directed edges pointing down the order and the undirected
/// edges inside a tie-group. Paths yielding the same order are reported once.
pub fn maximal_circuit_free_subbigraphs(b: &Bigraph, cap: usize) -> Result<Vec<(Bigraph, PreferenceOrder)>> {
    let paths = hamiltonian_paths(&b.mixed_digraph(), cap)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for path in paths {
        let mut groups: Vec<Vec<usize>> = vec![vec![path[0]]];
        for w in path.windows(2) {
            if b.has_undirected(w[0], w[1]) {
                groups.last_mut().expect("non-empty").push(w[1]);
            } else {
                groups.push(vec![w[1]]);
            }
        }
        let order = PreferenceOrder::from_indices(&b.vertices, groups)?;
        if !seen.insert(order.groups().to_vec()) {
            continue;
        }
        let d = b
            .directed
            .iter()
            .copied()
            .filter(|&(u, v)| order.group_of(u) < order.group_of(v));
        let c = b
            .undirected
            .iter()
            .copied()
            .filter(|&(u, v)| order.group_of(u) == order.group_of(v));
        out.push((Bigraph::new(b.vertices.clone(), d, c)?, order));
    }
    Ok(out)
}

/// Indirect relations of a bigraph.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DerivedRelations {
    /// Equal, or on a common loop.
    pub e: BTreeSet<(usize, usize)>,
    /// Equal, or joined by a path.
    pub w: BTreeSet<(usize, usize)>,
    /// Joined by a path containing at least one directed edge.
    pub t: BTreeSet<(usize, usize)>,
}

pub fn derive_relations(b: &Bigraph) -> DerivedRelations {
    let n = b.vertices.len();
    let mut reach = closure_of(&b.mixed_digraph().adj);
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    let mut rel = DerivedRelations::default();
    for x in 0..n {
        for y in 0..n {
            if reach[x][y] {
                rel.w.insert((x, y));
                if reach[y][x] {
                    rel.e.insert((x, y));
                }
            }
            if b.directed.iter().any(|&(u, v)| reach[x][u] && reach[v][y]) {
                rel.t.insert((x, y));
            }
        }
    }
    rel
}

/// A reflexive, antisymmetric, transitive relation.
#[derive(Clone, PartialEq, Debug)]
pub struct Poset {
    elements: PolicySet,
    leq: BoolMatrix,
}

/// Maximum antichain with a minimum chain partition of equal size.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct AntichainReport {
    pub size: usize,
    pub antichain: Vec<String>,
    pub chains: Vec<Vec<String>>,
}

impl Poset {
    /// `relation` lists pairs `u ≤ v`. Reflexive pairs may be omitted; the
    /// rest must already be antisymmetric and transitive.
    pub fn new(elements: PolicySet, relation: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Digraph::new(elements, relation)?;
        let mut leq = g.adj;
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        let n = leq.len();
        for u in 0..n {
            for v in 0..n {
                if u != v && leq[u][v] && leq[v][u] {
                    return Err(Error::NotAPartialOrder(format!(
                        "`{}` and `{}` precede each other",
                        g.vertices.label(u),
                        g.vertices.label(v)
                    )));
                }
                for w in 0..n {
                    if leq[u][v] && leq[v][w] && !leq[u][w] {
                        return Err(Error::NotAPartialOrder(format!(
                            "missing `{}` <= `{}`",
                            g.vertices.label(u),
                            g.vertices.label(w)
                        )));
                    }
                }
            }
        }
        Ok(Poset {
            elements: g.vertices,
            leq,
        })
    }

    /// The reflexive-transitive closure of a digraph, which must be acyclic.
    pub fn from_digraph(g: &Digraph) -> Result<Self> {
        let c = transitive_closure(g);
        Poset::new(c.vertices.clone(), c.edges())
    }

    pub fn elements(&self) -> &PolicySet {
        &self.elements
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.leq[u][v]
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.leq[u][v] || self.leq[v][u]
    }

    fn less(&self, u: usize, v: usize) -> bool {
        u != v && self.leq[u][v]
    }

    /// Minimum chain partition from a maximum matching on the strict
    /// relation, and a maximum antichain from the alternating-path cover.
    pub fn max_antichain(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.elements.len();
        // match_r[v] = u means u < v are consecutive in a chain
        let mut match_l: Vec<Option<usize>> = vec![None; n];
        let mut match_r: Vec<Option<usize>> = vec![None; n];
        fn augment(
            p: &Poset,
            u: usize,
            visited: &mut [bool],
            match_l: &mut [Option<usize>],
            match_r: &mut [Option<usize>],
        ) -> bool {
            for v in 0..p.leq.len() {
                if p.less(u, v) && !visited[v] {
                    visited[v] = true;
                    if match_r[v].is_none_or(|w| augment(p, w, visited, match_l, match_r)) {
                        match_l[u] = Some(v);
                        match_r[v] = Some(u);
                        return true;
                    }
                }
            }
            false
        }
        for u in 0..n {
            let mut visited = vec![false; n];
            augment(self, u, &mut visited, &mut match_l, &mut match_r);
        }

        let mut chains = Vec::new();
        for start in (0..n).filter(|&v| match_r[v].is_none()) {
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(next) = match_l[cur] {
                chain.push(next);
                cur = next;
            }
            chains.push(chain);
        }

        // alternating reachability from unmatched left vertices
        let mut z_left = vec![false; n];
        let mut z_right = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&u| match_l[u].is_none()).collect();
        for &u in &queue {
            z_left[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if self.less(u, v) && !z_right[v] && match_l[u] != Some(v) {
                    z_right[v] = true;
                    if let Some(w) = match_r[v] {
                        if !z_left[w] {
                            z_left[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let antichain = (0..n).filter(|&x| z_left[x] && !z_right[x]).collect();
        (antichain, chains)
    }

    pub fn antichain_report(&self) -> AntichainReport {
        let (a, chains) = self.max_antichain();
        let name = |i: &usize| self.elements.label(*i).to_string();
        AntichainReport {
            size: a.len(),
            antichain: a.iter().map(name).collect(),
            chains: chains.iter().map(|c| c.iter().map(name).collect()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TgKind {
    Subject,
    Object,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Right {
    Take,
    Grant,
    Read,
    Write,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TgVertex {
    pub name: String,
    pub kind: TgKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TgEdge {
    pub from: String,
    pub to: String,
    pub label: Right,
}

/// Protection graph of subjects and objects with labelled rights.
#[derive(Clone, Debug, PartialEq)]
pub struct TgGraph {
    vertices: Vec<TgVertex>,
    index: PolicySet,
    edges: Vec<(usize, usize, Right)>,
}

#[derive(Serialize, Deserialize)]
struct TgDoc {
    vertices: Vec<TgVertex>,
    edges: Vec<TgEdge>,
}

impl TgGraph {
    pub fn new(vertices: Vec<TgVertex>, edges: Vec<TgEdge>) -> Result<Self> {
        let index = PolicySet::new(vertices.iter().map(|v| v.name.clone()))?;
        let idx = |l: &str| index.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()));
        let edges = edges
            .iter()
            .map(|e| Ok((idx(&e.from)?, idx(&e.to)?, e.label)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TgGraph { vertices, index, edges })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TgDoc = serde_json::from_str(text)?;
        TgGraph::new(doc.vertices, doc.edges)
    }

    pub fn vertices(&self) -> &[TgVertex] {
        &self.vertices
    }
}

/// Whether `s` and `o` are joined by take/grant edges, directions ignored.
/// The witness path runs from `s` to `o` and is empty when unreachable.
pub fn tg_connected(g: &TgGraph, s: &str, o: &str) -> Result<(bool, Vec<String>)> {
    let idx = |l: &str| g.index.index_of(l).ok_or_else(|| Error::UnknownVertex(l.to_string()));
    let (s, o) = (idx(s)?, idx(o)?);
    let n = g.vertices.len();
    let mut nbrs = vec![BTreeSet::new(); n];
    for &(u, v, r) in &g.edges {
        if matches!(r, Right::Take | Right::Grant) {
            nbrs[u].insert(v);
            nbrs[v].insert(u);
        }
    }
    let mut prev = vec![usize::MAX; n];
    prev[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == o {
            break;
        }
        for &v in &nbrs[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    if prev[o] == usize::MAX {
        return Ok((false, Vec::new()));
    }
    let mut path = vec![o];
    while *path.last().expect("non-empty") != s {
        path.push(prev[*path.last().expect("non-empty")]);
    }
    path.reverse();
    Ok((true, path.into_iter().map(|i| g.vertices[i].name.clone()).collect()))
}
