//! Directed graphs on the vertex set `[1, n]`.
//!
//! Vertices are plain 1-based integers so that a vertex can be identified
//! with the label it carries; every construction downstream is then index
//! arithmetic. Loops are allowed, repeated arcs are not.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type Arc = (Vertex, Vertex);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDigraph", into = "RawDigraph")]
pub struct Digraph {
    n: u32,
    arcs: Vec<Arc>,
}

#[derive(Serialize, Deserialize)]
struct RawDigraph {
    n: u32,
    arcs: Vec<[u32; 2]>,
}

impl TryFrom<RawDigraph> for Digraph {
    type Error = Error;

    fn try_from(raw: RawDigraph) -> Result<Self> {
        Digraph::new(raw.n, raw.arcs.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Digraph> for RawDigraph {
    fn from(d: Digraph) -> Self {
        RawDigraph {
            n: d.n,
            arcs: d.arcs.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Digraph {
    /// Builds a digraph, rejecting out-of-range endpoints and repeated arcs.
    pub fn new(n: u32, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDigraph);
        }
        let arcs: Vec<Arc> = arcs.into_iter().collect();
        let mut seen = HashSet::with_capacity(arcs.len());
        for &(u, v) in &arcs {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateArc(u, v));
            }
        }
        Ok(Digraph { n, arcs })
    }

    /// Digraph on `n` vertices without arcs.
    pub fn empty(n: u32) -> Result<Self> {
        Digraph::new(n, [])
    }

    /// The strongly oriented cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn cycle(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition(format!("cycle length {n} < 3")));
        }
        Digraph::new(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// The cycle traversed the other way: `1 -> n -> ... -> 2 -> 1`.
    pub fn reversed_cycle(n: u32) -> Result<Self> {
        Ok(Digraph::cycle(n)?.reversed())
    }

    /// The directed path `1 -> 2 -> ... -> n`.
    pub fn path(n: u32) -> Result<Self> {
        Digraph::new(n, (1..n).map(|i| (i, i + 1)))
    }

    /// Parses a built-in graph name: `cycle:N`, `path:N` or `empty:N`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let (kind, size) = spec
            .split_once(':')
            .ok_or_else(|| Error::Usage(format!("graph spec `{spec}` is not of the form kind:N")))?;
        let n: u32 = size
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad size in graph spec `{spec}`")))?;
        match kind.trim() {
            "cycle" => Digraph::cycle(n),
            "path" => Digraph::path(n),
            "empty" => Digraph::empty(n),
            other => Err(Error::Usage(format!("unknown graph kind `{other}`"))),
        }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        self.arcs.len() as u32
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    /// Index of each arc in [`Digraph::arcs`].
    pub fn arc_index(&self) -> HashMap<Arc, usize> {
        self.arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.arcs.contains(&(u, v))
    }

    /// Same vertex set, every arc flipped.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            arcs: self.arcs.iter().map(|&(u, v)| (v, u)).collect(),
        }
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.n as usize];
        for &(u, _) in &self.arcs {
            deg[u as usize - 1] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.n as usize];
        for &(_, v) in &self.arcs {
            deg[v as usize - 1] += 1;
        }
        deg
    }

    /// Total degree in the underlying graph; a loop counts twice.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.n as usize];
        for &(u, v) in &self.arcs {
            deg[u as usize - 1] += 1;
            deg[v as usize - 1] += 1;
        }
        deg
    }

    /// Undirected neighbour lists (each entry is `(neighbour, arc index)`).
    pub fn neighbours(&self) -> Vec<Vec<(Vertex, usize)>> {
        let mut adj = vec![Vec::new(); self.n as usize];
        for (i, &(u, v)) in self.arcs.iter().enumerate() {
            adj[u as usize - 1].push((v, i));
            if u != v {
                adj[v as usize - 1].push((u, i));
            }
        }
        adj
    }

    /// Graphviz rendering; labels, when given, are indexed like the vertices
    /// and arcs of this digraph.
    pub fn to_dot(&self, vertex_labels: Option<&[u32]>, arc_labels: Option<&[u32]>) -> String {
        let mut out = String::from("digraph G {\n");
        for v in self.vertices() {
            match vertex_labels {
                Some(l) => writeln!(out, "  {v} [label=\"{v}: {}\"];", l[v as usize - 1]),
                None => writeln!(out, "  {v};"),
            }
            .unwrap();
        }
        for (i, &(u, v)) in self.arcs.iter().enumerate() {
            match arc_labels {
                Some(l) => writeln!(out, "  {u} -> {v} [label=\"{}\"];", l[i]),
                None => writeln!(out, "  {u} -> {v};"),
            }
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Collapses both orientations of each arc into one edge with sorted endpoints.
/// Edges keep the order of their first occurrence.
pub fn underlying_graph(d: &Digraph) -> Digraph {
    let mut seen = HashSet::new();
    let edges = d
        .arcs
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .filter(|e| seen.insert(*e))
        .collect();
    Digraph { n: d.n, arcs: edges }
}

/// A weakly connected component, re-indexed to `[1, len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub digraph: Digraph,
    /// `vertices[i]` is the original name of local vertex `i + 1`.
    pub vertices: Vec<Vertex>,
}

/// Weakly connected components ordered by their smallest original vertex.
/// Inside a component, vertices keep their original relative order.
pub fn components(d: &Digraph) -> Vec<Component> {
    let n = d.n as usize;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in &d.arcs {
        let (a, b) = (find(&mut parent, u as usize - 1), find(&mut parent, v as usize - 1));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }

    let mut slot_of_root: HashMap<usize, usize> = HashMap::new();
    let mut groups: Vec<Vec<Vertex>> = Vec::new();
    let mut local = vec![0u32; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        let slot = *slot_of_root.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(x as Vertex + 1);
        local[x] = groups[slot].len() as u32;
    }

    let mut arcs: Vec<Vec<Arc>> = vec![Vec::new(); groups.len()];
    for &(u, v) in &d.arcs {
        let slot = slot_of_root[&find(&mut parent, u as usize - 1)];
        arcs[slot].push((local[u as usize - 1], local[v as usize - 1]));
    }

    groups
        .into_iter()
        .zip(arcs)
        .map(|(vertices, arcs)| Component {
            digraph: Digraph { n: vertices.len() as u32, arcs },
            vertices,
        })
        .collect()
}

/// Length of `d` if it is a single strongly oriented cycle.
pub fn is_directed_cycle(d: &Digraph) -> Option<u32> {
    let ok_degrees = d.in_degrees().iter().all(|&x| x == 1) && d.out_degrees().iter().all(|&x| x == 1);
    (ok_degrees && components(d).len() == 1).then_some(d.n)
}

/// A vertex correspondence `v -> target[v - 1]` between two digraphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMap {
    target: Vec<Vertex>,
}

impl VertexMap {
    pub fn new(target: Vec<Vertex>) -> Self {
        VertexMap { target }
    }

    pub fn identity(n: u32) -> Self {
        VertexMap::new((1..=n).collect())
    }

    pub fn from_fn(n: u32, f: impl Fn(Vertex) -> Vertex) -> Self {
        VertexMap::new((1..=n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Vertex {
        self.target[v as usize - 1]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.target
    }

    /// Checks that this is a permutation of `[1, n]`.
    pub fn check_bijective(&self, n: u32) -> Result<()> {
        if self.target.len() != n as usize {
            return Err(Error::NonBijectiveMap(format!(
                "map has {} entries for {n} vertices",
                self.target.len()
            )));
        }
        let mut hit = vec![false; n as usize];
        for &t in &self.target {
            if t == 0 || t > n || std::mem::replace(&mut hit[t as usize - 1], true) {
                return Err(Error::NonBijectiveMap(format!("target {t} repeated or out of range")));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Result<VertexMap> {
        self.check_bijective(self.target.len() as u32)?;
        let mut inv = vec![0; self.target.len()];
        for (i, &t) in self.target.iter().enumerate() {
            inv[t as usize - 1] = i as Vertex + 1;
        }
        Ok(VertexMap::new(inv))
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &VertexMap) -> VertexMap {
        VertexMap::new(self.target.iter().map(|&t| then.get(t)).collect())
    }
}

/// Relabels the vertices of `d` through `m`. Arc order is preserved.
pub fn apply_map(d: &Digraph, m: &VertexMap) -> Result<Digraph> {
    m.check_bijective(d.n)?;
    Ok(Digraph {
        n: d.n,
        arcs: d.arcs.iter().map(|&(u, v)| (m.get(u), m.get(v))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(matches!(Digraph::new(2, [(1, 2), (1, 2)]), Err(Error::DuplicateArc(1, 2))));
        assert!(matches!(
            Digraph::new(2, [(1, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 2 })
        ));
        assert!(Digraph::new(1, [(1, 1)]).is_ok());
    }

    #[test]
    fn underlying_examples() {
        let d = Digraph::new(2, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(underlying_graph(&d).arcs(), &[(1, 2)]);
        let c3 = Digraph::cycle(3).unwrap();
        assert_eq!(underlying_graph(&c3).arcs(), &[(1, 2), (2, 3), (1, 3)]);
        let lp = Digraph::new(1, [(1, 1)]).unwrap();
        assert_eq!(underlying_graph(&lp).arcs(), &[(1, 1)]);
    }

    #[test]
    fn components_examples() {
        let three = Digraph::new(9, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (7, 8), (8, 9), (9, 7)]).unwrap();
        let cs = components(&three);
        assert_eq!(cs.len(), 3);
        for (i, c) in cs.iter().enumerate() {
            assert_eq!(c.digraph.order(), 3);
            assert_eq!(c.digraph.size(), 3);
            assert_eq!(c.vertices[0], 3 * i as u32 + 1);
        }
        assert_eq!(components(&Digraph::cycle(9).unwrap()).len(), 1);
        let e = components(&Digraph::empty(2).unwrap());
        assert_eq!(e.len(), 2);
        assert!(e.iter().all(|c| c.digraph.order() == 1 && c.digraph.size() == 0));
    }

    #[test]
    fn interleaved_components_reindex() {
        let d = Digraph::new(4, [(3, 1), (2, 4)]).unwrap();
        let cs = components(&d);
        assert_eq!(cs[0].vertices, vec![1, 3]);
        assert_eq!(cs[0].digraph.arcs(), &[(2, 1)]);
        assert_eq!(cs[1].vertices, vec![2, 4]);
        assert_eq!(cs[1].digraph.arcs(), &[(1, 2)]);
    }

    #[test]
    fn directed_cycle_detection() {
        assert_eq!(is_directed_cycle(&Digraph::cycle(5).unwrap()), Some(5));
        let two = Digraph::new(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]).unwrap();
        assert_eq!(is_directed_cycle(&two), None);
        assert_eq!(is_directed_cycle(&Digraph::path(3).unwrap()), None);
        let transitive = Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(is_directed_cycle(&transitive), None);
    }

    #[test]
    fn map_examples() {
        let c3 = Digraph::cycle(3).unwrap();
        assert_eq!(apply_map(&c3, &VertexMap::identity(3)).unwrap(), c3);
        let refl = VertexMap::from_fn(3, |i| 4 - i);
        let image = apply_map(&c3, &refl).unwrap();
        assert_eq!(image.arcs(), &[(3, 2), (2, 1), (1, 3)]);
        assert_eq!(is_directed_cycle(&image), Some(3));
        let single = Digraph::new(2, [(1, 2)]).unwrap();
        let swapped = apply_map(&single, &VertexMap::new(vec![2, 1])).unwrap();
        assert_eq!(swapped.arcs(), &[(2, 1)]);
        assert!(matches!(
            apply_map(&single, &VertexMap::new(vec![1, 1])),
            Err(Error::NonBijectiveMap(_))
        ));
    }

    #[test]
    fn spec_strings() {
        assert_eq!(Digraph::from_spec("cycle:4").unwrap().size(), 4);
        assert_eq!(Digraph::from_spec("path:3").unwrap().arcs(), &[(1, 2), (2, 3)]);
        assert!(Digraph::from_spec("wheel:5").is_err());
        assert!(Digraph::from_spec("cycle").is_err());
    }

    fn arb_digraph() -> impl Strategy<Value = Digraph> {
        (1u32..8).prop_flat_map(|n| {
            proptest::collection::hash_set((1..=n, 1..=n), 0..12)
                .prop_map(move |arcs| Digraph::new(n, arcs).unwrap())
        })
    }

    fn arb_digraph_and_perm() -> impl Strategy<Value = (Digraph, VertexMap)> {
        arb_digraph().prop_flat_map(|d| {
            let n = d.order();
            (Just(d), Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
                .prop_map(|(d, p)| (d, VertexMap::new(p)))
        })
    }

    proptest! {
        #[test]
        fn map_then_inverse_is_identity((d, m) in arb_digraph_and_perm()) {
            let there = apply_map(&d, &m).unwrap();
            let back = apply_map(&there, &m.inverse().unwrap()).unwrap();
            prop_assert_eq!(back, d);
        }

        #[test]
        fn components_partition_vertices(d in arb_digraph()) {
            let cs = components(&d);
            let mut all: Vec<u32> = cs.iter().flat_map(|c| c.vertices.clone()).collect();
            prop_assert_eq!(cs.iter().map(|c| c.digraph.order()).sum::<u32>(), d.order());
            prop_assert_eq!(cs.iter().map(|c| c.digraph.size()).sum::<u32>(), d.size());
            all.sort();
            prop_assert_eq!(all, (1..=d.order()).collect::<Vec<_>>());
        }

        #[test]
        fn directed_cycle_matches_degree_characterisation(d in arb_digraph()) {
            let expected = d.in_degrees().iter().all(|&x| x == 1)
                && d.out_degrees().iter().all(|&x| x == 1)
                && components(&d).len() == 1;
            prop_assert_eq!(is_directed_cycle(&d).is_some(), expected);
        }

        #[test]
        fn json_round_trip(d in arb_digraph()) {
            let text = serde_json::to_string(&d).unwrap();
            prop_assert_eq!(serde_json::from_str::<Digraph>(&text).unwrap(), d);
        }
    }
}
