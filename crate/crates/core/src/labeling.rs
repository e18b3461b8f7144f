//! Total labelings, edge-magic and super edge-magic verification, and the
//! consecutive-sum characterisation of super edge-magic vertex labelings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex};

pub type Label = u32;

/// A bijection from vertices and arcs of a `(p, q)`-digraph onto `[1, p + q]`.
///
/// Arc labels are stored parallel to [`Digraph::arcs`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLabeling", into = "RawLabeling")]
pub struct TotalLabeling {
    graph: Digraph,
    vertex: Vec<Label>,
    arc: Vec<Label>,
}

#[derive(Serialize, Deserialize)]
struct RawLabeling {
    graph: Digraph,
    vertex_labels: BTreeMap<u32, Label>,
    arc_labels: Vec<[u32; 3]>,
}

impl TryFrom<RawLabeling> for TotalLabeling {
    type Error = Error;

    fn try_from(raw: RawLabeling) -> Result<Self> {
        let g = raw.graph;
        let mut vertex = Vec::with_capacity(g.order() as usize);
        for v in g.vertices() {
            let l = raw
                .vertex_labels
                .get(&v)
                .ok_or_else(|| Error::InvalidLabeling(format!("vertex {v} has no label")))?;
            vertex.push(*l);
        }
        if raw.vertex_labels.len() != g.order() as usize {
            return Err(Error::InvalidLabeling("labels given for unknown vertices".into()));
        }
        let index = g.arc_index();
        let mut arc = vec![None; g.arcs().len()];
        for [u, v, l] in raw.arc_labels {
            let i = *index
                .get(&(u, v))
                .ok_or_else(|| Error::InvalidLabeling(format!("label for unknown arc ({u}, {v})")))?;
            if arc[i].replace(l).is_some() {
                return Err(Error::InvalidLabeling(format!("arc ({u}, {v}) labeled twice")));
            }
        }
        let arc = arc
            .into_iter()
            .zip(g.arcs())
            .map(|(l, &(u, v))| l.ok_or_else(|| Error::InvalidLabeling(format!("arc ({u}, {v}) has no label"))))
            .collect::<Result<Vec<_>>>()?;
        TotalLabeling::new(g, vertex, arc)
    }
}

impl From<TotalLabeling> for RawLabeling {
    fn from(f: TotalLabeling) -> Self {
        RawLabeling {
            vertex_labels: f.graph.vertices().zip(f.vertex.iter().copied()).collect(),
            arc_labels: f.graph.arcs().iter().zip(&f.arc).map(|(&(u, v), &l)| [u, v, l]).collect(),
            graph: f.graph,
        }
    }
}

/// Outcome of checking the arc sums of a labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MagicCheck {
    Magic { valence: u32 },
    /// The first arc whose sum disagrees with the sum of arc 0.
    Conflict { arc_index: usize, expected: u32, found: u32 },
    NoArcs,
}

impl TotalLabeling {
    pub fn new(graph: Digraph, vertex: Vec<Label>, arc: Vec<Label>) -> Result<Self> {
        if vertex.len() != graph.order() as usize || arc.len() != graph.arcs().len() {
            return Err(Error::InvalidLabeling(format!(
                "expected {} vertex and {} arc labels, got {} and {}",
                graph.order(),
                graph.size(),
                vertex.len(),
                arc.len()
            )));
        }
        let total = graph.order() + graph.size();
        let mut hit = vec![false; total as usize];
        for &l in vertex.iter().chain(&arc) {
            if l == 0 || l > total {
                return Err(Error::InvalidLabeling(format!("label {l} outside [1, {total}]")));
            }
            if std::mem::replace(&mut hit[l as usize - 1], true) {
                return Err(Error::InvalidLabeling(format!("label {l} used twice")));
            }
        }
        Ok(TotalLabeling { graph, vertex, arc })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn order(&self) -> u32 {
        self.graph.order()
    }

    pub fn size(&self) -> u32 {
        self.graph.size()
    }

    pub fn vertex_label(&self, v: Vertex) -> Label {
        self.vertex[v as usize - 1]
    }

    pub fn vertex_labels(&self) -> &[Label] {
        &self.vertex
    }

    pub fn arc_labels(&self) -> &[Label] {
        &self.arc
    }

    /// `f(u) + f(uv) + f(v)` for arc `i`.
    pub fn arc_sum(&self, i: usize) -> u32 {
        let (u, v) = self.graph.arcs()[i];
        self.vertex_label(u) + self.arc[i] + self.vertex_label(v)
    }

    pub fn check_magic(&self) -> MagicCheck {
        if self.arc.is_empty() {
            return MagicCheck::NoArcs;
        }
        let expected = self.arc_sum(0);
        for i in 1..self.arc.len() {
            let found = self.arc_sum(i);
            if found != expected {
                return MagicCheck::Conflict { arc_index: i, expected, found };
            }
        }
        MagicCheck::Magic { valence: expected }
    }

    /// The same labels on the digraph with every arc reversed.
    pub fn reversed(&self) -> TotalLabeling {
        TotalLabeling {
            graph: self.graph.reversed(),
            vertex: self.vertex.clone(),
            arc: self.arc.clone(),
        }
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot(Some(&self.vertex), Some(&self.arc))
    }
}

/// The valence when every arc sum agrees.
pub fn valence_if_edge_magic(f: &TotalLabeling) -> Option<u32> {
    match f.check_magic() {
        MagicCheck::Magic { valence } => Some(valence),
        _ => None,
    }
}

/// Like [`valence_if_edge_magic`] but reports the conflicting arc.
pub fn require_edge_magic(f: &TotalLabeling) -> Result<u32> {
    match f.check_magic() {
        MagicCheck::Magic { valence } => Ok(valence),
        MagicCheck::Conflict { arc_index, expected, found } => Err(Error::NotEdgeMagic { arc_index, expected, found }),
        MagicCheck::NoArcs => Err(Error::Precondition("labeling of a digraph without arcs has no valence".into())),
    }
}

pub fn is_super_edge_magic(f: &TotalLabeling) -> bool {
    let p = f.order();
    valence_if_edge_magic(f).is_some() && f.vertex.iter().all(|&l| l <= p)
}

pub fn require_super_edge_magic(f: &TotalLabeling) -> Result<u32> {
    let val = require_edge_magic(f)?;
    if f.vertex.iter().all(|&l| l <= f.order()) {
        Ok(val)
    } else {
        Err(Error::NotSuperEdgeMagic)
    }
}

/// A bijection from the vertices of a digraph onto `[1, p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLabeling {
    graph: Digraph,
    labels: Vec<Label>,
}

impl VertexLabeling {
    pub fn new(graph: Digraph, labels: Vec<Label>) -> Result<Self> {
        let p = graph.order();
        if labels.len() != p as usize {
            return Err(Error::InvalidLabeling(format!("expected {p} vertex labels, got {}", labels.len())));
        }
        let mut hit = vec![false; p as usize];
        for &l in &labels {
            if l == 0 || l > p || std::mem::replace(&mut hit[l as usize - 1], true) {
                return Err(Error::InvalidLabeling(format!("vertex label {l} repeated or outside [1, {p}]")));
            }
        }
        Ok(VertexLabeling { graph, labels })
    }

    /// Vertex `v` labeled `v`.
    pub fn identity(graph: Digraph) -> Self {
        let labels = graph.vertices().collect();
        VertexLabeling { graph, labels }
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> Label {
        self.labels[v as usize - 1]
    }
}

/// `min S` when the endpoint sums `S = {g(u) + g(v)}` are `q` distinct
/// consecutive integers.
pub fn consecutive_sum_start(g: &VertexLabeling) -> Option<u32> {
    let arcs = g.graph.arcs();
    if arcs.is_empty() {
        return None;
    }
    let sums: Vec<u32> = arcs.iter().map(|&(u, v)| g.label(u) + g.label(v)).collect();
    let lo = *sums.iter().min()?;
    let q = sums.len();
    let mut hit = vec![false; q];
    for s in sums {
        let offset = (s - lo) as usize;
        if offset >= q || std::mem::replace(&mut hit[offset], true) {
            return None;
        }
    }
    Some(lo)
}

/// Extends `g` to a super edge-magic labeling of valence `p + q + min S`.
pub fn extend_to_super_edge_magic(g: &VertexLabeling) -> Result<TotalLabeling> {
    let start = consecutive_sum_start(g).ok_or(Error::NotConsecutive)?;
    let valence = g.graph.order() + g.graph.size() + start;
    let arc = g
        .graph
        .arcs()
        .iter()
        .map(|&(u, v)| valence - g.label(u) - g.label(v))
        .collect();
    TotalLabeling::new(g.graph.clone(), g.labels.clone(), arc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3_transitive() -> Digraph {
        Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    pub(crate) fn c3_val9() -> TotalLabeling {
        TotalLabeling::new(c3_transitive(), vec![1, 2, 3], vec![6, 4, 5]).unwrap()
    }

    #[test]
    fn valence_examples() {
        assert_eq!(valence_if_edge_magic(&c3_val9()), Some(9));
        let broken = TotalLabeling::new(c3_transitive(), vec![1, 2, 3], vec![5, 4, 6]).unwrap();
        assert_eq!(valence_if_edge_magic(&broken), None);
        assert_eq!(
            broken.check_magic(),
            MagicCheck::Conflict { arc_index: 1, expected: 8, found: 9 }
        );
        let k2 = TotalLabeling::new(Digraph::path(2).unwrap(), vec![1, 2], vec![3]).unwrap();
        assert_eq!(valence_if_edge_magic(&k2), Some(6));
    }

    #[test]
    fn bijectivity_is_enforced() {
        assert!(matches!(
            TotalLabeling::new(c3_transitive(), vec![1, 2, 3], vec![6, 4, 4]),
            Err(Error::InvalidLabeling(_))
        ));
        assert!(matches!(
            TotalLabeling::new(c3_transitive(), vec![1, 2, 3], vec![6, 4, 7]),
            Err(Error::InvalidLabeling(_))
        ));
        assert!(TotalLabeling::new(c3_transitive(), vec![1, 2], vec![6, 4, 5]).is_err());
    }

    #[test]
    fn super_examples() {
        let f = c3_val9();
        assert!(is_super_edge_magic(&f));
        let comp = TotalLabeling::new(c3_transitive(), vec![6, 5, 4], vec![1, 3, 2]).unwrap();
        assert_eq!(valence_if_edge_magic(&comp), Some(12));
        assert!(!is_super_edge_magic(&comp));
        let broken = TotalLabeling::new(c3_transitive(), vec![1, 2, 3], vec![5, 4, 6]).unwrap();
        assert!(!is_super_edge_magic(&broken));
    }

    #[test]
    fn consecutive_sum_examples() {
        let c3 = VertexLabeling::identity(Digraph::cycle(3).unwrap());
        assert_eq!(consecutive_sum_start(&c3), Some(3));
        let path = VertexLabeling::new(Digraph::path(3).unwrap(), vec![1, 3, 2]).unwrap();
        assert_eq!(consecutive_sum_start(&path), Some(4));
        let c4 = VertexLabeling::identity(Digraph::cycle(4).unwrap());
        assert_eq!(consecutive_sum_start(&c4), None);
    }

    #[test]
    fn extension_examples() {
        let f = extend_to_super_edge_magic(&VertexLabeling::identity(c3_transitive())).unwrap();
        assert_eq!(f, c3_val9());

        let k2 = extend_to_super_edge_magic(&VertexLabeling::identity(Digraph::path(2).unwrap())).unwrap();
        assert_eq!(k2.arc_labels(), &[3]);
        assert_eq!(valence_if_edge_magic(&k2), Some(6));

        let c5 = VertexLabeling::new(Digraph::cycle(5).unwrap(), vec![1, 4, 2, 5, 3]).unwrap();
        let f5 = extend_to_super_edge_magic(&c5).unwrap();
        assert_eq!(valence_if_edge_magic(&f5), Some(14));
        assert!(is_super_edge_magic(&f5));

        let c4 = VertexLabeling::identity(Digraph::cycle(4).unwrap());
        assert!(matches!(extend_to_super_edge_magic(&c4), Err(Error::NotConsecutive)));
    }

    #[test]
    fn json_schema() {
        let f = c3_val9();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["vertex_labels"]["2"], 2);
        assert_eq!(v["arc_labels"][0], serde_json::json!([1, 2, 6]));
        let back: TotalLabeling = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);

        let bad = r#"{"graph":{"n":2,"arcs":[[1,2]]},"vertex_labels":{"1":1,"2":1},"arc_labels":[[1,2,3]]}"#;
        assert!(serde_json::from_str::<TotalLabeling>(bad).is_err());
        let missing = r#"{"graph":{"n":2,"arcs":[[1,2]]},"vertex_labels":{"1":1,"2":2},"arc_labels":[]}"#;
        assert!(serde_json::from_str::<TotalLabeling>(missing).is_err());
    }
}

#[cfg(test)]
pub(crate) use tests::c3_val9;

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_labeling() -> impl Strategy<Value = TotalLabeling> {
        (3u32..7).prop_flat_map(|n| {
            Just((1..=2 * n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(move |labels| {
                    let g = Digraph::cycle(n).unwrap();
                    TotalLabeling::new(g, labels[..n as usize].to_vec(), labels[n as usize..].to_vec()).unwrap()
                })
        })
    }

    fn arb_sem_vertex_labeling() -> impl Strategy<Value = VertexLabeling> {
        (1u32..7).prop_flat_map(|n| {
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(move |labels| VertexLabeling::new(Digraph::path(n).unwrap(), labels).unwrap())
        })
    }

    proptest! {
        #[test]
        fn valence_invariant_under_reversal(f in arb_labeling()) {
            prop_assert_eq!(valence_if_edge_magic(&f), valence_if_edge_magic(&f.reversed()));
        }

        #[test]
        fn extension_uses_upper_labels(g in arb_sem_vertex_labeling()) {
            if let Some(start) = consecutive_sum_start(&g) {
                let f = extend_to_super_edge_magic(&g).unwrap();
                let p = f.order();
                let q = f.size();
                let mut arcs = f.arc_labels().to_vec();
                arcs.sort();
                prop_assert_eq!(arcs, (p + 1..=p + q).collect::<Vec<_>>());
                prop_assert_eq!(valence_if_edge_magic(&f), Some(p + q + start));
                prop_assert!(is_super_edge_magic(&f));
            }
        }

        #[test]
        fn json_round_trip(f in arb_labeling()) {
            let text = serde_json::to_string(&f).unwrap();
            prop_assert_eq!(serde_json::from_str::<TotalLabeling>(&text).unwrap(), f);
        }
    }
}
