//! The labeled families used as second factors of the h-product.
//!
//! Members of both families are digraphs whose vertices are *named by their
//! labels*. An [`SFamilyMember`] lives on `[1, p]` and carries a super
//! edge-magic labeling with `p` arcs whose endpoint sums are `[k, k + p - 1]`.
//! A [`TFamilyMember`] lives on a vertex set `V ⊂ [1, p + q]` and carries an
//! edge-magic labeling of magic sum `σ`; arc `(a, b)` is implicitly labeled
//! `σ - a - b`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Arc, Digraph, Vertex};
use crate::labeling::{
    consecutive_sum_start, extend_to_super_edge_magic, require_edge_magic, require_super_edge_magic, TotalLabeling,
    VertexLabeling,
};

/// Anything that can be placed on an arc of the outer digraph of a product.
pub trait InnerFactor: Clone + Debug {
    /// Parameters that must agree across every image of an assignment.
    type Class: PartialEq + Debug;

    /// The member as a digraph on `[1, |V|]`.
    fn inner_digraph(&self) -> &Digraph;

    fn class(&self) -> Self::Class;
}

impl InnerFactor for Digraph {
    type Class = u32;

    fn inner_digraph(&self) -> &Digraph {
        self
    }

    fn class(&self) -> u32 {
        self.order()
    }
}

/// Returns `k` when `d` is in `S_p^k`.
pub fn check_s_member(d: &Digraph, p: u32) -> Result<Option<u32>> {
    if d.order() != p {
        return Err(Error::InvalidMember(format!(
            "digraph has vertex set [1, {}], expected [1, {p}]",
            d.order()
        )));
    }
    if d.size() != p {
        return Ok(None);
    }
    Ok(consecutive_sum_start(&VertexLabeling::identity(d.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawS", into = "RawS")]
pub struct SFamilyMember {
    p: u32,
    k: u32,
    digraph: Digraph,
}

#[derive(Serialize, Deserialize)]
struct RawS {
    p: u32,
    k: u32,
    digraph: Digraph,
}

impl TryFrom<RawS> for SFamilyMember {
    type Error = Error;

    fn try_from(raw: RawS) -> Result<Self> {
        let m = SFamilyMember::new(raw.digraph)?;
        if (m.p, m.k) != (raw.p, raw.k) {
            return Err(Error::InvalidMember(format!(
                "declared (p, k) = ({}, {}) but digraph is in S_{}^{}",
                raw.p, raw.k, m.p, m.k
            )));
        }
        Ok(m)
    }
}

impl From<SFamilyMember> for RawS {
    fn from(m: SFamilyMember) -> Self {
        RawS { p: m.p, k: m.k, digraph: m.digraph }
    }
}

impl SFamilyMember {
    pub fn new(digraph: Digraph) -> Result<Self> {
        let p = digraph.order();
        let k = check_s_member(&digraph, p)?
            .ok_or_else(|| Error::InvalidMember("identity labeling has no p distinct consecutive sums".into()))?;
        Ok(SFamilyMember { p, k, digraph })
    }

    /// Renames the vertices of an SEM-labeled digraph with `p = q` after their labels.
    pub fn from_labeling(f: &TotalLabeling) -> Result<Self> {
        require_super_edge_magic(f)?;
        let arcs = f
            .graph()
            .arcs()
            .iter()
            .map(|&(u, v)| (f.vertex_label(u), f.vertex_label(v)));
        SFamilyMember::new(Digraph::new(f.order(), arcs)?)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// The super edge-magic labeling carried by the names.
    pub fn labeling(&self) -> TotalLabeling {
        extend_to_super_edge_magic(&VertexLabeling::identity(self.digraph.clone()))
            .expect("member sums are consecutive")
    }

    pub fn reversed(&self) -> SFamilyMember {
        SFamilyMember { p: self.p, k: self.k, digraph: self.digraph.reversed() }
    }
}

impl InnerFactor for SFamilyMember {
    type Class = (u32, u32);

    fn inner_digraph(&self) -> &Digraph {
        &self.digraph
    }

    fn class(&self) -> (u32, u32) {
        (self.p, self.k)
    }
}

/// `(i, j) -> (p + 1 - i, p + 1 - j)`, sending `S_p^k` to `S_p^{p+3-k}`.
pub fn phi_reflect(m: &SFamilyMember) -> SFamilyMember {
    let p = m.p;
    let digraph = Digraph::new(p, m.digraph.arcs().iter().map(|&(i, j)| (p + 1 - i, p + 1 - j)))
        .expect("reflection preserves validity");
    SFamilyMember { p, k: p + 3 - m.k, digraph }
}

/// Every permutation digraph `i -> σ(i)` on `[1, p]` whose sums `i + σ(i)`
/// are exactly `[(p+3)/2, (p+3)/2 + p - 1]`, in lexicographic order of `σ`.
///
/// Empty for even `p`; see [`s1regular_diagnostic`].
pub fn enumerate_s1regular(p: u32) -> Vec<SFamilyMember> {
    enumerate_s1regular_images(p)
        .into_iter()
        .map(|sigma| {
            let d = Digraph::new(p, sigma.iter().enumerate().map(|(i, &s)| (i as u32 + 1, s))).unwrap();
            SFamilyMember { p, k: (p + 3) / 2, digraph: d }
        })
        .collect()
}

pub fn s1regular_diagnostic(p: u32) -> Option<String> {
    (p % 2 == 0).then(|| format!("p = {p} is even: (p + 3) / 2 is not an integer, so S_p is empty"))
}

fn enumerate_s1regular_images(p: u32) -> Vec<Vec<u32>> {
    if p == 0 || p % 2 == 0 {
        return Vec::new();
    }
    let k = (p + 3) / 2;
    let mut out = Vec::new();
    let mut image = Vec::with_capacity(p as usize);
    let mut used = vec![false; p as usize + 1];
    let mut sum_used = vec![false; p as usize];

    fn go(
        p: u32,
        k: u32,
        image: &mut Vec<u32>,
        used: &mut [bool],
        sum_used: &mut [bool],
        out: &mut Vec<Vec<u32>>,
    ) {
        let i = image.len() as u32 + 1;
        if i > p {
            out.push(image.clone());
            return;
        }
        for s in 1..=p {
            if used[s as usize] || i + s < k || i + s >= k + p {
                continue;
            }
            let slot = (i + s - k) as usize;
            if sum_used[slot] {
                continue;
            }
            used[s as usize] = true;
            sum_used[slot] = true;
            image.push(s);
            go(p, k, image, used, sum_used, out);
            image.pop();
            sum_used[slot] = false;
            used[s as usize] = false;
        }
    }

    go(p, k, &mut image, &mut used, &mut sum_used, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawT", into = "RawT")]
pub struct TFamilyMember {
    q: u32,
    sigma: u32,
    /// Sorted; the vertex of local index `r` is named `vertex_set[r - 1]`.
    vertex_set: Vec<u32>,
    /// Arcs between names.
    arcs: Vec<Arc>,
    local: Digraph,
}

#[derive(Serialize, Deserialize)]
struct RawT {
    p: u32,
    q: u32,
    sigma: u32,
    vertex_set: Vec<u32>,
    digraph: Digraph,
}

impl TryFrom<RawT> for TFamilyMember {
    type Error = Error;

    fn try_from(raw: RawT) -> Result<Self> {
        let m = TFamilyMember::new(raw.vertex_set, raw.digraph.arcs().to_vec(), raw.sigma)?;
        if m.p() != raw.p || m.q != raw.q || raw.digraph.order() != m.universe() {
            return Err(Error::InvalidMember("declared (p, q) disagrees with vertex set and arcs".into()));
        }
        Ok(m)
    }
}

impl From<TFamilyMember> for RawT {
    fn from(m: TFamilyMember) -> Self {
        RawT {
            p: m.p(),
            q: m.q,
            sigma: m.sigma,
            digraph: Digraph::new(m.universe(), m.arcs.iter().copied()).unwrap(),
            vertex_set: m.vertex_set,
        }
    }
}

impl TFamilyMember {
    /// Validates that the arcs over `vertex_set`, labeled `σ - a - b`, complete
    /// the vertex names to a bijection onto `[1, p + q]`.
    pub fn new(mut vertex_set: Vec<u32>, arcs: Vec<Arc>, sigma: u32) -> Result<Self> {
        vertex_set.sort_unstable();
        let p = vertex_set.len() as u32;
        let q = arcs.len() as u32;
        let universe = p + q;
        if p == 0 {
            return Err(Error::InvalidMember("empty vertex set".into()));
        }
        if vertex_set.windows(2).any(|w| w[0] == w[1]) || vertex_set.iter().any(|&a| a == 0 || a > universe) {
            return Err(Error::InvalidMember(format!("vertex set must be distinct names in [1, {universe}]")));
        }
        let rank: BTreeMap<u32, u32> = vertex_set.iter().enumerate().map(|(r, &a)| (a, r as u32 + 1)).collect();
        let mut hit = vec![false; universe as usize + 1];
        for &a in &vertex_set {
            hit[a as usize] = true;
        }
        let mut local_arcs = Vec::with_capacity(arcs.len());
        for &(a, b) in &arcs {
            let (ra, rb) = match (rank.get(&a), rank.get(&b)) {
                (Some(&ra), Some(&rb)) => (ra, rb),
                _ => return Err(Error::InvalidMember(format!("arc ({a}, {b}) leaves the vertex set"))),
            };
            let label = sigma as i64 - a as i64 - b as i64;
            if label < 1 || label > universe as i64 || std::mem::replace(&mut hit[label as usize], true) {
                return Err(Error::InvalidMember(format!(
                    "implied label {label} of arc ({a}, {b}) is out of range or repeated"
                )));
            }
            local_arcs.push((ra, rb));
        }
        let local = Digraph::new(p, local_arcs).map_err(|e| Error::InvalidMember(e.to_string()))?;
        Ok(TFamilyMember { q, sigma, vertex_set, arcs, local })
    }

    pub fn p(&self) -> u32 {
        self.vertex_set.len() as u32
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn universe(&self) -> u32 {
        self.p() + self.q
    }

    pub fn vertex_set(&self) -> &[u32] {
        &self.vertex_set
    }

    /// Arcs between vertex names.
    pub fn named_arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Name of the vertex with local index `r`.
    pub fn name(&self, r: Vertex) -> u32 {
        self.vertex_set[r as usize - 1]
    }

    /// The edge-magic labeling on the local digraph: names on vertices, `σ - a - b` on arcs.
    pub fn to_labeling(&self) -> TotalLabeling {
        TotalLabeling::new(
            self.local.clone(),
            self.vertex_set.clone(),
            self.arcs.iter().map(|&(a, b)| self.sigma - a - b).collect(),
        )
        .expect("member invariants guarantee a bijection")
    }

    pub fn reversed(&self) -> TFamilyMember {
        TFamilyMember {
            q: self.q,
            sigma: self.sigma,
            vertex_set: self.vertex_set.clone(),
            arcs: self.arcs.iter().map(|&(a, b)| (b, a)).collect(),
            local: self.local.reversed(),
        }
    }
}

impl InnerFactor for TFamilyMember {
    type Class = (u32, u32, u32, Vec<u32>);

    fn inner_digraph(&self) -> &Digraph {
        &self.local
    }

    fn class(&self) -> Self::Class {
        (self.p(), self.q, self.sigma, self.vertex_set.clone())
    }
}

/// Renames the vertices of an edge-magic labeling after their labels.
pub fn t_member_from_labeling(f: &TotalLabeling) -> Result<TFamilyMember> {
    let sigma = require_edge_magic(f)?;
    let arcs = f
        .graph()
        .arcs()
        .iter()
        .map(|&(u, v)| (f.vertex_label(u), f.vertex_label(v)))
        .collect();
    TFamilyMember::new(f.vertex_labels().to_vec(), arcs, sigma)
}

/// `a -> p + q + 1 - a` on names, sending `T^q_σ` to `T^q_{3(p+q+1)-σ}`.
pub fn psi_reflect(m: &TFamilyMember) -> TFamilyMember {
    let top = m.universe() + 1;
    TFamilyMember::new(
        m.vertex_set.iter().map(|&a| top - a).collect(),
        m.arcs.iter().map(|&(a, b)| (top - a, top - b)).collect(),
        3 * top - m.sigma,
    )
    .expect("reflection preserves membership")
}

/// An assignment `h` of family members to the arcs of an outer digraph,
/// all of one class.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeAssignment<M> {
    domain: Digraph,
    members: Vec<M>,
}

impl<M: InnerFactor> EdgeAssignment<M> {
    /// `members[i]` is the image of `domain.arcs()[i]`.
    pub fn new(domain: Digraph, members: Vec<M>) -> Result<Self> {
        if members.len() != domain.arcs().len() {
            return Err(Error::PartialAssignment(format!(
                "{} members for {} arcs",
                members.len(),
                domain.size()
            )));
        }
        if let Some(first) = members.first() {
            let class = first.class();
            if let Some(other) = members.iter().find(|m| m.class() != class) {
                return Err(Error::MixedParameters(format!("{:?} vs {:?}", class, other.class())));
            }
        }
        Ok(EdgeAssignment { domain, members })
    }

    pub fn constant(domain: Digraph, member: M) -> Self {
        let members = vec![member; domain.arcs().len()];
        EdgeAssignment { domain, members }
    }

    pub fn domain(&self) -> &Digraph {
        &self.domain
    }

    pub fn members(&self) -> &[M] {
        &self.members
    }

    pub fn image(&self, arc_index: usize) -> &M {
        &self.members[arc_index]
    }

    /// Vertex count of the shared inner vertex set, if there is any arc.
    pub fn inner_order(&self) -> Option<u32> {
        self.members.first().map(|m| m.inner_digraph().order())
    }

    pub fn class(&self) -> Option<M::Class> {
        self.members.first().map(|m| m.class())
    }

    /// Arc-wise image under `f`; the result is revalidated.
    pub fn map<N: InnerFactor>(&self, domain: Digraph, f: impl Fn(&M) -> N) -> Result<EdgeAssignment<N>> {
        EdgeAssignment::new(domain, self.members.iter().map(f).collect())
    }

    /// Every assignment of `choices` to the arcs of `domain`, in odometer order
    /// (the last arc varies fastest).
    pub fn all(domain: &Digraph, choices: &[M]) -> Vec<EdgeAssignment<M>> {
        let q = domain.arcs().len();
        let mut out = Vec::new();
        if choices.is_empty() && q > 0 {
            return out;
        }
        let mut idx = vec![0usize; q];
        loop {
            let members = idx.iter().map(|&i| choices[i].clone()).collect();
            if let Ok(h) = EdgeAssignment::new(domain.clone(), members) {
                out.push(h);
            }
            let mut pos = q;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < choices.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// On-disk form of an assignment: either one member for every arc, or a list
/// of `(arc, member)` pairs covering the arcs of D exactly once.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AssignmentFile<M> {
    Constant { constant: M },
    PerArc { assignment: Vec<AssignmentEntry<M>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssignmentEntry<M> {
    pub arc: [u32; 2],
    pub member: M,
}

impl<M: InnerFactor + DeserializeOwned> AssignmentFile<M> {
    pub fn into_assignment(self, domain: &Digraph) -> Result<EdgeAssignment<M>> {
        match self {
            AssignmentFile::Constant { constant } => {
                EdgeAssignment::new(domain.clone(), vec![constant; domain.arcs().len()])
            }
            AssignmentFile::PerArc { assignment } => {
                let index = domain.arc_index();
                let mut slots: Vec<Option<M>> = vec![None; domain.arcs().len()];
                for AssignmentEntry { arc: [u, v], member } in assignment {
                    let i = *index
                        .get(&(u, v))
                        .ok_or_else(|| Error::PartialAssignment(format!("({u}, {v}) is not an arc of D")))?;
                    if slots[i].replace(member).is_some() {
                        return Err(Error::PartialAssignment(format!("arc ({u}, {v}) assigned twice")));
                    }
                }
                let members = slots
                    .into_iter()
                    .zip(domain.arcs())
                    .map(|(m, &(u, v))| m.ok_or_else(|| Error::PartialAssignment(format!("arc ({u}, {v}) unassigned"))))
                    .collect::<Result<Vec<_>>>()?;
                EdgeAssignment::new(domain.clone(), members)
            }
        }
    }
}

impl<M: InnerFactor> From<&EdgeAssignment<M>> for AssignmentFile<M> {
    fn from(h: &EdgeAssignment<M>) -> Self {
        AssignmentFile::PerArc {
            assignment: h
                .domain
                .arcs()
                .iter()
                .zip(&h.members)
                .map(|(&(u, v), m)| AssignmentEntry { arc: [u, v], member: m.clone() })
                .collect(),
        }
    }
}
