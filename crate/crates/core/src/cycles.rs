//! Cycle constructions: products of oriented cycles, the two valence-lifting
//! constructions for `C_{pm}`, the edge-magic / vertex-magic rotation on
//! 2-regular graphs, and a coverage report over the conjectured valence range
//! of `C_n`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{t_member_from_labeling, EdgeAssignment, SFamilyMember};
use crate::graph::{components, is_directed_cycle, underlying_graph, Digraph, Vertex};
use crate::labeling::{require_edge_magic, valence_if_edge_magic, TotalLabeling};
use crate::oracle::{exhaustive_edge_magic, exhaustive_super_edge_magic, Guard};
use crate::product::{induced_spk, induced_tqs, product_h, LabeledProduct};
use crate::transforms::em_complement;

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// Order of `g` in the additive group `Z_n`.
pub fn subgroup_order(g: u32, n: u32) -> u32 {
    n / gcd(g % n, n)
}

/// Which arcs of `C⃗_m` carry the backward inner cycle in a product
/// `C⃗_m ⊗_h {C⃗_n, C⃖_n}`. Arc `t` is `(t + 1, t + 2)` (mod `m`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationAssignment {
    pub m: u32,
    pub n: u32,
    pub reversed_arcs: Vec<usize>,
}

impl OrientationAssignment {
    pub fn reversed_count(&self) -> u32 {
        self.reversed_arcs.len() as u32
    }

    /// Step of the inner coordinate after one turn around the outer cycle.
    pub fn generator(&self) -> u32 {
        (self.m as i64 - 2 * self.reversed_count() as i64).rem_euclid(self.n as i64) as u32
    }

    fn is_reversed(&self, t: usize) -> bool {
        self.reversed_arcs.contains(&t)
    }
}

/// The least `N < m` with `m - 2N ≡ g (mod n)`, reversing the first `N` arcs.
pub fn solve_ng(m: u32, n: u32, g: u32) -> Option<OrientationAssignment> {
    if m < 3 || n < 3 || g >= n {
        return None;
    }
    (0..m)
        .find(|&big_n| (m as i64 - 2 * big_n as i64).rem_euclid(n as i64) == g as i64)
        .map(|big_n| OrientationAssignment { m, n, reversed_arcs: (0..big_n as usize).collect() })
}

/// The least `N < m` for which `m - 2N` generates `Z_n`, so that the product
/// is one cycle of length `mn`.
pub fn single_cycle_assignment(m: u32, n: u32) -> Option<OrientationAssignment> {
    (0..m)
        .map(|big_n| (m as i64 - 2 * big_n as i64).rem_euclid(n as i64) as u32)
        .find(|&g| gcd(g, n) == 1)
        .and_then(|g| solve_ng(m, n, g))
}

/// Builds `C⃗_m ⊗_h {C⃗_n, C⃖_n}` for the assignment.
pub fn cycle_product(a: &OrientationAssignment) -> Result<Digraph> {
    let outer = Digraph::cycle(a.m)?;
    let forward = Digraph::cycle(a.n)?;
    let backward = Digraph::reversed_cycle(a.n)?;
    let members = (0..a.m as usize)
        .map(|t| if a.is_reversed(t) { backward.clone() } else { forward.clone() })
        .collect();
    product_h(&outer, &EdgeAssignment::new(outer.clone(), members)?)
}

/// Sorted cycle lengths of the components of the product. Fails if a
/// component is not a directed cycle or the decomposition is not `n/k`
/// copies of `C⃗_{mk}` with `k = |<g>|`.
pub fn cycle_product_structure(a: &OrientationAssignment) -> Result<Vec<u32>> {
    if a.reversed_count() >= a.m {
        return Err(Error::Precondition("at least one arc must keep the forward orientation".into()));
    }
    let product = cycle_product(a)?;
    let mut lengths = components(&product)
        .iter()
        .map(|c| {
            is_directed_cycle(&c.digraph)
                .ok_or_else(|| Error::Invariant("product component is not a directed cycle".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    lengths.sort_unstable();
    let k = subgroup_order(a.generator(), a.n);
    if lengths.len() as u32 != a.n / k || lengths.iter().any(|&l| l != a.m * k) {
        return Err(Error::Invariant(format!(
            "expected {} copies of C_{}, got {lengths:?}",
            a.n / k,
            a.m * k
        )));
    }
    Ok(lengths)
}

/// Walks each component of a simple 2-regular digraph: from its smallest
/// vertex along the stored orientation when the component is a directed
/// cycle, otherwise towards the smaller neighbour first. Yields, per
/// component, `(vertex, arc to the next vertex)` in walk order.
fn cyclic_walks(d: &Digraph) -> Result<Vec<Vec<(Vertex, usize)>>> {
    if d.arcs().iter().any(|&(u, v)| u == v) {
        return Err(Error::NotTwoRegular("loops are not supported".into()));
    }
    if underlying_graph(d).size() != d.size() {
        return Err(Error::NotTwoRegular("antiparallel arcs form a multi-edge".into()));
    }
    if let Some(v) = d.degrees().iter().position(|&x| x != 2) {
        return Err(Error::NotTwoRegular(format!("vertex {} has degree {}", v + 1, d.degrees()[v])));
    }
    let adj = d.neighbours();
    let mut walks = Vec::new();
    for comp in components(d) {
        let start = comp.vertices[0];
        let directed = is_directed_cycle(&comp.digraph).is_some();
        let first = if directed {
            *adj[start as usize - 1]
                .iter()
                .find(|&&(_, i)| d.arcs()[i].0 == start)
                .expect("out-degree 1")
        } else {
            *adj[start as usize - 1].iter().min().expect("degree 2")
        };
        let mut walk = vec![(start, first.1)];
        let (mut prev_arc, mut cur) = (first.1, first.0);
        while cur != start {
            let &(next, arc) = adj[cur as usize - 1]
                .iter()
                .find(|&&(_, i)| i != prev_arc)
                .expect("degree 2");
            walk.push((cur, arc));
            prev_arc = arc;
            cur = next;
        }
        walks.push(walk);
    }
    Ok(walks)
}

/// The same edge-magic labeling on the strongly oriented cycle `C⃗_m`
/// (vertex `t` is the `t`-th vertex of the walk of `f`'s cycle).
pub fn orient_cycle(f: &TotalLabeling) -> Result<TotalLabeling> {
    require_edge_magic(f)?;
    let walks = cyclic_walks(f.graph())?;
    if walks.len() != 1 {
        return Err(Error::Precondition(format!("graph is {} disjoint cycles, not one", walks.len())));
    }
    let walk = &walks[0];
    let m = walk.len() as u32;
    let vertex = walk.iter().map(|&(v, _)| f.vertex_label(v)).collect();
    let arc = walk.iter().map(|&(_, a)| f.arc_labels()[a]).collect();
    TotalLabeling::new(Digraph::cycle(m)?, vertex, arc)
}

fn check_odd_p(p: u32) -> Result<()> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::Precondition(format!("p = {p} must be odd and at least 3")));
    }
    Ok(())
}

/// The inner cycle `C⃗_p` named by a super edge-magic labeling, from the
/// oracle's first certificate.
pub fn sem_cycle_member(p: u32, guard: Guard) -> Result<SFamilyMember> {
    let report = exhaustive_super_edge_magic(&Digraph::cycle(p)?, guard)?;
    let cert = report
        .certificates
        .first()
        .ok_or_else(|| Error::Precondition(format!("C_{p} has no super edge-magic labeling")))?;
    SFamilyMember::from_labeling(cert)
}

fn require_single_cycle(prod: LabeledProduct, length: u32) -> Result<LabeledProduct> {
    if is_directed_cycle(prod.product()) != Some(length) {
        return Err(Error::Invariant(format!("product is not a single directed C_{length}")));
    }
    Ok(prod)
}

/// `C_{pm}` with valence `p val(f) - 3(p - 1)/2`: `C⃗_m` labeled by `f`,
/// times both orientations of a super edge-magic `C⃗_p`.
pub fn mcquillan_i(f: &TotalLabeling, p: u32, guard: Guard) -> Result<LabeledProduct> {
    check_odd_p(p)?;
    let outer = orient_cycle(f)?;
    let m = outer.order();
    if m % 2 == 0 && m < p {
        return Err(Error::Precondition(format!("m = {m} is even and smaller than p = {p}")));
    }
    let forward = sem_cycle_member(p, guard)?;
    let backward = forward.reversed();
    let a = single_cycle_assignment(m, p)
        .ok_or_else(|| Error::Invariant(format!("no orientation makes C_{m} x C_{p} a single cycle")))?;
    let members = (0..m as usize)
        .map(|t| if a.is_reversed(t) { backward.clone() } else { forward.clone() })
        .collect();
    let h = EdgeAssignment::new(outer.graph().clone(), members)?;
    require_single_cycle(induced_spk(&outer, &h)?, p * m)
}

/// `C_{pm}` with valence `3(p - 1)m + val(f)`: a super edge-magic `C⃗_p` as
/// outer factor, both orientations of `C⃗_m` labeled by `f` as inner factors.
pub fn mcquillan_ii(f: &TotalLabeling, p: u32, guard: Guard) -> Result<LabeledProduct> {
    check_odd_p(p)?;
    let inner = orient_cycle(f)?;
    let m = inner.order();
    let outer = sem_cycle_member(p, guard)?;
    let forward = t_member_from_labeling(&inner)?;
    let backward = forward.reversed();
    let a = single_cycle_assignment(p, m)
        .ok_or_else(|| Error::Invariant(format!("no orientation makes C_{p} x C_{m} a single cycle")))?;
    let members = (0..p as usize)
        .map(|t| if a.is_reversed(t) { backward.clone() } else { forward.clone() })
        .collect();
    let h = EdgeAssignment::new(outer.digraph().clone(), members)?;
    require_single_cycle(induced_tqs(&outer, &h)?, p * m)
}

/// `w(v) = f(v) + Σ f(e)` over arcs incident to `v`.
pub fn vertex_weights(f: &TotalLabeling) -> Vec<u32> {
    let mut w = f.vertex_labels().to_vec();
    for (&(u, v), &l) in f.graph().arcs().iter().zip(f.arc_labels()) {
        w[u as usize - 1] += l;
        if u != v {
            w[v as usize - 1] += l;
        }
    }
    w
}

pub fn vertex_magic_constant(f: &TotalLabeling) -> Option<u32> {
    let w = vertex_weights(f);
    let first = *w.first()?;
    w.iter().all(|&x| x == first).then_some(first)
}

/// Rotates the alternating vertex/arc sequence of every cycle by one place:
/// the arc `v_i v_{i+1}` takes the label of `v_i`, and `v_{i+1}` the label of
/// that arc. Turns an edge-magic labeling into a vertex-magic total one.
pub fn em_to_vmt(f: &TotalLabeling) -> Result<TotalLabeling> {
    require_edge_magic(f)?;
    let walks = cyclic_walks(f.graph())?;
    let mut vertex = vec![0; f.order() as usize];
    let mut arc = vec![0; f.size() as usize];
    for walk in walks {
        let len = walk.len();
        for (i, &(v, a)) in walk.iter().enumerate() {
            let next = walk[(i + 1) % len].0;
            arc[a] = f.vertex_label(v);
            vertex[next as usize - 1] = f.arc_labels()[a];
        }
    }
    TotalLabeling::new(f.graph().clone(), vertex, arc)
}

/// Inverse of [`em_to_vmt`].
pub fn vmt_to_em(g: &TotalLabeling) -> Result<TotalLabeling> {
    if vertex_magic_constant(g).is_none() {
        return Err(Error::Precondition("labeling is not vertex-magic".into()));
    }
    let walks = cyclic_walks(g.graph())?;
    let mut vertex = vec![0; g.order() as usize];
    let mut arc = vec![0; g.size() as usize];
    for walk in walks {
        let len = walk.len();
        for (i, &(v, a)) in walk.iter().enumerate() {
            let next = walk[(i + 1) % len].0;
            vertex[v as usize - 1] = g.arc_labels()[a];
            arc[a] = g.vertex_label(next);
        }
    }
    TotalLabeling::new(g.graph().clone(), vertex, arc)
}

/// Conjectured valence interval for `C_n` (`n = 2t + 1` or `n = 2t`).
pub fn conjectured_range(n: u32) -> (u32, u32) {
    let t = n / 2;
    if n % 2 == 1 {
        (5 * t + 4, 7 * t + 5)
    } else {
        (5 * t + 2, 7 * t + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageBudget {
    /// Largest `p + q` handed to the exhaustive oracle.
    pub oracle_max: u32,
    /// Whether the oracle may be run on `C_n` itself.
    pub direct_oracle: bool,
}

impl Default for CoverageBudget {
    fn default() -> Self {
        CoverageBudget { oracle_max: Guard::default().0, direct_oracle: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValenceStatus {
    Achieved,
    /// The oracle ran over `C_n` and none of the constructions produced it.
    NotAchieved,
    UnknownUnderBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageEntry {
    pub valence: u32,
    pub status: ValenceStatus,
    pub recipe: Option<String>,
    pub certificate: Option<TotalLabeling>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub n: u32,
    pub conjectured_range: (u32, u32),
    pub oracle_used: bool,
    /// One entry per valence of the conjectured range, plus any achieved
    /// valence outside it.
    pub entries: Vec<CoverageEntry>,
}

impl CoverageReport {
    pub fn achieved(&self) -> Vec<u32> {
        self.entries
            .iter()
            .filter(|e| e.status == ValenceStatus::Achieved)
            .map(|e| e.valence)
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        let (lo, hi) = self.conjectured_range;
        (lo..=hi).all(|v| self.achieved().contains(&v))
    }
}

/// Achieved valences of `C_n` from the oracle (when the budget allows), the
/// two product constructions over every factorisation `n = pm` with `p` an
/// odd prime, and complement closure.
pub fn godbold_slater_report(n: u32, budget: CoverageBudget) -> Result<CoverageReport> {
    if n < 3 {
        return Err(Error::Precondition(format!("cycle length {n} < 3")));
    }
    let guard = Guard(budget.oracle_max);
    let target = Digraph::cycle(n)?;
    let mut found: Vec<(u32, String, TotalLabeling)> = Vec::new();

    let oracle_used = budget.direct_oracle && guard.admits(&target);
    if oracle_used {
        let report = exhaustive_edge_magic(&target, guard)?;
        for (v, f) in report.valences.into_iter().zip(report.certificates) {
            found.push((v, "oracle".to_string(), f));
        }
    }

    let mut jobs: Vec<(u32, u32, u32, TotalLabeling)> = Vec::new();
    for p in (3..=n).filter(|&p| n % p == 0 && is_odd_prime(p)) {
        let m = n / p;
        let base_graph = Digraph::cycle(m);
        let Ok(base_graph) = base_graph else { continue };
        if !guard.admits(&base_graph) || !guard.admits(&Digraph::cycle(p)?) {
            continue;
        }
        let base = exhaustive_edge_magic(&base_graph, guard)?;
        for (v, f) in base.valences.into_iter().zip(base.certificates) {
            jobs.push((p, m, v, f));
        }
    }
    let constructed: Vec<Vec<(u32, String, TotalLabeling)>> = jobs
        .par_iter()
        .map(|(p, m, v, f)| -> Result<Vec<(u32, String, TotalLabeling)>> {
            let mut out = Vec::new();
            if m % 2 == 1 || m >= p {
                let prod = mcquillan_i(f, *p, guard)?;
                out.push((prod.valence, format!("mcquillan-i(p={p},m={m},base={v})"), prod.labeling));
            }
            let prod = mcquillan_ii(f, *p, guard)?;
            out.push((prod.valence, format!("mcquillan-ii(p={p},m={m},base={v})"), prod.labeling));
            Ok(out)
        })
        .collect::<Result<_>>()?;
    found.extend(constructed.into_iter().flatten());

    let complements = found
        .iter()
        .map(|(_, recipe, f)| {
            let c = em_complement(f)?;
            let v = valence_if_edge_magic(&c).expect("complement is edge-magic");
            Ok((v, format!("complement({recipe})"), c))
        })
        .collect::<Result<Vec<_>>>()?;
    found.extend(complements);
    found.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let mut best: BTreeMap<u32, (String, TotalLabeling)> = BTreeMap::new();
    for (v, recipe, f) in found {
        if valence_if_edge_magic(&f) != Some(v) || underlying_graph(f.graph()).size() != n {
            return Err(Error::Invariant(format!("certificate for {v} via {recipe} does not verify")));
        }
        best.entry(v).or_insert((recipe, f));
    }

    let (lo, hi) = conjectured_range(n);
    let mut entries: Vec<CoverageEntry> = (lo..=hi)
        .map(|v| match best.remove(&v) {
            Some((recipe, f)) => CoverageEntry {
                valence: v,
                status: ValenceStatus::Achieved,
                recipe: Some(recipe),
                certificate: Some(f),
            },
            None => CoverageEntry {
                valence: v,
                status: if oracle_used { ValenceStatus::NotAchieved } else { ValenceStatus::UnknownUnderBudget },
                recipe: None,
                certificate: None,
            },
        })
        .collect();
    entries.extend(best.into_iter().map(|(v, (recipe, f))| CoverageEntry {
        valence: v,
        status: ValenceStatus::Achieved,
        recipe: Some(recipe),
        certificate: Some(f),
    }));
    entries.sort_by_key(|e| e.valence);
    Ok(CoverageReport { n, conjectured_range: (lo, hi), oracle_used, entries })
}

fn is_odd_prime(p: u32) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0)
}
