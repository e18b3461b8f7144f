//! Exhaustive ground truth for small graphs.
//!
//! Edge-magic search fixes a candidate valence, then assigns vertex labels by
//! backtracking; as soon as both ends of an arc carry labels the arc label is
//! forced to `valence - f(u) - f(v)`, and the branch dies when that label is
//! out of range or already taken. Super edge-magic search enumerates vertex
//! bijections onto `[1, p]` whose endpoint sums stay distinct and inside a
//! window of width `q`, then extends them.
//!
//! No symmetry is quotiented out, so certificates and counts refer to labeled
//! (not isomorphism-class) solutions.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::labeling::{extend_to_super_edge_magic, valence_if_edge_magic, TotalLabeling, VertexLabeling};

pub const DEFAULT_GUARD: u32 = 18;
pub const GUARD_ENV: &str = "MAGICLAB_ORACLE_GUARD";

/// Upper bound on `p + q` accepted by the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guard(pub u32);

impl Default for Guard {
    fn default() -> Self {
        Guard(DEFAULT_GUARD)
    }
}

impl Guard {
    /// The default guard unless `MAGICLAB_ORACLE_GUARD` holds a number.
    pub fn from_env() -> Self {
        std::env::var(GUARD_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Guard)
            .unwrap_or_default()
    }

    pub fn admits(self, d: &Digraph) -> bool {
        d.order() + d.size() <= self.0
    }

    fn check(self, d: &Digraph) -> Result<()> {
        let size = d.order() + d.size();
        if size > self.0 {
            return Err(Error::GuardExceeded { size, guard: self.0 });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "em")]
    EdgeMagic,
    #[serde(rename = "sem")]
    SuperEdgeMagic,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "em" => Ok(Mode::EdgeMagic),
            "sem" => Ok(Mode::SuperEdgeMagic),
            other => Err(Error::Usage(format!("unknown oracle mode `{other}`"))),
        }
    }
}

/// Achievable valences of one graph, with the first labeling found for each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValenceReport {
    pub graph: Digraph,
    pub mode: Mode,
    /// Ascending.
    pub valences: Vec<u32>,
    /// `certificates[i]` realizes `valences[i]`.
    pub certificates: Vec<TotalLabeling>,
}

impl ValenceReport {
    pub fn certificate(&self, valence: u32) -> Option<&TotalLabeling> {
        self.valences
            .iter()
            .position(|&v| v == valence)
            .map(|i| &self.certificates[i])
    }

    /// Re-checks every certificate against its claimed valence.
    pub fn verify(&self) -> bool {
        self.valences.len() == self.certificates.len()
            && self.valences.iter().zip(&self.certificates).all(|(&v, f)| {
                valence_if_edge_magic(f) == Some(v)
                    && f.graph() == &self.graph
                    && (self.mode == Mode::EdgeMagic || f.vertex_labels().iter().all(|&l| l <= f.order()))
            })
    }
}

/// Vertex order for the backtracking: start from a vertex of largest degree,
/// then repeatedly take the vertex with the most arcs into the placed set
/// (ties by degree, then by index). `closing[t]` lists the arcs whose second
/// endpoint is placed at step `t`.
struct SearchPlan {
    order: Vec<u32>,
    closing: Vec<Vec<usize>>,
}

impl SearchPlan {
    fn new(d: &Digraph) -> Self {
        let n = d.order() as usize;
        let deg = d.degrees();
        let adj = d.neighbours();
        let mut placed = vec![false; n];
        let mut links = vec![0u32; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .filter(|&x| !placed[x])
                .max_by(|&a, &b| (links[a], deg[a]).cmp(&(links[b], deg[b])).then(b.cmp(&a)))
                .unwrap();
            placed[next] = true;
            order.push(next as u32 + 1);
            for &(w, _) in &adj[next] {
                links[w as usize - 1] += 1;
            }
        }
        let mut position = vec![0usize; n];
        for (t, &v) in order.iter().enumerate() {
            position[v as usize - 1] = t;
        }
        let mut closing = vec![Vec::new(); n];
        for (i, &(u, v)) in d.arcs().iter().enumerate() {
            let t = position[u as usize - 1].max(position[v as usize - 1]);
            closing[t].push(i);
        }
        SearchPlan { order, closing }
    }
}

/// Valence interval that any edge-magic labeling must fall in: the trivial
/// bounds `[6, 3N - 3]` intersected with the bounds from
/// `q * val = N(N+1)/2 + Σ (deg(x) - 1) f(x)`.
fn candidate_valences(d: &Digraph) -> std::ops::RangeInclusive<u32> {
    let q = d.size() as i64;
    if q == 0 {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    let total = d.order() as i64 + q;
    let label_sum = total * (total + 1) / 2;
    let mut weights: Vec<i64> = d.degrees().iter().map(|&x| x as i64 - 1).collect();
    weights.sort_unstable_by(|a, b| b.cmp(a));
    let extreme = |ascending: bool| -> i64 {
        // Positive weights take the smallest labels first (or largest when
        // maximising), negative weights the opposite end.
        let pos: Vec<i64> = weights.iter().copied().filter(|&w| w > 0).collect();
        let mut neg: Vec<i64> = weights.iter().copied().filter(|&w| w < 0).collect();
        neg.sort_unstable();
        let mut acc = 0;
        for (r, w) in pos.iter().enumerate() {
            let label = if ascending { r as i64 + 1 } else { total - r as i64 };
            acc += w * label;
        }
        for (r, w) in neg.iter().enumerate() {
            let label = if ascending { total - r as i64 } else { r as i64 + 1 };
            acc += w * label;
        }
        acc
    };
    let lo = (label_sum + extreme(true)).div_euclid(q) + ((label_sum + extreme(true)).rem_euclid(q) != 0) as i64;
    let hi = (label_sum + extreme(false)).div_euclid(q);
    let lo = lo.max(6) as u32;
    let hi = hi.min(3 * total - 3).max(0) as u32;
    lo..=hi
}

fn search_valence<F>(d: &Digraph, plan: &SearchPlan, valence: u32, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[u32], &[u32]) -> ControlFlow<()>,
{
    let total = d.order() + d.size();
    let mut used = vec![false; total as usize + 1];
    let mut vertex = vec![0u32; d.order() as usize];
    let mut arc = vec![0u32; d.arcs().len()];

    #[allow(clippy::too_many_arguments)]
    fn go<F>(
        step: usize,
        d: &Digraph,
        plan: &SearchPlan,
        valence: u32,
        total: u32,
        used: &mut [bool],
        vertex: &mut [u32],
        arc: &mut [u32],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[u32], &[u32]) -> ControlFlow<()>,
    {
        if step == plan.order.len() {
            return visit(vertex, arc);
        }
        let x = plan.order[step] as usize - 1;
        for label in 1..=total {
            if used[label as usize] {
                continue;
            }
            used[label as usize] = true;
            vertex[x] = label;
            let mut forced = 0;
            let mut ok = true;
            for &i in &plan.closing[step] {
                let (u, v) = d.arcs()[i];
                let s = vertex[u as usize - 1] + vertex[v as usize - 1];
                if s >= valence || valence - s > total || used[(valence - s) as usize] {
                    ok = false;
                    break;
                }
                arc[i] = valence - s;
                used[arc[i] as usize] = true;
                forced += 1;
            }
            let flow = if ok {
                go(step + 1, d, plan, valence, total, used, vertex, arc, visit)
            } else {
                ControlFlow::Continue(())
            };
            for &i in &plan.closing[step][..forced] {
                used[arc[i] as usize] = false;
            }
            used[label as usize] = false;
            vertex[x] = 0;
            flow?;
        }
        ControlFlow::Continue(())
    }

    go(0, d, plan, valence, total, &mut used, &mut vertex, &mut arc, visit)
}

fn labeling_from(d: &Digraph, vertex: &[u32], arc: &[u32]) -> TotalLabeling {
    TotalLabeling::new(d.clone(), vertex.to_vec(), arc.to_vec()).expect("search only emits bijections")
}

fn first_edge_magic(d: &Digraph, plan: &SearchPlan, valence: u32) -> Option<TotalLabeling> {
    let mut found = None;
    let _ = search_valence(d, plan, valence, &mut |vertex, arc| {
        found = Some(labeling_from(d, vertex, arc));
        ControlFlow::Break(())
    });
    found
}

/// Every edge-magic valence of `d` with one certificate each.
pub fn exhaustive_edge_magic(d: &Digraph, guard: Guard) -> Result<ValenceReport> {
    guard.check(d)?;
    let plan = SearchPlan::new(d);
    let candidates: Vec<u32> = candidate_valences(d).collect();
    let found: Vec<(u32, TotalLabeling)> = candidates
        .par_iter()
        .filter_map(|&v| first_edge_magic(d, &plan, v).map(|f| (v, f)))
        .collect();
    let (valences, certificates) = found.into_iter().unzip();
    Ok(ValenceReport { graph: d.clone(), mode: Mode::EdgeMagic, valences, certificates })
}

/// Whether `d` has an edge-magic labeling of the given valence, with a witness.
pub fn edge_magic_with_valence(d: &Digraph, valence: u32, guard: Guard) -> Result<Option<TotalLabeling>> {
    guard.check(d)?;
    if !candidate_valences(d).contains(&valence) {
        return Ok(None);
    }
    Ok(first_edge_magic(d, &SearchPlan::new(d), valence))
}

/// All edge-magic labelings of `d`, by ascending valence and then search order.
pub fn enumerate_edge_magic(d: &Digraph, guard: Guard) -> Result<Vec<TotalLabeling>> {
    guard.check(d)?;
    let plan = SearchPlan::new(d);
    let candidates: Vec<u32> = candidate_valences(d).collect();
    let per_valence: Vec<Vec<TotalLabeling>> = candidates
        .par_iter()
        .map(|&v| {
            let mut out = Vec::new();
            let _ = search_valence(d, &plan, v, &mut |vertex, arc| {
                out.push(labeling_from(d, vertex, arc));
                ControlFlow::Continue(())
            });
            out
        })
        .collect();
    Ok(per_valence.into_iter().flatten().collect())
}

/// All super edge-magic labelings of `d`, in search order.
pub fn enumerate_super_edge_magic(d: &Digraph, guard: Guard) -> Result<Vec<TotalLabeling>> {
    guard.check(d)?;
    let q = d.size();
    if q == 0 {
        return Ok(Vec::new());
    }
    let plan = SearchPlan::new(d);
    let p = d.order();
    let mut used = vec![false; p as usize + 1];
    let mut sum_used = vec![false; 2 * p as usize + 1];
    let mut vertex = vec![0u32; p as usize];
    let mut out = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn go(
        step: usize,
        d: &Digraph,
        plan: &SearchPlan,
        window: (u32, u32),
        used: &mut [bool],
        sum_used: &mut [bool],
        vertex: &mut [u32],
        out: &mut Vec<TotalLabeling>,
    ) {
        let p = d.order();
        let q = d.size();
        if step == plan.order.len() {
            let g = VertexLabeling::new(d.clone(), vertex.to_vec()).expect("bijection by construction");
            out.push(extend_to_super_edge_magic(&g).expect("sums are consecutive by construction"));
            return;
        }
        let x = plan.order[step] as usize - 1;
        for label in 1..=p {
            if used[label as usize] {
                continue;
            }
            used[label as usize] = true;
            vertex[x] = label;
            let (mut lo, mut hi) = window;
            let mut marked = 0;
            let mut ok = true;
            for &i in &plan.closing[step] {
                let (u, v) = d.arcs()[i];
                let s = vertex[u as usize - 1] + vertex[v as usize - 1];
                lo = lo.min(s);
                hi = hi.max(s);
                if sum_used[s as usize] || hi - lo >= q {
                    ok = false;
                    break;
                }
                sum_used[s as usize] = true;
                marked += 1;
            }
            if ok {
                go(step + 1, d, plan, (lo, hi), used, sum_used, vertex, out);
            }
            for &i in &plan.closing[step][..marked] {
                let (u, v) = d.arcs()[i];
                sum_used[(vertex[u as usize - 1] + vertex[v as usize - 1]) as usize] = false;
            }
            used[label as usize] = false;
            vertex[x] = 0;
        }
    }

    go(0, d, &plan, (u32::MAX, 0), &mut used, &mut sum_used, &mut vertex, &mut out);
    Ok(out)
}

/// Every super edge-magic valence of `d` with one certificate each.
pub fn exhaustive_super_edge_magic(d: &Digraph, guard: Guard) -> Result<ValenceReport> {
    let all = enumerate_super_edge_magic(d, guard)?;
    let mut valences: Vec<u32> = Vec::new();
    let mut certificates: Vec<TotalLabeling> = Vec::new();
    let mut by_valence: Vec<(u32, TotalLabeling)> = Vec::new();
    for f in all {
        let v = valence_if_edge_magic(&f).expect("extension is edge-magic");
        if !by_valence.iter().any(|(w, _)| *w == v) {
            by_valence.push((v, f));
        }
    }
    by_valence.sort_by_key(|(v, _)| *v);
    for (v, f) in by_valence {
        valences.push(v);
        certificates.push(f);
    }
    Ok(ValenceReport { graph: d.clone(), mode: Mode::SuperEdgeMagic, valences, certificates })
}

pub fn run(d: &Digraph, mode: Mode, guard: Guard) -> Result<ValenceReport> {
    match mode {
        Mode::EdgeMagic => exhaustive_edge_magic(d, guard),
        Mode::SuperEdgeMagic => exhaustive_super_edge_magic(d, guard),
    }
}

pub const MAX_ONE_REGULAR_ORDER: u32 = 11;

/// Number of permutations `σ` of `[1, p]` whose sums `i + σ(i)` are `p`
/// distinct consecutive integers, by scanning all `p!` permutations.
pub fn count_sem_one_regular(p: u32) -> Result<u64> {
    if p > MAX_ONE_REGULAR_ORDER {
        return Err(Error::Precondition(format!("p = {p} exceeds {MAX_ONE_REGULAR_ORDER}")));
    }
    if p == 0 {
        return Ok(0);
    }
    let n = p as usize;
    let consecutive = |perm: &[u32], seen: &mut Vec<bool>| -> bool {
        seen.iter_mut().for_each(|s| *s = false);
        let sums = perm.iter().enumerate().map(|(i, &s)| i as u32 + 1 + s);
        let lo = sums.clone().min().unwrap();
        for s in sums {
            let slot = (s - lo) as usize;
            if slot >= n || std::mem::replace(&mut seen[slot], true) {
                return false;
            }
        }
        true
    };
    // Heap's algorithm, iterative form.
    let mut perm: Vec<u32> = (1..=p).collect();
    let mut c = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut count = consecutive(&perm, &mut seen) as u64;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count += consecutive(&perm, &mut seen) as u64;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(count)
}
