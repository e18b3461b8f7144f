//! The h-product `D ⊗_h Γ` and the labelings it induces.
//!
//! Product vertices are indexed row-major with the outer coordinate major:
//! `(a, i)` is vertex `|V| (a - 1) + i`. Arcs are emitted ordered by outer
//! arc index, then inner arc index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{phi_reflect, psi_reflect, EdgeAssignment, InnerFactor, SFamilyMember, TFamilyMember};
use crate::graph::{apply_map, Digraph, Vertex, VertexMap};
use crate::labeling::{
    is_super_edge_magic, require_edge_magic, require_super_edge_magic, valence_if_edge_magic, TotalLabeling,
};
use crate::transforms::{em_complement, even_labeling, odd_labeling, sem_complement};

/// A vertex of a product, as `(outer, inner)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProductVertex {
    pub outer: Vertex,
    pub inner: Vertex,
}

impl ProductVertex {
    pub fn encode(self, inner_order: u32) -> Vertex {
        inner_order * (self.outer - 1) + self.inner
    }

    pub fn decode(v: Vertex, inner_order: u32) -> Self {
        ProductVertex { outer: (v - 1) / inner_order + 1, inner: (v - 1) % inner_order + 1 }
    }
}

/// `((a,i),(b,j))` is an arc iff `(a,b)` is an arc of `D` and `(i,j)` an arc of `h(a,b)`.
pub fn product_h<M: InnerFactor>(d: &Digraph, h: &EdgeAssignment<M>) -> Result<Digraph> {
    if h.domain() != d {
        return Err(Error::PartialAssignment("assignment is defined on a different digraph".into()));
    }
    // With no arcs the inner order cannot be read off the assignment.
    let inner = h
        .inner_order()
        .ok_or_else(|| Error::Precondition("outer digraph has no arcs".into()))?;
    let mut arcs = Vec::with_capacity(h.members().iter().map(|m| m.inner_digraph().arcs().len()).sum());
    for (t, &(a, b)) in d.arcs().iter().enumerate() {
        for &(i, j) in h.image(t).inner_digraph().arcs() {
            arcs.push((
                ProductVertex { outer: a, inner: i }.encode(inner),
                ProductVertex { outer: b, inner: j }.encode(inner),
            ));
        }
    }
    Digraph::new(d.order() * inner, arcs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction")]
pub enum Provenance {
    /// Outer factor edge-magic, inner factors in `S_p^k`.
    #[serde(rename = "spk")]
    Spk { p: u32, k: u32, outer_valence: u32 },
    /// Outer factor in `S_n^k`, inner factors in `T^q_σ` over a `p`-set.
    #[serde(rename = "tqs")]
    Tqs { p: u32, q: u32, k: u32, n: u32, sigma: u32 },
}

impl Provenance {
    pub fn predicted_valence(&self) -> u32 {
        match *self {
            Provenance::Spk { p, k, outer_valence } => p * (outer_valence - 3) + k + p,
            Provenance::Tqs { p, q, k, n, sigma } => (p + q) * (k + n - 3) + sigma,
        }
    }
}

/// A product digraph together with its induced labeling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledProduct {
    pub labeling: TotalLabeling,
    pub provenance: Provenance,
    pub valence: u32,
}

impl LabeledProduct {
    fn checked(labeling: TotalLabeling, provenance: Provenance) -> Result<Self> {
        let valence = provenance.predicted_valence();
        match valence_if_edge_magic(&labeling) {
            Some(v) if v == valence => Ok(LabeledProduct { labeling, provenance, valence }),
            other => Err(Error::Invariant(format!(
                "induced labeling has valence {other:?}, construction predicts {valence}"
            ))),
        }
    }

    pub fn product(&self) -> &Digraph {
        self.labeling.graph()
    }
}

fn check_domain<M: InnerFactor>(d: &Digraph, h: &EdgeAssignment<M>) -> Result<()> {
    if h.domain() != d {
        return Err(Error::PartialAssignment("assignment is defined on a different digraph".into()));
    }
    if d.size() == 0 {
        return Err(Error::Precondition("outer digraph has no arcs".into()));
    }
    Ok(())
}

/// Labels `(a, i)` with `p(f(a) - 1) + i` and the arc over `e` and `(i, j)`
/// with `p(f(e) - 1) + k + p - (i + j)`.
pub fn induced_spk(f: &TotalLabeling, h: &EdgeAssignment<SFamilyMember>) -> Result<LabeledProduct> {
    let outer_valence = require_edge_magic(f)?;
    let d = f.graph();
    check_domain(d, h)?;
    let (p, k) = h.class().expect("domain has arcs");
    let product = product_h(d, h)?;
    let mut vertex = vec![0; product.order() as usize];
    for a in d.vertices() {
        for i in 1..=p {
            vertex[ProductVertex { outer: a, inner: i }.encode(p) as usize - 1] = p * (f.vertex_label(a) - 1) + i;
        }
    }
    let mut arc = Vec::with_capacity(product.arcs().len());
    for (t, &e) in f.arc_labels().iter().enumerate() {
        for &(i, j) in h.image(t).digraph().arcs() {
            arc.push(p * (e - 1) + k + p - (i + j));
        }
    }
    let labeling = TotalLabeling::new(product, vertex, arc)
        .map_err(|e| Error::Invariant(format!("induced S-labeling is not a bijection: {e}")))?;
    LabeledProduct::checked(labeling, Provenance::Spk { p, k, outer_valence })
}

/// Labels `(i, a)` with `(p + q)(i - 1) + a` and the arc over `(i, j)` and
/// `(a, b)` with `(p + q)(k + n - (i + j) - 1) + σ - (a + b)`.
pub fn induced_tqs(d: &SFamilyMember, h: &EdgeAssignment<TFamilyMember>) -> Result<LabeledProduct> {
    let outer = d.digraph();
    check_domain(outer, h)?;
    let (p, q, sigma, _) = h.class().expect("domain has arcs");
    let (n, k) = (d.p(), d.k());
    let width = p + q;
    let product = product_h(outer, h)?;
    let names = h.image(0);
    let mut vertex = vec![0; product.order() as usize];
    for i in outer.vertices() {
        for r in 1..=p {
            vertex[ProductVertex { outer: i, inner: r }.encode(p) as usize - 1] = width * (i - 1) + names.name(r);
        }
    }
    let mut arc = Vec::with_capacity(product.arcs().len());
    for (t, &(i, j)) in outer.arcs().iter().enumerate() {
        for &(a, b) in h.image(t).named_arcs() {
            arc.push(width * (k + n - (i + j) - 1) + sigma - (a + b));
        }
    }
    let labeling = TotalLabeling::new(product, vertex, arc)
        .map_err(|e| Error::Invariant(format!("induced T-labeling is not a bijection: {e}")))?;
    LabeledProduct::checked(labeling, Provenance::Tqs { p, q, k, n, sigma })
}

/// `h̄ = φ ∘ h`.
pub fn hbar_of(h: &EdgeAssignment<SFamilyMember>) -> EdgeAssignment<SFamilyMember> {
    h.map(h.domain().clone(), phi_reflect).expect("φ maps one class to one class")
}

/// The reflected outer digraph `D^c` (arcs `(n + 1 - i, n + 1 - j)`, in the
/// order of `D`) with `h^c` on its arcs: `h^c(i, j) = ψ(h(n + 1 - i, n + 1 - j))`.
pub fn hc_of(h: &EdgeAssignment<TFamilyMember>, n: u32) -> Result<EdgeAssignment<TFamilyMember>> {
    if h.domain().order() != n {
        return Err(Error::Precondition(format!("outer digraph has order {}, not {n}", h.domain().order())));
    }
    let dc = Digraph::new(n, h.domain().arcs().iter().map(|&(i, j)| (n + 1 - i, n + 1 - j)))?;
    h.map(dc, psi_reflect)
}

/// Labeled-digraph equality after transporting `lhs` along `witness`:
/// the same arc set, and every vertex and arc carrying the same label.
pub fn equal_under_witness(lhs: &TotalLabeling, rhs: &TotalLabeling, witness: &VertexMap) -> bool {
    let (lg, rg) = (lhs.graph(), rhs.graph());
    if lg.order() != rg.order() || lg.size() != rg.size() {
        return false;
    }
    let Ok(moved) = apply_map(lg, witness) else {
        return false;
    };
    let index = rg.arc_index();
    let arcs_match = moved.arcs().iter().enumerate().all(|(t, a)| {
        index
            .get(a)
            .is_some_and(|&s| lhs.arc_labels()[t] == rhs.arc_labels()[s])
    });
    arcs_match && lg.vertices().all(|v| lhs.vertex_label(v) == rhs.vertex_label(witness.get(v)))
}

/// `(a, i) -> (a, p + 1 - i)` on a product with `n` outer vertices.
pub fn inner_reflection_witness(n: u32, p: u32) -> VertexMap {
    VertexMap::from_fn(n * p, |v| {
        let ProductVertex { outer, inner } = ProductVertex::decode(v, p);
        ProductVertex { outer, inner: p + 1 - inner }.encode(p)
    })
}

/// `(i, r) -> (n + 1 - i, p + 1 - r)`.
pub fn full_reflection_witness(n: u32, p: u32) -> VertexMap {
    VertexMap::from_fn(n * p, |v| {
        let ProductVertex { outer, inner } = ProductVertex::decode(v, p);
        ProductVertex { outer: n + 1 - outer, inner: p + 1 - inner }.encode(p)
    })
}

fn inner_p(h: &EdgeAssignment<SFamilyMember>) -> Result<u32> {
    h.class()
        .map(|(p, _)| p)
        .ok_or_else(|| Error::Precondition("outer digraph has no arcs".into()))
}

/// `complement(f̂)` against the product induced by `complement(f)` and `h̄`.
pub fn check_em_complement_commutes(f: &TotalLabeling, h: &EdgeAssignment<SFamilyMember>) -> Result<bool> {
    let lhs = em_complement(&induced_spk(f, h)?.labeling)?;
    let rhs = induced_spk(&em_complement(f)?, &hbar_of(h))?;
    let witness = inner_reflection_witness(f.order(), inner_p(h)?);
    Ok(equal_under_witness(&lhs, &rhs.labeling, &witness))
}

/// `(f̂)_c` against the product induced by `f_c` and `h̄`, including equal valences.
pub fn check_sem_complement_commutes(f: &TotalLabeling, h: &EdgeAssignment<SFamilyMember>) -> Result<bool> {
    require_super_edge_magic(f)?;
    let induced = induced_spk(f, h)?;
    if !is_super_edge_magic(&induced.labeling) {
        return Ok(false);
    }
    let lhs = sem_complement(&induced.labeling)?;
    let rhs = induced_spk(&sem_complement(f)?, &hbar_of(h))?;
    let witness = inner_reflection_witness(f.order(), inner_p(h)?);
    Ok(equal_under_witness(&lhs, &rhs.labeling, &witness) && valence_if_edge_magic(&lhs) == Some(rhs.valence))
}

/// Both odd/even commutations for an SEM labeling with `p = q`:
/// `complement(ô(f)) ≃ ê(f_c)` and `complement(ê(f)) ≃ ô(f_c)`, the right
/// sides taken over `h̄`.
pub fn check_odd_even_commute(f: &TotalLabeling, h: &EdgeAssignment<SFamilyMember>) -> Result<(bool, bool)> {
    let fc = sem_complement(f)?;
    let hbar = hbar_of(h);
    let witness = inner_reflection_witness(f.order(), inner_p(h)?);
    let odd_side = em_complement(&induced_spk(&odd_labeling(f)?, h)?.labeling)?;
    let odd_match = equal_under_witness(&odd_side, &induced_spk(&even_labeling(&fc)?, &hbar)?.labeling, &witness);
    let even_side = em_complement(&induced_spk(&even_labeling(f)?, h)?.labeling)?;
    let even_match = equal_under_witness(&even_side, &induced_spk(&odd_labeling(&fc)?, &hbar)?.labeling, &witness);
    Ok((odd_match, even_match))
}

/// `complement(h̃)` on `D ⊗_h T` against the labeling induced on `D^c ⊗_{h^c} T'`.
pub fn check_tqs_complement_commutes(d: &SFamilyMember, h: &EdgeAssignment<TFamilyMember>) -> Result<bool> {
    let lhs = em_complement(&induced_tqs(d, h)?.labeling)?;
    let hc = hc_of(h, d.p())?;
    let dc = phi_reflect(d);
    if dc.digraph() != hc.domain() {
        return Err(Error::Invariant("reflected outer digraph disagrees with the domain of h^c".into()));
    }
    let rhs = induced_tqs(&dc, &hc)?;
    let (p, _, _, _) = h.class().expect("checked by induced_tqs");
    let witness = full_reflection_witness(d.p(), p);
    Ok(equal_under_witness(&lhs, &rhs.labeling, &witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{enumerate_s1regular, t_member_from_labeling};
    use crate::graph::{components, is_directed_cycle};
    use crate::labeling::{c3_val9, extend_to_super_edge_magic, VertexLabeling};

    fn c3_forward_val9() -> TotalLabeling {
        extend_to_super_edge_magic(&VertexLabeling::identity(Digraph::cycle(3).unwrap())).unwrap()
    }

    #[test]
    fn kronecker_of_cycles() {
        let c3 = Digraph::cycle(3).unwrap();
        let p33 = product_h(&c3, &EdgeAssignment::constant(c3.clone(), c3.clone())).unwrap();
        let cs = components(&p33);
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| is_directed_cycle(&c.digraph) == Some(3)));

        let c4 = Digraph::cycle(4).unwrap();
        let p34 = product_h(&c3, &EdgeAssignment::constant(c3.clone(), c4)).unwrap();
        assert_eq!(is_directed_cycle(&p34), Some(12));
    }

    #[test]
    fn one_arc_outer() {
        let d = Digraph::path(2).unwrap();
        let inner = Digraph::new(4, [(1, 2), (2, 3), (4, 1)]).unwrap();
        let prod = product_h(&d, &EdgeAssignment::constant(d.clone(), inner)).unwrap();
        assert_eq!(prod.order(), 8);
        assert_eq!(prod.size(), 3);
        assert_eq!(prod.arcs(), &[(1, 6), (2, 7), (4, 5)]);
    }

    #[test]
    fn product_rejects_foreign_assignment() {
        let c3 = Digraph::cycle(3).unwrap();
        let h = EdgeAssignment::constant(Digraph::path(3).unwrap(), c3.clone());
        assert!(matches!(product_h(&c3, &h), Err(Error::PartialAssignment(_))));
    }

    #[test]
    fn spk_examples() {
        let s3 = enumerate_s1regular(3);
        let f = c3_val9();
        let h = EdgeAssignment::constant(f.graph().clone(), s3[0].clone());
        let prod = induced_spk(&f, &h).unwrap();
        assert_eq!(prod.valence, 24);
        assert!(is_super_edge_magic(&prod.labeling));
        assert_eq!(prod.product().order(), 9);
        assert_eq!(prod.product().size(), 9);

        let fbar = em_complement(&f).unwrap();
        let hbar = EdgeAssignment::constant(fbar.graph().clone(), s3[0].clone());
        assert_eq!(induced_spk(&fbar, &hbar).unwrap().valence, 33);
    }

    #[test]
    fn spk_rejects_non_magic() {
        let g = Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let broken = TotalLabeling::new(g.clone(), vec![1, 2, 3], vec![5, 4, 6]).unwrap();
        let h = EdgeAssignment::constant(g, enumerate_s1regular(3)[0].clone());
        assert!(matches!(induced_spk(&broken, &h), Err(Error::NotEdgeMagic { .. })));
    }

    #[test]
    fn tqs_examples() {
        let d = SFamilyMember::new(Digraph::cycle(3).unwrap()).unwrap();
        assert_eq!(d.k(), 3);
        let t = t_member_from_labeling(&c3_forward_val9()).unwrap();
        let h = EdgeAssignment::constant(d.digraph().clone(), t.clone());
        let prod = induced_tqs(&d, &h).unwrap();
        assert_eq!(prod.valence, 27);
        let mut labels: Vec<u32> = prod.labeling.vertex_labels().iter().chain(prod.labeling.arc_labels()).copied().collect();
        labels.sort();
        assert_eq!(labels, (1..=18).collect::<Vec<_>>());
        let cs = components(prod.product());
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| is_directed_cycle(&c.digraph) == Some(3)));

        let t12 = psi_reflect(&t);
        assert_eq!(t12.sigma(), 12);
        let h12 = EdgeAssignment::constant(d.digraph().clone(), t12);
        assert_eq!(induced_tqs(&d, &h12).unwrap().valence, 30);
    }

    #[test]
    fn hbar_examples() {
        let s3 = enumerate_s1regular(3);
        let d = Digraph::cycle(3).unwrap();
        let h = EdgeAssignment::constant(d.clone(), s3[0].clone());
        assert_eq!(hbar_of(&h), EdgeAssignment::constant(d.clone(), phi_reflect(&s3[0])));
        let mixed = EdgeAssignment::new(d, vec![s3[0].clone(), s3[1].clone(), s3[1].clone()]).unwrap();
        assert_eq!(hbar_of(&hbar_of(&mixed)), mixed);

        let f = c3_val9();
        for h in EdgeAssignment::all(f.graph(), &s3) {
            assert!(check_em_complement_commutes(&f, &h).unwrap());
        }
    }

    #[test]
    fn hc_examples() {
        let d = SFamilyMember::new(Digraph::cycle(3).unwrap()).unwrap();
        let t = t_member_from_labeling(&c3_forward_val9()).unwrap();
        let h = EdgeAssignment::constant(d.digraph().clone(), t.clone());
        let hc = hc_of(&h, 3).unwrap();
        assert!(hc.members().iter().all(|m| m.sigma() == 12));
        let prod = induced_tqs(&d, &h).unwrap();
        let prod_c = induced_tqs(&phi_reflect(&d), &hc).unwrap();
        assert_eq!(prod_c.valence, 3 * (3 * 6 + 1) - prod.valence);
        assert!(check_tqs_complement_commutes(&d, &h).unwrap());

        let back = hc_of(&hc, 3).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn sem_complement_commutation_examples() {
        let f = c3_val9();
        for h in EdgeAssignment::all(f.graph(), &enumerate_s1regular(3)) {
            assert!(check_sem_complement_commutes(&f, &h).unwrap());
        }
        let c5 = extend_to_super_edge_magic(&VertexLabeling::new(Digraph::cycle(5).unwrap(), vec![1, 4, 2, 5, 3]).unwrap())
            .unwrap();
        let s5 = enumerate_s1regular(5);
        let h = EdgeAssignment::constant(c5.graph().clone(), s5[0].clone());
        assert!(check_sem_complement_commutes(&c5, &h).unwrap());
        assert!(matches!(
            check_sem_complement_commutes(&em_complement(&f).unwrap(), &EdgeAssignment::constant(f.graph().clone(), enumerate_s1regular(3)[0].clone())),
            Err(Error::NotSuperEdgeMagic)
        ));
    }

    #[test]
    fn odd_even_commutation_example() {
        let f = c3_val9();
        for h in EdgeAssignment::all(f.graph(), &enumerate_s1regular(3)) {
            assert_eq!(check_odd_even_commute(&f, &h).unwrap(), (true, true));
        }
    }

    #[test]
    fn witness_mismatch_is_detected() {
        let f = c3_val9();
        let h = EdgeAssignment::constant(f.graph().clone(), enumerate_s1regular(3)[0].clone());
        let lhs = em_complement(&induced_spk(&f, &h).unwrap().labeling).unwrap();
        let rhs = induced_spk(&em_complement(&f).unwrap(), &hbar_of(&h)).unwrap();
        assert!(!equal_under_witness(&lhs, &rhs.labeling, &VertexMap::identity(9)));
        // Reflecting the outer coordinate as well moves labels off their arcs.
        assert!(!equal_under_witness(&lhs, &rhs.labeling, &full_reflection_witness(3, 3)));
        assert!(equal_under_witness(&lhs, &rhs.labeling, &inner_reflection_witness(3, 3)));
    }

    #[test]
    fn vertex_encoding_round_trips() {
        for p in 1..5 {
            for v in 1..=4 * p {
                assert_eq!(ProductVertex::decode(v, p).encode(p), v);
            }
        }
    }
}
