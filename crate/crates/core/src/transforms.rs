//! Complementary, super edge-magic complementary, odd and even labelings.

use crate::error::{Error, Result};
use crate::labeling::{
    extend_to_super_edge_magic, require_edge_magic, require_super_edge_magic, TotalLabeling, VertexLabeling,
};

/// `x -> p + q + 1 - x` on every label. Valence becomes `3(p + q + 1) - val(f)`.
pub fn em_complement(f: &TotalLabeling) -> Result<TotalLabeling> {
    require_edge_magic(f)?;
    let top = f.order() + f.size() + 1;
    TotalLabeling::new(
        f.graph().clone(),
        f.vertex_labels().iter().map(|&l| top - l).collect(),
        f.arc_labels().iter().map(|&l| top - l).collect(),
    )
}

/// Vertex labels reflected inside `[1, p]`, arc labels recomputed from the
/// consecutive sums. Valence becomes `4p + q + 3 - val(f)`.
pub fn sem_complement(f: &TotalLabeling) -> Result<TotalLabeling> {
    require_super_edge_magic(f)?;
    let p = f.order();
    let g = VertexLabeling::new(f.graph().clone(), f.vertex_labels().iter().map(|&l| p + 1 - l).collect())?;
    extend_to_super_edge_magic(&g)
}

fn doubling_preconditions(f: &TotalLabeling) -> Result<u32> {
    let (p, q) = (f.order(), f.size());
    if p != q {
        return Err(Error::OrderSizeMismatch { p, q });
    }
    require_super_edge_magic(f)
}

fn doubled(f: &TotalLabeling, vertex: impl Fn(u32) -> u32, arc_total: u32) -> Result<TotalLabeling> {
    let vertex: Vec<u32> = f.vertex_labels().iter().map(|&l| vertex(l)).collect();
    let arc = f
        .graph()
        .arcs()
        .iter()
        .map(|&(u, v)| {
            arc_total
                .checked_sub(vertex[u as usize - 1] + vertex[v as usize - 1])
                .ok_or_else(|| Error::Invariant("doubled arc label underflow".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    TotalLabeling::new(f.graph().clone(), vertex, arc)
}

/// `o(f)`: vertices `2f(x) - 1`, valence `2 val(f) - 2p - 2`.
pub fn odd_labeling(f: &TotalLabeling) -> Result<TotalLabeling> {
    let val = doubling_preconditions(f)?;
    doubled(f, |l| 2 * l - 1, 2 * val - 2 * f.order() - 2)
}

/// `e(f)`: vertices `2f(x)`, valence `2 val(f) - 2p - 1`.
pub fn even_labeling(f: &TotalLabeling) -> Result<TotalLabeling> {
    let val = doubling_preconditions(f)?;
    doubled(f, |l| 2 * l, 2 * val - 2 * f.order() - 1)
}

/// Checks `complement(e(f)) = o(f_c)` and `complement(o(f)) = e(f_c)` label for label.
pub fn check_lemma2(f: &TotalLabeling) -> Result<bool> {
    doubling_preconditions(f)?;
    let fc = sem_complement(f)?;
    let first = em_complement(&even_labeling(f)?)? == odd_labeling(&fc)?;
    let second = em_complement(&odd_labeling(f)?)? == even_labeling(&fc)?;
    Ok(first && second)
}

/// Transform selector shared by the CLI and the C interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Complement,
    SemComplement,
    Odd,
    Even,
}

impl Transform {
    pub fn apply(self, f: &TotalLabeling) -> Result<TotalLabeling> {
        match self {
            Transform::Complement => em_complement(f),
            Transform::SemComplement => sem_complement(f),
            Transform::Odd => odd_labeling(f),
            Transform::Even => even_labeling(f),
        }
    }
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complement" => Ok(Transform::Complement),
            "sem-complement" => Ok(Transform::SemComplement),
            "odd" => Ok(Transform::Odd),
            "even" => Ok(Transform::Even),
            other => Err(Error::Usage(format!("unknown transform `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;
    use crate::labeling::{c3_val9, is_super_edge_magic, valence_if_edge_magic};

    fn c5_val14() -> TotalLabeling {
        let g = VertexLabeling::new(Digraph::cycle(5).unwrap(), vec![1, 4, 2, 5, 3]).unwrap();
        extend_to_super_edge_magic(&g).unwrap()
    }

    #[test]
    fn complement_examples() {
        let f = c3_val9();
        let fbar = em_complement(&f).unwrap();
        assert_eq!(valence_if_edge_magic(&fbar), Some(12));
        assert_eq!(em_complement(&fbar).unwrap(), f);

        let k2 = TotalLabeling::new(Digraph::path(2).unwrap(), vec![1, 2], vec![3]).unwrap();
        assert_eq!(valence_if_edge_magic(&em_complement(&k2).unwrap()), Some(6));
    }

    #[test]
    fn complement_rejects_non_magic() {
        let g = Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let broken = TotalLabeling::new(g, vec![1, 2, 3], vec![5, 4, 6]).unwrap();
        assert!(matches!(em_complement(&broken), Err(Error::NotEdgeMagic { .. })));
    }

    #[test]
    fn sem_complement_examples() {
        let f = c3_val9();
        let fc = sem_complement(&f).unwrap();
        assert!(is_super_edge_magic(&fc));
        assert_eq!(valence_if_edge_magic(&fc), Some(9));
        assert_eq!(sem_complement(&fc).unwrap(), f);

        let f5 = c5_val14();
        assert_eq!(valence_if_edge_magic(&sem_complement(&f5).unwrap()), Some(14));

        let fbar = em_complement(&f).unwrap();
        assert!(matches!(sem_complement(&fbar), Err(Error::NotSuperEdgeMagic)));
    }

    #[test]
    fn odd_even_examples() {
        let f = c3_val9();
        let o = odd_labeling(&f).unwrap();
        assert_eq!(valence_if_edge_magic(&o), Some(10));
        assert_eq!(o.vertex_labels(), &[1, 3, 5]);
        assert_eq!(o.arc_labels(), &[6, 2, 4]);
        let e = even_labeling(&f).unwrap();
        assert_eq!(valence_if_edge_magic(&e), Some(11));
        assert_eq!(e.vertex_labels(), &[2, 4, 6]);
        assert_eq!(e.arc_labels(), &[5, 1, 3]);

        let f5 = c5_val14();
        assert_eq!(valence_if_edge_magic(&odd_labeling(&f5).unwrap()), Some(16));
        assert_eq!(valence_if_edge_magic(&even_labeling(&f5).unwrap()), Some(17));
        assert!(odd_labeling(&f5).unwrap().vertex_labels().iter().all(|l| l % 2 == 1));
        assert!(even_labeling(&f5).unwrap().vertex_labels().iter().all(|l| l % 2 == 0));
    }

    #[test]
    fn odd_even_need_equal_order_and_size() {
        let path = extend_to_super_edge_magic(&VertexLabeling::new(Digraph::path(3).unwrap(), vec![1, 3, 2]).unwrap())
            .unwrap();
        assert!(matches!(odd_labeling(&path), Err(Error::OrderSizeMismatch { p: 3, q: 2 })));
        assert!(matches!(even_labeling(&path), Err(Error::OrderSizeMismatch { .. })));
        assert!(check_lemma2(&path).is_err());
    }

    #[test]
    fn lemma2_on_running_examples() {
        assert!(check_lemma2(&c3_val9()).unwrap());
        assert!(check_lemma2(&c5_val14()).unwrap());
    }

    #[test]
    fn transform_names() {
        assert_eq!("sem-complement".parse::<Transform>().unwrap(), Transform::SemComplement);
        assert!("twist".parse::<Transform>().is_err());
    }
}
