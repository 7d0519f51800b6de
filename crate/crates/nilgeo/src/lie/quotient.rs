//! Quotients of nilpotent algebras by ideals, with filtration-adapted bases.
//!
//! The ideal generated by the relations is closed under bracketing with basis
//! vectors; the quotient basis is picked from surviving coordinate monomials,
//! scanning the filtration from the deepest stratum outward so that the
//! induced layers stay adapted to the quotient's lower central series.

use super::hall::SparseVec;
use super::{AlgebraError, Elem, LinMap, NilpotentAlgebra};
use crate::linalg::{invert, QMat, Span};
use crate::scalar::Ratio;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Result of a quotient construction.
pub struct Quotient {
    pub algebra: NilpotentAlgebra,
    /// Surjective homomorphism from the parent onto the quotient.
    pub projection: LinMap,
    /// Right inverse of the projection (coordinate section).
    pub section: LinMap,
}

/// Quotient `parent / ideal(relations)`.
pub fn quotient(
    parent: &NilpotentAlgebra,
    relations: &[Elem<Ratio>],
) -> Result<Quotient, AlgebraError> {
    let dim = parent.dim();
    for r in relations {
        if !parent.owns(r) {
            return Err(AlgebraError::Mismatch);
        }
    }

    // Ideal closure: bracket with basis vectors until the span is stable.
    let mut ideal = Span::empty(dim);
    for r in relations {
        ideal.insert(&r.coords);
    }
    loop {
        let mut grew = false;
        for w in ideal.basis_rows() {
            let we = parent.elem(w).unwrap();
            for i in 0..dim {
                let b = parent.bracket(&parent.basis_elem::<Ratio>(i), &we).unwrap();
                if !b.is_zero() && ideal.insert(&b.coords) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    if ideal.rank() == dim {
        return Err(AlgebraError::DegenerateQuotient);
    }

    // Pick quotient representatives from coordinate monomials, deepest
    // filtration stratum first, so layers are adapted downstairs.
    let qdim = dim - ideal.rank();
    let mut picked: Vec<usize> = Vec::new(); // parent basis indices
    let mut picked_layer: Vec<usize> = Vec::new();
    let mut accum = Span::from_vectors(dim, &ideal.basis_rows());
    for k in (1..=parent.step()).rev() {
        for i in parent.series_indices(k) {
            if picked.contains(&i) {
                continue;
            }
            let mut v = vec![Ratio::zero(); dim];
            v[i] = Ratio::one();
            if accum.insert(&v) {
                picked.push(i);
                picked_layer.push(k);
            }
        }
    }
    debug_assert_eq!(picked.len(), qdim);

    // Reorder by (layer, parent index) ascending.
    let mut order: Vec<usize> = (0..qdim).collect();
    order.sort_by_key(|&t| (picked_layer[t], picked[t]));
    let picked: Vec<usize> = order.iter().map(|&t| picked[t]).collect();
    let picked_layer: Vec<usize> = order.iter().map(|&t| picked_layer[t]).collect();
    let step = picked_layer.iter().copied().max().unwrap_or(1);

    // Change of basis: columns are picked monomials then ideal basis vectors.
    let ideal_rows = ideal.basis_rows();
    let mut cols = QMat::zeros(dim, dim);
    for (c, &i) in picked.iter().enumerate() {
        cols[(i, c)] = Ratio::one();
    }
    for (c, row) in ideal_rows.iter().enumerate() {
        for (r, v) in row.iter().enumerate() {
            cols[(r, qdim + c)] = v.clone();
        }
    }
    let inv = invert(&cols).expect("picked + ideal vectors form a basis");
    // Projection: first qdim rows of the inverse.
    let mut proj = QMat::zeros(qdim, dim);
    for i in 0..qdim {
        for j in 0..dim {
            proj[(i, j)] = inv[(i, j)].clone();
        }
    }

    // Induced structure constants.
    let project = |v: &[Ratio]| -> Vec<Ratio> { proj_apply(&proj, v) };
    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    for a in 0..qdim {
        for b in (a + 1)..qdim {
            let pa = parent.basis_elem::<Ratio>(picked[a]);
            let pb = parent.basis_elem::<Ratio>(picked[b]);
            let br = parent.bracket(&pa, &pb).unwrap();
            let q = project(&br.coords);
            let sv: SparseVec =
                q.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            if !sv.is_empty() {
                table.insert((a, b), sv);
            }
        }
    }

    let labels: Vec<String> = picked.iter().map(|&i| parent.label(i).to_string()).collect();
    let algebra = NilpotentAlgebra::assemble(labels, picked_layer, step, table, None)?;

    let projection = LinMap { from_id: parent.id(), to_id: algebra.id(), matrix: proj };
    let mut sec = QMat::zeros(dim, qdim);
    for (c, &i) in picked.iter().enumerate() {
        sec[(i, c)] = Ratio::one();
    }
    let section = LinMap { from_id: algebra.id(), to_id: parent.id(), matrix: sec };

    Ok(Quotient { algebra, projection, section })
}

fn proj_apply(m: &QMat, v: &[Ratio]) -> Vec<Ratio> {
    (0..m.rows)
        .map(|i| {
            let mut acc = Ratio::zero();
            for j in 0..m.cols {
                if !m[(i, j)].is_zero() && !v[j].is_zero() {
                    acc += &m[(i, j)] * &v[j];
                }
            }
            acc
        })
        .collect()
}

/// Quotient of an algebra by the ideal `N^k` of its own lower central series.
pub fn quotient_by_series(
    parent: &NilpotentAlgebra,
    k: usize,
) -> Result<Quotient, AlgebraError> {
    let rels: Vec<Elem<Ratio>> =
        parent.series_indices(k).into_iter().map(|i| parent.basis_elem(i)).collect();
    quotient(parent, &rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::free::build_free_nilpotent;
    use crate::scalar::Scalar;
    use rand::{Rng, SeedableRng};

    #[test]
    fn empty_relations_give_isomorphic_copy() {
        let a = build_free_nilpotent(2, 3, None).unwrap();
        let q = quotient(&a, &[]).unwrap();
        assert_eq!(q.algebra.dim(), a.dim());
        // pi is a bijection sending basis to basis here.
        for i in 0..a.dim() {
            let img = q.projection.apply(&a.basis_elem::<Ratio>(i));
            assert_eq!(img, q.algebra.basis_elem::<Ratio>(i));
        }
    }

    #[test]
    fn filiform_quotient_of_free23() {
        let a = build_free_nilpotent(2, 3, None).unwrap();
        // Kill [e2,[e1,e2]] (basis index 4).
        let rel = a.basis_elem::<Ratio>(4);
        let q = quotient(&a, &[rel]).unwrap();
        assert_eq!(q.algebra.dim(), 4);
        assert_eq!(q.algebra.step(), 3);
        assert!(q.algebra.is_graded());
        assert!(q.algebra.verify().ok);
    }

    #[test]
    fn killing_derived_gives_abelian() {
        let a = build_free_nilpotent(2, 2, None).unwrap();
        let q = quotient(&a, &[a.basis_elem(2)]).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert_eq!(q.algebra.step(), 1);
        let x = q.algebra.basis_elem::<Ratio>(0);
        let y = q.algebra.basis_elem::<Ratio>(1);
        assert!(q.algebra.bracket(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn degenerate_quotient_rejected() {
        let a = build_free_nilpotent(2, 2, None).unwrap();
        let rels: Vec<_> = (0..3).map(|i| a.basis_elem::<Ratio>(i)).collect();
        assert!(matches!(quotient(&a, &rels), Err(AlgebraError::DegenerateQuotient)));
    }

    #[test]
    fn projection_commutes_with_bracket() {
        let a = build_free_nilpotent(2, 4, None).unwrap();
        // Non-homogeneous relation: b5 - b6 mixes degrees 3 and 4.
        let rel = a.basis_elem::<Ratio>(4).sub(&a.basis_elem::<Ratio>(5));
        let q = quotient(&a, &[rel]).unwrap();
        assert_eq!(q.algebra.dim(), 5);
        assert!(!q.algebra.is_graded(), "this quotient must be non-graded");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = a
                .elem((0..a.dim()).map(|_| Ratio::from_int(rng.gen_range(-5..=5))).collect())
                .unwrap();
            let y = a
                .elem((0..a.dim()).map(|_| Ratio::from_int(rng.gen_range(-5..=5))).collect())
                .unwrap();
            let lhs = q.projection.apply(&a.bracket(&x, &y).unwrap());
            let rhs = q
                .algebra
                .bracket(&q.projection.apply(&x), &q.projection.apply(&y))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn projection_maps_filtration_onto_filtration() {
        let a = build_free_nilpotent(2, 4, None).unwrap();
        let rel = a.basis_elem::<Ratio>(4).sub(&a.basis_elem::<Ratio>(5));
        let q = quotient(&a, &[rel]).unwrap();
        let down_series = q.algebra.lower_central_series();
        for k in 1..=q.algebra.step() {
            // pi(N^k upstairs) must equal N^k downstairs.
            let mut img = Span::empty(q.algebra.dim());
            for i in a.series_indices(k) {
                let v = q.projection.apply(&a.basis_elem::<Ratio>(i));
                img.insert(&v.coords);
            }
            assert_eq!(img.rank(), down_series[k - 1].rank(), "k = {k}");
        }
        // Section is a right inverse of the projection.
        for i in 0..q.algebra.dim() {
            let b = q.algebra.basis_elem::<Ratio>(i);
            assert_eq!(q.projection.apply(&q.section.apply(&b)), b);
        }
    }
}
