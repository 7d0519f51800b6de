//! Free graded lift: realize any nilpotent algebra as a quotient of the free
//! nilpotent algebra on its layer-1 basis, with the canonical surjection.
//!
//! Words with horizontal directions lift and project verbatim (layer 1 is
//! identified), so distance upper bounds and identity words transfer from the
//! graded lift down to the original algebra.

use super::free::build_free_nilpotent;
use super::{AlgebraError, Elem, LinMap, NilpotentAlgebra};
use crate::linalg::{solve, QMat};
use crate::scalar::Ratio;
use num_traits::Zero;

pub struct FreeLift {
    pub free: NilpotentAlgebra,
    /// Surjective homomorphism free -> target.
    pub pi: LinMap,
}

impl FreeLift {
    /// Build the lift for `target`, sending free generators to the layer-1
    /// basis of `target` in order.
    pub fn new(target: &NilpotentAlgebra, cap: Option<usize>) -> Result<Self, AlgebraError> {
        let gens = target.layer_indices(1);
        let l = gens.len();
        let d = target.step();
        let free = build_free_nilpotent(l, d, cap)?;
        let hb = free.hall().expect("free algebra carries Hall data");

        // Images of free basis vectors, computed along Hall children.
        let mut images: Vec<Elem<Ratio>> = Vec::with_capacity(free.dim());
        for i in 0..free.dim() {
            let img = match hb.children[i] {
                None => target.basis_elem::<Ratio>(gens[i]),
                Some((u, v)) => target.bracket(&images[u], &images[v]).unwrap(),
            };
            images.push(img);
        }

        let mut m = QMat::zeros(target.dim(), free.dim());
        for (j, img) in images.iter().enumerate() {
            for (i, c) in img.coords.iter().enumerate() {
                m[(i, j)] = c.clone();
            }
        }
        // Surjectivity: layer-1 must generate the target.
        let mut span = crate::linalg::Span::empty(target.dim());
        for img in &images {
            span.insert(&img.coords);
        }
        if span.rank() != target.dim() {
            return Err(AlgebraError::BadSpec(
                "declared layer 1 does not generate the algebra".into(),
            ));
        }
        let pi = LinMap { from_id: free.id(), to_id: target.id(), matrix: m };
        Ok(FreeLift { free, pi })
    }

    /// Any preimage of `x` under pi.
    pub fn lift(&self, x: &Elem<Ratio>) -> Option<Elem<Ratio>> {
        let sol = solve(&self.pi.matrix, &x.coords)?;
        Some(Elem { alg_id: self.free.id(), coords: sol })
    }

    /// Preimage supported on free layer `k` only (pure), if one exists.
    pub fn lift_in_layer(&self, x: &Elem<Ratio>, k: usize) -> Option<Elem<Ratio>> {
        self.lift_supported(x, &self.free.layer_indices(k))
    }

    /// Preimage supported on free layers >= k.
    pub fn lift_in_series(&self, x: &Elem<Ratio>, k: usize) -> Option<Elem<Ratio>> {
        self.lift_supported(x, &self.free.series_indices(k))
    }

    fn lift_supported(&self, x: &Elem<Ratio>, support: &[usize]) -> Option<Elem<Ratio>> {
        let m = &self.pi.matrix;
        let mut restricted = QMat::zeros(m.rows, support.len());
        for (c, &j) in support.iter().enumerate() {
            for i in 0..m.rows {
                restricted[(i, c)] = m[(i, j)].clone();
            }
        }
        let sol = solve(&restricted, &x.coords)?;
        let mut coords = vec![Ratio::zero(); self.free.dim()];
        for (c, &j) in support.iter().enumerate() {
            coords[j] = sol[c].clone();
        }
        Some(Elem { alg_id: self.free.id(), coords })
    }

    /// Map a free-algebra word direction-by-direction down to the target.
    /// Horizontal directions are identified, so lengths are preserved.
    pub fn push_elem(&self, x: &Elem<Ratio>) -> Elem<Ratio> {
        self.pi.apply(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::quotient::quotient;
    use crate::scalar::Scalar;
    use rand::{Rng, SeedableRng};

    #[test]
    fn lift_of_free_algebra_is_identity_like() {
        let a = build_free_nilpotent(2, 3, None).unwrap();
        let lift = FreeLift::new(&a, None).unwrap();
        assert_eq!(lift.free.dim(), a.dim());
        let x = a.elem_from_ints(&[1, -2, 3, 0, 5]).unwrap();
        let up = lift.lift(&x).unwrap();
        assert_eq!(lift.pi.apply(&up), x);
    }

    #[test]
    fn lift_is_homomorphism_onto_quotient() {
        let a = build_free_nilpotent(2, 4, None).unwrap();
        let rel = a.basis_elem::<Ratio>(4).sub(&a.basis_elem::<Ratio>(5));
        let q = quotient(&a, &[rel]).unwrap();
        let lift = FreeLift::new(&q.algebra, None).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = lift
                .free
                .elem(
                    (0..lift.free.dim())
                        .map(|_| Ratio::from_int(rng.gen_range(-4..=4)))
                        .collect(),
                )
                .unwrap();
            let y = lift
                .free
                .elem(
                    (0..lift.free.dim())
                        .map(|_| Ratio::from_int(rng.gen_range(-4..=4)))
                        .collect(),
                )
                .unwrap();
            let lhs = lift.pi.apply(&lift.free.bracket(&x, &y).unwrap());
            let rhs = q.algebra.bracket(&lift.pi.apply(&x), &lift.pi.apply(&y)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stratified_lifts_respect_support() {
        let a = build_free_nilpotent(2, 3, None).unwrap();
        let lift = FreeLift::new(&a, None).unwrap();
        let z = a.basis_elem::<Ratio>(4); // layer 3
        let up = lift.lift_in_layer(&z, 3).unwrap();
        for i in 0..lift.free.dim() {
            if lift.free.layer_of(i) != 3 {
                assert!(up.coords[i].is_zero());
            }
        }
        assert_eq!(lift.pi.apply(&up), z);
    }
}
