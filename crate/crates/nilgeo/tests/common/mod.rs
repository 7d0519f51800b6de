//! Shared test support: independent oracles and fixtures.

pub mod tensor;

use nilgeo::lie::quotient::quotient;
use nilgeo::lie::free::build_free_nilpotent;
use nilgeo::{NilpotentAlgebra, Ratio, Scalar};
use rand::Rng;

/// Random exact element with small rational coordinates.
pub fn rand_exact_elem(alg: &NilpotentAlgebra, rng: &mut impl Rng) -> nilgeo::Elem<Ratio> {
    alg.elem(
        (0..alg.dim())
            .map(|_| Ratio::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into()))
            .collect(),
    )
    .unwrap()
}

/// Random exact element supported on a single layer.
pub fn rand_layer_elem(
    alg: &NilpotentAlgebra,
    layer: usize,
    rng: &mut impl Rng,
) -> nilgeo::Elem<Ratio> {
    let mut coords = vec![Ratio::from_int(0); alg.dim()];
    for i in 0..alg.dim() {
        if alg.layer_of(i) == layer {
            coords[i] = Ratio::from_int(rng.gen_range(-4i64..=4));
        }
    }
    alg.elem(coords).unwrap()
}

/// Non-graded five-dimensional quotient of free(2,4) by b5 - b6.
/// Its bracket [e2, [e1,e2]] lands in layer 4 instead of layer 3.
pub fn nongraded_dim5() -> NilpotentAlgebra {
    let a = build_free_nilpotent(2, 4, None).unwrap();
    let rel = a.basis_elem::<Ratio>(4).sub(&a.basis_elem::<Ratio>(5));
    let q = quotient(&a, &[rel]).unwrap();
    assert!(!q.algebra.is_graded());
    q.algebra
}
