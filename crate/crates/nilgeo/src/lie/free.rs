//! Free nilpotent Lie algebras on Hall bases.

use super::hall::HallBasis;
use super::{AlgebraError, NilpotentAlgebra, DEFAULT_DIM_CAP};

/// Dimension of the degree-m component of the free Lie algebra on l
/// generators (Witt's formula), used for the cap check before enumeration.
fn witt_dim(l: usize, m: usize) -> usize {
    fn mobius(mut n: usize) -> i64 {
        let mut mu = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }
    let mut sum = 0i64;
    for e in 1..=m {
        if m % e == 0 {
            sum = sum.saturating_add(mobius(e).saturating_mul((l as i64).saturating_pow((m / e) as u32)));
        }
    }
    (sum / m as i64).max(0) as usize
}

/// Build the free nilpotent Lie algebra on `l` generators of step `d`.
///
/// The Hall basis is declared orthonormal; generators sit in layer 1 and the
/// gradation satisfies `[N_1, N_k] = N_{k+1}`.
pub fn build_free_nilpotent(
    l: usize,
    d: usize,
    cap: Option<usize>,
) -> Result<NilpotentAlgebra, AlgebraError> {
    if l < 1 || d < 1 {
        return Err(AlgebraError::BadSpec("need l >= 1 and d >= 1".into()));
    }
    let cap = cap.unwrap_or(DEFAULT_DIM_CAP);
    let dim: usize = (1..=d).map(|m| witt_dim(l, m)).sum();
    if dim > cap {
        return Err(AlgebraError::DimensionCap { dim, cap });
    }
    let hb = HallBasis::new(l, d);
    debug_assert_eq!(hb.dim(), dim);
    let table = hb.structure_constants();
    let labels: Vec<String> = (0..hb.dim()).map(|i| hb.label(i)).collect();
    let layers = hb.degree.clone();
    NilpotentAlgebra::assemble(labels, layers, d, table, Some(hb))
}

/// The Heisenberg algebra: free nilpotent on 2 generators, step 2.
pub fn heisenberg() -> NilpotentAlgebra {
    build_free_nilpotent(2, 2, None).expect("heisenberg fits any cap")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(build_free_nilpotent(2, 2, None).unwrap().dim(), 3);
        assert_eq!(build_free_nilpotent(2, 3, None).unwrap().dim(), 5);
        assert_eq!(build_free_nilpotent(2, 4, None).unwrap().dim(), 8);
        assert_eq!(build_free_nilpotent(3, 2, None).unwrap().dim(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        let err = build_free_nilpotent(3, 4, Some(10)).unwrap_err();
        assert!(matches!(err, AlgebraError::DimensionCap { dim: 32, cap: 10 }));
    }

    #[test]
    fn abelian_degenerate_step() {
        let a = build_free_nilpotent(3, 1, None).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.is_graded());
        let x = a.basis_elem::<crate::scalar::Ratio>(0);
        let y = a.basis_elem::<crate::scalar::Ratio>(1);
        assert!(a.bracket(&x, &y).unwrap().is_zero());
    }
}
