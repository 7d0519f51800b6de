//! The group structure on a nilpotent algebra: truncated Campbell-Hausdorff
//! product, dilations, and asymptotic (graded) structures.
//!
//! The two-letter Hausdorff series is computed once per step by Dynkin's
//! formula, with terms expressed in the Hall basis of the free algebra on two
//! generators; products in any algebra then evaluate that series through the
//! algebra's own bracket. All coefficients are exact rationals.

use crate::lie::free::build_free_nilpotent;
use crate::lie::hall::SparseVec;
use crate::lie::{AlgebraError, Elem, NilpotentAlgebra};
use crate::scalar::{factorial, Ratio, Scalar};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Universal two-letter Hausdorff series truncated at a given degree.
///
/// `terms[k]` holds the coefficient of the k-th Hall basis element of the
/// free algebra on two generators; evaluation threads the Hall children
/// through a target algebra's bracket.
pub struct BchTable {
    pub degree: usize,
    pub free2: NilpotentAlgebra,
    pub coeffs: Vec<Ratio>,
}

fn bch_cache() -> &'static Mutex<HashMap<usize, Arc<BchTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BchTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The Hausdorff series for products truncated above `degree`, cached.
pub fn bch_table(degree: usize) -> Arc<BchTable> {
    let mut cache = bch_cache().lock().expect("bch cache poisoned");
    cache
        .entry(degree)
        .or_insert_with(|| Arc::new(compute_bch_table(degree)))
        .clone()
}

/// Dynkin's formula: log(e^x e^y) as a sum over compositions
/// (r_1,s_1),...,(r_n,s_n) of right-nested bracket words
/// [x^{r_1} y^{s_1} ... x^{r_n} y^{s_n}], with coefficient
/// (-1)^{n-1} / (n * m * prod r_i! s_i!) where m is the word length.
fn compute_bch_table(degree: usize) -> BchTable {
    let free2 = build_free_nilpotent(2, degree, Some(usize::MAX)).expect("free(2,d)");
    let mut coeffs = vec![Ratio::zero(); free2.dim()];

    // Enumerate all composition sequences with total weight <= degree.
    let mut stack: Vec<(Vec<(usize, usize)>, usize)> = vec![(Vec::new(), 0)];
    while let Some((seq, weight)) = stack.pop() {
        if !seq.is_empty() {
            accumulate_term(&free2, &seq, &mut coeffs);
        }
        for r in 0..=(degree - weight) {
            for s in 0..=(degree - weight - r) {
                if r + s == 0 {
                    continue;
                }
                let mut next = seq.clone();
                next.push((r, s));
                stack.push((next, weight + r + s));
            }
        }
    }

    BchTable { degree, free2, coeffs }
}

fn accumulate_term(free2: &NilpotentAlgebra, seq: &[(usize, usize)], coeffs: &mut [Ratio]) {
    let n = seq.len();
    let m: usize = seq.iter().map(|&(r, s)| r + s).sum();
    // Letters of the word x^{r_1} y^{s_1} ... as generator indices.
    let mut letters = Vec::with_capacity(m);
    for &(r, s) in seq {
        letters.extend(std::iter::repeat(0usize).take(r));
        letters.extend(std::iter::repeat(1usize).take(s));
    }
    // Right-nested bracketing vanishes when the two innermost letters agree.
    if m >= 2 && letters[m - 1] == letters[m - 2] {
        return;
    }
    // Evaluate [l_1, [l_2, [... [l_{m-1}, l_m]]]] in the free algebra.
    let mut acc: Elem<Ratio> = free2.basis_elem(letters[m - 1]);
    for &l in letters[..m - 1].iter().rev() {
        acc = free2.bracket(&free2.basis_elem(l), &acc).expect("same algebra");
        if acc.is_zero() {
            return;
        }
    }
    let mut denom = Ratio::from_integer((n as i64 * m as i64).into());
    for &(r, s) in seq {
        denom *= Ratio::from_integer(factorial(r) * factorial(s));
    }
    let sign = if n % 2 == 1 { Ratio::one() } else { -Ratio::one() };
    let coef = sign / denom;
    for (k, c) in acc.coords.iter().enumerate() {
        if !c.is_zero() {
            coeffs[k] += c * &coef;
        }
    }
}

/// Bracket closure used when evaluating the Hausdorff series.
type BracketFn<'a, S> = dyn Fn(&Elem<S>, &Elem<S>) -> Elem<S> + 'a;

fn eval_series<S: Scalar>(
    table: &BchTable,
    zero: Elem<S>,
    x: &Elem<S>,
    y: &Elem<S>,
    bracket: &BracketFn<'_, S>,
) -> Elem<S> {
    let hb = table.free2.hall().expect("free algebra has Hall data");
    let mut vals: Vec<Option<Elem<S>>> = vec![None; table.free2.dim()];
    let mut out = zero;
    for i in 0..table.free2.dim() {
        let v = match hb.children[i] {
            None => {
                if i == 0 {
                    x.clone()
                } else {
                    y.clone()
                }
            }
            Some((l, r)) => {
                let (a, b) = (vals[l].as_ref().unwrap(), vals[r].as_ref().unwrap());
                bracket(a, b)
            }
        };
        let c = &table.coeffs[i];
        if !c.is_zero() {
            out = out.add(&v.scale(&S::from_ratio(c)));
        }
        vals[i] = Some(v);
    }
    out
}

/// Group product by the truncated Campbell-Hausdorff formula. Exact when both
/// inputs are exact.
pub fn bch_product<S: Scalar>(
    alg: &NilpotentAlgebra,
    x: &Elem<S>,
    y: &Elem<S>,
) -> Result<Elem<S>, AlgebraError> {
    if !alg.owns(x) || !alg.owns(y) {
        return Err(AlgebraError::Mismatch);
    }
    let table = bch_table(alg.step());
    let br = |a: &Elem<S>, b: &Elem<S>| alg.bracket(a, b).expect("same algebra");
    Ok(eval_series(&table, alg.zero(), x, y, &br))
}

/// Fold a product x_1 x_2 ... x_n left to right.
pub fn bch_product_many<S: Scalar>(
    alg: &NilpotentAlgebra,
    xs: &[Elem<S>],
) -> Result<Elem<S>, AlgebraError> {
    let mut acc = alg.zero::<S>();
    for x in xs {
        acc = bch_product(alg, &acc, x)?;
    }
    Ok(acc)
}

/// Group inverse: -x, from exp being the identity map.
pub fn group_inverse<S: Scalar>(x: &Elem<S>) -> Elem<S> {
    x.neg()
}

/// Multiplicative commutator x y x^{-1} y^{-1}; equals [x,y] plus Lie
/// products of length greater than two.
pub fn group_commutator<S: Scalar>(
    alg: &NilpotentAlgebra,
    x: &Elem<S>,
    y: &Elem<S>,
) -> Result<Elem<S>, AlgebraError> {
    let xy = bch_product(alg, x, y)?;
    let xyx = bch_product(alg, &xy, &x.neg())?;
    bch_product(alg, &xyx, &y.neg())
}

/// Integer group power: x^n = n x.
pub fn power<S: Scalar>(x: &Elem<S>, n: i64) -> Elem<S> {
    x.scale(&S::from_int(n))
}

/// Dilation: layer-k coordinates scale by t^k. A group and algebra
/// automorphism when the algebra is graded; t must be positive.
pub fn dilation<S: Scalar>(alg: &NilpotentAlgebra, t: &S, x: &Elem<S>) -> Elem<S> {
    assert!(alg.owns(x), "algebra mismatch");
    assert!(t.is_positive(), "dilation requires t > 0");
    scale_by_layer(alg, x, |k| {
        let mut f = S::one();
        for _ in 0..k {
            f = f * t.clone();
        }
        f
    })
}

/// Inverse dilation, exact for rational t.
pub fn dilation_inv<S: Scalar>(alg: &NilpotentAlgebra, t: &S, x: &Elem<S>) -> Elem<S> {
    assert!(t.is_positive(), "dilation requires t > 0");
    scale_by_layer(alg, x, |k| {
        let mut f = S::one();
        for _ in 0..k {
            f = f / t.clone();
        }
        f
    })
}

/// The involution scaling layer k by (-1)^k; an isomorphism of graded
/// algebras and of their groups.
pub fn delta_minus_one<S: Scalar>(alg: &NilpotentAlgebra, x: &Elem<S>) -> Elem<S> {
    scale_by_layer(alg, x, |k| if k % 2 == 0 { S::one() } else { -S::one() })
}

fn scale_by_layer<S: Scalar>(
    alg: &NilpotentAlgebra,
    x: &Elem<S>,
    factor: impl Fn(usize) -> S,
) -> Elem<S> {
    assert!(alg.owns(x), "algebra mismatch");
    let mut out = x.clone();
    let per_layer: Vec<S> = (1..=alg.step()).map(factor).collect();
    for i in 0..alg.dim() {
        let f = &per_layer[alg.layer_of(i) - 1];
        out.coords[i] = out.coords[i].clone() * f.clone();
    }
    out
}

/// The rescaled product x o_t y = delta_t^{-1}(delta_t x . delta_t y).
pub fn scaled_product<S: Scalar>(
    alg: &NilpotentAlgebra,
    t: &S,
    x: &Elem<S>,
    y: &Elem<S>,
) -> Result<Elem<S>, AlgebraError> {
    let p = bch_product(alg, &dilation(alg, t, x), &dilation(alg, t, y))?;
    Ok(dilation_inv(alg, t, &p))
}

/// Asymptotic bracket: for layer components x_k, y_l, the projection of
/// [x_k, y_l] to layer k+l along the deeper filtration strata. Computed
/// exactly by the factorization rule; agrees with the bracket when graded.
pub fn asymptotic_bracket<S: Scalar>(
    alg: &NilpotentAlgebra,
    x: &Elem<S>,
    y: &Elem<S>,
) -> Result<Elem<S>, AlgebraError> {
    if !alg.owns(x) || !alg.owns(y) {
        return Err(AlgebraError::Mismatch);
    }
    let xs = alg.decompose(x);
    let ys = alg.decompose(y);
    let mut out = alg.zero::<S>();
    for (k, xk) in xs.iter().enumerate() {
        if xk.is_zero() {
            continue;
        }
        for (l, yl) in ys.iter().enumerate() {
            if yl.is_zero() {
                continue;
            }
            let target = k + l + 2; // layers are 1-based
            if target > alg.step() {
                continue;
            }
            let br = alg.bracket(xk, yl)?;
            out = out.add(&alg.layer_part(&br, target));
        }
    }
    Ok(out)
}

/// Product in the asymptotic group: the Hausdorff series evaluated with the
/// asymptotic bracket.
pub fn asymptotic_product<S: Scalar>(
    alg: &NilpotentAlgebra,
    x: &Elem<S>,
    y: &Elem<S>,
) -> Result<Elem<S>, AlgebraError> {
    if !alg.owns(x) || !alg.owns(y) {
        return Err(AlgebraError::Mismatch);
    }
    let table = bch_table(alg.step());
    let br = |a: &Elem<S>, b: &Elem<S>| asymptotic_bracket(alg, a, b).expect("same algebra");
    Ok(eval_series(&table, alg.zero(), x, y, &br))
}

/// Residual beta(x,y,t) = x o_t y - x o_a y together with the smallest
/// constant A making |beta| <= (A/t)(|x|+|x|^d)(|y|+|y|^d) on this sample.
pub struct BetaResidual<S: Scalar> {
    pub residual: Elem<S>,
    pub norm: f64,
    pub bound_factor: f64,
    /// Smallest A certifying the bound at this (x, y, t).
    pub a_required: f64,
}

pub fn beta_residual<S: Scalar>(
    alg: &NilpotentAlgebra,
    t: &S,
    x: &Elem<S>,
    y: &Elem<S>,
) -> Result<BetaResidual<S>, AlgebraError> {
    let residual = scaled_product(alg, t, x, y)?.sub(&asymptotic_product(alg, x, y)?);
    let norm = residual.norm();
    let d = alg.step() as i32;
    let nx = x.norm();
    let ny = y.norm();
    let bound_factor = (nx + nx.powi(d)) * (ny + ny.powi(d));
    let tf = t.to_f64();
    let a_required = if bound_factor == 0.0 { 0.0 } else { norm * tf / bound_factor };
    Ok(BetaResidual { residual, norm, bound_factor, a_required })
}

/// The asymptotic algebra as its own `NilpotentAlgebra` (same carrier basis,
/// asymptotic bracket as structure constants). Always graded.
pub fn asymptotic_algebra(alg: &NilpotentAlgebra) -> NilpotentAlgebra {
    let dim = alg.dim();
    let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let br = asymptotic_bracket(
                alg,
                &alg.basis_elem::<Ratio>(i),
                &alg.basis_elem::<Ratio>(j),
            )
            .unwrap();
            let sv: SparseVec = br
                .coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
            if !sv.is_empty() {
                table.insert((i, j), sv);
            }
        }
    }
    let labels = alg.labels().to_vec();
    let layers: Vec<usize> = (0..dim).map(|i| alg.layer_of(i)).collect();
    NilpotentAlgebra::assemble(labels, layers, alg.step(), table, None)
        .expect("asymptotic table is filtration compatible")
}

pub use crate::lie::Elem as GroupPoint;
