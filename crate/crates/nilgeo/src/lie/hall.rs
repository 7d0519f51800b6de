//! Hall basis of the free Lie algebra, truncated at a nilpotency step.
//!
//! Elements are ordered by degree, then by construction order (left child
//! index, then right child index), which makes structure constants
//! reproducible bit for bit. A bracket `[u, v]` of Hall elements is itself a
//! Hall element iff `u < v` and either `v` is a generator or `v = [a, c]`
//! with `a <= u`; everything else is rewritten through antisymmetry and the
//! Jacobi identity.

use crate::scalar::Ratio;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Sparse exact vector over basis indices, sorted by index.
pub type SparseVec = Vec<(usize, Ratio)>;

pub fn sparse_add(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out: HashMap<usize, Ratio> = a.iter().cloned().collect();
    for (i, c) in b {
        let e = out.entry(*i).or_insert_with(Ratio::zero);
        *e += c;
    }
    let mut v: SparseVec = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|&(i, _)| i);
    v
}

pub fn sparse_scale(a: &SparseVec, f: &Ratio) -> SparseVec {
    if f.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, c)| (*i, c * f)).collect()
}

/// Hall basis data for `num_gens` generators truncated above degree `step`.
#[derive(Clone, Debug)]
pub struct HallBasis {
    pub num_gens: usize,
    pub step: usize,
    /// Degree of each basis element, ascending.
    pub degree: Vec<usize>,
    /// Children `(left, right)` for composite elements; None for generators.
    pub children: Vec<Option<(usize, usize)>>,
    index_by_children: HashMap<(usize, usize), usize>,
}

impl HallBasis {
    pub fn new(num_gens: usize, step: usize) -> Self {
        assert!(num_gens >= 1 && step >= 1);
        let mut degree: Vec<usize> = vec![1; num_gens];
        let mut children: Vec<Option<(usize, usize)>> = vec![None; num_gens];
        let mut index_by_children = HashMap::new();
        let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); step + 1];
        by_degree[1] = (0..num_gens).collect();

        for m in 2..=step {
            let mut new_elems = Vec::new();
            for du in 1..=m / 2 {
                let dv = m - du;
                for &u in &by_degree[du] {
                    for &v in &by_degree[dv] {
                        if u >= v {
                            continue;
                        }
                        let ok = match children[v] {
                            None => true,
                            Some((a, _)) => a <= u,
                        };
                        if ok {
                            new_elems.push((u, v));
                        }
                    }
                }
            }
            new_elems.sort();
            for (u, v) in new_elems {
                let idx = degree.len();
                degree.push(m);
                children.push(Some((u, v)));
                index_by_children.insert((u, v), idx);
                by_degree[m].push(idx);
            }
        }

        HallBasis { num_gens, step, degree, children, index_by_children }
    }

    pub fn dim(&self) -> usize {
        self.degree.len()
    }

    /// Printable label, e.g. `[e1,[e1,e2]]`.
    pub fn label(&self, i: usize) -> String {
        match self.children[i] {
            None => format!("e{}", i + 1),
            Some((u, v)) => format!("[{},{}]", self.label(u), self.label(v)),
        }
    }

    /// Full bracket table `[b_i, b_j]` for all `i < j` with degree sum `<= step`,
    /// expressed in Hall coordinates. Uses Hall's collection process.
    pub fn structure_constants(&self) -> HashMap<(usize, usize), SparseVec> {
        let mut memo: HashMap<(usize, usize), SparseVec> = HashMap::new();
        let dim = self.dim();
        // Degrees ascending by construction, so computing in index order keeps
        // all recursive lookups below the current pair.
        for j in 0..dim {
            for i in 0..j {
                if self.degree[i] + self.degree[j] <= self.step {
                    let v = self.rewrite(i, j, &mut memo, 0);
                    memo.insert((i, j), v);
                }
            }
        }
        memo
    }

    /// Express `[b_i, b_j]` (i < j) in the Hall basis.
    fn rewrite(
        &self,
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), SparseVec>,
        depth: usize,
    ) -> SparseVec {
        assert!(i < j);
        assert!(depth < 128, "Hall rewriting depth exceeded: order invariant broken");
        if self.degree[i] + self.degree[j] > self.step {
            return Vec::new();
        }
        if let Some(v) = memo.get(&(i, j)) {
            return v.clone();
        }
        let result = if let Some(&h) = self.index_by_children.get(&(i, j)) {
            vec![(h, Ratio::one())]
        } else {
            // j is composite with children (a, c), a > i (Hall condition failed).
            let (a, c) = self.children[j].expect("generator pair must be a Hall element");
            debug_assert!(a > i);
            // [b_i, [a, c]] = [a, [b_i, c]] + [[b_i, a], c]
            let ic = self.bracket_pair(i, c, memo, depth + 1);
            let term1 = self.bracket_combo_left(a, &ic, memo, depth + 1);
            let ia = self.bracket_pair(i, a, memo, depth + 1);
            let term2 = self.bracket_combo_right(&ia, c, memo, depth + 1);
            sparse_add(&term1, &term2)
        };
        memo.insert((i, j), result.clone());
        result
    }

    /// `[b_p, b_q]` for arbitrary order, handling sign and equality.
    fn bracket_pair(
        &self,
        p: usize,
        q: usize,
        memo: &mut HashMap<(usize, usize), SparseVec>,
        depth: usize,
    ) -> SparseVec {
        use std::cmp::Ordering;
        match p.cmp(&q) {
            Ordering::Equal => Vec::new(),
            Ordering::Less => self.rewrite(p, q, memo, depth),
            Ordering::Greater => sparse_scale(&self.rewrite(q, p, memo, depth), &-Ratio::one()),
        }
    }

    /// `[b_a, combo]`.
    fn bracket_combo_left(
        &self,
        a: usize,
        combo: &SparseVec,
        memo: &mut HashMap<(usize, usize), SparseVec>,
        depth: usize,
    ) -> SparseVec {
        let mut acc = Vec::new();
        for (k, coef) in combo {
            let term = self.bracket_pair(a, *k, memo, depth);
            acc = sparse_add(&acc, &sparse_scale(&term, coef));
        }
        acc
    }

    /// `[combo, b_c]`.
    fn bracket_combo_right(
        &self,
        combo: &SparseVec,
        c: usize,
        memo: &mut HashMap<(usize, usize), SparseVec>,
        depth: usize,
    ) -> SparseVec {
        let mut acc = Vec::new();
        for (k, coef) in combo {
            let term = self.bracket_pair(*k, c, memo, depth);
            acc = sparse_add(&acc, &sparse_scale(&term, coef));
        }
        acc
    }
}
