//! Double description over integer vectors.
//!
//! Computes a minimal generating system (extreme rays plus a lineality basis)
//! of `{x ∈ ℝ^n : a·x ≥ 0 for all rows a}`. Rows are processed in the given
//! order. While the current cone still has lines, a row that is non-zero on
//! some line is handled by a pivot that turns that line into a ray; otherwise
//! the usual positive/negative combination step runs, restricted to adjacent
//! pairs by the combinatorial adjacency test.
//!
//! Every vector is kept as a primitive integer vector, which is far cheaper than
//! carrying rationals through the combination steps.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::scalar::make_primitive;

#[derive(Debug, Clone, Default)]
pub(crate) struct ConeGenerators {
    pub rays: Vec<Vec<BigInt>>,
    pub lines: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(n: usize) -> Self {
        ZeroSet(vec![0; n.div_ceil(64).max(1)])
    }

    fn upto(n: usize, k: usize) -> Self {
        let mut z = ZeroSet::new(n);
        for i in 0..k {
            z.insert(i);
        }
        z
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: ZeroSet,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// `alpha * x - beta * y`, made primitive.
fn combine(alpha: &BigInt, x: &[BigInt], beta: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| alpha * a - beta * b).collect();
    make_primitive(&mut out);
    out
}

/// Generators of `{x : a·x ≥ 0 (a ∈ inequalities), e·x = 0 (e ∈ equalities)}`.
pub(crate) fn cone_generators(
    dim: usize,
    inequalities: &[Vec<BigInt>],
    equalities: &[Vec<BigInt>],
) -> ConeGenerators {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(2 * equalities.len() + inequalities.len());
    for e in equalities {
        rows.push(e.clone());
        rows.push(e.iter().map(|x| -x).collect());
    }
    rows.extend(inequalities.iter().cloned());
    let total = rows.len();

    let mut lines: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in rows.iter().enumerate() {
        debug_assert_eq!(a.len(), dim);
        if a.iter().all(Zero::is_zero) {
            for r in rays.iter_mut() {
                r.zeros.insert(k);
            }
            continue;
        }

        if let Some(pos) = lines.iter().position(|l| !idot(a, l).is_zero()) {
            let mut pivot = lines.remove(pos);
            let mut ap = idot(a, &pivot);
            if ap.is_negative() {
                pivot.iter_mut().for_each(|x| *x = -&*x);
                ap = -ap;
            }
            for l in lines.iter_mut() {
                let al = idot(a, l);
                if !al.is_zero() {
                    *l = combine(&ap, l, &al, &pivot);
                }
            }
            for r in rays.iter_mut() {
                let ar = idot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&ap, &r.v, &ar, &pivot);
                }
                r.zeros.insert(k);
            }
            rays.push(Ray { v: pivot, zeros: ZeroSet::upto(total, k) });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }

        let pointed_dim = dim - lines.len();
        let positive: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let negative: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &positive {
            for &n in &negative {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.count() + 2 < pointed_dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == n || !rays[r].zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let v = combine(&values[p], &rays[n].v, &values[n], &rays[p].v);
                let mut zeros = common;
                zeros.insert(k);
                fresh.push(Ray { v, zeros });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(k);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut rays: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    rays.sort();
    rays.dedup();
    ConeGenerators { rays, lines }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn orthant_has_unit_rays() {
        let g = cone_generators(3, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], &[]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the unit square at height 1: 0 <= x <= z, 0 <= y <= z
        let g = cone_generators(
            3,
            &[v(&[1, 0, 0]), v(&[-1, 0, 1]), v(&[0, 1, 0]), v(&[0, -1, 1])],
            &[],
        );
        assert_eq!(g.rays.len(), 4);
        for r in [v(&[0, 0, 1]), v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])] {
            assert!(g.rays.contains(&r));
        }
    }

    #[test]
    fn halfspace_keeps_lines() {
        let g = cone_generators(2, &[v(&[1, 1])], &[]);
        assert_eq!(g.lines.len(), 1);
        assert_eq!(g.rays.len(), 1);
        assert!(idot(&g.lines[0], &v(&[1, 1])).is_zero());
        assert!(idot(&g.rays[0], &v(&[1, 1])).is_positive());
    }

    #[test]
    fn equalities_cut_down_to_a_face() {
        let g = cone_generators(3, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], &[v(&[1, -1, 0])]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![v(&[0, 0, 1]), v(&[1, 1, 0])]);
    }

    #[test]
    fn contradictory_system_is_trivial_cone() {
        let g = cone_generators(1, &[v(&[1]), v(&[-1])], &[]);
        assert!(g.rays.is_empty() && g.lines.is_empty());
    }
}
