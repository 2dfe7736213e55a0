//! Polyhedral convex functions, carried by their epigraphs.

use num_traits::{Signed, Zero};

use super::cone::Cone;
use super::polyhedron::{HPoly, Polyhedron};
use super::scalar::{dot, Extended, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

/// `f : ℝ^d → ℝ ∪ {+∞}` stored as `epi f ⊆ ℝ^{d+1}`, the last coordinate being the value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyFn {
    epi: Polyhedron,
}

impl PolyFn {
    /// Checks that `(0, …, 0, 1)` is a recession direction of a nonempty epigraph.
    pub fn from_epigraph(epi: Polyhedron) -> Result<PolyFn> {
        if epi.dim() == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if !epi.is_empty() {
            let last = epi.dim() - 1;
            if epi.hrep().rows().iter().any(|a| a[last].is_negative()) {
                return Err(Error::MalformedEpigraph);
            }
        }
        Ok(PolyFn { epi })
    }

    /// `f(x) = v·x` on all of ℝ^d.
    pub fn linear(v: &[Scalar]) -> PolyFn {
        let d = v.len();
        let mut row: Vector = v.iter().map(|x| -x).collect();
        row.push(Scalar::from_integer(1.into()));
        let epi = Polyhedron::from_hrep(HPoly::new(d + 1, vec![row], vec![Scalar::zero()]));
        PolyFn { epi }
    }

    /// Domain dimension `d`.
    pub fn dim(&self) -> usize {
        self.epi.dim() - 1
    }

    pub fn epigraph(&self) -> &Polyhedron {
        &self.epi
    }

    pub fn is_identically_infinite(&self) -> bool {
        self.epi.is_empty()
    }

    /// Positively homogeneous iff the epigraph is a cone.
    pub fn is_positively_homogeneous(&self) -> bool {
        self.epi.is_empty() || Cone::from_polyhedron(self.epi.clone()).is_ok()
    }

    pub fn eval(&self, x: &[Scalar]) -> Result<Extended> {
        polyfn_eval(self, x)
    }
}

/// Exact `f(x)`: the least `y` on the vertical fiber of the epigraph above `x`.
pub fn polyfn_eval(f: &PolyFn, x: &[Scalar]) -> Result<Extended> {
    check_dim(f.dim(), x.len())?;
    if f.epi.is_empty() {
        return Ok(Extended::PosInf);
    }
    let d = f.dim();
    let mut best: Option<Scalar> = None;
    for (a, r) in f.epi.hrep().iter() {
        let ay = &a[d];
        let slack = r - dot(&a[..d], x);
        if ay.is_negative() {
            return Err(Error::MalformedEpigraph);
        }
        if ay.is_zero() {
            if slack.is_positive() {
                return Ok(Extended::PosInf);
            }
            continue;
        }
        let bound = slack / ay;
        if best.as_ref().map_or(true, |b| bound > *b) {
            best = Some(bound);
        }
    }
    Ok(match best {
        Some(v) => Extended::Finite(v),
        None => Extended::NegInf,
    })
}

/// `x ↦ sup{-x·z : z ∈ p}`, the support function of `-p`.
pub fn supfun_of_negated_set(p: &Polyhedron) -> Result<PolyFn> {
    if p.is_empty() {
        return Err(Error::EmptyInput("support function of an empty set"));
    }
    let d = p.dim();
    let lift = |v: &Vector, y: i64| {
        let mut row = v.clone();
        row.push(Scalar::from_integer(y.into()));
        row
    };
    let mut h = HPoly::universe(d + 1);
    for v in p.vertices() {
        h.push(lift(v, 1), Scalar::zero());
    }
    for r in p.rays() {
        h.push(lift(r, 0), Scalar::zero());
    }
    for l in p.lines() {
        h.push_equality(lift(l, 0), Scalar::zero());
    }
    Ok(PolyFn { epi: Polyhedron::from_hrep(h) })
}

/// `f` plus the indicator of `c`: the epigraph is cut down to `c × ℝ`.
pub fn restrict_domain(f: &PolyFn, c: &Cone) -> Result<PolyFn> {
    check_dim(f.dim(), c.dim())?;
    let mut h = f.epi.hrep().clone();
    for a in c.polyhedron().hrep().rows() {
        let mut row = a.clone();
        row.push(Scalar::zero());
        h.push(row, Scalar::zero());
    }
    Ok(PolyFn { epi: Polyhedron::from_hrep(h) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    fn q(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn ex1_upper_image() -> Polyhedron {
        Polyhedron::from_generators(2, vec![q(&[0, 4]), q(&[6, 6])], vec![q(&[-3, 1]), q(&[1, 2])])
    }

    #[test]
    fn support_function_of_ex1() {
        let z = supfun_of_negated_set(&ex1_upper_image()).unwrap();
        assert!(z.is_positively_homogeneous());
        assert_eq!(z.eval(&q(&[0, 1])).unwrap(), Extended::Finite(int(-4)));
        assert_eq!(z.eval(&q(&[0, 0])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(z.eval(&q(&[1, 0])).unwrap(), Extended::PosInf);
        // max{-4 w2, -6 w1 - 6 w2} at (1/4, 1)
        assert_eq!(z.eval(&[ratio(1, 4), int(1)]).unwrap(), Extended::Finite(int(-4)));
        assert_eq!(z.eval(&[ratio(-1, 2), int(1)]).unwrap(), Extended::Finite(int(-3)));
    }

    #[test]
    fn orthant_support_is_indicator_of_orthant() {
        let z = supfun_of_negated_set(Cone::orthant(2).polyhedron()).unwrap();
        assert_eq!(z.eval(&q(&[2, 3])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(z.eval(&q(&[-1, 3])).unwrap(), Extended::PosInf);
    }

    #[test]
    fn point_origin_gives_zero_function() {
        let z = supfun_of_negated_set(&Polyhedron::point(q(&[0, 0]))).unwrap();
        assert_eq!(z.eval(&q(&[-7, 5])).unwrap(), Extended::Finite(int(0)));
    }

    #[test]
    fn restriction_to_orthant() {
        let f = restrict_domain(&PolyFn::linear(&q(&[0, 0])), &Cone::orthant(2)).unwrap();
        assert_eq!(f.eval(&q(&[1, 1])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(f.eval(&q(&[1, -1])).unwrap(), Extended::PosInf);
        let g = restrict_domain(&PolyFn::linear(&q(&[1, 2])), &Cone::whole_space(2)).unwrap();
        assert_eq!(g, PolyFn::linear(&q(&[1, 2])));
    }

    #[test]
    fn unbounded_below_and_malformed() {
        let f = PolyFn::from_epigraph(Polyhedron::universe(2)).unwrap();
        assert_eq!(f.eval(&q(&[3])).unwrap(), Extended::NegInf);
        let hypo = Polyhedron::from_inequalities(2, vec![q(&[0, -1])], vec![int(0)]);
        assert_eq!(PolyFn::from_epigraph(hypo), Err(Error::MalformedEpigraph));
    }
}
