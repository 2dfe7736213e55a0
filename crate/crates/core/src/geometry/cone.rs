use num_traits::{Signed, Zero};

use super::polyhedron::{HPoly, Polyhedron, VPoly};
use super::scalar::{dot, unit, zeros, Scalar, Vector};
use crate::error::{Error, Result};

/// A polyhedral cone: a [`Polyhedron`] whose only vertex is the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone(Polyhedron);

impl Cone {
    /// `cone(rays)`; the empty list gives `{0}`.
    pub fn generated(dim: usize, rays: Vec<Vector>) -> Cone {
        Cone(Polyhedron::from_vrep(VPoly::new(dim, vec![zeros(dim)], rays, Vec::new())))
    }

    pub fn with_lines(dim: usize, rays: Vec<Vector>, lines: Vec<Vector>) -> Cone {
        Cone(Polyhedron::from_vrep(VPoly::new(dim, vec![zeros(dim)], rays, lines)))
    }

    /// `{x : a·x ≥ 0}` for every row `a`.
    pub fn from_inequalities(dim: usize, rows: Vec<Vector>) -> Cone {
        let rhs = vec![Scalar::zero(); rows.len()];
        Cone(Polyhedron::from_hrep(HPoly::new(dim, rows, rhs)))
    }

    pub fn from_polyhedron(p: Polyhedron) -> Result<Cone> {
        let origin = zeros(p.dim());
        if p.vertices().len() == 1 && p.vertices()[0] == origin {
            Ok(Cone(p))
        } else {
            Err(Error::InvalidProblem("polyhedron is not a cone with apex at the origin".into()))
        }
    }

    pub fn orthant(dim: usize) -> Cone {
        Cone::generated(dim, (0..dim).map(|i| unit(dim, i)).collect())
    }

    pub fn whole_space(dim: usize) -> Cone {
        Cone::from_inequalities(dim, Vec::new())
    }

    pub fn origin(dim: usize) -> Cone {
        Cone::generated(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn polyhedron(&self) -> &Polyhedron {
        &self.0
    }

    pub fn into_polyhedron(self) -> Polyhedron {
        self.0
    }

    pub fn rays(&self) -> &[Vector] {
        self.0.rays()
    }

    pub fn lines(&self) -> &[Vector] {
        self.0.lines()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.0.contains(x)
    }

    /// `{x : x·y ≥ 0 for all y in the cone}`.
    pub fn dual(&self) -> Cone {
        let d = self.dim();
        let mut h = HPoly::universe(d);
        for r in self.rays() {
            h.push(r.clone(), Scalar::zero());
        }
        for l in self.lines() {
            h.push_equality(l.clone(), Scalar::zero());
        }
        Cone(Polyhedron::from_hrep(h))
    }

    pub fn is_line_free(&self) -> bool {
        self.lines().is_empty()
    }

    /// Interior test: strictly positive on every facet row and no equalities.
    pub fn contains_in_interior(&self, x: &[Scalar]) -> bool {
        // an equality shows up as a pair of opposite rows, which no point satisfies strictly
        self.0.hrep().rows().iter().all(|a| dot(a, x).is_positive())
    }
}

pub fn dual_cone(c: &Cone) -> Cone {
    c.dual()
}

pub fn is_line_free(c: &Cone) -> bool {
    c.is_line_free()
}
