use num_traits::{Signed, Zero};

use super::cone::Cone;
use super::polyhedron::{HPoly, Polyhedron, VPoly};
use super::scalar::{dot, neg, Scalar, Vector};
use crate::error::{check_dim, Error, Result};

pub fn intersect(p: &Polyhedron, q: &Polyhedron) -> Result<Polyhedron> {
    check_dim(p.dim(), q.dim())?;
    if p.is_empty() || q.is_empty() {
        return Ok(Polyhedron::empty(p.dim()));
    }
    let mut h: HPoly = p.hrep().clone();
    h.extend(q.hrep());
    Ok(Polyhedron::from_hrep(h))
}

/// Intersection of a nonempty list, folded left to right.
pub fn intersect_all<'a>(ps: impl IntoIterator<Item = &'a Polyhedron>) -> Result<Polyhedron> {
    let mut it = ps.into_iter();
    let first = it.next().ok_or(Error::EmptyInput("intersection of no sets"))?;
    let mut acc = first.clone();
    for p in it {
        if *p != acc {
            acc = intersect(&acc, p)?;
        }
    }
    Ok(acc)
}

/// `p + c`. The empty set absorbs: `∅ + c = ∅`.
pub fn minkowski_sum_cone(p: &Polyhedron, c: &Cone) -> Result<Polyhedron> {
    check_dim(p.dim(), c.dim())?;
    if p.is_empty() {
        return Ok(p.clone());
    }
    let rays = p.rays().iter().chain(c.rays()).cloned().collect();
    let lines = p.lines().iter().chain(c.lines()).cloned().collect();
    Ok(Polyhedron::from_vrep(VPoly::new(p.dim(), p.vertices().to_vec(), rays, lines)))
}

/// Closed convex hull of a union. Empty members are skipped.
pub fn convex_hull_union(ps: &[Polyhedron]) -> Result<Polyhedron> {
    let first = ps.first().ok_or(Error::EmptyInput("convex hull of no sets"))?;
    let d = first.dim();
    let (mut vertices, mut rays, mut lines) = (Vec::new(), Vec::new(), Vec::new());
    for p in ps {
        check_dim(d, p.dim())?;
        if p.is_empty() {
            continue;
        }
        vertices.extend(p.vertices().iter().cloned());
        rays.extend(p.rays().iter().cloned());
        lines.extend(p.lines().iter().cloned());
    }
    if vertices.is_empty() {
        return Ok(Polyhedron::empty(d));
    }
    Ok(Polyhedron::from_vrep(VPoly::new(d, vertices, rays, lines)))
}

/// Orthogonal projection onto the coordinates in `keep`, in that order.
pub fn project(p: &Polyhedron, keep: &[usize]) -> Result<Polyhedron> {
    let d = p.dim();
    if let Some(&bad) = keep.iter().find(|&&i| i >= d) {
        return Err(Error::DimensionMismatch { expected: d, found: bad + 1 });
    }
    let mut seen = keep.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != keep.len() {
        return Err(Error::InvalidProblem("projection indices must be distinct".into()));
    }
    if p.is_empty() {
        return Ok(Polyhedron::empty(keep.len()));
    }
    let pick = |vs: &[Vector]| vs.iter().map(|v| keep.iter().map(|&i| v[i].clone()).collect()).collect();
    Ok(Polyhedron::from_vrep(VPoly::new(keep.len(), pick(p.vertices()), pick(p.rays()), pick(p.lines()))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Finite { value: Scalar, argmin: Vector },
    /// The objective decreases without bound along `ray`.
    Unbounded { ray: Vector },
}

/// `min{objective·x : x ∈ p}` by enumeration of the V-representation.
pub fn lp_min(p: &Polyhedron, objective: &[Scalar]) -> Result<LpOutcome> {
    check_dim(p.dim(), objective.len())?;
    if p.is_empty() {
        return Err(Error::Infeasible("minimization over the empty set".into()));
    }
    for l in p.lines() {
        let s = dot(objective, l);
        if !s.is_zero() {
            let ray = if s.is_negative() { l.clone() } else { neg(l) };
            return Ok(LpOutcome::Unbounded { ray });
        }
    }
    if let Some(r) = p.rays().iter().find(|r| dot(objective, r).is_negative()) {
        return Ok(LpOutcome::Unbounded { ray: r.clone() });
    }
    let mut best: Option<(Scalar, &Vector)> = None;
    for v in p.vertices() {
        let val = dot(objective, v);
        if best.as_ref().map_or(true, |(b, _)| val < *b) {
            best = Some((val, v));
        }
    }
    let (value, argmin) = best.expect("nonempty polyhedron has a vertex");
    Ok(LpOutcome::Finite { value, argmin: argmin.clone() })
}

pub fn contains(p: &Polyhedron, x: &[Scalar]) -> bool {
    p.contains(x)
}
