//! H- and V-representations and the canonical two-sided [`Polyhedron`].
//!
//! A polyhedron is converted through its homogenization: `P ⊆ ℝ^d` becomes the
//! cone in `ℝ^{d+1}` generated by `(v, 1)` for vertices, `(r, 0)` for rays and
//! `±(l, 0)` for lines, or cut out by `(a, -r)·(x, λ) ≥ 0` and `λ ≥ 0`.
//!
//! Both representations are canonical once built: lines and equalities are in
//! reduced row echelon form, vertices, rays and inequalities are reduced modulo
//! them, rays and inequality rows are primitive integer vectors, and every list
//! is sorted. Two polyhedra are therefore equal as sets iff they compare equal.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use super::scalar::{dot, make_primitive, primitive_integer, to_rational, Scalar, Vector};

/// `{x ∈ ℝ^d : A x ≥ r}`; an equality is stored as a pair of opposite rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPoly {
    dim: usize,
    rows: Vec<Vector>,
    rhs: Vec<Scalar>,
}

impl HPoly {
    pub fn new(dim: usize, rows: Vec<Vector>, rhs: Vec<Scalar>) -> Self {
        assert_eq!(rows.len(), rhs.len(), "one offset per row");
        assert!(rows.iter().all(|r| r.len() == dim), "row length must equal the dimension");
        HPoly { dim, rows, rhs }
    }

    pub fn universe(dim: usize) -> Self {
        HPoly { dim, rows: Vec::new(), rhs: Vec::new() }
    }

    /// The canonical infeasible system `0·x ≥ 1`.
    pub fn infeasible(dim: usize) -> Self {
        HPoly { dim, rows: vec![vec![Scalar::zero(); dim]], rhs: vec![Scalar::one()] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Scalar] {
        &self.rhs
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Vector, rhs: Scalar) {
        assert_eq!(row.len(), self.dim);
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn push_equality(&mut self, row: Vector, rhs: Scalar) {
        let neg: Vector = row.iter().map(|x| -x).collect();
        self.push(row, rhs.clone());
        self.push(neg, -rhs);
    }

    pub fn extend(&mut self, other: &HPoly) {
        assert_eq!(self.dim, other.dim);
        self.rows.extend(other.rows.iter().cloned());
        self.rhs.extend(other.rhs.iter().cloned());
    }

    pub fn satisfied_by(&self, x: &[Scalar]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(a, r)| dot(a, x) >= *r)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vector, &Scalar)> {
        self.rows.iter().zip(&self.rhs)
    }
}

/// `conv(vertices) + cone(rays) + span(lines)`; empty iff there are no vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VPoly {
    dim: usize,
    vertices: Vec<Vector>,
    rays: Vec<Vector>,
    lines: Vec<Vector>,
}

impl VPoly {
    pub fn new(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>, lines: Vec<Vector>) -> Self {
        assert!(
            vertices.iter().chain(&rays).chain(&lines).all(|v| v.len() == dim),
            "generator length must equal the dimension"
        );
        VPoly { dim, vertices, rays, lines }
    }

    pub fn empty(dim: usize) -> Self {
        VPoly { dim, vertices: Vec::new(), rays: Vec::new(), lines: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn lines(&self) -> &[Vector] {
        &self.lines
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Either representation, as accepted by [`dd_convert`].
#[derive(Debug, Clone)]
pub enum Representation {
    H(HPoly),
    V(VPoly),
}

/// A polyhedron carrying both canonical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    h: HPoly,
    v: VPoly,
}

/// Double-description conversion: fills in the missing representation and
/// canonicalizes both.
pub fn dd_convert(rep: Representation) -> Polyhedron {
    match rep {
        Representation::H(h) => {
            let v = hrep_to_vrep(&h);
            let h = vrep_to_hrep(&v);
            Polyhedron { h, v }
        }
        Representation::V(v) => {
            let h = vrep_to_hrep(&v);
            let v = hrep_to_vrep(&h);
            Polyhedron { h, v }
        }
    }
}

impl Polyhedron {
    pub fn from_hrep(h: HPoly) -> Self {
        dd_convert(Representation::H(h))
    }

    pub fn from_vrep(v: VPoly) -> Self {
        dd_convert(Representation::V(v))
    }

    pub fn from_inequalities(dim: usize, rows: Vec<Vector>, rhs: Vec<Scalar>) -> Self {
        Self::from_hrep(HPoly::new(dim, rows, rhs))
    }

    pub fn from_generators(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>) -> Self {
        Self::from_vrep(VPoly::new(dim, vertices, rays, Vec::new()))
    }

    pub fn empty(dim: usize) -> Self {
        Polyhedron { h: HPoly::infeasible(dim), v: VPoly::empty(dim) }
    }

    pub fn universe(dim: usize) -> Self {
        Self::from_hrep(HPoly::universe(dim))
    }

    pub fn point(x: Vector) -> Self {
        let d = x.len();
        Self::from_generators(d, vec![x], Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.h.dim
    }

    pub fn hrep(&self) -> &HPoly {
        &self.h
    }

    pub fn vrep(&self) -> &VPoly {
        &self.v
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.v.vertices
    }

    pub fn rays(&self) -> &[Vector] {
        &self.v.rays
    }

    pub fn lines(&self) -> &[Vector] {
        &self.v.lines
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.v.rays.is_empty() && self.v.lines.is_empty()
    }

    /// Exact membership through the H-representation.
    pub fn contains(&self, x: &[Scalar]) -> bool {
        x.len() == self.dim() && self.h.satisfied_by(x)
    }

    /// `other ⊆ self`, decided on the generators of `other`.
    pub fn includes(&self, other: &Polyhedron) -> bool {
        if other.is_empty() {
            return true;
        }
        if self.dim() != other.dim() {
            return false;
        }
        let homogeneous_ok = |d: &Vector| self.h.rows.iter().all(|a| !dot(a, d).is_negative());
        other.v.vertices.iter().all(|x| self.h.satisfied_by(x))
            && other.v.rays.iter().all(homogeneous_ok)
            && other.v.lines.iter().all(|l| self.h.rows.iter().all(|a| dot(a, l).is_zero()))
    }

    pub fn translate(&self, t: &[Scalar]) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        let vertices = self.v.vertices.iter().map(|v| super::scalar::add(v, t)).collect();
        Self::from_vrep(VPoly::new(self.dim(), vertices, self.v.rays.clone(), self.v.lines.clone()))
    }

    /// `-P`.
    pub fn negate(&self) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        let n = |vs: &[Vector]| vs.iter().map(|v| super::scalar::neg(v)).collect::<Vec<_>>();
        Self::from_vrep(VPoly::new(self.dim(), n(&self.v.vertices), n(&self.v.rays), self.v.lines.clone()))
    }

    /// Image under the linear map `x ↦ M x` (`M` given row-wise, `rows × dim`).
    pub fn linear_image(&self, m: &[Vector]) -> Polyhedron {
        let out_dim = m.len();
        if self.is_empty() {
            return Polyhedron::empty(out_dim);
        }
        let apply = |x: &Vector| m.iter().map(|row| dot(row, x)).collect::<Vector>();
        Self::from_vrep(VPoly::new(
            out_dim,
            self.v.vertices.iter().map(apply).collect(),
            self.v.rays.iter().map(apply).collect(),
            self.v.lines.iter().map(apply).collect(),
        ))
    }
}

/// Canonical generators of `{x : A x ≥ r}`, skipping the facet computation
/// that [`Polyhedron::from_hrep`] would also do.
pub fn enumerate_generators(h: &HPoly) -> VPoly {
    hrep_to_vrep(h)
}

/// H → V without touching the H side.
pub(crate) fn hrep_to_vrep(h: &HPoly) -> VPoly {
    let d = h.dim;
    let mut ineqs: Vec<Vec<BigInt>> = h
        .rows
        .iter()
        .zip(&h.rhs)
        .map(|(a, r)| {
            let mut row: Vector = a.clone();
            row.push(-r.clone());
            primitive_integer(&row)
        })
        .collect();
    let mut lambda = vec![BigInt::zero(); d + 1];
    lambda[d] = BigInt::one();
    ineqs.push(lambda);

    let gens = cone_generators(d + 1, &ineqs, &[]);
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for g in &gens.rays {
        let lam = &g[d];
        if lam.is_positive() {
            let l = Scalar::from_integer(lam.clone());
            vertices.push(g[..d].iter().map(|x| Scalar::from_integer(x.clone()) / &l).collect());
        } else {
            rays.push(to_rational(&g[..d]));
        }
    }
    if vertices.is_empty() {
        return VPoly::empty(d);
    }
    let lines = gens.lines.iter().map(|l| to_rational(&l[..d])).collect();
    canonical_vrep(d, vertices, rays, lines)
}

/// V → H through the polar of the homogenized cone.
pub(crate) fn vrep_to_hrep(v: &VPoly) -> HPoly {
    let d = v.dim;
    if v.vertices.is_empty() {
        return HPoly::infeasible(d);
    }
    let lift = |x: &Vector, last: i64| {
        let mut row = x.clone();
        row.push(Scalar::from_integer(BigInt::from(last)));
        primitive_integer(&row)
    };
    let mut gens: Vec<Vec<BigInt>> = v.vertices.iter().map(|x| lift(x, 1)).collect();
    gens.extend(v.rays.iter().map(|r| lift(r, 0)));
    let eqs: Vec<Vec<BigInt>> = v.lines.iter().map(|l| lift(l, 0)).collect();

    let polar = cone_generators(d + 1, &gens, &eqs);
    let facets: Vec<Vector> = polar
        .rays
        .iter()
        .filter(|h| h[..d].iter().any(|x| !x.is_zero()))
        .map(|h| to_rational(h))
        .collect();
    let equalities: Vec<Vector> = polar.lines.iter().map(|h| to_rational(h)).collect();
    canonical_hrep(d, facets, equalities)
}

/// Reduced row echelon form; returns the nonzero rows (pivot entries 1) and pivot columns.
pub(crate) fn rref(mut rows: Vec<Vector>) -> (Vec<Vector>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Scalar::one() / &rows[r][c];
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn reduce_mod(x: &Vector, basis: &[Vector], pivots: &[usize]) -> Vector {
    let mut out = x.clone();
    for (row, &p) in basis.iter().zip(pivots) {
        if !out[p].is_zero() {
            let f = out[p].clone();
            for (o, b) in out.iter_mut().zip(row) {
                *o -= &f * b;
            }
        }
    }
    out
}

fn primitive_rational(x: &Vector) -> Vector {
    to_rational(&primitive_integer(x))
}

pub(crate) fn canonical_vrep(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>, lines: Vec<Vector>) -> VPoly {
    let (basis, pivots) = rref(lines);
    let mut vertices: Vec<Vector> = vertices.iter().map(|v| reduce_mod(v, &basis, &pivots)).collect();
    let mut rays: Vec<Vector> = rays
        .iter()
        .map(|r| reduce_mod(r, &basis, &pivots))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| primitive_rational(&r))
        .collect();
    let mut lines: Vec<Vector> = basis.iter().map(primitive_rational).collect();
    for list in [&mut vertices, &mut rays, &mut lines] {
        list.sort();
        list.dedup();
    }
    VPoly { dim, vertices, rays, lines }
}

/// `facets` and `equalities` are homogenized rows `(a, -r)`.
fn canonical_hrep(dim: usize, facets: Vec<Vector>, equalities: Vec<Vector>) -> HPoly {
    let (basis, pivots) = rref(equalities);
    let mut rows: Vec<(Vector, Scalar)> = Vec::new();
    let split = |h: Vec<BigInt>| {
        let a = to_rational(&h[..dim]);
        let r = -Scalar::from_integer(h[dim].clone());
        (a, r)
    };
    for f in &facets {
        let red = reduce_mod(f, &basis, &pivots);
        if red[..dim].iter().all(Zero::is_zero) {
            continue;
        }
        rows.push(split(primitive_integer(&red)));
    }
    for e in &basis {
        let mut p = primitive_integer(e);
        rows.push(split(p.clone()));
        p.iter_mut().for_each(|x| *x = -&*x);
        make_primitive(&mut p);
        rows.push(split(p));
    }
    rows.sort();
    rows.dedup();
    let (rows, rhs) = rows.into_iter().unzip();
    HPoly { dim, rows, rhs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    fn q(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn unit_square_vertices() {
        let p = Polyhedron::from_inequalities(
            2,
            vec![q(&[1, 0]), q(&[-1, 0]), q(&[0, 1]), q(&[0, -1])],
            vec![int(0), int(-1), int(0), int(-1)],
        );
        assert_eq!(p.vertices(), &[q(&[0, 0]), q(&[0, 1]), q(&[1, 0]), q(&[1, 1])]);
        assert!(p.rays().is_empty() && p.lines().is_empty());
        assert_eq!(p.hrep().len(), 4);
    }

    #[test]
    fn infeasible_system_is_empty() {
        let p = Polyhedron::from_inequalities(1, vec![q(&[1]), q(&[-1])], vec![int(1), int(0)]);
        assert!(p.is_empty());
        assert_eq!(p, Polyhedron::empty(1));
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let p = Polyhedron::from_generators(
            2,
            vec![q(&[0, 0]), q(&[2, 0]), q(&[0, 2]), q(&[1, 1]), vec![ratio(1, 2), ratio(1, 2)]],
            vec![],
        );
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn halfplane_with_line_is_canonical() {
        let a = Polyhedron::from_inequalities(2, vec![q(&[1, 1])], vec![int(0)]);
        let b = Polyhedron::from_generators(2, vec![q(&[5, -5])], vec![q(&[1, 0]), q(&[0, 1]), q(&[-1, 1]), q(&[1, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.lines().len(), 1);
        assert_eq!(a.vertices(), &[q(&[0, 0])]);
    }

    #[test]
    fn segment_has_equalities() {
        let p = Polyhedron::from_generators(2, vec![q(&[0, 0]), q(&[1, 1])], vec![]);
        assert!(p.contains(&[ratio(1, 2), ratio(1, 2)]));
        assert!(!p.contains(&[ratio(1, 2), ratio(1, 3)]));
        let again = Polyhedron::from_hrep(p.hrep().clone());
        assert_eq!(p, again);
    }
}
