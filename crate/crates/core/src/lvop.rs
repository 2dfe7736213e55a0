//! Linear vector optimization with geometric duality.
//!
//! Problem (P) minimizes `x ↦ P x` over `S = {x : B x ≥ b}` with respect to the
//! order of a cone `C ⊂ ℝ^q`. Its dual maximizes
//! `D*(u, w) = (w_1, …, w_{q-1}, bᵀu)` over
//! `T = {(u, w) : u ≥ 0, Bᵀu = Pᵀw, cᵀw = 1, w ∈ C⁺}` with respect to
//! `K = cone{e^q}`. The upper image is `P[S] + C` and the lower image is
//! `D*[T] - K`; the lower image is also a section of the hypograph of
//! `-Z`, where `Z` is the support function of `-P[S] - C`.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::geometry::scalar::{dot, zeros};
use crate::geometry::{
    enumerate_generators, intersect, minkowski_sum_cone, supfun_of_negated_set, Cone, Extended, HPoly, PolyFn,
    Polyhedron, Scalar, Vector, VPoly,
};
use crate::market::{MarketModel, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LvopProblem {
    p: Vec<Vector>,
    b_mat: Vec<Vector>,
    b: Vector,
    cone: Cone,
    c: Vector,
}

impl LvopProblem {
    /// `p` is `q × d`, `b_mat` is `m × d`; `c` must lie in the interior of
    /// `cone` and have last coordinate 1.
    pub fn new(p: Vec<Vector>, b_mat: Vec<Vector>, b: Vector, cone: Cone, c: Vector) -> Result<LvopProblem> {
        let q = p.len();
        if q == 0 {
            return Err(Error::EmptyInput("objective matrix has no rows"));
        }
        let d = p[0].len();
        for row in &p {
            check_dim(d, row.len())?;
        }
        for row in &b_mat {
            check_dim(d, row.len())?;
        }
        check_dim(b_mat.len(), b.len())?;
        check_dim(q, cone.dim())?;
        check_dim(q, c.len())?;
        if !c[q - 1].is_one() {
            return Err(Error::InvalidProblem("the last coordinate of c must be 1".into()));
        }
        if !cone.contains_in_interior(&c) {
            return Err(Error::InvalidProblem("c must lie in the interior of the ordering cone".into()));
        }
        Ok(LvopProblem { p, b_mat, b, cone, c })
    }

    pub fn q(&self) -> usize {
        self.p.len()
    }

    pub fn d(&self) -> usize {
        self.p[0].len()
    }

    pub fn m(&self) -> usize {
        self.b_mat.len()
    }

    pub fn objective(&self) -> &[Vector] {
        &self.p
    }

    pub fn constraints(&self) -> (&[Vector], &[Scalar]) {
        (&self.b_mat, &self.b)
    }

    pub fn ordering_cone(&self) -> &Cone {
        &self.cone
    }

    pub fn weight(&self) -> &[Scalar] {
        &self.c
    }

    pub fn feasible_set(&self) -> Polyhedron {
        Polyhedron::from_inequalities(self.d(), self.b_mat.clone(), self.b.clone())
    }
}

/// The dual problem: `T ⊂ ℝ^{m+q}` (coordinates `u` then `w`) and its ordering cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualData {
    pub t: Polyhedron,
    pub k: Cone,
    b: Vector,
}

impl DualData {
    pub fn new(p: &LvopProblem) -> DualData {
        let (m, q) = (p.m(), p.q());
        let mut h = t0_hrep(p);
        for a in p.cone.dual().polyhedron().hrep().rows() {
            let mut row = zeros(m);
            row.extend(a.iter().cloned());
            h.push(row, Scalar::zero());
        }
        let mut eq = zeros(q);
        eq[q - 1] = Scalar::one();
        DualData { t: Polyhedron::from_hrep(h), k: Cone::generated(q, vec![eq]), b: p.b.clone() }
    }

    /// `D*(u, w) = (w_1, …, w_{q-1}, bᵀu)` for a point `(u, w)` of `ℝ^{m+q}`.
    pub fn objective(&self, uw: &[Scalar]) -> Vector {
        let m = self.b.len();
        let (u, w) = uw.split_at(m);
        let mut out = w[..w.len() - 1].to_vec();
        out.push(dot(&self.b, u));
        out
    }
}

/// `{(u, w) : u ≥ 0, Bᵀu = Pᵀw, cᵀw = 1}`, i.e. `T` without the cone constraint on `w`.
fn t0_hrep(p: &LvopProblem) -> HPoly {
    let (m, q, d) = (p.m(), p.q(), p.d());
    let mut h = HPoly::universe(m + q);
    for j in 0..m {
        let mut row = zeros(m + q);
        row[j] = Scalar::one();
        h.push(row, Scalar::zero());
    }
    for k in 0..d {
        let mut row = zeros(m + q);
        for j in 0..m {
            row[j] = p.b_mat[j][k].clone();
        }
        for i in 0..q {
            row[m + i] = -p.p[i][k].clone();
        }
        h.push_equality(row, Scalar::zero());
    }
    let mut row = zeros(m);
    row.extend(p.c.iter().cloned());
    h.push_equality(row, Scalar::one());
    h
}

/// `P[S] + C`.
pub fn upper_image(p: &LvopProblem) -> Polyhedron {
    let s = p.feasible_set();
    if s.is_empty() {
        return Polyhedron::empty(p.q());
    }
    minkowski_sum_cone(&s.linear_image(&p.p), &p.cone).expect("dimensions checked on construction")
}

/// `D*[T] - K`.
///
/// The cone constraint `w ∈ C⁺` only involves coordinates that `D*` keeps
/// (`w_q` is fixed by `cᵀw = 1`), so `T` without it is enumerated and mapped,
/// and the constraint is applied afterwards as a cylinder over `y`.
pub fn lower_image(p: &LvopProblem) -> Polyhedron {
    let (m, q) = (p.m(), p.q());
    let t0 = enumerate_generators(&t0_hrep(p));
    if t0.is_empty() {
        return Polyhedron::empty(q);
    }
    let map = |uw: &Vector| {
        let mut out = uw[m..m + q - 1].to_vec();
        out.push(dot(&p.b, &uw[..m]));
        out
    };
    let mut down = zeros(q);
    down[q - 1] = -Scalar::one();
    let mut rays: Vec<Vector> = t0.rays().iter().map(map).collect();
    rays.push(down);
    let image = Polyhedron::from_vrep(VPoly::new(
        q,
        t0.vertices().iter().map(map).collect(),
        rays,
        t0.lines().iter().map(map).collect(),
    ));
    intersect(&image, &dual_cone_cylinder(&p.cone, &p.c)).expect("same dimension")
}

/// `{(w', y) : (w', 1 - c'·w') ∈ C⁺}` in `ℝ^q`.
fn dual_cone_cylinder(cone: &Cone, c: &[Scalar]) -> Polyhedron {
    let q = c.len();
    let mut h = HPoly::universe(q);
    let restrict = |g: &Vector| {
        let mut row: Vector = (0..q - 1).map(|i| &g[i] - &g[q - 1] * &c[i]).collect();
        row.push(Scalar::zero());
        (row, -g[q - 1].clone())
    };
    for r in cone.rays() {
        let (row, rhs) = restrict(r);
        h.push(row, rhs);
    }
    for l in cone.lines() {
        let (row, rhs) = restrict(l);
        h.push_equality(row, rhs);
    }
    Polyhedron::from_hrep(h)
}

/// `φ(y, w) = Σ_{i<q} y_i w_i + y_q (1 - Σ_{i<q} c_i w_i) - w_q`.
pub fn coupling_phi(y: &[Scalar], w: &[Scalar], c: &[Scalar]) -> Result<Scalar> {
    let q = c.len();
    check_dim(q, y.len())?;
    check_dim(q, w.len())?;
    if q == 0 {
        return Err(Error::EmptyInput("coupling of zero-dimensional points"));
    }
    let k = q - 1;
    let lin = dot(&y[..k], &w[..k]);
    let tail = Scalar::one() - dot(&c[..k], &w[..k]);
    Ok(lin + &y[k] * tail - &w[k])
}

/// `{(w_1, …, w_{q-1}, y) : y ≤ -f(w), cᵀw = 1}`, the section of the hypograph
/// of `-f` by the hyperplane `cᵀw = 1` (`c_q = 1`).
pub fn hypograph_section(f: &PolyFn, c: &[Scalar]) -> Result<Polyhedron> {
    let q = f.dim();
    check_dim(q, c.len())?;
    if q == 0 || !c[q - 1].is_one() {
        return Err(Error::InvalidProblem("the last coordinate of c must be 1".into()));
    }
    let epi = f.epigraph();
    if epi.is_empty() {
        return Ok(Polyhedron::empty(q));
    }
    let mut h = HPoly::universe(q);
    for (a, r) in epi.hrep().iter() {
        let aq = &a[q - 1];
        let mut row: Vector = (0..q - 1).map(|i| &a[i] - aq * &c[i]).collect();
        row.push(-a[q].clone());
        h.push(row, r - aq);
    }
    Ok(Polyhedron::from_hrep(h))
}

/// The lower image recovered from the support function of `-𝒫`; needs a line-free `C`.
pub fn lower_image_via_support(p: &LvopProblem) -> Result<Polyhedron> {
    if !p.cone.is_line_free() {
        return Err(Error::OrderingConeHasLines);
    }
    let upper = upper_image(p);
    if upper.is_empty() {
        return Err(Error::EmptyInput("upper image of an infeasible problem"));
    }
    hypograph_section(&supfun_of_negated_set(&upper)?, &p.c)
}

/// `Z(w)` read back from a lower image: `-sup{y : (w_1, …, w_{q-1}, y)/cᵀw ∈ 𝒟*}`
/// when `cᵀw > 0`, `0` at the origin and `+∞` otherwise.
pub fn support_from_lower_image(dstar: &Polyhedron, c: &[Scalar], w: &[Scalar]) -> Result<Extended> {
    let q = dstar.dim();
    check_dim(q, c.len())?;
    check_dim(q, w.len())?;
    if w.iter().all(Zero::is_zero) {
        return Ok(Extended::Finite(Scalar::zero()));
    }
    let s = dot(c, w);
    if !s.is_positive() {
        return Ok(Extended::PosInf);
    }
    if dstar.is_empty() {
        return Ok(Extended::PosInf);
    }
    let point: Vector = w[..q - 1].iter().map(|x| x / &s).collect();
    let mut sup: Option<Scalar> = None;
    for (a, r) in dstar.hrep().iter() {
        let slack = r - dot(&a[..q - 1], &point);
        let ay = &a[q - 1];
        if ay.is_zero() {
            if slack.is_positive() {
                return Ok(Extended::PosInf);
            }
        } else if ay.is_negative() {
            let bound = slack / ay;
            if sup.as_ref().map_or(true, |b| bound < *b) {
                sup = Some(bound);
            }
        }
    }
    Ok(match sup {
        Some(v) => Extended::Finite(-(v * s)),
        None => Extended::NegInf,
    })
}

/// The weight used when none is given: `e^q` if it lies in the interior of `C`,
/// otherwise the sum of the extreme rays of `C` scaled to `c_q = 1`.
pub fn default_weight(cone: &Cone) -> Result<Vector> {
    let q = cone.dim();
    if q == 0 {
        return Err(Error::EmptyInput("zero-dimensional ordering cone"));
    }
    let mut eq = zeros(q);
    eq[q - 1] = Scalar::one();
    if cone.contains_in_interior(&eq) {
        return Ok(eq);
    }
    let mut sum = zeros(q);
    for r in cone.rays() {
        for (s, x) in sum.iter_mut().zip(r) {
            *s += x;
        }
    }
    let last = sum[q - 1].clone();
    if last.is_positive() {
        let c: Vector = sum.iter().map(|x| x / &last).collect();
        if cone.contains_in_interior(&c) {
            return Ok(c);
        }
    }
    Err(Error::InvalidProblem("no interior weight with last coordinate 1; pass c explicitly".into()))
}

/// One backward step as an LVOP: `P` the identity, `S = W_t`, `C = K_t`, so that
/// the upper image is `W_t + K_t = Z_t`.
pub fn shp_step_problem(
    model: &MarketModel,
    node: NodeId,
    w_set: &Polyhedron,
    c: Option<Vector>,
) -> Result<LvopProblem> {
    let k = model.solvency_cone(node);
    if !k.is_line_free() {
        return Err(Error::LiquidationMapUnsupported { node: model.label(node).to_string() });
    }
    let d = model.assets();
    check_dim(d, w_set.dim())?;
    let c = match c {
        Some(c) => c,
        None => default_weight(k)?,
    };
    let identity: Vec<Vector> = (0..d).map(|i| crate::geometry::scalar::unit(d, i)).collect();
    let h = w_set.hrep();
    LvopProblem::new(identity, h.rows().to_vec(), h.rhs().to_vec(), k.clone(), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    fn q(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn ex1() -> LvopProblem {
        LvopProblem::new(
            vec![q(&[1, -1]), q(&[1, 1])],
            vec![q(&[2, 1]), q(&[1, 2]), q(&[1, 0]), q(&[0, 1])],
            q(&[6, 6, 0, 0]),
            Cone::generated(2, vec![q(&[-3, 1]), q(&[1, 2])]),
            q(&[0, 1]),
        )
        .unwrap()
    }

    fn ex1_dstar() -> Polyhedron {
        let rows = vec![q(&[1, 0]), q(&[-1, 0]), q(&[0, -1]), q(&[6, -1])];
        Polyhedron::from_inequalities(2, rows, vec![int(-1), ratio(-1, 3), int(-4), int(-6)])
    }

    #[test]
    fn ex1_images() {
        let p = ex1();
        let rows = vec![q(&[-1, 3]), q(&[-1, 1]), q(&[1, 3])];
        assert_eq!(upper_image(&p), Polyhedron::from_inequalities(2, rows, q(&[12, 0, 12])));
        assert_eq!(lower_image(&p), ex1_dstar());
        assert_eq!(lower_image_via_support(&p).unwrap(), ex1_dstar());
    }

    #[test]
    fn ex1_support_values() {
        let c = q(&[0, 1]);
        let d = ex1_dstar();
        assert_eq!(support_from_lower_image(&d, &c, &q(&[0, 1])).unwrap(), Extended::Finite(int(-4)));
        assert_eq!(support_from_lower_image(&d, &c, &q(&[0, 0])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(support_from_lower_image(&d, &c, &q(&[1, 0])).unwrap(), Extended::PosInf);
        // max{-4 w2, -6 w1 - 6 w2} at (1/3, 1) and outside the domain at (1, 1)
        assert_eq!(support_from_lower_image(&d, &c, &[ratio(1, 3), int(1)]).unwrap(), Extended::Finite(int(-4)));
        assert_eq!(support_from_lower_image(&d, &c, &q(&[1, 1])).unwrap(), Extended::PosInf);
    }

    #[test]
    fn coupling_is_tight_on_supporting_pair() {
        let c = q(&[0, 1]);
        assert_eq!(coupling_phi(&q(&[0, 0]), &q(&[0, 0]), &c).unwrap(), int(0));
        assert_eq!(coupling_phi(&q(&[0, 4]), &[ratio(-1, 3), int(4)], &c).unwrap(), int(0));
        let (up, down) = (upper_image(&ex1()), ex1_dstar());
        for y in up.vertices() {
            for w in down.vertices() {
                assert!(!coupling_phi(y, w, &c).unwrap().is_negative());
            }
        }
    }

    #[test]
    fn orthant_from_origin() {
        let p = LvopProblem::new(
            vec![q(&[1, 0]), q(&[0, 1])],
            vec![q(&[1, 0]), q(&[-1, 0]), q(&[0, 1]), q(&[0, -1])],
            q(&[0, 0, 0, 0]),
            Cone::orthant(2),
            q(&[1, 1]),
        )
        .unwrap();
        assert_eq!(upper_image(&p), Cone::orthant(2).into_polyhedron());
        assert_eq!(lower_image(&p), lower_image_via_support(&p).unwrap());
    }

    #[test]
    fn dual_data_objective_and_t() {
        let p = ex1();
        let dd = DualData::new(&p);
        for v in dd.t.vertices() {
            assert!(v[..4].iter().all(|u| !u.is_negative()));
            assert!(dot(&v[4..], &[int(0), int(1)]).is_one());
            assert!(lower_image(&p).contains(&dd.objective(v)));
        }
    }

    #[test]
    fn rejects_bad_weights_and_lines() {
        let half = Cone::from_inequalities(2, vec![q(&[0, 1])]);
        let p = LvopProblem::new(vec![q(&[1, 0]), q(&[0, 1])], vec![], vec![], half.clone(), q(&[0, 1])).unwrap();
        assert_eq!(lower_image_via_support(&p), Err(Error::OrderingConeHasLines));
        assert!(LvopProblem::new(vec![q(&[1, 0]), q(&[0, 1])], vec![], vec![], half, q(&[1, 0])).is_err());
        assert!(LvopProblem::new(vec![q(&[1, 0]), q(&[0, 1])], vec![], vec![], Cone::orthant(2), q(&[0, 1])).is_err());
    }

    #[test]
    fn default_weight_prefers_last_unit_vector() {
        assert_eq!(default_weight(&Cone::generated(2, vec![q(&[-3, 1]), q(&[1, 2])])).unwrap(), q(&[0, 1]));
        let skew = Cone::generated(2, vec![q(&[1, 0]), q(&[1, 1])]);
        let c = default_weight(&skew).unwrap();
        assert_eq!(c, q(&[2, 1]));
        assert!(skew.contains_in_interior(&c));
    }
}
