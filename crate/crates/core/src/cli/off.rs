//! Boundary export of 3-D polyhedra in the OFF mesh format. Unbounded sets are
//! clipped to a box around their vertices; only the faces lying on the
//! original facets are written.

use std::fmt::Write;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::scalar::{int, to_f64};
use crate::geometry::{intersect, HPoly, Polyhedron, Scalar};

fn clipping_box(p: &Polyhedron) -> Polyhedron {
    let d = p.dim();
    let mut h = HPoly::universe(d);
    for i in 0..d {
        let coords: Vec<&Scalar> = p.vertices().iter().map(|v| &v[i]).collect();
        let lo = coords.iter().copied().min().cloned().unwrap_or_else(Scalar::zero);
        let hi = coords.iter().copied().max().cloned().unwrap_or_else(Scalar::zero);
        let margin = std::cmp::max(Scalar::one(), (&hi - &lo) / int(4));
        let mut row = vec![Scalar::zero(); d];
        row[i] = Scalar::one();
        h.push(row.clone(), &lo - &margin);
        row[i] = -Scalar::one();
        h.push(row, -(&hi + &margin));
    }
    Polyhedron::from_hrep(h)
}

/// Vertex indices of one face, ordered counter-clockwise around `normal`.
fn order_face(points: &[[f64; 3]], mut face: Vec<usize>, normal: [f64; 3]) -> Vec<usize> {
    let n = face.len() as f64;
    let mut c = [0.0; 3];
    for &i in &face {
        for k in 0..3 {
            c[k] += points[i][k] / n;
        }
    }
    let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let helper = if normal[0].abs() < 0.9 * normal.iter().map(|x| x.abs()).fold(0.0, f64::max) {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let u = cross(normal, helper);
    let v = cross(normal, u);
    let angle = |i: usize| {
        let d = [points[i][0] - c[0], points[i][1] - c[1], points[i][2] - c[2]];
        let (x, y) = (d[0] * u[0] + d[1] * u[1] + d[2] * u[2], d[0] * v[0] + d[1] * v[1] + d[2] * v[2]);
        y.atan2(x)
    };
    face.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    face
}

pub fn write_off(p: &Polyhedron) -> Result<String> {
    if p.dim() != 3 {
        return Err(Error::InvalidProblem(format!("OFF export needs a 3-D set, found dimension {}", p.dim())));
    }
    if p.is_empty() {
        return Ok("OFF\n0 0 0\n".into());
    }
    let clipped = intersect(p, &clipping_box(p))?;
    let verts = clipped.vertices();
    let points: Vec<[f64; 3]> = verts.iter().map(|v| [to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2])]).collect();
    let mut faces = Vec::new();
    for (a, b) in p.hrep().iter() {
        let on: Vec<usize> = (0..verts.len())
            .filter(|&i| a.iter().zip(&verts[i]).map(|(x, y)| x * y).sum::<Scalar>() == *b)
            .collect();
        if on.len() >= 3 {
            // facet normals point inwards; flip for outward orientation
            let normal = [-to_f64(&a[0]), -to_f64(&a[1]), -to_f64(&a[2])];
            faces.push(order_face(&points, on, normal));
        }
    }
    let mut out = String::from("OFF\n");
    writeln!(out, "{} {} 0", points.len(), faces.len()).expect("writing to a string");
    for q in &points {
        writeln!(out, "{} {} {}", q[0], q[1], q[2]).expect("writing to a string");
    }
    for f in &faces {
        let idx: Vec<String> = f.iter().map(usize::to_string).collect();
        writeln!(out, "{} {}", f.len(), idx.join(" ")).expect("writing to a string");
    }
    Ok(out)
}
