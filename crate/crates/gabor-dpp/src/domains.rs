//! Phase-space regions and product quadratures over them.
//!
//! Four shapes cover everything downstream needs: centered disks and annuli
//! (polar tensor rules with a uniform angular grid, which is what makes the
//! banded assembly path exact), axis-aligned rectangles (Cartesian tensor
//! rules), and simple polygons (signed centroid-fan triangulation with a
//! Duffy square-to-triangle map, so non-convex shapes integrate correctly
//! through cancellation of signed weights).

use crate::phasespace::PhasePoint;
use crate::specfun::gauss_legendre;
use crate::{invalid, Error, Result};
use std::f64::consts::PI;
use std::path::Path;

/// A measurable region of the time-frequency plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    Rect { x0: f64, x1: f64, xi0: f64, xi1: f64 },
    /// Simple polygon, stored counterclockwise.
    Polygon { vertices: Vec<(f64, f64)> },
}

/// Two-dimensional quadrature: phase-space nodes with (possibly signed)
/// weights summing to the domain measure.
#[derive(Debug, Clone)]
pub struct DomainQuadrature {
    pub nodes: Vec<PhasePoint>,
    pub weights: Vec<f64>,
}

impl DomainQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn polygon_signed_area(vertices: &[(f64, f64)]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = vertices[i];
        let (x1, y1) = vertices[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc
}

impl Domain {
    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::DegenerateDomain(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Domain::Disk { radius })
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0) || !(outer > inner) || !outer.is_finite() {
            return Err(Error::DegenerateDomain(format!(
                "annulus needs 0 <= inner < outer, got {inner}, {outer}"
            )));
        }
        Ok(Domain::Annulus { inner, outer })
    }

    pub fn rect(x0: f64, x1: f64, xi0: f64, xi1: f64) -> Result<Self> {
        if !(x0 < x1) || !(xi0 < xi1) || !x1.is_finite() || !xi1.is_finite() {
            return Err(Error::DegenerateDomain(format!(
                "rectangle needs x0 < x1 and xi0 < xi1, got [{x0}, {x1}] x [{xi0}, {xi1}]"
            )));
        }
        Ok(Domain::Rect { x0, x1, xi0, xi1 })
    }

    /// Simple polygon from a vertex list. Orientation is normalized to
    /// counterclockwise; repeated consecutive vertices or (near-)zero area
    /// are rejected.
    pub fn polygon(mut vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateDomain(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if a == b {
                return Err(Error::DegenerateDomain(format!(
                    "polygon has repeated consecutive vertex at position {i}"
                )));
            }
        }
        let signed = polygon_signed_area(&vertices);
        if signed.abs() < 1e-14 {
            return Err(Error::DegenerateDomain(
                "polygon area is numerically zero".to_string(),
            ));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        Ok(Domain::Polygon { vertices })
    }

    /// Lebesgue measure, closed form per shape.
    pub fn measure(&self) -> f64 {
        match self {
            Domain::Disk { radius } => PI * radius * radius,
            Domain::Annulus { inner, outer } => PI * (outer * outer - inner * inner),
            Domain::Rect { x0, x1, xi0, xi1 } => (x1 - x0) * (xi1 - xi0),
            Domain::Polygon { vertices } => polygon_signed_area(vertices),
        }
    }

    /// Boundary length, closed form per shape.
    pub fn perimeter(&self) -> f64 {
        match self {
            Domain::Disk { radius } => 2.0 * PI * radius,
            Domain::Annulus { inner, outer } => 2.0 * PI * (inner + outer),
            Domain::Rect { x0, x1, xi0, xi1 } => 2.0 * ((x1 - x0) + (xi1 - xi0)),
            Domain::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let (x0, y0) = vertices[i];
                        let (x1, y1) = vertices[(i + 1) % n];
                        (x1 - x0).hypot(y1 - y0)
                    })
                    .sum()
            }
        }
    }

    /// Expected point count of the associated ensemble: the measure rounded
    /// up, with a guard that snaps values within 1e-9 of an integer first so
    /// that e.g. a disk constructed to have area 20 yields 20, not 21.
    pub fn n_omega(&self) -> usize {
        let m = self.measure();
        let nearest = m.round();
        let snapped = if (m - nearest).abs() < 1e-9 { nearest } else { m.ceil() };
        snapped as usize
    }

    /// Dilation about the origin by `t > 0`: measure scales by t^2,
    /// perimeter by t.
    pub fn scale(&self, t: f64) -> Result<Domain> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(invalid(format!("scale factor must be positive, got {t}")));
        }
        Ok(match self {
            Domain::Disk { radius } => Domain::Disk { radius: radius * t },
            Domain::Annulus { inner, outer } => Domain::Annulus {
                inner: inner * t,
                outer: outer * t,
            },
            Domain::Rect { x0, x1, xi0, xi1 } => Domain::Rect {
                x0: x0 * t,
                x1: x1 * t,
                xi0: xi0 * t,
                xi1: xi1 * t,
            },
            Domain::Polygon { vertices } => Domain::Polygon {
                vertices: vertices.iter().map(|&(x, y)| (x * t, y * t)).collect(),
            },
        })
    }

    /// True for the centered-circular shapes where localization spectra of
    /// pure Hermite windows are diagonal and assembly can use the banded
    /// radial reduction.
    pub fn is_rotation_invariant(&self) -> bool {
        matches!(self, Domain::Disk { .. } | Domain::Annulus { .. })
    }

    /// Axis-aligned bounding box `((x_lo, x_hi), (xi_lo, xi_hi))`.
    pub fn bounding_box(&self) -> ((f64, f64), (f64, f64)) {
        match self {
            Domain::Disk { radius } => ((-radius, *radius), (-radius, *radius)),
            Domain::Annulus { outer, .. } => ((-outer, *outer), (-outer, *outer)),
            Domain::Rect { x0, x1, xi0, xi1 } => ((*x0, *x1), (*xi0, *xi1)),
            Domain::Polygon { vertices } => {
                let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
                let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
                for &(x, y) in vertices {
                    xs = (xs.0.min(x), xs.1.max(x));
                    ys = (ys.0.min(y), ys.1.max(y));
                }
                (xs, ys)
            }
        }
    }

    /// Product quadrature with `n1 x n2` structure: (radial, angular) for
    /// disks and annuli, (x, xi) for rectangles, and an `n1 x n2` Duffy rule
    /// on each centroid-fan triangle for polygons. Angular grids are uniform
    /// so that rotation-invariant assembly reduces exactly to radial
    /// integrals. Weights sum to the measure (to roundoff).
    pub fn quadrature(&self, n1: usize, n2: usize) -> Result<DomainQuadrature> {
        if n1 == 0 || n2 == 0 {
            return Err(invalid("quadrature orders must be positive"));
        }
        match self {
            Domain::Disk { radius } => polar_rule(0.0, *radius, n1, n2),
            Domain::Annulus { inner, outer } => polar_rule(*inner, *outer, n1, n2),
            Domain::Rect { x0, x1, xi0, xi1 } => {
                let rx = gauss_legendre(n1, *x0, *x1)?;
                let ry = gauss_legendre(n2, *xi0, *xi1)?;
                let mut nodes = Vec::with_capacity(n1 * n2);
                let mut weights = Vec::with_capacity(n1 * n2);
                for (&x, &wx) in rx.nodes().iter().zip(rx.weights()) {
                    for (&y, &wy) in ry.nodes().iter().zip(ry.weights()) {
                        nodes.push(PhasePoint::new(x, y));
                        weights.push(wx * wy);
                    }
                }
                Ok(DomainQuadrature { nodes, weights })
            }
            Domain::Polygon { vertices } => {
                let n = vertices.len();
                let cx = vertices.iter().map(|v| v.0).sum::<f64>() / n as f64;
                let cy = vertices.iter().map(|v| v.1).sum::<f64>() / n as f64;
                let ru = gauss_legendre(n1, 0.0, 1.0)?;
                let rv = gauss_legendre(n2, 0.0, 1.0)?;
                let mut nodes = Vec::with_capacity(n * n1 * n2);
                let mut weights = Vec::with_capacity(n * n1 * n2);
                for i in 0..n {
                    let (ax, ay) = vertices[i];
                    let (bx, by) = vertices[(i + 1) % n];
                    // signed triangle (c, a, b); Duffy map collapses the
                    // square onto it with Jacobian 2*A*u.
                    let area2 = (ax - cx) * (by - cy) - (bx - cx) * (ay - cy);
                    for (&u, &wu) in ru.nodes().iter().zip(ru.weights()) {
                        for (&v, &wv) in rv.nodes().iter().zip(rv.weights()) {
                            let px = cx + u * ((ax - cx) + v * (bx - ax));
                            let py = cy + u * ((ay - cy) + v * (by - ay));
                            nodes.push(PhasePoint::new(px, py));
                            weights.push(wu * wv * area2 * u);
                        }
                    }
                }
                Ok(DomainQuadrature { nodes, weights })
            }
        }
    }

    /// Canonical textual form, parseable by [`Domain::parse`].
    pub fn descriptor(&self) -> String {
        match self {
            Domain::Disk { radius } => format!("disk:{radius}"),
            Domain::Annulus { inner, outer } => format!("annulus:{inner},{outer}"),
            Domain::Rect { x0, x1, xi0, xi1 } => format!("rect:{x0},{x1},{xi0},{xi1}"),
            Domain::Polygon { vertices } => {
                let parts: Vec<String> =
                    vertices.iter().map(|(x, y)| format!("{x} {y}")).collect();
                format!("poly:[{}]", parts.join("; "))
            }
        }
    }

    /// Parse a descriptor: `disk:R`, `annulus:r0,R`, `rect:x0,x1,xi0,xi1`,
    /// or `poly:@vertices.txt` (one `x xi` pair per line, `#` comments).
    pub fn parse(descriptor: &str) -> Result<Domain> {
        let (kind, rest) = descriptor
            .split_once(':')
            .ok_or_else(|| invalid(format!("domain descriptor needs `kind:args`, got {descriptor:?}")))?;
        let nums = |s: &str, n: usize| -> Result<Vec<f64>> {
            let vals: Vec<f64> = s
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| invalid(format!("bad numeric field in domain descriptor {descriptor:?}")))?;
            if vals.len() != n {
                return Err(invalid(format!(
                    "domain {kind:?} takes {n} numbers, got {}",
                    vals.len()
                )));
            }
            Ok(vals)
        };
        match kind {
            "disk" => {
                let v = nums(rest, 1)?;
                Domain::disk(v[0])
            }
            "annulus" => {
                let v = nums(rest, 2)?;
                Domain::annulus(v[0], v[1])
            }
            "rect" => {
                let v = nums(rest, 4)?;
                Domain::rect(v[0], v[1], v[2], v[3])
            }
            "poly" => {
                let path = rest.strip_prefix('@').ok_or_else(|| {
                    invalid("poly descriptor takes a vertex file: poly:@vertices.txt")
                })?;
                Domain::polygon_from_file(path)
            }
            other => Err(invalid(format!("unknown domain kind {other:?}"))),
        }
    }

    /// Vertex file loader backing `poly:@file` descriptors.
    pub fn polygon_from_file(path: impl AsRef<Path>) -> Result<Domain> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut vertices = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(invalid(format!(
                    "{}:{}: expected `x xi`, got {:?}",
                    path.display(),
                    lineno + 1,
                    raw
                )));
            }
            let x: f64 = fields[0]
                .parse()
                .map_err(|_| invalid(format!("{}:{}: bad x", path.display(), lineno + 1)))?;
            let y: f64 = fields[1]
                .parse()
                .map_err(|_| invalid(format!("{}:{}: bad xi", path.display(), lineno + 1)))?;
            vertices.push((x, y));
        }
        Domain::polygon(vertices)
    }
}

fn polar_rule(inner: f64, outer: f64, n_radial: usize, n_angular: usize) -> Result<DomainQuadrature> {
    let radial = gauss_legendre(n_radial, inner, outer)?;
    let dtheta = 2.0 * PI / n_angular as f64;
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    for (&s, &w) in radial.nodes().iter().zip(radial.weights()) {
        for q in 0..n_angular {
            let th = dtheta * q as f64;
            nodes.push(PhasePoint::new(s * th.cos(), s * th.sin()));
            weights.push(w * s * dtheta);
        }
    }
    Ok(DomainQuadrature { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn l_shape() -> Domain {
        Domain::polygon(vec![
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn closed_form_measures_and_perimeters() {
        let disk = Domain::disk(2.0).unwrap();
        assert_abs_diff_eq!(disk.measure(), 4.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(disk.perimeter(), 4.0 * PI, epsilon = 1e-12);

        let ann = Domain::annulus(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(ann.measure(), 3.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(ann.perimeter(), 6.0 * PI, epsilon = 1e-12);

        let rect = Domain::rect(-2.0, 2.0, -2.5, 2.5).unwrap();
        assert_abs_diff_eq!(rect.measure(), 20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rect.perimeter(), 18.0, epsilon = 1e-12);

        let tri = Domain::polygon(vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(tri.measure(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(tri.perimeter(), 2.0 + 2.0_f64.sqrt(), epsilon = 1e-12);

        assert_abs_diff_eq!(l_shape().measure(), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l_shape().perimeter(), 8.0, epsilon = 1e-12);
    }

    #[test]
    fn clockwise_polygons_are_reoriented() {
        let cw = Domain::polygon(vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(cw.measure(), 1.0, epsilon = 1e-14);
        let q = cw.quadrature(4, 4).unwrap();
        assert_abs_diff_eq!(q.weight_sum(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expected_count_rounds_up_with_integer_snap() {
        assert_eq!(Domain::rect(0.0, 2.5, 0.0, 2.0).unwrap().n_omega(), 5);
        assert_eq!(Domain::disk(1.0).unwrap().n_omega(), 4); // pi -> 4
        // within the snap guard of an integer from below
        assert_eq!(Domain::rect(0.0, 5.0 - 1e-11, 0.0, 1.0).unwrap().n_omega(), 5);
        // outside the guard: genuine ceil
        assert_eq!(Domain::rect(0.0, 5.0 + 1e-7, 0.0, 1.0).unwrap().n_omega(), 6);
        let disk_area_20 = Domain::disk((20.0 / PI).sqrt()).unwrap();
        assert_eq!(disk_area_20.n_omega(), 20);
    }

    #[test]
    fn scaling_laws() {
        let shapes = vec![
            Domain::disk(1.3).unwrap(),
            Domain::annulus(0.5, 2.0).unwrap(),
            Domain::rect(-1.0, 2.0, 0.0, 1.5).unwrap(),
            l_shape(),
        ];
        for d in shapes {
            let s = d.scale(2.0).unwrap();
            assert_relative_eq!(s.measure(), 4.0 * d.measure(), max_relative = 1e-12);
            assert_relative_eq!(s.perimeter(), 2.0 * d.perimeter(), max_relative = 1e-12);
        }
        assert!(Domain::disk(1.0).unwrap().scale(0.0).is_err());
        assert!(Domain::disk(1.0).unwrap().scale(-2.0).is_err());
    }

    #[test]
    fn quadrature_weights_sum_to_measure() {
        let cases = vec![
            (Domain::disk(2.52).unwrap(), 40, 96),
            (Domain::annulus(1.0, 3.0).unwrap(), 32, 64),
            (Domain::rect(-2.0, 2.0, -2.5, 2.5).unwrap(), 24, 24),
            (l_shape(), 16, 16),
        ];
        for (d, n1, n2) in cases {
            let q = d.quadrature(n1, n2).unwrap();
            assert_abs_diff_eq!(q.weight_sum(), d.measure(), epsilon = 1e-10);
        }
    }

    #[test]
    fn quadrature_integrates_polynomials() {
        // disk: x^2 integrates to pi R^4 / 4
        let disk = Domain::disk(1.7).unwrap();
        let q = disk.quadrature(16, 32).unwrap();
        let got: f64 = q
            .nodes
            .iter()
            .zip(&q.weights)
            .map(|(p, w)| w * p.x * p.x)
            .sum();
        assert_relative_eq!(got, PI * 1.7f64.powi(4) / 4.0, max_relative = 1e-12);

        // rectangle: x * xi^2 separates
        let rect = Domain::rect(0.0, 2.0, -1.0, 3.0).unwrap();
        let q = rect.quadrature(8, 8).unwrap();
        let got: f64 = q
            .nodes
            .iter()
            .zip(&q.weights)
            .map(|(p, w)| w * p.x * p.xi * p.xi)
            .sum();
        assert_relative_eq!(got, 2.0 * (27.0 + 1.0) / 3.0, max_relative = 1e-12);

        // L-shape (non-convex): integral of x over the region is 2.5
        let q = l_shape().quadrature(12, 12).unwrap();
        let got: f64 = q
            .nodes
            .iter()
            .zip(&q.weights)
            .map(|(p, w)| w * p.x)
            .sum();
        assert_relative_eq!(got, 2.5, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        assert!(Domain::disk(0.0).is_err());
        assert!(Domain::disk(f64::NAN).is_err());
        assert!(Domain::annulus(2.0, 2.0).is_err());
        assert!(Domain::annulus(-1.0, 2.0).is_err());
        assert!(Domain::rect(1.0, 1.0, 0.0, 2.0).is_err());
        assert!(Domain::polygon(vec![(0.0, 0.0), (1.0, 0.0)]).is_err());
        assert!(Domain::polygon(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(Domain::polygon(vec![(0.0, 0.0), (0.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        for text in ["disk:2.52", "annulus:1,2.5", "rect:-2,2,-2.5,2.5"] {
            let d = Domain::parse(text).unwrap();
            assert_eq!(d.descriptor(), text);
        }
        assert!(Domain::parse("disk").is_err());
        assert!(Domain::parse("disk:abc").is_err());
        assert!(Domain::parse("annulus:2,1").is_err());
        assert!(Domain::parse("rect:1,2,3").is_err());
        assert!(Domain::parse("sphere:1").is_err());
        assert!(Domain::parse("poly:simplex").is_err());
    }

    #[test]
    fn polygon_vertex_file() {
        let dir = std::env::temp_dir().join("gabor_dpp_poly_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("v.txt");
        std::fs::write(&path, "# unit square\n0 0\n1 0\n1 1\n0 1\n").unwrap();
        let d = Domain::parse(&format!("poly:@{}", path.display())).unwrap();
        assert_abs_diff_eq!(d.measure(), 1.0, epsilon = 1e-14);
        std::fs::write(&path, "0 0\n1 0\n").unwrap();
        assert!(Domain::polygon_from_file(&path).is_err());
    }
}
