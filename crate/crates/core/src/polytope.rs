//! Newton polygons, lower convex hulls of valuation-lifted support points,
//! the induced piecewise affine-linear function v, and lattice-point geometry.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::parse::BivariatePoly;
use crate::rat::{val_p_int, Rat};

pub type Point = (i64, i64);

fn cross(o: Point, a: Point, b: Point) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Convex lattice polygon; vertices are exactly the extreme points, listed
/// counterclockwise starting from the lexicographically smallest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolygon {
    pub vertices: Vec<Point>,
    pub dim: u8,
}

impl LatticePolygon {
    pub fn from_points(points: &[Point]) -> LatticePolygon {
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() == 1 {
            return LatticePolygon {
                vertices: pts,
                dim: 0,
            };
        }
        // monotone chain
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0
            {
                upper.pop();
            }
            upper.push(p);
        }
        if lower.len() == 2 && upper.len() == 2 {
            // collinear point set: keep the two extreme endpoints
            return LatticePolygon {
                vertices: lower,
                dim: 1,
            };
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        // lexicographically smallest point is first by construction of the sort
        LatticePolygon {
            vertices: lower,
            dim: 2,
        }
    }

    pub fn edges(&self) -> Vec<(Point, Point)> {
        match self.dim {
            0 => Vec::new(),
            1 => vec![(self.vertices[0], self.vertices[1])],
            _ => {
                let n = self.vertices.len();
                (0..n)
                    .map(|i| (self.vertices[i], self.vertices[(i + 1) % n]))
                    .collect()
            }
        }
    }

    /// Twice the area (shoelace).
    pub fn area2(&self) -> i128 {
        if self.dim < 2 {
            return 0;
        }
        let n = self.vertices.len();
        let mut s = 0i128;
        for i in 0..n {
            let (x1, y1) = self.vertices[i];
            let (x2, y2) = self.vertices[(i + 1) % n];
            s += x1 as i128 * y2 as i128 - x2 as i128 * y1 as i128;
        }
        s
    }

    fn signs_at(&self, p: &(Rat, Rat)) -> Vec<std::cmp::Ordering> {
        self.edges()
            .iter()
            .map(|&((x1, y1), (x2, y2))| {
                // cross((V2-V1), (P-V1)) as a rational
                let ax = Rat::from_integer(BigInt::from(x2 - x1));
                let ay = Rat::from_integer(BigInt::from(y2 - y1));
                let bx = &p.0 - Rat::from_integer(BigInt::from(x1));
                let by = &p.1 - Rat::from_integer(BigInt::from(y1));
                (ax * by - ay * bx).cmp(&Rat::zero())
            })
            .collect()
    }

    /// Containment of a rational point (boundary included). dim-2 polygons only.
    pub fn contains(&self, p: &(Rat, Rat)) -> bool {
        debug_assert_eq!(self.dim, 2);
        self.signs_at(p)
            .iter()
            .all(|s| *s != std::cmp::Ordering::Less)
    }

    pub fn contains_lattice(&self, p: Point) -> bool {
        self.contains(&(
            Rat::from_integer(BigInt::from(p.0)),
            Rat::from_integer(BigInt::from(p.1)),
        ))
    }

    fn strictly_contains(&self, p: Point) -> bool {
        debug_assert_eq!(self.dim, 2);
        let rp = (
            Rat::from_integer(BigInt::from(p.0)),
            Rat::from_integer(BigInt::from(p.1)),
        );
        self.signs_at(&rp)
            .iter()
            .all(|s| *s == std::cmp::Ordering::Greater)
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let xs: Vec<i64> = self.vertices.iter().map(|v| v.0).collect();
        let ys: Vec<i64> = self.vertices.iter().map(|v| v.1).collect();
        (
            (*xs.iter().min().unwrap(), *ys.iter().min().unwrap()),
            (*xs.iter().max().unwrap(), *ys.iter().max().unwrap()),
        )
    }

    /// All lattice points of the polygon (boundary included), sorted.
    pub fn lattice_points(&self) -> Vec<Point> {
        match self.dim {
            0 => self.vertices.clone(),
            1 => segment_lattice_points(self.vertices[0], self.vertices[1]),
            _ => {
                let ((x0, y0), (x1, y1)) = self.bounding_box();
                let mut out = Vec::new();
                for i in x0..=x1 {
                    for j in y0..=y1 {
                        if self.contains_lattice((i, j)) {
                            out.push((i, j));
                        }
                    }
                }
                out
            }
        }
    }
}

/// Lattice points of a closed segment, ordered from the lexicographically
/// smaller endpoint.
pub fn segment_lattice_points(a: Point, b: Point) -> Vec<Point> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let g = dx.abs().gcd(&dy.abs());
    if g == 0 {
        return vec![a];
    }
    let (sx, sy) = (dx / g, dy / g);
    (0..=g).map(|t| (a.0 + sx * t, a.1 + sy * t)).collect()
}

/// Affine function (i, j) -> a*i + b*j + c with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFn {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl AffineFn {
    pub fn eval(&self, p: Point) -> Rat {
        &self.a * Rat::from_integer(BigInt::from(p.0))
            + &self.b * Rat::from_integer(BigInt::from(p.1))
            + &self.c
    }

    pub fn eval_rat(&self, p: &(Rat, Rat)) -> Rat {
        &self.a * &p.0 + &self.b * &p.1 + &self.c
    }

    pub fn scale_int(&self, d: i64) -> AffineFn {
        let d = Rat::from_integer(BigInt::from(d));
        AffineFn {
            a: &self.a * &d,
            b: &self.b * &d,
            c: &self.c * &d,
        }
    }
}

/// Face of the v-subdivision: a 2-face, or a 1-face (v-edge).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VFace {
    pub dim: u8,
    pub polygon: LatticePolygon,
    /// v restricted to the face (for 1-faces: the canonical extension along
    /// the affine hull of the edge).
    pub affine: AffineFn,
    /// Minimal positive integer making delta * affine integral.
    pub delta: u64,
    /// Integer affine function equal to -delta * affine.
    pub fstar: AffineFn,
    /// For 1-faces: whether the edge lies on the boundary of the Newton polygon.
    pub boundary: bool,
}

fn lcm_denoms(f: &AffineFn) -> BigInt {
    let l = f.a.denom().lcm(f.b.denom());
    l.lcm(f.c.denom())
}

fn make_vface(dim: u8, polygon: LatticePolygon, affine: AffineFn, boundary: bool) -> VFace {
    let delta_big = lcm_denoms(&affine);
    let delta: u64 = delta_big.to_string().parse().expect("delta fits in u64");
    let md = Rat::from_integer(-delta_big);
    let fstar = AffineFn {
        a: &affine.a * &md,
        b: &affine.b * &md,
        c: &affine.c * &md,
    };
    debug_assert!(fstar.a.denom().is_one() && fstar.b.denom().is_one() && fstar.c.denom().is_one());
    VFace {
        dim,
        polygon,
        affine,
        delta,
        fstar,
        boundary,
    }
}

/// Newton polygon plus the v-function data of the lower convex hull.
#[derive(Debug, Clone)]
pub struct SubdividedPolygon {
    pub polygon: LatticePolygon,
    pub prime: u64,
    /// Height multiplier: 1 for the base field, [k':k] after tame base change.
    pub scale: i64,
    pub faces: Vec<VFace>,
    pub vedges: Vec<VFace>,
    /// Lifted heights: support point -> scale * val_p(coefficient).
    pub lift: BTreeMap<Point, i64>,
}

/// Convex hull of the support of f.
pub fn newton_polygon(f: &BivariatePoly) -> LatticePolygon {
    let pts: Vec<Point> = f.support().keys().cloned().collect();
    assert!(!pts.is_empty(), "empty polynomial has no Newton polygon");
    LatticePolygon::from_points(&pts)
}

/// Lower-hull subdivision of the Newton polygon with heights val_p(a_ij).
pub fn subdivide(f: &BivariatePoly, p: u64) -> Result<SubdividedPolygon> {
    subdivide_scaled(f, p, 1)
}

/// Same as `subdivide` with all lifted heights multiplied by `scale`
/// (the valuation of a degree-`scale` tame extension).
pub fn subdivide_scaled(f: &BivariatePoly, p: u64, scale: i64) -> Result<SubdividedPolygon> {
    if scale < 1 {
        return Err(Error::InvalidDegree);
    }
    if !crate::rat::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let polygon = newton_polygon(f);
    if polygon.dim < 2 {
        return Err(Error::DegeneratePolygon);
    }
    let mut lift: BTreeMap<Point, i64> = BTreeMap::new();
    for (&pt, coeff) in f.support() {
        lift.insert(pt, scale * val_p_int(coeff, p));
    }
    let pts: Vec<(Point, i64)> = lift.iter().map(|(&pt, &h)| (pt, h)).collect();

    // Enumerate candidate lower-facet planes through non-collinear triples of
    // lifted points; keep those lying weakly below every lifted point.
    let mut planes: Vec<AffineFn> = Vec::new();
    let n = pts.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let plane = match plane_through(pts[i], pts[j], pts[k]) {
                    Some(pl) => pl,
                    None => continue,
                };
                if pts
                    .iter()
                    .all(|&(pt, h)| plane.eval(pt) <= Rat::from_integer(BigInt::from(h)))
                {
                    if !planes.contains(&plane) {
                        planes.push(plane);
                    }
                }
            }
        }
    }

    let mut faces: Vec<VFace> = Vec::new();
    for plane in planes {
        let touching: Vec<Point> = pts
            .iter()
            .filter(|&&(pt, h)| plane.eval(pt) == Rat::from_integer(BigInt::from(h)))
            .map(|&(pt, _)| pt)
            .collect();
        let poly = LatticePolygon::from_points(&touching);
        if poly.dim == 2 {
            faces.push(make_vface(2, poly, plane, false));
        }
    }
    faces.sort_by(|a, b| a.polygon.vertices.cmp(&b.polygon.vertices));

    debug_assert_eq!(
        faces.iter().map(|f| f.polygon.area2()).sum::<i128>(),
        polygon.area2(),
        "v-faces must tile the Newton polygon"
    );

    // 1-faces: polygon edges of the 2-faces; shared ones are interior.
    let mut seen: BTreeMap<(Point, Point), u32> = BTreeMap::new();
    for face in &faces {
        for (a, b) in face.polygon.edges() {
            let key = if a <= b { (a, b) } else { (b, a) };
            *seen.entry(key).or_insert(0) += 1;
        }
    }
    let mut vedges = Vec::new();
    for (&(a, b), &count) in &seen {
        debug_assert!(count <= 2, "an edge is shared by at most two faces");
        let owner = faces
            .iter()
            .find(|f| f.polygon.edges().iter().any(|&(u, v)| {
                let key = if u <= v { (u, v) } else { (v, u) };
                key == (a, b)
            }))
            .expect("edge belongs to a face");
        let affine = edge_affine(a, b, &owner.affine);
        let seg = LatticePolygon {
            vertices: vec![a, b],
            dim: 1,
        };
        vedges.push(make_vface(1, seg, affine, count == 1));
    }

    Ok(SubdividedPolygon {
        polygon,
        prime: p,
        scale,
        faces,
        vedges,
        lift,
    })
}

fn plane_through(p1: (Point, i64), p2: (Point, i64), p3: (Point, i64)) -> Option<AffineFn> {
    let det = cross(p1.0, p2.0, p3.0);
    if det == 0 {
        return None;
    }
    // Cramer on a*i + b*j + c = h
    let big = |x: i64| BigInt::from(x);
    let (i1, j1, h1) = (big(p1.0 .0), big(p1.0 .1), big(p1.1));
    let (i2, j2, h2) = (big(p2.0 .0), big(p2.0 .1), big(p2.1));
    let (i3, j3, h3) = (big(p3.0 .0), big(p3.0 .1), big(p3.1));
    let det3 = |r1: (&BigInt, &BigInt, &BigInt),
                r2: (&BigInt, &BigInt, &BigInt),
                r3: (&BigInt, &BigInt, &BigInt)|
     -> BigInt {
        r1.0 * (r2.1 * r3.2 - r2.2 * r3.1) - r1.1 * (r2.0 * r3.2 - r2.2 * r3.0)
            + r1.2 * (r2.0 * r3.1 - r2.1 * r3.0)
    };
    let one = BigInt::one();
    let d = det3((&i1, &j1, &one), (&i2, &j2, &one), (&i3, &j3, &one));
    debug_assert!(!d.is_zero());
    let na = det3((&h1, &j1, &one), (&h2, &j2, &one), (&h3, &j3, &one));
    let nb = det3((&i1, &h1, &one), (&i2, &h2, &one), (&i3, &h3, &one));
    let nc = det3((&i1, &j1, &h1), (&i2, &j2, &h2), (&i3, &j3, &h3));
    Some(AffineFn {
        a: Rat::new(na, d.clone()),
        b: Rat::new(nb, d.clone()),
        c: Rat::new(nc, d),
    })
}

/// Canonical affine representation of v along the edge (a, b): constant in a
/// complementary lattice direction, so delta reflects only the edge values.
fn edge_affine(a: Point, b: Point, face_affine: &AffineFn) -> AffineFn {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let g = dx.abs().gcd(&dy.abs());
    let dir = (dx / g, dy / g);
    let v0 = face_affine.eval(a);
    let v_step = face_affine.eval((a.0 + dir.0, a.1 + dir.1)) - &v0;
    // integer covector mu with mu . dir = 1 (dir is primitive)
    let (alpha, beta) = covector_for(dir);
    let ar = &v_step * Rat::from_integer(BigInt::from(alpha));
    let br = &v_step * Rat::from_integer(BigInt::from(beta));
    let c = v0
        - &ar * Rat::from_integer(BigInt::from(a.0))
        - &br * Rat::from_integer(BigInt::from(a.1));
    AffineFn { a: ar, b: br, c }
}

fn covector_for(dir: Point) -> (i64, i64) {
    let egcd = BigInt::from(dir.0).extended_gcd(&BigInt::from(dir.1));
    debug_assert!(egcd.gcd.is_one());
    let to_i64 = |x: &BigInt| x.to_string().parse::<i64>().expect("covector fits i64");
    (to_i64(&egcd.x), to_i64(&egcd.y))
}

impl SubdividedPolygon {
    /// The lower-hull function at a rational point of the Newton polygon.
    pub fn v_eval_rat(&self, p: &(Rat, Rat)) -> Result<Rat> {
        if !self.polygon.contains(p) {
            return Err(Error::OutsidePolygon);
        }
        Ok(self
            .faces
            .iter()
            .map(|f| f.affine.eval_rat(p))
            .max()
            .expect("subdivision has at least one face"))
    }

    pub fn v_eval(&self, p: Point) -> Result<Rat> {
        self.v_eval_rat(&(
            Rat::from_integer(BigInt::from(p.0)),
            Rat::from_integer(BigInt::from(p.1)),
        ))
    }

    /// The face containing a lattice point (first in deterministic face order).
    pub fn face_containing(&self, p: Point) -> Option<&VFace> {
        self.faces.iter().find(|f| f.polygon.contains_lattice(p))
    }
}

/// F*(P) / delta_F; equals -v(P) exactly when P lies on F.
pub fn face_valuation(face: &VFace, p: Point) -> Rat {
    face.fstar.eval(p) / Rat::from_integer(BigInt::from(face.delta))
}

/// Lattice points strictly inside the polygon, sorted lexicographically.
pub fn interior_points(polygon: &LatticePolygon) -> Vec<Point> {
    if polygon.dim < 2 {
        return Vec::new();
    }
    let ((x0, y0), (x1, y1)) = polygon.bounding_box();
    let mut out = Vec::new();
    for i in (x0 + 1)..x1 {
        for j in (y0 + 1)..y1 {
            if polygon.strictly_contains((i, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Number of lattice points on the boundary of the polygon.
pub fn boundary_count(polygon: &LatticePolygon) -> u64 {
    assert_eq!(polygon.dim, 2, "boundary count needs a two-dimensional polygon");
    polygon
        .edges()
        .iter()
        .map(|&((x1, y1), (x2, y2))| ((x2 - x1).abs().gcd(&(y2 - y1).abs())) as u64)
        .sum()
}
