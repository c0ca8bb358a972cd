//! Residue polynomials of v-faces and v-edges, Δ_v-regularity, and the
//! Baker nondegeneracy check over Q.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::Result;
use crate::ff::{FFElem, FFPoly, FqField};
use crate::ff2::{has_common_torus_zero, FF2Poly, TorusWitness};
use crate::parse::BivariatePoly;
use crate::polytope::{segment_lattice_points, AffineFn, Point, SubdividedPolygon, VFace};
use crate::rat::{rat_int, residue_int, val_p_int, Rat};

/// Reduction of the face/edge restriction of f to the residue field,
/// with coefficients attached to the original lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResiduePoly {
    pub prime: u64,
    pub terms: BTreeMap<Point, u64>,
}

/// Residue coefficient at P: residue(a_P / p^m) when the lifted height of
/// a_P meets the face plane at P, zero otherwise.
fn residue_coeff(
    f: &BivariatePoly,
    sd: &SubdividedPolygon,
    affine: &AffineFn,
    pt: Point,
) -> u64 {
    let a = f.coeff(pt);
    if a.is_zero() {
        return 0;
    }
    let m = val_p_int(&a, sd.prime);
    if affine.eval(pt) != rat_int(sd.scale * m) {
        return 0;
    }
    let pm = Rat::from_integer(num_bigint::BigInt::from(sd.prime).pow(m.unsigned_abs() as u32));
    let unit = if m >= 0 { &a / &pm } else { &a * &pm };
    residue_int(&unit, sd.prime).expect("unit part is integral")
}

impl ResiduePoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, pt: Point) -> u64 {
        self.terms.get(&pt).copied().unwrap_or(0)
    }

    /// x·∂/∂x, taken before any exponent shift.
    pub fn x_dx(&self) -> ResiduePoly {
        let p = self.prime as i64;
        ResiduePoly {
            prime: self.prime,
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &c)| (((i, j)), (i.rem_euclid(p) as u64 * c) % self.prime))
                .filter(|&(_, c)| c != 0)
                .collect(),
        }
    }

    /// y·∂/∂y, taken before any exponent shift.
    pub fn y_dy(&self) -> ResiduePoly {
        let p = self.prime as i64;
        ResiduePoly {
            prime: self.prime,
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &c)| (((i, j)), (j.rem_euclid(p) as u64 * c) % self.prime))
                .filter(|&(_, c)| c != 0)
                .collect(),
        }
    }

    /// Conversion to nonnegative exponents over F_p; shifting by a monomial
    /// does not change torus zeros.
    pub fn to_ff2(&self, field: &Arc<FqField>, shift: Point) -> FF2Poly {
        FF2Poly::from_terms(
            field.clone(),
            self.terms.iter().map(|(&(i, j), &c)| {
                (
                    ((i - shift.0) as u32, (j - shift.1) as u32),
                    FFElem::from_u64(field.clone(), c),
                )
            }),
        )
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(i, j), &c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if c != 1 || (i == 0 && j == 0) {
                factors.push(c.to_string());
            }
            if i != 0 {
                factors.push(if i == 1 { "x".into() } else { format!("x^{}", i) });
            }
            if j != 0 {
                factors.push(if j == 1 { "y".into() } else { format!("y^{}", j) });
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

/// Reduction of f along a dim-2 v-face.
pub fn residue_face_poly(f: &BivariatePoly, sd: &SubdividedPolygon, face: &VFace) -> ResiduePoly {
    let mut terms = BTreeMap::new();
    for pt in face.polygon.lattice_points() {
        let c = residue_coeff(f, sd, &face.affine, pt);
        if c != 0 {
            terms.insert(pt, c);
        }
    }
    ResiduePoly {
        prime: sd.prime,
        terms,
    }
}

/// Lattice points of a v-edge at which v is integral, ordered from the
/// lexicographically smaller endpoint. Only these points can carry a nonzero
/// residue; they are evenly spaced (every delta-th lattice point).
pub fn edge_integral_points(edge: &VFace) -> Vec<Point> {
    let a = edge.polygon.vertices[0];
    let b = edge.polygon.vertices[1];
    segment_lattice_points(a, b)
        .into_iter()
        .filter(|&pt| edge.affine.eval(pt).is_integer())
        .collect()
}

/// Reduction of f along a v-edge, as a univariate polynomial in the edge
/// parameter; coefficient n belongs to the n-th integral-v lattice point
/// counting from the lexicographically smaller endpoint.
pub fn residue_edge_poly(f: &BivariatePoly, sd: &SubdividedPolygon, edge: &VFace) -> FFPoly {
    let field = FqField::prime(sd.prime).expect("subdivision prime is prime");
    let coeffs = edge_integral_points(edge)
        .iter()
        .map(|&pt| FFElem::from_u64(field.clone(), residue_coeff(f, sd, &edge.affine, pt)))
        .collect();
    FFPoly::from_raw(field, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegularityItem {
    pub id: String,
    pub check: String,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RegularityVerdict {
    pub overall: Verdict,
    pub items: Vec<RegularityItem>,
}

fn aggregate(items: &[RegularityItem]) -> Verdict {
    if items.iter().any(|i| i.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if items.iter().any(|i| i.verdict == Verdict::Indeterminate) {
        Verdict::Indeterminate
    } else {
        Verdict::Pass
    }
}

fn face_id(face: &VFace) -> String {
    let vs: Vec<String> = face
        .polygon
        .vertices
        .iter()
        .map(|&(i, j)| format!("({},{})", i, j))
        .collect();
    format!("face {}", vs.join(""))
}

fn edge_id(edge: &VFace) -> String {
    let a = edge.polygon.vertices[0];
    let b = edge.polygon.vertices[1];
    format!("edge ({},{})-({},{})", a.0, a.1, b.0, b.1)
}

fn witness_str(w: &Option<TorusWitness>) -> Option<String> {
    w.as_ref().map(|w| w.display())
}

/// Smoothness check of one face: the face reduction and its two logarithmic
/// derivatives must not vanish simultaneously on the torus.
pub fn check_face(f: &BivariatePoly, sd: &SubdividedPolygon, face: &VFace) -> RegularityItem {
    let field = FqField::prime(sd.prime).expect("subdivision prime is prime");
    let rp = residue_face_poly(f, sd, face);
    let (bb_min, _) = face.polygon.bounding_box();
    let system: Vec<FF2Poly> = [rp.clone(), rp.x_dx(), rp.y_dy()]
        .iter()
        .map(|q| q.to_ff2(&field, bb_min))
        .collect();
    match has_common_torus_zero(&system) {
        Ok((false, _)) => RegularityItem {
            id: face_id(face),
            check: "face-smooth".into(),
            verdict: Verdict::Pass,
            witness: None,
        },
        Ok((true, w)) => RegularityItem {
            id: face_id(face),
            check: "face-smooth".into(),
            verdict: Verdict::Fail,
            witness: witness_str(&w),
        },
        Err(_) => RegularityItem {
            id: face_id(face),
            check: "face-smooth".into(),
            verdict: Verdict::Indeterminate,
            witness: None,
        },
    }
}

/// Reducedness check of one v-edge: the power-stripped edge reduction must
/// be nonzero and squarefree.
pub fn check_edge(f: &BivariatePoly, sd: &SubdividedPolygon, edge: &VFace) -> RegularityItem {
    let w = residue_edge_poly(f, sd, edge);
    let (stripped, _) = w.strip_powers();
    let ok = !stripped.is_zero() && stripped.is_squarefree();
    RegularityItem {
        id: edge_id(edge),
        check: "edge-squarefree".into(),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        witness: None,
    }
}

/// Δ_v-regularity: every dim-2 v-face smooth on the torus, every v-edge
/// reduction squarefree.
pub fn is_delta_v_regular(f: &BivariatePoly, p: u64) -> Result<RegularityVerdict> {
    let sd = crate::polytope::subdivide(f, p)?;
    Ok(is_delta_v_regular_sd(f, &sd))
}

/// Same check on an existing subdivision (reused after base change).
pub fn is_delta_v_regular_sd(f: &BivariatePoly, sd: &SubdividedPolygon) -> RegularityVerdict {
    let mut items = Vec::new();
    for face in &sd.faces {
        items.push(check_face(f, sd, face));
    }
    for edge in &sd.vedges {
        items.push(check_edge(f, sd, edge));
    }
    let overall = aggregate(&items);
    RegularityVerdict { overall, items }
}

// ---- Baker nondegeneracy over Q ----

fn qtrim(v: &mut Vec<Rat>) {
    while matches!(v.last(), Some(c) if c.is_zero()) {
        v.pop();
    }
}

fn qstrip(mut v: Vec<Rat>) -> Vec<Rat> {
    let k = v.iter().take_while(|c| c.is_zero()).count();
    v.drain(..k);
    v
}

fn qgcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    qtrim(&mut a);
    qtrim(&mut b);
    while !b.is_empty() {
        // remainder of a by b over Q
        while a.len() >= b.len() && !a.is_empty() {
            let q = a.last().unwrap() / b.last().unwrap();
            let off = a.len() - b.len();
            for (k, bc) in b.iter().enumerate() {
                let t = &q * bc;
                a[off + k] = &a[off + k] - &t;
            }
            qtrim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
        qtrim(&mut b);
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &lead;
        }
    }
    a
}

/// Restriction of g to the lattice points of a segment, ordered from the
/// lexicographically smaller endpoint.
fn edge_restriction(g: &BivariatePoly, a: Point, b: Point) -> Vec<Rat> {
    let mut v: Vec<Rat> = segment_lattice_points(a, b)
        .iter()
        .map(|&pt| g.coeff(pt))
        .collect();
    qtrim(&mut v);
    v
}

/// Nondegeneracy of the curve with respect to its Newton polygon over Q:
/// on every boundary edge, the restrictions of f, x·f_x, y·f_y share no
/// common root away from 0.
pub fn baker_nondegenerate(f: &BivariatePoly) -> RegularityVerdict {
    let polygon = crate::polytope::newton_polygon(f);
    let xfx = f.x_dx();
    let yfy = f.y_dy();
    let edges: Vec<(Point, Point)> = match polygon.dim {
        2 => polygon.edges(),
        1 => vec![(polygon.vertices[0], polygon.vertices[1])],
        _ => Vec::new(),
    };
    let mut items = Vec::new();
    for (a, b) in edges {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let restrictions: Vec<Vec<Rat>> = [f, &xfx, &yfy]
            .iter()
            .map(|g| edge_restriction(g, a, b))
            .filter(|v| !v.is_empty())
            .collect();
        let mut g: Vec<Rat> = Vec::new();
        for r in &restrictions {
            g = if g.is_empty() { r.clone() } else { qgcd(&g, r) };
        }
        let g = qstrip(g);
        let ok = g.len() <= 1;
        items.push(RegularityItem {
            id: format!("edge ({},{})-({},{})", a.0, a.1, b.0, b.1),
            check: "baker-nondegenerate".into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness: None,
        });
    }
    let overall = aggregate(&items);
    RegularityVerdict { overall, items }
}
