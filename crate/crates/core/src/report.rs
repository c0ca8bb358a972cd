//! Analysis pipeline: JSON-serializable report of the full computation,
//! base-change reports, the decorated-polygon SVG, and the little parser for
//! canonical-form expressions like "2*w(1,1) + w(2,1)".

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jumps::{self, CanonicalForm, JumpsReport};
use crate::parse::{parse_poly, BivariatePoly};
use crate::polytope::{interior_points, subdivide, SubdividedPolygon};
use crate::rat::{rat_str, Rat};
use crate::regularity::{residue_edge_poly, residue_face_poly, RegularityVerdict, Verdict};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineJson {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaceJson {
    pub vertices: Vec<[i64; 2]>,
    pub affine: AffineJson,
    pub delta: u64,
    pub residue_poly: String,
    pub regular: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VEdgeJson {
    pub endpoints: Vec<[i64; 2]>,
    pub residue_poly: String,
    pub regular: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InteriorPointJson {
    pub point: [i64; 2],
    pub v: String,
    pub vcan: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub input: String,
    pub prime: u64,
    pub genus: usize,
    pub polygon: PolygonJson,
    pub faces: Vec<FaceJson>,
    pub vedges: Vec<VEdgeJson>,
    pub interior_points: Vec<InteriorPointJson>,
    pub jumps: Vec<(String, usize)>,
    pub stabilisation_index: u64,
    pub regular: String,
    pub conditional: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseChangeReport {
    pub input: String,
    pub prime: u64,
    pub degree: u64,
    pub relative_jumps: Vec<String>,
    pub lattice_exponents: Vec<i64>,
    pub scaled_v: Vec<InteriorPointJson>,
    pub warnings: Vec<String>,
}

fn verts_json(vs: &[crate::polytope::Point]) -> Vec<[i64; 2]> {
    vs.iter().map(|&(i, j)| [i, j]).collect()
}

fn item_regular(reg: &RegularityVerdict, id: &str) -> bool {
    reg.items
        .iter()
        .find(|it| it.id == id)
        .map(|it| it.verdict == Verdict::Pass)
        .unwrap_or(false)
}

/// The full pipeline on an already-parsed polynomial.
pub fn analyze_poly(input: &str, f: &BivariatePoly, p: u64) -> Result<Report> {
    let sd = subdivide(f, p)?;
    let jr: JumpsReport = jumps::jumps_sd(f, &sd)?;
    Ok(build_report(input, f, &sd, &jr))
}

/// Parse + analyze.
pub fn analyze(input: &str, p: u64) -> Result<Report> {
    let f = parse_poly(input)?;
    analyze_poly(input, &f, p)
}

fn build_report(
    input: &str,
    f: &BivariatePoly,
    sd: &SubdividedPolygon,
    jr: &JumpsReport,
) -> Report {
    let reg = &jr.regularity;
    let faces = sd
        .faces
        .iter()
        .map(|face| {
            let vs: Vec<String> = face
                .polygon
                .vertices
                .iter()
                .map(|&(i, j)| format!("({},{})", i, j))
                .collect();
            let id = format!("face {}", vs.join(""));
            FaceJson {
                vertices: verts_json(&face.polygon.vertices),
                affine: AffineJson {
                    a: rat_str(&face.affine.a),
                    b: rat_str(&face.affine.b),
                    c: rat_str(&face.affine.c),
                },
                delta: face.delta,
                residue_poly: residue_face_poly(f, sd, face).display(),
                regular: item_regular(reg, &id),
            }
        })
        .collect();
    let vedges = sd
        .vedges
        .iter()
        .map(|edge| {
            let a = edge.polygon.vertices[0];
            let b = edge.polygon.vertices[1];
            let id = format!("edge ({},{})-({},{})", a.0, a.1, b.0, b.1);
            VEdgeJson {
                endpoints: verts_json(&edge.polygon.vertices),
                residue_poly: residue_edge_poly(f, sd, edge).display("t"),
                regular: item_regular(reg, &id),
            }
        })
        .collect();
    let interior = jr
        .per_point
        .iter()
        .map(|(pt, v, vcan)| InteriorPointJson {
            point: [pt.0, pt.1],
            v: rat_str(v),
            vcan: rat_str(vcan),
        })
        .collect();
    Report {
        input: input.to_string(),
        prime: sd.prime,
        genus: jr.genus,
        polygon: PolygonJson {
            vertices: verts_json(&sd.polygon.vertices),
        },
        faces,
        vedges,
        interior_points: interior,
        jumps: jr.jumps.iter().map(|(v, m)| (rat_str(v), *m)).collect(),
        stabilisation_index: jr.stabilisation_index,
        regular: reg.overall.as_str().to_string(),
        conditional: jr.conditional,
        warnings: jr.warnings.clone(),
    }
}

/// Base-change what-if: relative jumps, lattice exponents and scaled
/// v-values after a tame extension of degree d.
pub fn base_change_report(input: &str, p: u64, d: u64) -> Result<BaseChangeReport> {
    let f = parse_poly(input)?;
    let (sd, mut warnings) = jumps::base_change(&f, p, d)?;
    let jr = jumps::jumps(&f, p)?;
    let rel = jumps::relative_jumps(&jr, d)?;
    // lattice exponents need v_can values in (-1,0]; clip failures to a warning
    let vcans: Vec<Rat> = jr.per_point.iter().map(|(_, _, vc)| vc.clone()).collect();
    let exps = match crate::dvrlin::lattice_exponents(&vcans, d) {
        Ok(e) => e,
        Err(_) => {
            warnings.push("v_can values outside (-1,0]; lattice exponents omitted".into());
            Vec::new()
        }
    };
    let scaled_v = interior_points(&sd.polygon)
        .into_iter()
        .map(|pt| {
            let v = sd.v_eval(pt)?;
            Ok(InteriorPointJson {
                point: [pt.0, pt.1],
                v: rat_str(&v),
                vcan: rat_str(&-v),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BaseChangeReport {
        input: input.to_string(),
        prime: p,
        degree: d,
        relative_jumps: rel.iter().map(rat_str).collect(),
        lattice_exponents: exps,
        scaled_v,
        warnings,
    })
}

// ---- canonical-form expression parser ----

struct FormParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> FormParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: &str) -> Error {
        Error::ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.bytes[start] == b'-') {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn rational(&mut self) -> Result<Rat> {
        let n = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.integer()?;
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(crate::rat::rat(n, d))
        } else {
            Ok(crate::rat::rat_int(n))
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    /// coefficient? ['*'] 'w(' i ',' j ')'   |   bare rational (must be 0)
    fn term(&mut self) -> Result<(Option<(i64, i64)>, Rat)> {
        let mut sign = crate::rat::rat_int(1);
        if self.peek() == Some(b'-') {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos = save; // the numeric literal will consume the sign
            } else {
                sign = crate::rat::rat_int(-1);
            }
        }
        let coeff = if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'-') {
            let c = self.rational()?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
            c
        } else {
            crate::rat::rat_int(1)
        };
        let coeff = &sign * &coeff;
        if self.peek() == Some(b'w') {
            self.pos += 1;
            self.expect(b'(')?;
            let i = self.integer()?;
            self.expect(b',')?;
            let j = self.integer()?;
            self.expect(b')')?;
            Ok((Some((i, j)), coeff))
        } else if coeff.is_zero() {
            Ok((None, coeff))
        } else {
            Err(self.err("expected basis label w(i,j)"))
        }
    }
}

/// Parses a linear combination of Baker forms, e.g. "2*w(1,1) + w(2,1)",
/// "-w(1,1)", or "0" for the zero form.
pub fn parse_form(s: &str) -> Result<CanonicalForm> {
    let mut p = FormParser {
        bytes: s.as_bytes(),
        pos: 0,
    };
    let mut coeffs: Vec<((i64, i64), Rat)> = Vec::new();
    let mut negate = false;
    loop {
        let (label, coeff) = p.term()?;
        let coeff = if negate { -coeff } else { coeff };
        if let Some(pt) = label {
            coeffs.push((pt, coeff));
        }
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                p.pos += 1;
                negate = true;
            }
            _ => return Err(p.err("expected '+' or '-'")),
        }
    }
    let mut merged: std::collections::BTreeMap<(i64, i64), Rat> = Default::default();
    for (pt, c) in coeffs {
        let e = merged.entry(pt).or_insert_with(Rat::zero);
        *e = &*e + &c;
    }
    Ok(CanonicalForm::from_coeffs(merged))
}

// ---- SVG ----

const SVG_UNIT: i64 = 40;
const SVG_MARGIN: i64 = 20;

/// Deterministic decorated Newton polygon: outline, subdivision edges, and
/// every lattice point labeled with its v-value; interior points are drawn
/// as filled markers.
pub fn render_svg(sd: &SubdividedPolygon) -> String {
    let (min, max) = sd.polygon.bounding_box();
    let width = SVG_UNIT * (max.0 - min.0) + 2 * SVG_MARGIN;
    let height = SVG_UNIT * (max.1 - min.1) + 2 * SVG_MARGIN;
    let px = |i: i64| SVG_MARGIN + SVG_UNIT * (i - min.0);
    let py = |j: i64| height - SVG_MARGIN - SVG_UNIT * (j - min.1);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        width, height, width, height
    ));
    // polygon outline
    let pts: Vec<String> = sd
        .polygon
        .vertices
        .iter()
        .map(|&(i, j)| format!("{},{}", px(i), py(j)))
        .collect();
    out.push_str(&format!(
        "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
        pts.join(" ")
    ));
    // interior subdivision edges
    for edge in &sd.vedges {
        if edge.boundary {
            continue;
        }
        let a = edge.polygon.vertices[0];
        let b = edge.polygon.vertices[1];
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            px(a.0), py(a.1), px(b.0), py(b.1)
        ));
    }
    // lattice points with v-labels
    let interior = interior_points(&sd.polygon);
    for pt in sd.polygon.lattice_points() {
        let v = sd.v_eval(pt).expect("lattice point of the polygon");
        let inner = interior.contains(&pt);
        let (r, fill) = if inner { (4, "red") } else { (3, "black") };
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
            px(pt.0),
            py(pt.1),
            r,
            fill
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"monospace\">{}</text>\n",
            px(pt.0) + 6,
            py(pt.1) - 6,
            rat_str(&v)
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn golden_report_roundtrip() {
        let r = analyze("y^2 = 8*x^6 + x^3 + 2", 2).unwrap();
        assert_eq!(r.genus, 2);
        assert_eq!(r.prime, 2);
        assert_eq!(
            r.jumps,
            vec![("1/6".to_string(), 1), ("1/2".to_string(), 1)]
        );
        assert_eq!(r.stabilisation_index, 6);
        assert_eq!(r.regular, "pass");
        assert!(!r.conditional);
        assert_eq!(r.faces.len(), 2);
        assert_eq!(r.faces[0].delta, 6);
        assert_eq!(r.faces[1].delta, 2);
        assert_eq!(r.faces[0].residue_poly, "x^3 + y^2 + 1");
        assert_eq!(r.faces[0].affine.a, "-1/3");
        assert_eq!(r.interior_points[0].v, "1/6");
        assert_eq!(r.interior_points[0].vcan, "-1/6");
        assert!(r.faces.iter().all(|f| f.regular));
        assert!(r.vedges.iter().all(|e| e.regular));
        // serde roundtrip
        let js = serde_json::to_string_pretty(&r).unwrap();
        let back: Report = serde_json::from_str(&js).unwrap();
        assert_eq!(back.jumps, r.jumps);
    }

    #[test]
    fn base_change_report_examples() {
        let b = base_change_report("y^2 = 8*x^6 + x^3 + 2", 2, 5).unwrap();
        assert_eq!(b.relative_jumps, vec!["0", "2/5"]);
        assert_eq!(b.lattice_exponents, vec![0, 2]);
        assert_eq!(b.scaled_v[0].v, "5/6");
        assert_eq!(b.scaled_v[1].v, "5/2");
        assert!(b.warnings.is_empty());

        let b = base_change_report("y^2 = 8*x^6 + x^3 + 2", 2, 7).unwrap();
        assert_eq!(b.relative_jumps, vec!["1/7", "3/7"]);
    }

    #[test]
    fn parse_form_examples() {
        let w = parse_form("2*w(1,1) + w(2,1)").unwrap();
        assert_eq!(w.coefficients().len(), 2);
        assert_eq!(w.coefficients()[&(1, 1)], rat_int(2));
        assert_eq!(w.coefficients()[&(2, 1)], rat_int(1));

        assert!(parse_form("0").unwrap().is_zero());
        let w = parse_form("-w(1,1)").unwrap();
        assert_eq!(w.coefficients()[&(1, 1)], rat_int(-1));
        let w = parse_form("1/2*w(1,1) - 3*w(2,1)").unwrap();
        assert_eq!(w.coefficients()[&(1, 1)], rat(1, 2));
        assert_eq!(w.coefficients()[&(2, 1)], rat_int(-3));
        let w = parse_form("w(1,1) - w(1,1)").unwrap();
        assert!(w.is_zero());
        assert!(parse_form("2*z(1,1)").is_err());
    }

    #[test]
    fn svg_deterministic_and_labeled() {
        let f = crate::parse::parse_poly("y^2 = 8*x^6 + x^3 + 2").unwrap();
        let sd = crate::polytope::subdivide(&f, 2).unwrap();
        let a = render_svg(&sd);
        let b = render_svg(&sd);
        assert_eq!(a, b);
        assert!(a.contains(">1/6<"));
        assert!(a.contains(">3/2<"));
        // interior points are red markers
        assert!(a.contains("fill=\"red\""));
    }

    #[test]
    fn svg_genus_zero_square() {
        let f = crate::parse::parse_poly("1 + x + y + x*y").unwrap();
        let sd = crate::polytope::subdivide(&f, 2).unwrap();
        let svg = render_svg(&sd);
        assert!(!svg.contains("fill=\"red\""));
        assert_eq!(svg.matches("<circle").count(), 4);
    }
}
