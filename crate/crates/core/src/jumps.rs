//! Baker basis, canonical valuation on holomorphic forms, jumps of the
//! Jacobian with multiplicities, stabilisation index, and tame base change.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::parse::BivariatePoly;
use crate::polytope::{interior_points, newton_polygon, subdivide, subdivide_scaled, Point, SubdividedPolygon};
use crate::rat::{decimal_part, rat_int, val_p, ExtRat, Rat};
use crate::regularity::{is_delta_v_regular_sd, RegularityVerdict, Verdict};

/// Holomorphic basis form x^(i-1) y^(j-1) dx / f_y attached to an interior
/// lattice point (i, j).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BakerForm {
    pub point: Point,
}

impl BakerForm {
    pub fn display(&self) -> String {
        let (i, j) = self.point;
        let mut num = Vec::new();
        if i != 1 {
            num.push(if i == 2 { "x".into() } else { format!("x^{}", i - 1) });
        }
        if j != 1 {
            num.push(if j == 2 { "y".into() } else { format!("y^{}", j - 1) });
        }
        num.push("dx".into());
        format!("{} / f_y", num.join("*"))
    }
}

/// Rational linear combination of Baker basis forms; empty support is the
/// zero form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    coefficients: BTreeMap<Point, Rat>,
}

impl CanonicalForm {
    pub fn zero() -> CanonicalForm {
        CanonicalForm {
            coefficients: BTreeMap::new(),
        }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (Point, Rat)>>(coeffs: I) -> CanonicalForm {
        CanonicalForm {
            coefficients: coeffs.into_iter().filter(|(_, a)| !a.is_zero()).collect(),
        }
    }

    pub fn coefficients(&self) -> &BTreeMap<Point, Rat> {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add(&self, other: &CanonicalForm) -> CanonicalForm {
        let mut out = self.coefficients.clone();
        for (pt, a) in &other.coefficients {
            let entry = out.entry(*pt).or_insert_with(Rat::zero);
            *entry = &*entry + a;
        }
        out.retain(|_, a| !a.is_zero());
        CanonicalForm { coefficients: out }
    }

    pub fn scale(&self, a: &Rat) -> CanonicalForm {
        if a.is_zero() {
            return CanonicalForm::zero();
        }
        CanonicalForm {
            coefficients: self
                .coefficients
                .iter()
                .map(|(pt, c)| (*pt, a * c))
                .collect(),
        }
    }
}

/// Jumps of Jac(C) with everything needed to report them.
#[derive(Debug, Clone)]
pub struct JumpsReport {
    pub genus: usize,
    /// Sorted ascending, values in [0, 1), multiplicities sum to genus.
    pub jumps: Vec<(Rat, usize)>,
    /// lcm of jump denominators (1 for genus 0).
    pub stabilisation_index: u64,
    pub regularity: RegularityVerdict,
    /// (interior point, v-value, v_can-value).
    pub per_point: Vec<(Point, Rat, Rat)>,
    pub conditional: bool,
    pub warnings: Vec<String>,
}

/// One Baker form per interior lattice point of the Newton polygon,
/// lexicographic order; the count is the genus.
pub fn baker_basis(f: &BivariatePoly) -> Vec<BakerForm> {
    let polygon = newton_polygon(f);
    interior_points(&polygon)
        .into_iter()
        .map(|point| BakerForm { point })
        .collect()
}

/// v_can of a Baker basis form: -v(P). Diagnoses values outside (-1, 0],
/// which the jump pipeline's hypotheses exclude for base-field data.
pub fn vcan_point(sd: &SubdividedPolygon, pt: Point) -> Result<Rat> {
    if !interior_points(&sd.polygon).contains(&pt) {
        return Err(Error::NotInterior);
    }
    let v = sd.v_eval(pt)?;
    let vcan = -v;
    if vcan > Rat::zero() || vcan <= -Rat::one() {
        return Err(Error::HypothesisViolation(format!(
            "v_can({:?}) = {} lies outside (-1, 0]",
            pt,
            crate::rat::rat_str(&vcan)
        )));
    }
    Ok(vcan)
}

/// v_can of a linear combination of Baker forms by the orthogonal minimum
/// formula: min over the support of val_p(a_P) - v(P). Zero form: Infinity.
pub fn vcan_form(sd: &SubdividedPolygon, form: &CanonicalForm) -> Result<ExtRat> {
    if form.is_zero() {
        return Ok(ExtRat::Infinity);
    }
    let interior = interior_points(&sd.polygon);
    let mut best = ExtRat::Infinity;
    for (pt, a) in form.coefficients() {
        if !interior.contains(pt) {
            return Err(Error::NotHolomorphic);
        }
        let v = sd.v_eval(*pt)?;
        let term = match val_p(a, sd.prime)? {
            ExtRat::Finite(va) => ExtRat::Finite(va - v),
            ExtRat::Infinity => ExtRat::Infinity,
        };
        best = best.min(term);
    }
    Ok(best)
}

fn lcm_of_denoms(values: impl Iterator<Item = Rat>) -> u64 {
    let mut l = BigInt::one();
    for v in values {
        l = l.lcm(v.denom());
    }
    l.abs().to_string().parse().expect("index fits in u64")
}

/// Full jump computation: decimal parts of v at interior lattice points,
/// with regularity verdicts and diagnostics.
pub fn jumps(f: &BivariatePoly, p: u64) -> Result<JumpsReport> {
    let sd = subdivide(f, p)?;
    jumps_sd(f, &sd)
}

/// Same on an existing subdivision.
pub fn jumps_sd(f: &BivariatePoly, sd: &SubdividedPolygon) -> Result<JumpsReport> {
    let regularity = is_delta_v_regular_sd(f, sd);
    let pts = interior_points(&sd.polygon);
    let genus = pts.len();
    let mut warnings = Vec::new();
    let mut per_point = Vec::new();
    let mut multiset: BTreeMap<Rat, usize> = BTreeMap::new();
    for pt in pts {
        let v = sd.v_eval(pt)?;
        let vcan = -&v;
        if vcan > Rat::zero() || vcan <= -Rat::one() {
            warnings.push(format!(
                "v_can at ({},{}) is {} outside (-1,0]; jump taken mod 1",
                pt.0,
                pt.1,
                crate::rat::rat_str(&vcan)
            ));
        }
        *multiset.entry(decimal_part(&v)).or_insert(0) += 1;
        per_point.push((pt, v, vcan));
    }
    if genus == 0 {
        warnings.push("genus 0: jump theory requires g >= 1".to_string());
    }
    warnings.push("assumes the curve is irreducible and admits a divisor of degree one".to_string());
    let conditional = regularity.overall != Verdict::Pass;
    let stabilisation_index = lcm_of_denoms(multiset.keys().cloned());
    Ok(JumpsReport {
        genus,
        jumps: multiset.into_iter().collect(),
        stabilisation_index,
        regularity,
        per_point,
        conditional,
        warnings,
    })
}

/// Multiplicity of j as a jump (the dimension of the j-th graded piece).
pub fn graded_dim(report: &JumpsReport, j: &Rat) -> Result<usize> {
    if j < &Rat::zero() || j >= &Rat::one() {
        return Err(Error::OutOfRange);
    }
    Ok(report
        .jumps
        .iter()
        .find(|(v, _)| v == j)
        .map(|(_, m)| *m)
        .unwrap_or(0))
}

/// Whether q lies in the image of v_can, i.e. q ≡ -j (mod 1) for some jump j.
pub fn vcan_image_contains(report: &JumpsReport, q: &Rat) -> bool {
    report
        .jumps
        .iter()
        .any(|(j, _)| decimal_part(&(q + j)).is_zero())
}

/// (k'/k)-jumps after a tame extension of degree d: floor(d*j)/d per jump,
/// with multiplicity, nondecreasing.
pub fn relative_jumps(report: &JumpsReport, d: u64) -> Result<Vec<Rat>> {
    if d == 0 {
        return Err(Error::InvalidDegree);
    }
    let dr = rat_int(d as i64);
    let mut out = Vec::new();
    for (j, m) in &report.jumps {
        let r = Rat::new((j * &dr).floor().to_integer(), BigInt::from(d));
        for _ in 0..*m {
            out.push(r.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Subdivision after tame base change of degree d: identical face polygons,
/// all heights and affine data scaled by d. Returns accompanying warnings
/// when the coprimality hypotheses of the jump theory are violated.
pub fn base_change(
    f: &BivariatePoly,
    p: u64,
    d: u64,
) -> Result<(SubdividedPolygon, Vec<String>)> {
    if d == 0 {
        return Err(Error::InvalidDegree);
    }
    let sd = subdivide_scaled(f, p, d as i64)?;
    let mut warnings = Vec::new();
    if d % p == 0 {
        warnings.push(format!("degree {} is not coprime to p = {}", d, p));
    }
    let report = jumps(f, p)?;
    if d.gcd(&report.stabilisation_index) != 1 {
        warnings.push(format!(
            "degree {} shares a factor with the stabilisation index {}",
            d, report.stabilisation_index
        ));
    }
    Ok((sd, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn golden() -> BivariatePoly {
        parse_poly("y^2 = 8*x^6 + x^3 + 2").unwrap()
    }

    #[test]
    fn baker_basis_examples() {
        let b = baker_basis(&golden());
        assert_eq!(
            b,
            vec![BakerForm { point: (1, 1) }, BakerForm { point: (2, 1) }]
        );
        assert_eq!(b[0].display(), "dx / f_y");
        assert_eq!(b[1].display(), "x*dx / f_y");

        let one = baker_basis(&parse_poly("y^2 - x^3 - 2").unwrap());
        assert_eq!(one, vec![BakerForm { point: (1, 1) }]);

        // unit square support: no interior points
        let sq = parse_poly("1 + x + y + x*y").unwrap();
        assert!(baker_basis(&sq).is_empty());
    }

    #[test]
    fn vcan_point_examples() {
        let sd = subdivide(&golden(), 2).unwrap();
        assert_eq!(vcan_point(&sd, (1, 1)).unwrap(), rat(-1, 6));
        assert_eq!(vcan_point(&sd, (2, 1)).unwrap(), rat(-1, 2));
        assert_eq!(vcan_point(&sd, (3, 0)), Err(Error::NotInterior));

        let sd = subdivide(&parse_poly("y^2 - x^3 - 5").unwrap(), 5).unwrap();
        assert_eq!(vcan_point(&sd, (1, 1)).unwrap(), rat(-1, 6));
    }

    #[test]
    fn vcan_point_range_diagnostic() {
        // v(1,1) = 7 - 7/3 - 7/2 = 7/6 >= 1
        let sd = subdivide(&parse_poly("y^2 - x^3 - 78125").unwrap(), 5).unwrap();
        assert!(matches!(
            vcan_point(&sd, (1, 1)),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn vcan_form_examples() {
        let sd = subdivide(&golden(), 2).unwrap();
        let w = CanonicalForm::from_coeffs([((1, 1), rat_int(2)), ((2, 1), rat_int(1))]);
        assert_eq!(vcan_form(&sd, &w).unwrap(), ExtRat::Finite(rat(-1, 2)));
        assert_eq!(vcan_form(&sd, &CanonicalForm::zero()).unwrap(), ExtRat::Infinity);
        let w = CanonicalForm::from_coeffs([((1, 1), rat_int(4))]);
        assert_eq!(vcan_form(&sd, &w).unwrap(), ExtRat::Finite(rat(11, 6)));
        let bad = CanonicalForm::from_coeffs([((3, 0), rat_int(1))]);
        assert_eq!(vcan_form(&sd, &bad), Err(Error::NotHolomorphic));
    }

    #[test]
    fn golden_jumps() {
        let r = jumps(&golden(), 2).unwrap();
        assert_eq!(r.genus, 2);
        assert_eq!(r.jumps, vec![(rat(1, 6), 1), (rat(1, 2), 1)]);
        assert_eq!(r.stabilisation_index, 6);
        assert!(!r.conditional);
        assert_eq!(
            r.per_point,
            vec![
                ((1, 1), rat(1, 6), rat(-1, 6)),
                ((2, 1), rat(1, 2), rat(-1, 2)),
            ]
        );
    }

    #[test]
    fn elliptic_examples() {
        let r = jumps(&parse_poly("y^2 - x^3 - 5").unwrap(), 5).unwrap();
        assert_eq!(r.jumps, vec![(rat(1, 6), 1)]);
        assert_eq!(r.genus, 1);

        // y^2 = x^3 + 5^4: type IV*, jump 2/3
        let r = jumps(&parse_poly("y^2 - x^3 - 625").unwrap(), 5).unwrap();
        assert_eq!(r.jumps, vec![(rat(2, 3), 1)]);
    }

    #[test]
    fn genus_zero_report() {
        let r = jumps(&parse_poly("x + y + 1").unwrap(), 2).unwrap();
        assert_eq!(r.genus, 0);
        assert!(r.jumps.is_empty());
        assert_eq!(r.stabilisation_index, 1);
        assert!(r.warnings.iter().any(|w| w.contains("genus 0")));
    }

    #[test]
    fn graded_dim_examples() {
        let r = jumps(&golden(), 2).unwrap();
        assert_eq!(graded_dim(&r, &rat(1, 6)).unwrap(), 1);
        assert_eq!(graded_dim(&r, &rat_int(0)).unwrap(), 0);
        assert_eq!(graded_dim(&r, &rat_int(1)), Err(Error::OutOfRange));
        let g0 = jumps(&parse_poly("x + y + 1").unwrap(), 2).unwrap();
        assert_eq!(graded_dim(&g0, &rat(1, 6)).unwrap(), 0);
    }

    #[test]
    fn vcan_image_examples() {
        let r = jumps(&golden(), 2).unwrap();
        assert!(vcan_image_contains(&r, &rat(-1, 6)));
        assert!(vcan_image_contains(&r, &rat(11, 6)));
        assert!(!vcan_image_contains(&r, &rat(1, 3)));
    }

    #[test]
    fn relative_jumps_examples() {
        let r = jumps(&golden(), 2).unwrap();
        assert_eq!(relative_jumps(&r, 5).unwrap(), vec![rat_int(0), rat(2, 5)]);
        assert_eq!(relative_jumps(&r, 1).unwrap(), vec![rat_int(0), rat_int(0)]);
        assert_eq!(relative_jumps(&r, 7).unwrap(), vec![rat(1, 7), rat(3, 7)]);
        assert_eq!(relative_jumps(&r, 0), Err(Error::InvalidDegree));
    }

    #[test]
    fn base_change_consistency() {
        let (sd5, warns) = base_change(&golden(), 2, 5).unwrap();
        assert!(warns.is_empty());
        assert_eq!(sd5.v_eval((1, 1)).unwrap(), rat(5, 6));
        assert_eq!(sd5.v_eval((2, 1)).unwrap(), rat(5, 2));
        // multiset of decimal parts of v' equals decimal parts of 5*j
        let r = jumps(&golden(), 2).unwrap();
        let mut scaled: Vec<Rat> = r
            .jumps
            .iter()
            .flat_map(|(j, m)| std::iter::repeat(decimal_part(&(j * rat_int(5)))).take(*m))
            .collect();
        scaled.sort();
        let mut primed: Vec<Rat> = interior_points(&sd5.polygon)
            .iter()
            .map(|&pt| decimal_part(&sd5.v_eval(pt).unwrap()))
            .collect();
        primed.sort();
        assert_eq!(scaled, primed);

        let (_, warns) = base_change(&golden(), 2, 4).unwrap();
        assert!(warns.iter().any(|w| w.contains("not coprime to p")));
        assert!(warns.iter().any(|w| w.contains("stabilisation index")));
    }

    #[test]
    fn base_change_identity() {
        let (sd1, warns) = base_change(&golden(), 2, 1).unwrap();
        let sd = subdivide(&golden(), 2).unwrap();
        assert_eq!(sd1.faces.len(), sd.faces.len());
        for (a, b) in sd1.faces.iter().zip(&sd.faces) {
            assert_eq!(a.polygon, b.polygon);
            assert_eq!(a.affine, b.affine);
        }
        assert!(warns.is_empty());
    }

    proptest! {
        #[test]
        fn vcan_axioms_on_golden(
            a1 in -40i64..40, a2 in -40i64..40,
            b1 in -40i64..40, b2 in -40i64..40,
            s in 1i64..64,
        ) {
            let sd = subdivide(&golden(), 2).unwrap();
            let w1 = CanonicalForm::from_coeffs([((1, 1), rat_int(a1)), ((2, 1), rat_int(a2))]);
            let w2 = CanonicalForm::from_coeffs([((1, 1), rat_int(b1)), ((2, 1), rat_int(b2))]);
            let v1 = vcan_form(&sd, &w1).unwrap();
            let v2 = vcan_form(&sd, &w2).unwrap();
            let vs = vcan_form(&sd, &w1.add(&w2)).unwrap();
            let m = v1.clone().min(v2.clone());
            prop_assert!(vs >= m);
            if v1 != v2 {
                prop_assert_eq!(vs, m);
            }
            // scalar compatibility
            let sc = rat_int(s);
            let vscaled = vcan_form(&sd, &w1.scale(&sc)).unwrap();
            match (&v1, &vscaled) {
                (ExtRat::Finite(f1), ExtRat::Finite(f2)) => {
                    let vs0 = val_p(&sc, 2).unwrap();
                    prop_assert_eq!(f2.clone(), f1 + vs0.finite().unwrap());
                }
                (ExtRat::Infinity, ExtRat::Infinity) => {}
                _ => prop_assert!(false, "scalar compatibility broke finiteness"),
            }
        }
    }
}
