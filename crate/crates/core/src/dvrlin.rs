//! Valued vector spaces and lattice linear algebra over Z localized at p:
//! prolongations under tame extensions, lattice exponents, and Smith normal
//! form valuations (elementary divisors).

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::{rat_int, val_p_int, Rat};

/// Finite dimensional space with an orthogonal basis and a value per basis
/// vector; the valuation of a combination is min(val_p(a_i) + value_i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedSpace {
    pub labels: Vec<String>,
    pub values: Vec<Rat>,
    /// Granularity: every value lies in (1/e)·Z.
    pub e: u64,
}

impl ValuedSpace {
    pub fn new(labels: Vec<String>, values: Vec<Rat>, e: u64) -> Result<ValuedSpace> {
        if labels.len() != values.len() || e == 0 {
            return Err(Error::InvalidDegree);
        }
        for v in &values {
            if !(v * rat_int(e as i64)).is_integer() {
                return Err(Error::NotIntegral);
            }
        }
        Ok(ValuedSpace { labels, values, e })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Prolongation to a tame extension of degree d with gcd(d, e) = 1: basis
/// {pi'^i w_j : 0 <= i < d}, value(pi'^i w_j) = i + d*value(w_j).
pub fn prolong(w: &ValuedSpace, d: u64) -> Result<ValuedSpace> {
    if d == 0 {
        return Err(Error::InvalidDegree);
    }
    if d.gcd(&w.e) != 1 {
        return Err(Error::NotCoprime);
    }
    let mut labels = Vec::with_capacity(w.dim() * d as usize);
    let mut values = Vec::with_capacity(w.dim() * d as usize);
    for i in 0..d as i64 {
        for (lbl, v) in w.labels.iter().zip(&w.values) {
            labels.push(if i == 0 {
                lbl.clone()
            } else {
                format!("pi'^{}*{}", i, lbl)
            });
            values.push(rat_int(i) + v * rat_int(d as i64));
        }
    }
    Ok(ValuedSpace {
        labels,
        values,
        e: w.e,
    })
}

/// Whether the residue classes i + (d/e)Z for 0 <= i < d are pairwise
/// disjoint; equivalent to gcd(d, e) = 1.
pub fn class_disjointness(d: u64, e: u64) -> bool {
    // i + (d/e)Z = i' + (d/e)Z iff e*(i - i') is divisible by d
    for i in 0..d {
        for i2 in i + 1..d {
            if (e * (i2 - i)) % d == 0 {
                return false;
            }
        }
    }
    true
}

/// Lattice exponents n_i = floor(-d * value_i) for values in (-1, 0],
/// nondecreasing; the elementary divisor valuations of the diagonal
/// inclusion of differential lattices after degree-d base change.
pub fn lattice_exponents(values: &[Rat], d: u64) -> Result<Vec<i64>> {
    if d == 0 {
        return Err(Error::InvalidDegree);
    }
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        if v > &Rat::zero() || v <= &rat_int(-1) {
            return Err(Error::OutOfRange);
        }
        let n = (-(v * rat_int(d as i64))).floor().to_integer();
        out.push(n.to_string().parse::<i64>().expect("exponent fits in i64"));
    }
    out.sort_unstable();
    Ok(out)
}

/// Square matrix over the local ring Z_(p) (all entries with val_p >= 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMatrix {
    pub entries: Vec<Vec<Rat>>,
    pub p: u64,
}

impl LocalMatrix {
    pub fn new(entries: Vec<Vec<Rat>>, p: u64) -> LocalMatrix {
        LocalMatrix { entries, p }
    }

    pub fn from_i64(rows: &[&[i64]], p: u64) -> LocalMatrix {
        LocalMatrix {
            entries: rows
                .iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
            p,
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn transpose(&self) -> LocalMatrix {
        let n = self.size();
        let m = if n == 0 { 0 } else { self.entries[0].len() };
        LocalMatrix {
            entries: (0..m)
                .map(|j| (0..n).map(|i| self.entries[i][j].clone()).collect())
                .collect(),
            p: self.p,
        }
    }
}

/// Nondecreasing elementary divisor valuations c_1 <= ... <= c_g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemDivisors(pub Vec<i64>);

/// Smith normal form valuations over Z_(p): pivot on a minimal-valuation
/// entry (first in row-major order), eliminate, recurse. Sum of the c_i is
/// val_p(det M).
pub fn snf_local(m: &LocalMatrix) -> Result<ElemDivisors> {
    let n = m.size();
    let p = m.p;
    if n == 0 {
        return Ok(ElemDivisors(Vec::new()));
    }
    let mut a = m.entries.clone();
    for row in &a {
        if row.len() != n {
            return Err(Error::SingularMatrix);
        }
        for x in row {
            if !x.is_zero() && val_p_int(x, p) < 0 {
                return Err(Error::NotIntegral);
            }
        }
    }
    let mut cs = Vec::with_capacity(n);
    for k in 0..n {
        // first minimal-valuation entry in row-major order over the
        // remaining block
        let mut best: Option<(usize, usize, i64)> = None;
        for i in k..n {
            for j in k..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let v = val_p_int(&a[i][j], p);
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let (pi, pj, pv) = best.ok_or(Error::SingularMatrix)?;
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in k..n {
                let t = &factor * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let factor = &a[k][j] / &pivot;
            for i in k..n {
                let t = &factor * &a[i][k];
                a[i][j] = &a[i][j] - &t;
            }
        }
        cs.push(pv);
    }
    cs.sort_unstable();
    Ok(ElemDivisors(cs))
}

/// (k'/k)-jumps from the comparison matrix: c_i / d, nondecreasing.
pub fn relative_jumps_from_matrix(m: &LocalMatrix, d: u64) -> Result<Vec<Rat>> {
    if d == 0 {
        return Err(Error::InvalidDegree);
    }
    let ElemDivisors(cs) = snf_local(m)?;
    Ok(cs
        .into_iter()
        .map(|c| Rat::new(c.into(), (d as i64).into()))
        .collect())
}

/// Diagonal matrix diag(p^{n_1}, ..., p^{n_g}) over Z_(p).
pub fn diag_p_powers(ns: &[i64], p: u64) -> LocalMatrix {
    let g = ns.len();
    let entries = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| {
                    if i == j {
                        Rat::from_integer(
                            num_bigint::BigInt::from(p).pow(ns[i].unsigned_abs() as u32),
                        )
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    LocalMatrix { entries, p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use num_traits::Signed;

    #[test]
    fn prolong_examples() {
        let w = ValuedSpace::new(
            vec!["w1".into(), "w2".into()],
            vec![rat(-1, 6), rat(-1, 2)],
            6,
        )
        .unwrap();
        let wp = prolong(&w, 5).unwrap();
        assert_eq!(wp.dim(), 10);
        // lambda'(pi'^3 w1) = 3 - 5/6 = 13/6
        let idx = wp.labels.iter().position(|l| l == "pi'^3*w1").unwrap();
        assert_eq!(wp.values[idx], rat(13, 6));

        assert_eq!(prolong(&w, 1).unwrap().values, w.values);
        assert_eq!(prolong(&w, 4), Err(Error::NotCoprime));

        let w0 = ValuedSpace::new(vec!["w".into()], vec![rat_int(0)], 1).unwrap();
        let wp = prolong(&w0, 3).unwrap();
        assert_eq!(wp.values, vec![rat_int(0), rat_int(1), rat_int(2)]);
    }

    #[test]
    fn class_disjointness_examples() {
        assert!(class_disjointness(5, 6));
        assert!(!class_disjointness(4, 6));
        for e in 1..10 {
            assert!(class_disjointness(1, e));
        }
        // equivalence with coprimality, brute force
        for d in 1..=30u64 {
            for e in 1..=30u64 {
                use num_integer::Integer;
                assert_eq!(class_disjointness(d, e), d.gcd(&e) == 1, "d={} e={}", d, e);
            }
        }
    }

    #[test]
    fn lattice_exponents_examples() {
        assert_eq!(
            lattice_exponents(&[rat(-1, 6), rat(-1, 2)], 5).unwrap(),
            vec![0, 2]
        );
        assert_eq!(
            lattice_exponents(&[rat_int(0), rat_int(0)], 7).unwrap(),
            vec![0, 0]
        );
        assert_eq!(lattice_exponents(&[rat(-1, 2)], 2).unwrap(), vec![1]);
        assert_eq!(
            lattice_exponents(&[rat_int(-1)], 2),
            Err(Error::OutOfRange)
        );
    }

    #[test]
    fn snf_examples() {
        let m = LocalMatrix::from_i64(&[&[1, 0], &[0, 4]], 2);
        assert_eq!(snf_local(&m).unwrap(), ElemDivisors(vec![0, 2]));

        let m = LocalMatrix::from_i64(&[&[2, 1], &[0, 4]], 2);
        assert_eq!(snf_local(&m).unwrap(), ElemDivisors(vec![0, 3]));

        let m = LocalMatrix::from_i64(&[&[6, 0], &[0, 10]], 5);
        assert_eq!(snf_local(&m).unwrap(), ElemDivisors(vec![0, 1]));

        let sing = LocalMatrix::from_i64(&[&[1, 2], &[2, 4]], 2);
        assert_eq!(snf_local(&sing), Err(Error::SingularMatrix));

        let frac = LocalMatrix::new(vec![vec![rat(1, 2)]], 2);
        assert_eq!(snf_local(&frac), Err(Error::NotIntegral));
    }

    #[test]
    fn relative_jumps_from_matrix_examples() {
        let m = LocalMatrix::from_i64(&[&[1, 0], &[0, 4]], 2);
        assert_eq!(
            relative_jumps_from_matrix(&m, 5).unwrap(),
            vec![rat_int(0), rat(2, 5)]
        );
        let id = LocalMatrix::from_i64(&[&[1, 0], &[0, 1]], 3);
        assert_eq!(
            relative_jumps_from_matrix(&id, 7).unwrap(),
            vec![rat_int(0), rat_int(0)]
        );
        let m = LocalMatrix::from_i64(&[&[5]], 5);
        assert_eq!(relative_jumps_from_matrix(&m, 2).unwrap(), vec![rat(1, 2)]);
    }

    #[test]
    fn snf_determinant_conservation_small() {
        let m = LocalMatrix::from_i64(&[&[4, 6], &[2, 8]], 2);
        let ElemDivisors(cs) = snf_local(&m).unwrap();
        // det = 32 - 12 = 20, val_2 = 2
        assert_eq!(cs.iter().sum::<i64>(), 2);
        let t = snf_local(&m.transpose()).unwrap();
        assert_eq!(t, ElemDivisors(cs));
    }

    #[test]
    fn valued_space_granularity_enforced() {
        assert_eq!(
            ValuedSpace::new(vec!["w".into()], vec![rat(-1, 6)], 2),
            Err(Error::NotIntegral)
        );
    }

    #[test]
    fn prolong_values_stay_in_classes() {
        // the d residue classes i + (d/e)Z partition the prolonged values
        let w = ValuedSpace::new(
            vec!["a".into(), "b".into()],
            vec![rat(-1, 3), rat(-2, 3)],
            3,
        )
        .unwrap();
        let wp = prolong(&w, 5).unwrap();
        for (lbl, v) in wp.labels.iter().zip(&wp.values) {
            // e * value mod d identifies the class index i
            let ev = v * rat_int(3);
            assert!(ev.is_integer(), "granularity preserved for {}", lbl);
            let _ = ev.numer().abs();
        }
    }
}
