//! Row reduction back ends. Rationals go through fraction-free (Bareiss) elimination on
//! integer rows; prime fields use ordinary Gaussian elimination on residues.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{FieldSpec, Prime, Scalar};

/// Result of a row reduction: the reduced rows and the pivot column of each nonzero row.
pub(crate) struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    /// Number of row swaps performed.
    pub swaps: usize,
}

/// Clears denominators row by row. Returns the integer rows and the product of the
/// per-row scale factors.
fn integer_rows(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let out = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &lcm;
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect();
    (out, scale)
}

/// Fraction-free row echelon form. Every intermediate entry is a minor of the input, so the
/// division by the previous pivot is exact.
pub(crate) fn bareiss(mut m: Vec<Vec<BigInt>>, cols: usize) -> Echelon<BigInt> {
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots, swaps }
}

/// Reduced row echelon form over `F_p`.
pub(crate) fn gauss_mod_p(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Echelon<u64> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        if piv != r {
            m.swap(piv, r);
            swaps += 1;
        }
        let inv = inv_mod(m[r][c], p);
        for j in c..cols {
            m[r][j] = m[r][j] * inv % p;
        }
        for i in 0..nrows {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let f = m[i][c];
            for j in c..cols {
                m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots, swaps }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn residues(rows: &[Vec<Scalar>]) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|row| row.iter().map(|s| s.residue().expect("prime-field scalar")).collect())
        .collect()
}

fn rationals(rows: &[Vec<Scalar>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|s| s.as_rational().expect("rational scalar").clone())
                .collect()
        })
        .collect()
}

pub(crate) fn rank(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> usize {
    match field {
        FieldSpec::Rationals => {
            let (ints, _) = integer_rows(&rationals(rows));
            bareiss(ints, cols).pivots.len()
        }
        FieldSpec::PrimeField(p) => gauss_mod_p(residues(rows), cols, p.get()).pivots.len(),
    }
}

/// Basis of the right null space, one vector per free column in increasing column order,
/// with that free coordinate set to 1 and the other free coordinates set to 0.
pub(crate) fn kernel(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    match field {
        FieldSpec::Rationals => {
            let (ints, _) = integer_rows(&rationals(rows));
            let ech = bareiss(ints, cols);
            let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
            free.iter()
                .map(|&f| {
                    let mut x = vec![BigRational::zero(); cols];
                    x[f] = BigRational::one();
                    for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
                        let mut acc = BigRational::zero();
                        for j in pc + 1..cols {
                            if !row[j].is_zero() && !x[j].is_zero() {
                                acc += BigRational::from_integer(row[j].clone()) * &x[j];
                            }
                        }
                        x[pc] = -acc / BigRational::from_integer(row[pc].clone());
                    }
                    x.into_iter().map(Scalar::Rational).collect()
                })
                .collect()
        }
        FieldSpec::PrimeField(p) => {
            let pv = p.get();
            let ech = gauss_mod_p(residues(rows), cols, pv);
            let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
            free.iter()
                .map(|&f| {
                    let mut x = vec![0u64; cols];
                    x[f] = 1;
                    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                        x[pc] = (pv - row[f]) % pv;
                    }
                    x.into_iter().map(|v| residue(v, p)).collect()
                })
                .collect()
        }
    }
}

pub(crate) fn determinant(field: FieldSpec, rows: &[Vec<Scalar>]) -> Scalar {
    let n = rows.len();
    match field {
        FieldSpec::Rationals => {
            let (ints, scale) = integer_rows(&rationals(rows));
            let ech = bareiss(ints, n);
            if ech.pivots.len() < n {
                return field.zero();
            }
            let mut det = ech.rows[n - 1][n - 1].clone();
            if ech.swaps % 2 == 1 {
                det = -det;
            }
            Scalar::Rational(BigRational::new(det, scale))
        }
        FieldSpec::PrimeField(p) => {
            // Determinant as the product of pivots before normalisation.
            let pv = p.get();
            let mut m = residues(rows);
            let mut det = 1u64;
            for c in 0..n {
                let Some(piv) = (c..n).find(|&i| m[i][c] != 0) else {
                    return field.zero();
                };
                if piv != c {
                    m.swap(piv, c);
                    det = (pv - det) % pv;
                }
                det = det * m[c][c] % pv;
                let inv = inv_mod(m[c][c], pv);
                for i in c + 1..n {
                    let f = m[i][c] * inv % pv;
                    if f == 0 {
                        continue;
                    }
                    for j in c..n {
                        m[i][j] = (m[i][j] + (pv - f) * m[c][j]) % pv;
                    }
                }
            }
            residue(det, p)
        }
    }
}

fn residue(value: u64, modulus: Prime) -> Scalar {
    Scalar::Residue { value, modulus }
}
