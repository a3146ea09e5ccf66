//! The independent signature oracle: the Seifert matrix of the fiber surface
//! of a positive braid closure in the brick basis, its symmetrized signature
//! and nullity, and the Alexander polynomial with unit-circle zero counting.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::poly::{int_det, refine_roots, squarefree_decomposition, RatPoly};
use crate::sigcore::{signature, SignatureResult, SymmetricMatrix};

/// One band-pair cycle: the region between two consecutive crossings of the
/// same column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Brick {
    pub column: usize,
    /// Word positions of the upper and lower crossing, upper < lower.
    pub top: usize,
    pub bottom: usize,
}

/// Seifert matrix of the fiber surface, one generator per brick.  The sign
/// convention is fixed so that the symmetrized form of the positive trefoil
/// has signature +2.
#[derive(Debug, Clone)]
pub struct SeifertMatrix {
    pub bricks: Vec<Brick>,
    /// Row-major dense entries, not symmetric.
    pub entries: Vec<i64>,
}

impl SeifertMatrix {
    pub fn dim(&self) -> usize {
        self.bricks.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim() + j]
    }

    /// The symmetrized form V + V^T as an exact matrix.
    pub fn symmetrized(&self) -> SymmetricMatrix {
        let n = self.dim();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) + self.get(j, i)).collect())
            .collect();
        SymmetricMatrix::from_int_rows(&rows).expect("symmetrized matrix is symmetric")
    }
}

fn require_nonsplit(word: &BraidWord) -> Result<()> {
    for i in 1..=word.generators() {
        if word.occurrences(i) == 0 {
            return Err(Error::SplitInput(i));
        }
    }
    Ok(())
}

/// Builds the Seifert matrix from the disk-and-band fiber surface.  Bricks
/// are the linear gaps between consecutive same-column crossings; two bricks
/// interact when they are vertical neighbors in one column or interleave
/// across adjacent columns.
pub fn seifert_matrix(word: &BraidWord) -> Result<SeifertMatrix> {
    require_nonsplit(word)?;
    let mut bricks = Vec::new();
    for column in 1..=word.generators() {
        let positions = word.column(column);
        for pair in positions.windows(2) {
            bricks.push(Brick {
                column,
                top: pair[0],
                bottom: pair[1],
            });
        }
    }
    let n = bricks.len();
    let mut entries = vec![0i64; n * n];
    for i in 0..n {
        entries[i * n + i] = 1;
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (bricks[i], bricks[j]);
            if a.column == b.column {
                // Vertical neighbors share one band.
                if a.bottom == b.top {
                    entries[i * n + j] = -1;
                }
            } else if b.column == a.column + 1 {
                // Interleaved bricks clasp once; the sign depends on which
                // one starts higher up.
                if a.top < b.top && b.top < a.bottom && a.bottom < b.bottom {
                    entries[i * n + j] = 1;
                } else if b.top < a.top && a.top < b.bottom && b.bottom < a.bottom {
                    entries[j * n + i] = -1;
                }
            }
        }
    }
    Ok(SeifertMatrix { bricks, entries })
}

/// Signature and nullity of the symmetrized Seifert form, in the convention
/// where positive links have positive signature.
pub fn oracle_signature_nullity(word: &BraidWord) -> Result<(i64, usize)> {
    let v = seifert_matrix(word)?;
    let r: SignatureResult = signature(&v.symmetrized());
    Ok((r.signature(), r.nullity))
}

/// Alexander polynomial with integer coefficients, lowest degree first,
/// normalized to a positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderPolynomial {
    pub coeffs: Vec<BigInt>,
}

impl AlexanderPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// True when c_i = ± c_{deg-i} for all i with one global sign.
    pub fn is_palindromic_up_to_sign(&self) -> bool {
        let d = self.degree();
        let lead = &self.coeffs[d];
        let tail = &self.coeffs[0];
        if tail.is_zero() {
            return false;
        }
        let sign = if tail == lead {
            1
        } else if &(-tail.clone()) == lead {
            -1
        } else {
            return false;
        };
        (0..=d).all(|i| {
            let mirrored = if sign == 1 {
                self.coeffs[d - i].clone()
            } else {
                -self.coeffs[d - i].clone()
            };
            self.coeffs[i] == mirrored
        })
    }

    pub fn coeff_string(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// det(V - t V^T), expanded exactly by evaluating integer determinants at
/// dim+1 points and interpolating.
pub fn alexander(word: &BraidWord) -> Result<AlexanderPolynomial> {
    let v = seifert_matrix(word)?;
    let n = v.dim();
    if n == 0 {
        return Ok(AlexanderPolynomial {
            coeffs: vec![BigInt::from(1)],
        });
    }
    let mut values = Vec::with_capacity(n + 1);
    for t in 0..=(n as i64) {
        let m: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| v.get(i, j) - t * v.get(j, i)).collect())
            .collect();
        values.push(int_det(&m));
    }
    // Newton forward interpolation on the nodes 0..=n.
    let mut coeffs = vec![BigRational::zero(); n + 1];
    let mut newton = vec![BigRational::zero(); n + 1];
    let mut table: Vec<BigRational> = values
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    for (k, slot) in newton.iter_mut().enumerate() {
        *slot = table[0].clone();
        for i in 0..(table.len() - 1) {
            let d = &table[i + 1] - &table[i];
            table[i] = d / BigRational::from_integer(BigInt::from((k + 1) as i64));
        }
        table.pop();
    }
    // Expand sum_k newton[k] * x(x-1)...(x-k+1).
    let mut basis = vec![BigRational::from_integer(BigInt::from(1))];
    for (k, cof) in newton.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] += cof * b;
        }
        // multiply basis by (x - k)
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b;
            next[i] -= b * BigRational::from_integer(BigInt::from(k as i64));
        }
        basis = next;
    }
    let mut int_coeffs: Vec<BigInt> = Vec::with_capacity(n + 1);
    for c in &coeffs {
        if !c.denom().is_one() {
            return Err(Error::Internal(format!(
                "non-integer Alexander coefficient {c}"
            )));
        }
        int_coeffs.push(c.numer().clone());
    }
    while int_coeffs.len() > 1 && int_coeffs.last().map_or(false, |c| c.is_zero()) {
        int_coeffs.pop();
    }
    if int_coeffs.last().map_or(false, |c| c.is_negative()) {
        for c in &mut int_coeffs {
            *c = -c.clone();
        }
    }
    let poly = AlexanderPolynomial { coeffs: int_coeffs };
    if poly.coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::Internal(
            "Alexander polynomial vanished identically".into(),
        ));
    }
    Ok(poly)
}

/// Count of zeros within `tol` of the unit circle, with multiplicity, plus
/// the total zero count.  Roots are refined with certified inclusion radii;
/// an unresolvable root is an error, never silently dropped.
pub fn unit_circle_zeros(
    poly: &AlexanderPolynomial,
    tol: f64,
) -> Result<(usize, usize)> {
    if poly.is_constant() {
        return Ok((0, 0));
    }
    let rp = RatPoly::from_bigints(&poly.coeffs);
    let mut on_circle = 0;
    let mut total = 0;
    for (factor, multiplicity) in squarefree_decomposition(&rp) {
        let roots = refine_roots(&factor, tol / 10.0)?;
        for root in roots {
            debug_assert!(root.radius <= tol / 10.0);
            total += multiplicity;
            if (root.value.norm() - 1.0).abs() < tol {
                on_circle += multiplicity;
            }
        }
    }
    if total != poly.degree() {
        return Err(Error::RootRefinement(format!(
            "found {total} roots for degree {}",
            poly.degree()
        )));
    }
    Ok((on_circle, total))
}
