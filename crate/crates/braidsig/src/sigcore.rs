//! Exact signature and nullity of symmetric rational matrices, plus the
//! tridiagonal and trisum constructions whose signatures obey closed-form
//! lower bounds.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

/// Rational of the form p/q.
pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A dense symmetric matrix over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl SymmetricMatrix {
    pub fn zero(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    /// Builds from rows, rejecting non-symmetric input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::BadMatrix(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymmetricMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        SymmetricMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    /// Sets entry (i,j) and its mirror.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.dim + j] = v.clone();
        self.entries[j * self.dim + i] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rational) {
        let cur = self.get(i, j) + v;
        self.set(i, j, cur);
    }

    /// Returns the principal submatrix on the given indices, in order.
    pub fn restrict(&self, indices: &[usize]) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zero(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                m.entries[a * indices.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Conjugates by a diagonal sign matrix: entry (i,j) scales by s_i s_j.
    pub fn sign_conjugate(&self, signs: &[i8]) -> SymmetricMatrix {
        assert_eq!(signs.len(), self.dim);
        let mut m = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if signs[i] * signs[j] < 0 {
                    let v = -m.get(i, j).clone();
                    m.entries[i * self.dim + j] = v;
                }
            }
        }
        m
    }

    pub fn to_json(&self) -> String {
        let dto = MatrixDto {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.to_string()).collect(),
        };
        serde_json::to_string(&dto).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: MatrixDto =
            serde_json::from_str(text).map_err(|e| Error::BadMatrix(e.to_string()))?;
        if dto.entries.len() != dto.dim * dto.dim {
            return Err(Error::BadMatrix(format!(
                "{} entries for dim {}",
                dto.entries.len(),
                dto.dim
            )));
        }
        let mut rows = Vec::with_capacity(dto.dim);
        for i in 0..dto.dim {
            let mut row = Vec::with_capacity(dto.dim);
            for j in 0..dto.dim {
                let s = &dto.entries[i * dto.dim + j];
                let v: Rational = s
                    .parse()
                    .map_err(|_| Error::BadMatrix(format!("bad rational `{s}`")))?;
                row.push(v);
            }
            rows.push(row);
        }
        SymmetricMatrix::from_rows(rows)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDto {
    dim: usize,
    entries: Vec<String>,
}

/// Inertia of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureResult {
    pub positives: usize,
    pub negatives: usize,
    pub nullity: usize,
}

impl SignatureResult {
    pub fn signature(&self) -> i64 {
        self.positives as i64 - self.negatives as i64
    }

    pub fn dim(&self) -> usize {
        self.positives + self.negatives + self.nullity
    }
}

/// Signature, negativity and nullity by symmetric congruence elimination.
///
/// Pivots on the first nonzero diagonal entry in index order; when every
/// remaining diagonal entry vanishes but some off-diagonal entry a_ij != 0
/// survives, adds row/column j into i (producing diagonal 2 a_ij) and
/// continues.  Rows that vanish entirely count toward the nullity.  By
/// Sylvester's law the outcome is invariant under any invertible congruence.
pub fn signature(m: &SymmetricMatrix) -> SignatureResult {
    let n = m.dim;
    let mut a = m.entries.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut positives = 0;
    let mut negatives = 0;
    let mut nullity = 0;
    let at = |a: &Vec<Rational>, i: usize, j: usize| a[i * n + j].clone();
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i * n + i].is_zero()) {
            let piv = active.remove(pos);
            let d = at(&a, piv, piv);
            if d.is_positive() {
                positives += 1;
            } else {
                negatives += 1;
            }
            let coeffs: Vec<(usize, Rational)> = active
                .iter()
                .map(|&i| (i, at(&a, i, piv) / &d))
                .collect();
            for &(i, ref ci) in &coeffs {
                if ci.is_zero() {
                    continue;
                }
                for &(j, _) in &coeffs {
                    let v = at(&a, i, j) - ci * &at(&a, piv, j);
                    a[i * n + j] = v;
                }
            }
        } else {
            // All active diagonals are zero; look for a surviving coupling.
            let mut found = None;
            'scan: for (x, &i) in active.iter().enumerate() {
                for &j in &active[x + 1..] {
                    if !a[i * n + j].is_zero() {
                        found = Some((i, j));
                        break 'scan;
                    }
                }
            }
            match found {
                Some((i, j)) => {
                    // row/col i += row/col j
                    for &k in &active {
                        let v = at(&a, i, k) + at(&a, j, k);
                        a[i * n + k] = v;
                    }
                    for &k in &active {
                        let v = at(&a, k, i) + at(&a, k, j);
                        a[k * n + i] = v;
                    }
                }
                None => {
                    nullity += active.len();
                    break;
                }
            }
        }
    }
    SignatureResult {
        positives,
        negatives,
        nullity,
    }
}

/// The tridiagonal matrix with the given diagonal and 1s on the secondary
/// diagonals.
pub fn tridiagonal(diag: &[i64]) -> SymmetricMatrix {
    let n = diag.len();
    let mut m = SymmetricMatrix::zero(n);
    for (i, &d) in diag.iter().enumerate() {
        m.set(i, i, rat(d));
        if i + 1 < n {
            m.set(i, i + 1, Rational::one());
        }
    }
    m
}

/// Block diagonal direct sum; the signature is additive over the summands.
pub fn direct_sum(parts: &[SymmetricMatrix]) -> SymmetricMatrix {
    let dim = parts.iter().map(|p| p.dim()).sum();
    let mut m = SymmetricMatrix::zero(dim);
    let mut off = 0;
    for p in parts {
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                m.entries[(off + i) * dim + (off + j)] = p.get(i, j).clone();
            }
        }
        off += p.dim();
    }
    m
}

/// Diagonal of the block `T(2^a, 1, 2^b)`: a twos, a single one, b twos.
pub fn block_diagonal(a: usize, b: usize) -> Vec<i64> {
    let mut d = vec![2i64; a];
    d.push(1);
    d.extend(std::iter::repeat(2).take(b));
    d
}

/// Closed-form signature of `T(2^a, 1, 2^b)`: full dimension when either
/// side is empty, one less when a = b = 1, two less otherwise.  Always at
/// least half the dimension.
pub fn block_signature(a: usize, b: usize) -> i64 {
    let dim = (a + b + 1) as i64;
    if a.min(b) == 0 {
        dim
    } else if a == 1 && b == 1 {
        dim - 1
    } else {
        dim - 2
    }
}

/// A core tridiagonal matrix with `T(2^a, 1, 2^b)` blocks, each attached by a
/// single unit entry between the block's diagonal 1 and a nonpositive core
/// diagonal position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrisumSpec {
    /// Core diagonal d_1..d_r.
    pub core: Vec<i64>,
    /// Blocks (a_i, b_i) meaning T(2^a, 1, 2^b).
    pub blocks: Vec<(usize, usize)>,
    /// 1-based core indices g(i), one per block, with core[g(i)-1] <= 0.
    pub attach: Vec<usize>,
}

impl TrisumSpec {
    pub fn core_only(core: Vec<i64>) -> Self {
        TrisumSpec {
            core,
            blocks: Vec::new(),
            attach: Vec::new(),
        }
    }

    /// Sum of the negative core diagonal entries.
    pub fn trace_minus(&self) -> i64 {
        self.core.iter().filter(|&&d| d < 0).sum()
    }

    /// Total dimension of the blocks.
    pub fn block_dim(&self) -> i64 {
        self.blocks.iter().map(|&(a, b)| (a + b + 1) as i64).sum()
    }

    pub fn dim(&self) -> usize {
        self.core.len() + self.block_dim() as usize
    }
}

/// Realizes a trisum spec as an explicit symmetric matrix: the core first,
/// then each block, with the attachment 1s at (g(i), h(i)) where h(i) is the
/// column of the block's diagonal 1.
pub fn realize_trisum(spec: &TrisumSpec) -> Result<SymmetricMatrix> {
    if spec.blocks.len() != spec.attach.len() {
        return Err(Error::BadMatrix(format!(
            "{} blocks but {} attachments",
            spec.blocks.len(),
            spec.attach.len()
        )));
    }
    let r = spec.core.len();
    for (i, &g) in spec.attach.iter().enumerate() {
        if g == 0 || g > r {
            return Err(Error::BadMatrix(format!("attachment {i} index {g} out of 1..={r}")));
        }
        if spec.core[g - 1] > 0 {
            return Err(Error::BadAttachment {
                index: i,
                value: spec.core[g - 1],
            });
        }
    }
    let mut parts = vec![tridiagonal(&spec.core)];
    for &(a, b) in &spec.blocks {
        parts.push(tridiagonal(&block_diagonal(a, b)));
    }
    let mut m = direct_sum(&parts);
    let mut offset = r;
    for (i, &(a, b)) in spec.blocks.iter().enumerate() {
        let h = offset + a; // 0-based column of the block's diagonal 1
        m.set(spec.attach[i] - 1, h, Rational::one());
        offset += a + b + 1;
    }
    Ok(m)
}

/// Outcome of a signature lower-bound check.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub sigma: i64,
    pub bound: Rational,
    pub slack: Rational,
    pub holds: bool,
}

fn bound_check(sigma: i64, bound: Rational) -> BoundCheck {
    let slack = rat(sigma) - &bound;
    BoundCheck {
        sigma,
        bound,
        holds: !slack.is_negative(),
        slack,
    }
}

/// Checks the tridiagonal lower bound sigma >= -1/2 + tr_minus/2, where
/// tr_minus sums the negative diagonal entries.
pub fn check_tridiagonal_bound(diag: &[i64]) -> BoundCheck {
    let sigma = signature(&tridiagonal(diag)).signature();
    let tr_minus: i64 = diag.iter().filter(|&&d| d < 0).sum();
    bound_check(sigma, ratio(-1, 2) + ratio(tr_minus, 2))
}

/// Checks the trisum lower bound sigma >= -1/2 + tr_minus(core)/2 + b/2,
/// where b is the total block dimension.
pub fn check_trisum_bound(spec: &TrisumSpec) -> Result<BoundCheck> {
    let m = realize_trisum(spec)?;
    let sigma = signature(&m).signature();
    let bound = ratio(-1, 2) + ratio(spec.trace_minus(), 2) + ratio(spec.block_dim(), 2);
    Ok(bound_check(sigma, bound))
}
