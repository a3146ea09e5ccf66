//! Polynomial support: exact integer determinants of integer matrices via
//! CRT over word-sized primes, rational polynomial arithmetic with Yun
//! square-free decomposition, and simultaneous complex root refinement with
//! a posteriori error disks.

use num::complex::Complex64;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// exact integer determinant

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes_near(start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = start | 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n += 2;
    }
    out
}

fn det_mod_p(entries: &[Vec<i64>], p: u64) -> u64 {
    let n = entries.len();
    let mut a: Vec<Vec<u64>> = entries
        .iter()
        .map(|row| row.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect())
        .collect();
    let mut det = 1u64;
    for col in 0..n {
        let pivot = match (col..n).find(|&r| a[r][col] != 0) {
            Some(r) => r,
            None => return 0,
        };
        if pivot != col {
            a.swap(pivot, col);
            det = p - det;
            if det == p {
                det = 0;
            }
        }
        let inv = powmod(a[col][col], p - 2, p);
        det = mulmod(det, a[col][col], p);
        for r in (col + 1)..n {
            if a[r][col] == 0 {
                continue;
            }
            let factor = mulmod(a[r][col], inv, p);
            for c in col..n {
                let sub = mulmod(factor, a[col][c], p);
                a[r][c] = (a[r][c] + p - sub) % p;
            }
        }
    }
    det % p
}

/// Exact determinant of an integer matrix by Chinese remaindering modular
/// eliminations, using enough primes to cover the Hadamard bound.
pub fn int_det(entries: &[Vec<i64>]) -> BigInt {
    let n = entries.len();
    if n == 0 {
        return BigInt::one();
    }
    // Hadamard bound in bits.
    let mut bound_bits = 4.0f64;
    for row in entries {
        let norm: f64 = row.iter().map(|&v| (v as f64) * (v as f64)).sum();
        bound_bits += 0.5 * norm.max(1.0).log2();
    }
    let prime_count = (bound_bits / 61.0).ceil() as usize + 1;
    let primes = primes_near(1u64 << 61, prime_count);
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for &p in &primes {
        let r = det_mod_p(entries, p);
        // Garner step: value + modulus * t ≡ r (mod p)
        let vm = (&value % p).to_i64().unwrap().rem_euclid(p as i64) as u64;
        let mm = (&modulus % p).to_i64().unwrap().rem_euclid(p as i64) as u64;
        let diff = (r + p - vm) % p;
        let t = mulmod(diff, powmod(mm, p - 2, p), p);
        value += &modulus * BigInt::from(t);
        modulus *= BigInt::from(p);
    }
    let half = &modulus / 2;
    if value > half {
        value -= &modulus;
    }
    value
}

// ---------------------------------------------------------------------------
// rational polynomials

/// Dense rational polynomial, coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly {
    pub coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RatPoly { coeffs }
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        RatPoly::new(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn derivative(&self) -> RatPoly {
        if self.is_constant() {
            return RatPoly::new(vec![BigRational::zero()]);
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn monic(&self) -> RatPoly {
        let lead = self.coeffs.last().unwrap().clone();
        if lead.is_zero() || lead.is_one() {
            return self.clone();
        }
        RatPoly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    fn sub_mul(&self, other: &RatPoly, factor: &BigRational, shift: usize) -> RatPoly {
        // self - factor * x^shift * other
        let mut coeffs = self.coeffs.clone();
        let need = other.coeffs.len() + shift;
        if coeffs.len() < need {
            coeffs.resize(need, BigRational::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let v = &coeffs[i + shift] - factor * c;
            coeffs[i + shift] = v;
        }
        RatPoly::new(coeffs)
    }

    /// Polynomial remainder.
    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if divisor.is_constant() {
            return RatPoly::new(vec![BigRational::zero()]);
        }
        let mut r = self.clone();
        let dlead = divisor.coeffs.last().unwrap();
        while !r.is_zero() && r.degree() >= divisor.degree() {
            let shift = r.degree() - divisor.degree();
            let factor = r.coeffs.last().unwrap() / dlead;
            r = r.sub_mul(divisor, &factor, shift);
        }
        r
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &RatPoly) -> RatPoly {
        assert!(!divisor.is_zero());
        if divisor.is_constant() {
            let d = divisor.coeffs[0].clone();
            return RatPoly::new(self.coeffs.iter().map(|c| c / &d).collect());
        }
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len()];
        let dlead = divisor.coeffs.last().unwrap();
        while !r.is_zero() && r.degree() >= divisor.degree() {
            let shift = r.degree() - divisor.degree();
            let factor = r.coeffs.last().unwrap() / dlead;
            q[shift] = factor.clone();
            r = r.sub_mul(divisor, &factor, shift);
        }
        assert!(r.is_zero(), "inexact polynomial division");
        RatPoly::new(q)
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }
}

/// Yun's square-free decomposition: returns (factor, multiplicity) pairs
/// with the factors square-free, pairwise coprime, and the product of
/// factor^multiplicity equal to the input up to a constant.
pub fn squarefree_decomposition(f: &RatPoly) -> Vec<(RatPoly, usize)> {
    if f.is_constant() {
        return Vec::new();
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    if a.is_constant() {
        return vec![(f.monic(), 1)];
    }
    let mut b = f.div_exact(&a);
    let c = df.div_exact(&a);
    let mut d = c.sub_mul(&b.derivative(), &BigRational::one(), 0);
    let mut out = Vec::new();
    let mut i = 1;
    loop {
        let g = b.gcd(&d);
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        b = b.div_exact(&g);
        let c = d.div_exact(&g);
        if b.is_constant() {
            break;
        }
        d = c.sub_mul(&b.derivative(), &BigRational::one(), 0);
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// root refinement

/// A refined complex root with its inclusion radius: some true root of the
/// polynomial lies within `radius` of `value`.
#[derive(Debug, Clone, Copy)]
pub struct RefinedRoot {
    pub value: Complex64,
    pub radius: f64,
}

/// Simultaneous (Weierstrass/Durand-Kerner) iteration on a square-free
/// polynomial. Fails loudly when the corrections do not shrink below the
/// requested residual scale.
pub fn refine_roots(poly: &RatPoly, max_radius: f64) -> Result<Vec<RefinedRoot>> {
    let n = poly.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = poly.coeffs.last().unwrap();
    let coeffs: Vec<Complex64> = poly
        .coeffs
        .iter()
        .map(|c| {
            let v = (c / lead)
                .to_f64()
                .ok_or_else(|| Error::RootRefinement("coefficient out of f64 range".into()))?;
            Ok(Complex64::new(v, 0.0))
        })
        .collect::<Result<_>>()?;
    // Fujiwara-style starting radius: the k-th roots keep it moderate even
    // for large coefficients, where the naive 1 + max|a_i| circle would
    // overflow the very first Horner evaluation at high degree.
    let radius_guess = 2.0
        * (1..=n)
            .map(|k| {
                let c = coeffs[n - k].norm();
                if c == 0.0 {
                    0.0
                } else {
                    c.powf(1.0 / k as f64)
                }
            })
            .fold(0.5f64, f64::max);
    let fresh = |k: usize, r: f64| {
        let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.43;
        r * Complex64::new(angle.cos(), angle.sin())
    };
    let mut z: Vec<Complex64> = (0..n).map(|k| fresh(k, radius_guess)).collect();
    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let mut corrections = vec![f64::INFINITY; n];
    for round in 0..800 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // Perturb coincident iterates.
                z[k] += Complex64::new(1e-8, 1e-8);
                moved = f64::INFINITY;
                continue;
            }
            let w = eval(z[k]) / denom;
            let next = z[k] - w;
            if !next.is_finite() {
                // Restart this iterate on a smaller circle.
                z[k] = fresh(k, radius_guess / (2.0 + round as f64));
                moved = f64::INFINITY;
                continue;
            }
            z[k] = next;
            corrections[k] = w.norm();
            moved = moved.max(w.norm() / z[k].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    let mut roots = Vec::with_capacity(n);
    for k in 0..n {
        // Weierstrass a posteriori bound: every disk of radius n|w_k| about
        // the final iterates jointly covers the root set.
        let mut denom = Complex64::new(1.0, 0.0);
        for j in 0..n {
            if j != k {
                denom *= z[k] - z[j];
            }
        }
        let w = if denom.norm() == 0.0 {
            f64::INFINITY
        } else {
            (eval(z[k]) / denom).norm()
        };
        let radius = (n as f64) * w;
        if !radius.is_finite() || radius > max_radius {
            return Err(Error::RootRefinement(format!(
                "root {k} near {:.6}+{:.6}i has inclusion radius {radius:.3e} > {max_radius:.3e}",
                z[k].re, z[k].im
            )));
        }
        roots.push(RefinedRoot {
            value: z[k],
            radius,
        });
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    #[test]
    fn det_small() {
        assert_eq!(int_det(&[]), BigInt::one());
        assert_eq!(int_det(&[vec![7]]), BigInt::from(7));
        assert_eq!(
            int_det(&[vec![1, 2], vec![3, 4]]),
            BigInt::from(-2)
        );
        assert_eq!(
            int_det(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, -5]]),
            BigInt::from(-30)
        );
    }

    #[test]
    fn det_needs_multiple_primes() {
        // Diagonal of big values forces more than one 61-bit prime.
        let n = 6;
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1_000_000_007 + i as i64;
        }
        let want: BigInt = (0..n).map(|i| BigInt::from(1_000_000_007 + i as i64)).product();
        assert_eq!(int_det(&m), want);
    }

    #[test]
    fn gcd_and_division() {
        let a = rp(&[-1, 0, 1]); // x^2 - 1
        let b = rp(&[1, 1]); // x + 1
        assert_eq!(a.gcd(&b), b.monic());
        assert_eq!(a.div_exact(&b), rp(&[-1, 1]));
    }

    #[test]
    fn squarefree_of_cube() {
        // (x-1)^2 (x+2)
        let f = rp(&[2, -3, 0, 1]);
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (rp(&[2, 1]), 1));
        assert_eq!(parts[1], (rp(&[-1, 1]), 2));
    }

    #[test]
    fn refine_quadratic() {
        // x^2 - x + 1: roots exp(±iπ/3), both on the unit circle
        let roots = refine_roots(&rp(&[1, -1, 1]), 1e-10).unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!((r.value.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn refine_degree_four() {
        // x^4 - x^3 + x^2 - x + 1: primitive tenth roots of unity
        let roots = refine_roots(&rp(&[1, -1, 1, -1, 1]), 1e-10).unwrap();
        assert_eq!(roots.len(), 4);
        for r in roots {
            assert!((r.value.norm() - 1.0).abs() < 1e-10);
        }
    }
}
