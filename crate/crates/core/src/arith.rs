//! Residue arithmetic in the chain ring ℤ/pᵏ.

use crate::error::{Error, Result};

/// Largest modulus accepted. Residues are kept in `u64` and sums of two
/// residues must not overflow.
pub const MAX_MODULUS: u64 = 1 << 62;

/// The coefficient ring ℤ/pᵏ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainRing {
    p: u64,
    k: u32,
    modulus: u64,
}

impl ChainRing {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidSpec("p-adic precision k must be positive".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..k {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m <= MAX_MODULUS)
                .ok_or(Error::ModulusTooLarge { p, k })?;
        }
        Ok(Self { p, k, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduce a signed integer into `[0, pᵏ)`.
    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.modulus <= u32::MAX as u64 {
            a * b % self.modulus
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// p-adic valuation of a residue; `k` for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit, `None` otherwise.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i128(s0))
    }

    /// `p^e` as a residue (zero once `e ≥ k`).
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.k {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// Split a nonzero residue as `p^v · u` with `u` a unit, returning `(v, u)`.
    pub fn split(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        let u = a / self.p.pow(v);
        (v, u % self.modulus)
    }

    /// Determinant of a square matrix over ℤ/pᵏ by elimination with
    /// minimal-valuation pivots (every other entry in the pivot column is then
    /// an exact multiple of the pivot).
    pub fn det(&self, mat: &[Vec<u64>]) -> u64 {
        let n = mat.len();
        let mut a: Vec<Vec<u64>> = mat.to_vec();
        let mut det = 1 % self.modulus;
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| a[r][col] != 0)
                .min_by_key(|&r| self.valuation(a[r][col]));
            let Some(pr) = pivot else { return 0 };
            if pr != col {
                a.swap(pr, col);
                det = self.neg(det);
            }
            let pv = a[col][col];
            let (v, u) = self.split(pv);
            let u_inv = self.inv(u).expect("unit part is invertible");
            det = self.mul(det, pv);
            for r in col + 1..n {
                let x = a[r][col];
                if x == 0 {
                    continue;
                }
                // x = p^w·u', w ≥ v, so x = (p^(w-v)·u'·u⁻¹)·pv
                let factor = self.mul(x / self.p.pow(v), u_inv);
                for c in col..n {
                    let t = self.mul(factor, a[col][c]);
                    a[r][c] = self.sub(a[r][c], t);
                }
            }
        }
        det
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_huge() {
        assert!(matches!(ChainRing::new(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(ChainRing::new(3, 0), Err(Error::InvalidSpec(_))));
        assert!(matches!(ChainRing::new(3, 60), Err(Error::ModulusTooLarge { .. })));
        assert!(ChainRing::new(3, 39).is_ok());
    }

    #[test]
    fn inverse_and_valuation() {
        let r = ChainRing::new(3, 4).unwrap();
        for a in 1..81 {
            if a % 3 != 0 {
                assert_eq!(r.mul(a, r.inv(a).unwrap()), 1);
            } else {
                assert!(r.inv(a).is_none());
            }
        }
        assert_eq!(r.valuation(0), 4);
        assert_eq!(r.valuation(18), 2);
        assert_eq!(r.split(18), (2, 2));
    }

    #[test]
    fn large_modulus_mul() {
        let r = ChainRing::new(5, 26).unwrap();
        let m = r.modulus();
        let a = m - 1;
        assert_eq!(r.mul(a, a), 1);
    }

    #[test]
    fn det_matches_cofactor() {
        let r = ChainRing::new(2, 3).unwrap();
        // [[2,1],[4,6]] -> 12 - 4 = 8 ≡ 0 mod 8
        assert_eq!(r.det(&[vec![2, 1], vec![4, 6]]), 0);
        // [[1,2],[3,4]] -> -2 ≡ 6
        assert_eq!(r.det(&[vec![1, 2], vec![3, 4]]), 6);
        let r9 = ChainRing::new(3, 2).unwrap();
        // [[3,1,0],[0,3,1],[1,0,3]] -> 27 + 1 = 28 ≡ 1 mod 9
        assert_eq!(r9.det(&[vec![3, 1, 0], vec![0, 3, 1], vec![1, 0, 3]]), 1);
    }
}
