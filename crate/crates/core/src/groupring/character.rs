//! Characters of Δ with values in the cyclotomic coefficient ring
//! `(ℤ/pᵏ)[x]/Φ_e(x)`, and evaluation of group-ring elements at them.

use std::sync::Arc;

use super::{GroupRingSpec, RingElement};
use crate::arith::{gcd, lcm, ChainRing};
use crate::error::{Error, Result};

/// `(ℤ/pᵏ)[x]/Φ_e(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloRing {
    coeff: ChainRing,
    e: u64,
    /// Φ_e reduced mod pᵏ, lowest coefficient first, monic of degree φ(e).
    phi: Vec<u64>,
    /// `x^j mod Φ_e` for `0 ≤ j < e`.
    x_powers: Vec<Vec<u64>>,
}

impl CycloRing {
    pub fn new(coeff: ChainRing, e: u64) -> Self {
        let phi_z = cyclotomic_poly(e);
        let phi: Vec<u64> = phi_z.iter().map(|&c| coeff.reduce_i128(c)).collect();
        let deg = phi.len() - 1;
        let mut x_powers = Vec::with_capacity(e as usize);
        let mut cur = vec![0u64; deg];
        cur[0] = 1 % coeff.modulus();
        for _ in 0..e {
            x_powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[deg - 1];
            let mut next = vec![0u64; deg];
            for i in (1..deg).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..deg {
                next[i] = coeff.sub(next[i], coeff.mul(top, phi[i]));
            }
            cur = next;
        }
        Self { coeff, e, phi, x_powers }
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    /// φ(e), the rank over ℤ/pᵏ.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self) -> &[u64] {
        &self.phi
    }

    pub fn x_pow(&self, j: u64) -> &[u64] {
        &self.x_powers[(j % self.e) as usize]
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let deg = self.degree();
        let r = &self.coeff;
        let mut full = vec![0u64; 2 * deg];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                full[i + j] = r.add(full[i + j], r.mul(x, y));
            }
        }
        for i in (deg..2 * deg).rev() {
            let top = full[i];
            if top == 0 {
                continue;
            }
            full[i] = 0;
            for j in 0..deg {
                let pos = i - deg + j;
                full[pos] = r.sub(full[pos], r.mul(top, self.phi[j]));
            }
        }
        full.truncate(deg);
        full
    }

    /// Norm down to ℤ/pᵏ: determinant of multiplication by `a`.
    pub fn norm(&self, a: &[u64]) -> u64 {
        let deg = self.degree();
        // column j is a·x^j; the determinant is transpose-invariant, so rows do
        let rows: Vec<Vec<u64>> = (0..deg).map(|j| self.mul(a, &self.x_powers[j])).collect();
        self.coeff.det(&rows)
    }
}

/// Integer coefficients of the e-th cyclotomic polynomial, lowest first.
pub fn cyclotomic_poly(e: u64) -> Vec<i128> {
    // x^e - 1 divided by Φ_d for all proper divisors d
    let mut num = vec![0i128; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in 1..e {
        if e % d == 0 {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i128; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd]; // den is monic
        q[i] = c;
        for j in 0..=dd {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// A character of Δ: `χ(δᵢ) = ζ_{mᵢ}^{exps[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    spec: Arc<GroupRingSpec>,
    exps: Vec<usize>,
}

impl Character {
    pub fn new(spec: &Arc<GroupRingSpec>, exps: Vec<usize>) -> Result<Self> {
        if exps.len() != spec.s() {
            return Err(Error::IndexOutOfRange("one exponent per cyclic factor".into()));
        }
        let exps = exps.iter().zip(spec.orders()).map(|(a, m)| a % m).collect();
        Ok(Self { spec: spec.clone(), exps })
    }

    pub fn trivial(spec: &Arc<GroupRingSpec>) -> Self {
        Self { spec: spec.clone(), exps: vec![0; spec.s()] }
    }

    pub fn exps(&self) -> &[usize] {
        &self.exps
    }

    /// Order of the character (the e of its value ring).
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(self.spec.orders())
            .map(|(&a, &m)| (m / gcd(a as u64, m as u64) as usize) as u64)
            .fold(1, lcm)
    }

    /// The value ring `(ℤ/pᵏ)[x]/Φ_e`.
    pub fn value_ring(&self) -> CycloRing {
        CycloRing::new(*self.spec.coeff_ring(), self.order())
    }

    /// `x`-exponent of `χ(δᵃ)`.
    fn exponent(&self, a: &[usize]) -> u64 {
        let e = self.order();
        let mut total = 0u64;
        for ((&ai, &ci), &m) in a.iter().zip(&self.exps).zip(self.spec.orders()) {
            let m = m as u64;
            // ζ_m^c has order m/gcd(c,m) = o, which divides e; ζ_m^c = x^{(c/g)·(e/o)}
            let g = gcd(ci as u64, m);
            let o = m / g;
            let step = (ci as u64 / g) * (e / o);
            total = (total + ai as u64 * step) % e;
        }
        total
    }
}

/// Every character of Δ.
pub fn all_characters(spec: &Arc<GroupRingSpec>) -> Vec<Character> {
    (0..spec.group_size())
        .map(|g| Character { spec: spec.clone(), exps: spec.group_exps(g).to_vec() })
        .collect()
}

/// An element of `(ℤ/pᵏ)[x]/Φ_e ⊗ (ℤ/pᵏ)[T₁…T_d]/(T_j^N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    ring: Arc<CycloRing>,
    spec: Arc<GroupRingSpec>,
    /// `coeffs[t]` is the cyclotomic coefficient of the T-monomial `t`.
    coeffs: Vec<Vec<u64>>,
}

impl CycloElement {
    pub fn ring(&self) -> &CycloRing {
        &self.ring
    }

    pub fn coefficients(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|&x| x == 0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.spec.coeff_ring();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| r.add(x, y)).collect())
            .collect();
        Ok(Self { ring: self.ring.clone(), spec: self.spec.clone(), coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.spec.coeff_ring();
        let ts = self.spec.t_size();
        let deg = self.ring.degree();
        let mut coeffs = vec![vec![0u64; deg]; ts];
        for (t1, a) in self.coeffs.iter().enumerate() {
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            for (t2, b) in other.coeffs.iter().enumerate() {
                if b.iter().all(|&x| x == 0) {
                    continue;
                }
                // T-monomial indices sit at group index 0 of the basis
                let Some(t) = self.spec.mul_index(t1, t2) else { continue };
                let prod = self.ring.mul(a, b);
                for (c, p) in coeffs[t].iter_mut().zip(prod) {
                    *c = r.add(*c, p);
                }
            }
        }
        Ok(Self { ring: self.ring.clone(), spec: self.spec.clone(), coeffs })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring && self.spec.same(&other.spec) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }
}

/// Substitute `χ(δᵢ)` for each `δᵢ`, keeping the T-part.
pub fn char_eval(chi: &Character, x: &RingElement) -> Result<CycloElement> {
    if !chi.spec.same(x.spec()) {
        return Err(Error::SpecMismatch);
    }
    let spec = x.spec();
    let ring = Arc::new(chi.value_ring());
    let r = spec.coeff_ring();
    let deg = ring.degree();
    let mut coeffs = vec![vec![0u64; deg]; spec.t_size()];
    for (idx, c) in x.terms() {
        let (g, t) = spec.split_index(idx);
        let xp = ring.x_pow(chi.exponent(spec.group_exps(g)));
        for (acc, &v) in coeffs[t].iter_mut().zip(xp) {
            *acc = r.add(*acc, r.mul(c, v));
        }
    }
    Ok(CycloElement { ring, spec: spec.clone(), coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::full_norm;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
    }

    #[test]
    fn trivial_character_on_norm() {
        let s = GroupRingSpec::new(3, 3, vec![3], 1, 4).unwrap();
        let v = char_eval(&Character::trivial(&s), &full_norm(&s)).unwrap();
        assert_eq!(v.coefficients()[0], vec![3]);
    }

    #[test]
    fn primitive_character_kills_norm() {
        let s = GroupRingSpec::new(3, 3, vec![3], 1, 4).unwrap();
        let chi = Character::new(&s, vec![1]).unwrap();
        assert_eq!(chi.order(), 3);
        let v = char_eval(&chi, &full_norm(&s)).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn trivial_character_keeps_t() {
        let s = GroupRingSpec::new(5, 2, vec![5], 1, 3).unwrap();
        let t = RingElement::t_var(&s, 0).unwrap();
        let v = char_eval(&Character::trivial(&s), &t).unwrap();
        assert_eq!(v.coefficients()[1], vec![1]);
        assert_eq!(v.coefficients()[0], vec![0]);
    }

    #[test]
    fn norm_of_zeta_minus_one() {
        // N(ζ_9 − 1) = Φ_9(1) = 3
        let r = CycloRing::new(ChainRing::new(3, 4).unwrap(), 9);
        let mut a = vec![0u64; r.degree()];
        a[0] = r.coeff.neg(1);
        a[1] = 1;
        assert_eq!(r.norm(&a), 3);
    }

    #[test]
    fn mixed_orders() {
        let s = GroupRingSpec::new(3, 2, vec![3, 9], 0, 1).unwrap();
        let chi = Character::new(&s, vec![1, 3]).unwrap();
        assert_eq!(chi.order(), 3);
        let chi = Character::new(&s, vec![2, 1]).unwrap();
        assert_eq!(chi.order(), 9);
        // χ(δ₁) must be a cube root of unity: its cube is 1
        let d1 = RingElement::delta(&s, 0).unwrap();
        let v = char_eval(&chi, &d1.pow(3)).unwrap();
        assert_eq!(v.coefficients()[0], chi.value_ring().x_pow(0).to_vec());
    }
}
