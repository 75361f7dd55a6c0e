//! Exact arithmetic in the truncated group ring
//! `R = (ℤ/pᵏ)[δ₁…δ_s, T₁…T_d] / (δᵢ^{mᵢ} − 1, T_j^N)`.
//!
//! Elements are dense coefficient vectors over the monomial basis `δᵃ·Tᵇ`
//! with `0 ≤ aᵢ < mᵢ` and `0 ≤ b_j < N`. The basis index of `δᵃ·Tᵇ` is
//! `g·N^d + t` where `g` is the mixed-radix index of `a` (first factor most
//! significant) and `t` the base-`N` index of `b` (first variable most
//! significant).

mod character;
mod hom;

pub use character::{all_characters, char_eval, Character, CycloElement, CycloRing};
pub use hom::{GroupLike, HomKind, RingHom};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use crate::arith::ChainRing;
use crate::error::{Error, Result};

const MAX_FACTOR_SIZE: usize = 1024;

/// The ambient ring: prime, p-adic precision, cyclic orders of Δ, number of
/// T variables and the uniform T-truncation degree.
pub struct GroupRingSpec {
    coeff: ChainRing,
    orders: Vec<usize>,
    d: usize,
    n: usize,
    group_size: usize,
    t_size: usize,
    group_strides: Vec<usize>,
    t_strides: Vec<usize>,
    group_exps: Vec<Vec<usize>>,
    t_exps: Vec<Vec<usize>>,
    t_degree: Vec<usize>,
    group_add: Vec<u32>,
    t_add: Vec<u32>,
    augmented: OnceLock<Arc<GroupRingSpec>>,
}

/// Sentinel in the T-addition table for products that fall off the truncation.
const DROPPED: u32 = u32::MAX;

impl GroupRingSpec {
    pub fn new(p: u64, k: u32, orders: Vec<usize>, d: usize, n: usize) -> Result<Arc<Self>> {
        let coeff = ChainRing::new(p, k)?;
        if let Some(m) = orders.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidSpec(format!("cyclic order {m} is below 2")));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("T-truncation N must be positive".into()));
        }
        let group_size = checked_product(orders.iter().copied())
            .filter(|&g| g <= MAX_FACTOR_SIZE)
            .ok_or_else(|| Error::InvalidSpec("group Δ is too large".into()))?;
        let t_size = checked_product(std::iter::repeat(n).take(d))
            .filter(|&t| t <= MAX_FACTOR_SIZE)
            .ok_or_else(|| Error::InvalidSpec("T-monomial basis is too large".into()))?;

        let group_strides = strides(&orders);
        let t_strides = strides(&vec![n; d]);
        let group_exps: Vec<Vec<usize>> =
            (0..group_size).map(|g| digits(g, &orders, &group_strides)).collect();
        let t_exps: Vec<Vec<usize>> =
            (0..t_size).map(|t| digits(t, &vec![n; d], &t_strides)).collect();
        let t_degree = t_exps.iter().map(|b| b.iter().sum()).collect();

        let mut group_add = vec![0u32; group_size * group_size];
        for g1 in 0..group_size {
            for g2 in 0..group_size {
                let idx: usize = (0..orders.len())
                    .map(|i| ((group_exps[g1][i] + group_exps[g2][i]) % orders[i]) * group_strides[i])
                    .sum();
                group_add[g1 * group_size + g2] = idx as u32;
            }
        }
        let mut t_add = vec![DROPPED; t_size * t_size];
        for t1 in 0..t_size {
            for t2 in 0..t_size {
                let mut idx = 0;
                let mut ok = true;
                for j in 0..d {
                    let b = t_exps[t1][j] + t_exps[t2][j];
                    if b >= n {
                        ok = false;
                        break;
                    }
                    idx += b * t_strides[j];
                }
                if ok {
                    t_add[t1 * t_size + t2] = idx as u32;
                }
            }
        }

        Ok(Arc::new(Self {
            coeff,
            orders,
            d,
            n,
            group_size,
            t_size,
            group_strides,
            t_strides,
            group_exps,
            t_exps,
            t_degree,
            group_add,
            t_add,
            augmented: OnceLock::new(),
        }))
    }

    pub fn coeff_ring(&self) -> &ChainRing {
        &self.coeff
    }
    pub fn p(&self) -> u64 {
        self.coeff.p()
    }
    pub fn k(&self) -> u32 {
        self.coeff.k()
    }
    pub fn modulus(&self) -> u64 {
        self.coeff.modulus()
    }
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }
    /// Number of cyclic factors `s`.
    pub fn s(&self) -> usize {
        self.orders.len()
    }
    /// Number of T variables.
    pub fn d(&self) -> usize {
        self.d
    }
    /// T-truncation degree.
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn group_size(&self) -> usize {
        self.group_size
    }
    pub fn t_size(&self) -> usize {
        self.t_size
    }
    pub fn basis_size(&self) -> usize {
        self.group_size * self.t_size
    }

    pub fn same(&self, other: &GroupRingSpec) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    pub fn group_index(&self, a: &[usize]) -> usize {
        a.iter().zip(&self.group_strides).map(|(x, s)| x * s).sum()
    }
    pub fn t_index(&self, b: &[usize]) -> usize {
        b.iter().zip(&self.t_strides).map(|(x, s)| x * s).sum()
    }
    pub fn group_exps(&self, g: usize) -> &[usize] {
        &self.group_exps[g]
    }
    pub fn t_exps(&self, t: usize) -> &[usize] {
        &self.t_exps[t]
    }
    /// Total T-degree of the T-monomial with index `t`.
    pub fn t_degree_of(&self, t: usize) -> usize {
        self.t_degree[t]
    }

    /// Basis index of `δᵃ·Tᵇ`, checking bounds.
    pub fn index_of(&self, a: &[usize], b: &[usize]) -> Result<usize> {
        if a.len() != self.s() || b.len() != self.d {
            return Err(Error::IndexOutOfRange(format!(
                "expected {} group and {} T exponents",
                self.s(),
                self.d
            )));
        }
        if let Some(i) = (0..a.len()).find(|&i| a[i] >= self.orders[i]) {
            return Err(Error::IndexOutOfRange(format!(
                "exponent {} of δ{} is not below {}",
                a[i],
                i + 1,
                self.orders[i]
            )));
        }
        if let Some(j) = (0..b.len()).find(|&j| b[j] >= self.n) {
            return Err(Error::IndexOutOfRange(format!(
                "exponent {} of T{} is not below N = {}",
                b[j],
                j + 1,
                self.n
            )));
        }
        Ok(self.group_index(a) * self.t_size + self.t_index(b))
    }

    /// `(group index, T index)` of a basis index.
    #[inline]
    pub fn split_index(&self, idx: usize) -> (usize, usize) {
        (idx / self.t_size, idx % self.t_size)
    }

    /// Basis index of the product of two basis monomials, `None` if it is
    /// truncated away.
    #[inline]
    pub fn mul_index(&self, i: usize, j: usize) -> Option<usize> {
        let (g1, t1) = self.split_index(i);
        let (g2, t2) = self.split_index(j);
        let t = self.t_add[t1 * self.t_size + t2];
        if t == DROPPED {
            None
        } else {
            let g = self.group_add[g1 * self.group_size + g2] as usize;
            Some(g * self.t_size + t as usize)
        }
    }

    /// The spec with all cyclic factors removed (target of the augmentation).
    pub fn augmented(&self) -> Arc<GroupRingSpec> {
        self.augmented
            .get_or_init(|| {
                GroupRingSpec::new(self.p(), self.k(), Vec::new(), self.d, self.n)
                    .expect("sub-spec of a valid spec is valid")
            })
            .clone()
    }

    /// The spec with the listed cyclic factors and T variables removed.
    pub fn without(&self, factors: &[usize], t_vars: &[usize]) -> Result<Arc<GroupRingSpec>> {
        if let Some(&i) = factors.iter().find(|&&i| i >= self.s()) {
            return Err(Error::IndexOutOfRange(format!("cyclic factor {i}")));
        }
        if let Some(&j) = t_vars.iter().find(|&&j| j >= self.d) {
            return Err(Error::IndexOutOfRange(format!("T variable {j}")));
        }
        let orders = (0..self.s())
            .filter(|i| !factors.contains(i))
            .map(|i| self.orders[i])
            .collect();
        let d = (0..self.d).filter(|j| !t_vars.contains(j)).count();
        GroupRingSpec::new(self.p(), self.k(), orders, d, self.n)
    }
}

impl PartialEq for GroupRingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.coeff == other.coeff && self.orders == other.orders && self.d == other.d && self.n == other.n
    }
}
impl Eq for GroupRingSpec {}

impl fmt::Debug for GroupRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupRingSpec(p={}, k={}, orders={:?}, d={}, N={})",
            self.p(),
            self.k(),
            self.orders,
            self.d,
            self.n
        )
    }
}

impl fmt::Display for GroupRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.orders.iter().map(|m| m.to_string()).collect();
        write!(
            f,
            "p={} k={} N={} orders={} d={}",
            self.p(),
            self.k(),
            self.n,
            if orders.is_empty() { "-".to_string() } else { orders.join(",") },
            self.d
        )
    }
}

fn checked_product(it: impl Iterator<Item = usize>) -> Option<usize> {
    it.fold(Some(1usize), |acc, x| acc.and_then(|a| a.checked_mul(x)))
}

fn strides(radices: &[usize]) -> Vec<usize> {
    let mut s = vec![1; radices.len()];
    for i in (0..radices.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * radices[i + 1];
    }
    s
}

fn digits(mut x: usize, radices: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in 0..radices.len() {
        out[i] = x / strides[i];
        x %= strides[i];
    }
    out
}

/// An element of the truncated group ring.
#[derive(Clone)]
pub struct RingElement {
    spec: Arc<GroupRingSpec>,
    coeffs: Vec<u64>,
}

impl RingElement {
    pub fn zero(spec: &Arc<GroupRingSpec>) -> Self {
        Self { spec: spec.clone(), coeffs: vec![0; spec.basis_size()] }
    }

    pub fn one(spec: &Arc<GroupRingSpec>) -> Self {
        Self::constant(spec, 1)
    }

    pub fn constant(spec: &Arc<GroupRingSpec>, c: i128) -> Self {
        let mut x = Self::zero(spec);
        x.coeffs[0] = spec.coeff.reduce_i128(c);
        x
    }

    /// Build from `(group exponents, T exponents) ↦ coefficient` terms;
    /// repeated monomials accumulate.
    pub fn from_terms<A, B>(spec: &Arc<GroupRingSpec>, terms: &[(A, B, i128)]) -> Result<Self>
    where
        A: AsRef<[usize]>,
        B: AsRef<[usize]>,
    {
        let mut x = Self::zero(spec);
        for (a, b, c) in terms {
            let idx = spec.index_of(a.as_ref(), b.as_ref())?;
            let c = spec.coeff.reduce_i128(*c);
            x.coeffs[idx] = spec.coeff.add(x.coeffs[idx], c);
        }
        Ok(x)
    }

    /// Wrap a raw coefficient vector (entries are reduced mod pᵏ).
    pub fn from_coeffs(spec: &Arc<GroupRingSpec>, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != spec.basis_size() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                spec.basis_size(),
                coeffs.len()
            )));
        }
        let m = spec.modulus();
        Ok(Self { spec: spec.clone(), coeffs: coeffs.into_iter().map(|c| c % m).collect() })
    }

    pub fn monomial(spec: &Arc<GroupRingSpec>, a: &[usize], b: &[usize]) -> Result<Self> {
        let mut x = Self::zero(spec);
        x.coeffs[spec.index_of(a, b)?] = 1 % spec.modulus();
        Ok(x)
    }

    /// The generator `δᵢ^e` (0-based factor index, exponent taken mod mᵢ).
    pub fn delta_pow(spec: &Arc<GroupRingSpec>, i: usize, e: usize) -> Result<Self> {
        if i >= spec.s() {
            return Err(Error::IndexOutOfRange(format!("cyclic factor {i}")));
        }
        let mut a = vec![0; spec.s()];
        a[i] = e % spec.orders[i];
        Self::monomial(spec, &a, &vec![0; spec.d])
    }

    pub fn delta(spec: &Arc<GroupRingSpec>, i: usize) -> Result<Self> {
        Self::delta_pow(spec, i, 1)
    }

    /// `δᵢ − 1`.
    pub fn tau(spec: &Arc<GroupRingSpec>, i: usize) -> Result<Self> {
        Ok(&Self::delta(spec, i)? - &Self::one(spec))
    }

    /// The variable `T_j` (0-based); zero when `N = 1`.
    pub fn t_var(spec: &Arc<GroupRingSpec>, j: usize) -> Result<Self> {
        if j >= spec.d {
            return Err(Error::IndexOutOfRange(format!("T variable {j}")));
        }
        if spec.n == 1 {
            return Ok(Self::zero(spec));
        }
        let mut b = vec![0; spec.d];
        b[j] = 1;
        Self::monomial(spec, &vec![0; spec.s()], &b)
    }

    /// `T_j^e`, zero once `e ≥ N`.
    pub fn t_pow(spec: &Arc<GroupRingSpec>, j: usize, e: usize) -> Result<Self> {
        if j >= spec.d {
            return Err(Error::IndexOutOfRange(format!("T variable {j}")));
        }
        if e >= spec.n {
            return Ok(Self::zero(spec));
        }
        let mut b = vec![0; spec.d];
        b[j] = e;
        Self::monomial(spec, &vec![0; spec.s()], &b)
    }

    pub fn spec(&self) -> &Arc<GroupRingSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, a: &[usize], b: &[usize]) -> Result<u64> {
        Ok(self.coeffs[self.spec.index_of(a, b)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 % self.spec.modulus() && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Nonzero `(basis index, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c))
    }

    /// Maximal total T-degree of a nonzero monomial; `None` for zero.
    pub fn t_degree(&self) -> Option<usize> {
        self.terms().map(|(i, _)| self.spec.t_degree_of(i % self.spec.t_size)).max()
    }

    /// Minimal total T-degree of a nonzero monomial; `None` for zero.
    pub fn t_valuation(&self) -> Option<usize> {
        self.terms().map(|(i, _)| self.spec.t_degree_of(i % self.spec.t_size)).min()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.spec.same(&other.spec) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let r = &self.spec.coeff;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| r.add(a, b)).collect();
        Ok(Self { spec: self.spec.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let r = &self.spec.coeff;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| r.sub(a, b)).collect();
        Ok(Self { spec: self.spec.clone(), coeffs })
    }

    /// Product in the truncated ring: group exponents add mod mᵢ, T-exponents
    /// add and anything reaching `N` is dropped.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let spec = &*self.spec;
        let ring = &spec.coeff;
        let ts = spec.t_size;
        let gs = spec.group_size;
        let small = ring.modulus() <= u32::MAX as u64;
        let xs: Vec<(usize, usize, u64)> =
            self.terms().map(|(i, c)| (i / ts, i % ts, c)).collect();
        if xs.is_empty() {
            return Ok(Self::zero(&self.spec));
        }
        let ys: Vec<(usize, usize, u64)> =
            other.terms().map(|(i, c)| (i / ts, i % ts, c)).collect();
        let mut acc = vec![0u128; spec.basis_size()];
        for &(g1, t1, a) in &xs {
            let grow = &spec.group_add[g1 * gs..(g1 + 1) * gs];
            let trow = &spec.t_add[t1 * ts..(t1 + 1) * ts];
            for &(g2, t2, b) in &ys {
                let t = trow[t2];
                if t == DROPPED {
                    continue;
                }
                let idx = grow[g2] as usize * ts + t as usize;
                let prod = if small { a * b } else { ring.mul(a, b) };
                acc[idx] += prod as u128;
            }
        }
        let m = ring.modulus() as u128;
        let coeffs = acc.into_iter().map(|v| (v % m) as u64).collect();
        Ok(Self { spec: self.spec.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        let r = &self.spec.coeff;
        Self { spec: self.spec.clone(), coeffs: self.coeffs.iter().map(|&a| r.neg(a)).collect() }
    }

    pub fn scale(&self, c: u64) -> Self {
        let r = &self.spec.coeff;
        let c = c % r.modulus();
        Self { spec: self.spec.clone(), coeffs: self.coeffs.iter().map(|&a| r.mul(a, c)).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.spec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiply by the basis monomial with index `idx` (a permutation of
    /// coordinates followed by truncation).
    pub fn mul_basis(&self, idx: usize) -> Self {
        let mut out = vec![0u64; self.coeffs.len()];
        for (i, c) in self.terms() {
            if let Some(j) = self.spec.mul_index(i, idx) {
                out[j] = self.spec.coeff.add(out[j], c);
            }
        }
        Self { spec: self.spec.clone(), coeffs: out }
    }

    /// Image under `δᵢ ↦ 1` for every i (T-part kept), living on the spec
    /// with no cyclic factors.
    pub fn augmentation(&self) -> RingElement {
        let target = self.spec.augmented();
        let ts = self.spec.t_size;
        let r = &self.spec.coeff;
        let mut coeffs = vec![0u64; ts];
        for (i, c) in self.terms() {
            coeffs[i % ts] = r.add(coeffs[i % ts], c);
        }
        RingElement { spec: target, coeffs }
    }
}

/// `∏_{i ∈ subset} (1 + δᵢ + … + δᵢ^{mᵢ−1})`; the empty product is 1.
pub fn norm_element(spec: &Arc<GroupRingSpec>, subset: &[usize]) -> Result<RingElement> {
    let mut acc = RingElement::one(spec);
    for &i in subset {
        if i >= spec.s() {
            return Err(Error::IndexOutOfRange(format!("cyclic factor {i}")));
        }
        let mut n = RingElement::zero(spec);
        for e in 0..spec.orders[i] {
            n = &n + &RingElement::delta_pow(spec, i, e)?;
        }
        acc = &acc * &n;
    }
    Ok(acc)
}

/// The norm element of the whole of Δ.
pub fn full_norm(spec: &Arc<GroupRingSpec>) -> RingElement {
    let all: Vec<usize> = (0..spec.s()).collect();
    norm_element(spec, &all).expect("indices in range")
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.spec.same(&other.spec) && self.coeffs == other.coeffs
    }
}
impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    /// Plain δ/T monomial listing; the CLI has a τ-based printer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec = &self.spec;
        let mut first = true;
        for (i, c) in self.terms() {
            let (g, t) = spec.split_index(i);
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (idx, &a) in spec.group_exps(g).iter().enumerate() {
                if a > 0 {
                    write!(f, "*d{}^{}", idx + 1, a)?;
                }
            }
            for (idx, &b) in spec.t_exps(t).iter().enumerate() {
                if b > 0 {
                    write!(f, "*t{}^{}", idx + 1, b)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RingElement> for &RingElement {
            type Output = RingElement;
            /// Panics if the operands live on different specs; use the
            /// `try_*` methods to get an error instead.
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$inner(rhs).expect("ring element spec mismatch")
            }
        }
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(self)
    }
}
impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(&self)
    }
}
