use std::sync::Arc;

use super::{GroupRingSpec, RingElement};
use crate::error::{Error, Result};

/// A group-like monomial `δᵃ·∏(1+T_j)^{c_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLike {
    pub delta_exps: Vec<usize>,
    pub gamma_exps: Vec<u64>,
}

impl GroupLike {
    pub fn to_element(&self, spec: &Arc<GroupRingSpec>) -> Result<RingElement> {
        if self.delta_exps.len() != spec.s() || self.gamma_exps.len() != spec.d() {
            return Err(Error::InvalidHom(format!(
                "group-like monomial needs {} δ and {} γ exponents",
                spec.s(),
                spec.d()
            )));
        }
        let a: Vec<usize> = self.delta_exps.iter().zip(spec.orders()).map(|(x, m)| x % m).collect();
        let mut x = RingElement::monomial(spec, &a, &vec![0; spec.d()])?;
        for (j, &c) in self.gamma_exps.iter().enumerate() {
            if c > 0 {
                let gamma = &RingElement::one(spec) + &RingElement::t_var(spec, j)?;
                x = &x * &gamma.pow(c);
            }
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomKind {
    /// `δᵢ ↦ 1` for the listed factors, `T_j ↦ 0` for the listed variables.
    Quotient { factors: Vec<usize>, t_vars: Vec<usize> },
    /// `g ↦ ρ(g)·g` with `ρ(δᵢ) = delta_values[i]` and
    /// `ρ(1+T_j) = gamma_values[j] ≡ 1 mod p`, so `T_j ↦ (u−1) + u·T_j`.
    Twist { delta_values: Vec<u64>, gamma_values: Vec<u64> },
    /// Each source generator goes to a group-like monomial of the target:
    /// `δᵢ ↦ delta_images[i]`, `1+T_j ↦ gamma_images[j]`.
    Inclusion { delta_images: Vec<GroupLike>, gamma_images: Vec<GroupLike> },
}

/// A ring homomorphism between truncated group rings.
///
/// Quotient maps are homomorphisms of the truncated rings. Twists and
/// inclusions are defined by substitution on the polynomial representative
/// of degree `< N` in each variable; twists preserve every T-exponent and are
/// bijective, but products whose degree overflows `N` are only respected
/// when nothing is truncated.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Arc<GroupRingSpec>,
    target: Arc<GroupRingSpec>,
    kind: HomKind,
}

impl RingHom {
    pub fn quotient(source: &Arc<GroupRingSpec>, factors: &[usize], t_vars: &[usize]) -> Result<Self> {
        let target = source.without(factors, t_vars)?;
        let mut factors = factors.to_vec();
        factors.sort_unstable();
        factors.dedup();
        let mut t_vars = t_vars.to_vec();
        t_vars.sort_unstable();
        t_vars.dedup();
        Ok(Self { source: source.clone(), target, kind: HomKind::Quotient { factors, t_vars } })
    }

    pub fn twist(spec: &Arc<GroupRingSpec>, delta_values: Vec<u64>, gamma_values: Vec<u64>) -> Result<Self> {
        let ring = spec.coeff_ring();
        if delta_values.len() != spec.s() || gamma_values.len() != spec.d() {
            return Err(Error::InvalidHom("twist needs one value per generator".into()));
        }
        let delta_values: Vec<u64> = delta_values.into_iter().map(|v| v % ring.modulus()).collect();
        let gamma_values: Vec<u64> = gamma_values.into_iter().map(|v| v % ring.modulus()).collect();
        if let Some(&v) = delta_values.iter().chain(&gamma_values).find(|&&v| !ring.is_unit(v)) {
            return Err(Error::NonUnit(v));
        }
        // a continuous character of ℤ_p lands in 1 + pℤ_p
        if let Some(&u) = gamma_values.iter().find(|&&u| u % ring.p() != 1 % ring.p()) {
            return Err(Error::InvalidHom(format!("ρ(1+T) = {u} is not 1 mod p")));
        }
        for (i, (&w, &m)) in delta_values.iter().zip(spec.orders()).enumerate() {
            if ring.pow(w, m as u64) != 1 % ring.modulus() {
                return Err(Error::InvalidHom(format!(
                    "ρ(δ{})^{m} ≠ 1 for ρ(δ{}) = {w}",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(Self {
            source: spec.clone(),
            target: spec.clone(),
            kind: HomKind::Twist { delta_values, gamma_values },
        })
    }

    pub fn inclusion(
        source: &Arc<GroupRingSpec>,
        target: &Arc<GroupRingSpec>,
        delta_images: Vec<GroupLike>,
        gamma_images: Vec<GroupLike>,
    ) -> Result<Self> {
        if source.coeff_ring() != target.coeff_ring() || source.n() != target.n() {
            return Err(Error::InvalidHom("inclusion needs equal p, k and N".into()));
        }
        if delta_images.len() != source.s() || gamma_images.len() != source.d() {
            return Err(Error::InvalidHom("inclusion needs one image per generator".into()));
        }
        for (i, img) in delta_images.iter().enumerate() {
            img.to_element(target)?;
            let m = source.orders()[i];
            let torsion_ok = img.gamma_exps.iter().all(|&c| c == 0)
                && img.delta_exps.iter().zip(target.orders()).all(|(&a, &mt)| (a * m) % mt == 0);
            if !torsion_ok {
                return Err(Error::InvalidHom(format!(
                    "image of δ{} does not have order dividing {m}",
                    i + 1
                )));
            }
        }
        for img in &gamma_images {
            img.to_element(target)?;
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            kind: HomKind::Inclusion { delta_images, gamma_images },
        })
    }

    pub fn source(&self) -> &Arc<GroupRingSpec> {
        &self.source
    }
    pub fn target(&self) -> &Arc<GroupRingSpec> {
        &self.target
    }
    pub fn kind(&self) -> &HomKind {
        &self.kind
    }

    /// The inverse twist (`ρ⁻¹`); `None` for other kinds.
    pub fn inverse_twist(&self) -> Option<RingHom> {
        match &self.kind {
            HomKind::Twist { delta_values, gamma_values } => {
                let ring = self.source.coeff_ring();
                let inv = |v: &Vec<u64>| v.iter().map(|&x| ring.inv(x).expect("unit")).collect();
                Some(RingHom {
                    source: self.source.clone(),
                    target: self.target.clone(),
                    kind: HomKind::Twist { delta_values: inv(delta_values), gamma_values: inv(gamma_values) },
                })
            }
            _ => None,
        }
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        if !x.spec().same(&self.source) {
            return Err(Error::SpecMismatch);
        }
        match &self.kind {
            HomKind::Quotient { factors, t_vars } => Ok(self.apply_quotient(x, factors, t_vars)),
            HomKind::Twist { delta_values, gamma_values } => Ok(self.apply_twist(x, delta_values, gamma_values)),
            HomKind::Inclusion { delta_images, gamma_images } => self.apply_inclusion(x, delta_images, gamma_images),
        }
    }

    fn apply_quotient(&self, x: &RingElement, factors: &[usize], t_vars: &[usize]) -> RingElement {
        let src = &self.source;
        let ring = src.coeff_ring();
        let mut out = vec![0u64; self.target.basis_size()];
        for (idx, c) in x.terms() {
            let (g, t) = src.split_index(idx);
            let b = src.t_exps(t);
            if t_vars.iter().any(|&j| b[j] > 0) {
                continue;
            }
            let a: Vec<usize> = (0..src.s()).filter(|i| !factors.contains(i)).map(|i| src.group_exps(g)[i]).collect();
            let b: Vec<usize> = (0..src.d()).filter(|j| !t_vars.contains(j)).map(|j| b[j]).collect();
            let j = self.target.index_of(&a, &b).expect("quotient index in range");
            out[j] = ring.add(out[j], c);
        }
        RingElement::from_coeffs(&self.target, out).expect("target size")
    }

    fn apply_twist(&self, x: &RingElement, delta_values: &[u64], gamma_values: &[u64]) -> RingElement {
        let spec = &self.source;
        let ring = spec.coeff_ring();
        let ts = spec.t_size();
        let n = spec.n();
        // images of powers of T_j as dense polynomials in T_j: ((u-1) + u T)^b
        let powers: Vec<Vec<Vec<u64>>> = gamma_values
            .iter()
            .map(|&u| {
                let lin = [ring.sub(u, 1), u];
                let mut table = vec![{
                    let mut one = vec![0u64; n];
                    one[0] = 1 % ring.modulus();
                    one
                }];
                for b in 1..n {
                    let prev = &table[b - 1];
                    let mut next = vec![0u64; n];
                    for (e, &c) in prev.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        next[e] = ring.add(next[e], ring.mul(c, lin[0]));
                        if e + 1 < n {
                            next[e + 1] = ring.add(next[e + 1], ring.mul(c, lin[1]));
                        }
                    }
                    table.push(next);
                }
                table
            })
            .collect();
        // image of each T-monomial as a vector over T-monomials
        let t_images: Vec<Vec<u64>> = (0..ts)
            .map(|t| {
                let b = spec.t_exps(t);
                let mut img = vec![0u64; ts];
                img[0] = 1 % ring.modulus();
                for (j, &bj) in b.iter().enumerate() {
                    let poly = &powers[j][bj];
                    let mut next = vec![0u64; ts];
                    for (t2, &c) in img.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        let base = spec.t_exps(t2);
                        for (e, &pc) in poly.iter().enumerate() {
                            if pc == 0 || base[j] + e >= n {
                                continue;
                            }
                            let mut nb = base.to_vec();
                            nb[j] += e;
                            let t3 = spec.t_index(&nb);
                            next[t3] = ring.add(next[t3], ring.mul(c, pc));
                        }
                    }
                    img = next;
                }
                img
            })
            .collect();
        let mut out = vec![0u64; spec.basis_size()];
        for (idx, c) in x.terms() {
            let (g, t) = spec.split_index(idx);
            let mut scalar = c;
            for (i, &a) in spec.group_exps(g).iter().enumerate() {
                scalar = ring.mul(scalar, ring.pow(delta_values[i], a as u64));
            }
            for (t2, &v) in t_images[t].iter().enumerate() {
                if v != 0 {
                    let j = g * ts + t2;
                    out[j] = ring.add(out[j], ring.mul(scalar, v));
                }
            }
        }
        RingElement::from_coeffs(spec, out).expect("same size")
    }

    fn apply_inclusion(
        &self,
        x: &RingElement,
        delta_images: &[GroupLike],
        gamma_images: &[GroupLike],
    ) -> Result<RingElement> {
        let src = &self.source;
        let tgt = &self.target;
        let delta_pows: Vec<Vec<RingElement>> = delta_images
            .iter()
            .zip(src.orders())
            .map(|(img, &m)| {
                let e = img.to_element(tgt)?;
                Ok(powers_of(&e, m))
            })
            .collect::<Result<_>>()?;
        let t_pows: Vec<Vec<RingElement>> = gamma_images
            .iter()
            .map(|img| {
                let e = &img.to_element(tgt)? - &RingElement::one(tgt);
                Ok(powers_of(&e, src.n()))
            })
            .collect::<Result<_>>()?;
        let mut out = RingElement::zero(tgt);
        for (idx, c) in x.terms() {
            let (g, t) = src.split_index(idx);
            let mut term = RingElement::constant(tgt, c as i128);
            for (i, &a) in src.group_exps(g).iter().enumerate() {
                if a > 0 {
                    term = &term * &delta_pows[i][a];
                }
            }
            for (j, &b) in src.t_exps(t).iter().enumerate() {
                if b > 0 {
                    term = &term * &t_pows[j][b];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

fn powers_of(x: &RingElement, count: usize) -> Vec<RingElement> {
    let mut v = vec![RingElement::one(x.spec())];
    for i in 1..count {
        let next = &v[i - 1] * x;
        v.push(next);
    }
    v
}
