//! Euler factors at a prime `v ∤ p` and Tate twists.
//!
//! The local group is `G_v = I_v × ⟨ε⟩ × Γ` with `I_v` the inertia group (a
//! product of cyclic factors), `ε` of order `m_v` prime to `p` and `Γ ≅ ℤ_p`
//! topologically generated by `1+T`. A lift of Frobenius is recorded as
//! `σ̃ = δᵃ·(1+T)ᶜ`.

use std::sync::Arc;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::groupring::{full_norm, norm_element, GroupLike, GroupRingSpec, RingElement, RingHom};
use crate::ideals::{FractionalIdeal, Ideal};

#[derive(Clone, Debug)]
pub struct DecompositionData {
    local: Arc<GroupRingSpec>,
    inertia_orders: Vec<usize>,
    m_v: usize,
    q: u64,
    frobenius: GroupLike,
}

impl DecompositionData {
    /// `delta_exponents` lists the exponents of `σ̃` on the inertia factors
    /// followed, when `m_v > 1`, by its exponent on `ε`.
    pub fn new(
        p: u64,
        k: u32,
        n: usize,
        inertia_orders: Vec<usize>,
        m_v: usize,
        q: u64,
        delta_exponents: Vec<usize>,
        gamma_exponent: u64,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDecomposition(msg));
        if m_v == 0 || gcd(m_v as u64, p) != 1 {
            return bad(format!("m_v = {m_v} must be positive and prime to p = {p}"));
        }
        if q == 0 {
            return bad("q must be positive".into());
        }
        if gamma_exponent % p == 0 {
            return bad(format!("the Γ-exponent {gamma_exponent} of σ̃ must be prime to p"));
        }
        let mut orders = inertia_orders.clone();
        if m_v > 1 {
            orders.push(m_v);
        }
        if delta_exponents.len() != orders.len() {
            return bad(format!("{} δ-exponents for {} finite factors", delta_exponents.len(), orders.len()));
        }
        if m_v > 1 && gcd(delta_exponents[orders.len() - 1] as u64, m_v as u64) != 1 {
            return bad("σ̃ must generate the ε-factor modulo inertia".into());
        }
        // σ̃^{m_v} − 1 must be represented without truncation
        if gamma_exponent as usize * m_v >= n {
            return bad(format!("T-precision N = {n} is below deg σ̃^m_v = {}", gamma_exponent as usize * m_v));
        }
        let local = GroupRingSpec::new(p, k, orders, 1, n)?;
        let q = q % local.modulus();
        Ok(Self { local, inertia_orders, m_v, q, frobenius: GroupLike { delta_exps: delta_exponents, gamma_exps: vec![gamma_exponent] } })
    }

    pub fn local(&self) -> &Arc<GroupRingSpec> {
        &self.local
    }
    pub fn inertia_orders(&self) -> &[usize] {
        &self.inertia_orders
    }
    pub fn m_v(&self) -> usize {
        self.m_v
    }
    /// `𝔑(v)` reduced mod pᵏ.
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn frobenius(&self) -> &GroupLike {
        &self.frobenius
    }

    pub fn sigma(&self) -> RingElement {
        self.frobenius.to_element(&self.local).expect("validated at construction")
    }

    pub fn inertia_norm(&self) -> RingElement {
        let idx: Vec<usize> = (0..self.inertia_orders.len()).collect();
        norm_element(&self.local, &idx).expect("inertia factors exist")
    }

    /// Values of `κ` on `δ₁ … δ_s` and on `1+T`: trivial on inertia, the
    /// Teichmüller part of `q` on `ε` and the principal-unit part on `Γ`, so
    /// that `κ(σ̃) = q`.
    pub fn kappa(&self) -> Result<(Vec<u64>, u64)> {
        let ring = *self.local.coeff_ring();
        let (p, k) = (ring.p(), ring.k());
        if !ring.is_unit(self.q) {
            return Err(Error::NonUnit(self.q));
        }
        let omega = ring.pow(self.q, p.pow(k - 1));
        let mut delta_values = vec![1 % ring.modulus(); self.inertia_orders.len()];
        if self.m_v > 1 {
            let m = self.m_v as u64;
            if ring.pow(omega, m) != 1 % ring.modulus() {
                return Err(Error::InvalidDecomposition(format!("q mod p has order not dividing m_v = {m}")));
            }
            let a = *self.frobenius.delta_exps.last().expect("ε exponent") as u64 % m;
            let a_inv = (1..m).find(|x| x * a % m == 1).unwrap_or(0);
            delta_values.push(ring.pow(omega, a_inv));
        } else if omega != 1 % ring.modulus() {
            return Err(Error::InvalidDecomposition("q ≢ 1 mod p needs an ε-factor".into()));
        }
        // u^c = q/ω(q) in the group 1 + pℤ/pᵏ of order p^{k−1}
        let principal = ring.mul(self.q, ring.inv(omega).expect("unit"));
        let order = p.pow(k - 1);
        let c = self.frobenius.gamma_exps[0] % order;
        let c_inv = if order == 1 { 0 } else { (1..order).find(|x| x * c % order == 1).expect("c prime to p") };
        Ok((delta_values, ring.pow(principal, c_inv)))
    }
}

/// `(𝒩_I, σ̃ − q)/(σ̃ − q)`, the fractional ideal generated by `𝒩_I/(σ̃−q)` and 1.
pub fn euler_factor_closed(data: &DecompositionData, assume_nzd: bool) -> Result<FractionalIdeal> {
    let spec = data.local();
    let den = data.sigma() - RingElement::constant(spec, data.q as i128);
    let num = Ideal::new(spec, vec![data.inertia_norm(), den.clone()])?;
    FractionalIdeal::new(num, den, assume_nzd)
}

/// The shift `(𝒩, T_loc)/T_loc` of `ℤ_p` in the coordinates
/// `G_v = (I_v × ⟨ε⟩) × ⟨σ̃^{m_v}⟩`, `T_loc = σ̃^{m_v} − 1`, followed by the
/// twist `(κ⁻¹)♯`.
pub fn euler_factor_direct(data: &DecompositionData, assume_nzd: bool) -> Result<FractionalIdeal> {
    let spec = data.local();
    let t_loc = data.sigma().pow(data.m_v as u64) - RingElement::one(spec);
    let untwisted = FractionalIdeal::new(Ideal::new(spec, vec![full_norm(spec), t_loc.clone()])?, t_loc, assume_nzd)?;
    let (delta_values, gamma_value) = data.kappa()?;
    let kappa = RingHom::twist(spec, delta_values, vec![gamma_value])?;
    let kappa_inv = kappa.inverse_twist().expect("twist");
    untwisted.image(&kappa_inv, assume_nzd)
}

/// Image of `I` under `t_r = (κ^r)♯` for `κ` given by its values on the
/// generators `δᵢ` and `1+T_j`.
pub fn tate_twist_ideal(r: i64, delta_values: &[u64], gamma_values: &[u64], ideal: &Ideal) -> Result<Ideal> {
    let spec = ideal.spec();
    let ring = spec.coeff_ring();
    let power = |v: u64| -> Result<u64> {
        let v = v % ring.modulus();
        if !ring.is_unit(v) {
            return Err(Error::NonUnit(v));
        }
        let base = if r < 0 { ring.inv(v).expect("unit") } else { v };
        Ok(ring.pow(base, r.unsigned_abs()))
    };
    let dv = delta_values.iter().map(|&v| power(v)).collect::<Result<Vec<_>>>()?;
    let gv = gamma_values.iter().map(|&v| power(v)).collect::<Result<Vec<_>>>()?;
    ideal.image(&RingHom::twist(spec, dv, gv)?)
}

/// Extension of a fractional ideal along an inclusion of group rings.
pub fn induce(x: &FractionalIdeal, inclusion: &RingHom, assume_nzd: bool) -> Result<FractionalIdeal> {
    x.image(inclusion, assume_nzd)
}

/// Multiplicative order of `q` modulo `p`.
pub fn order_mod_p(q: u64, p: u64) -> u64 {
    let q = q % p;
    let mut x = q;
    let mut e = 1;
    while x != 1 {
        x = x * q % p;
        e += 1;
        if e > p {
            return 0;
        }
    }
    e
}

/// Desk-scale grid `p ∈ {3,5}`, `|I_v| ∈ {1, p, p²}` (cyclic),
/// `q ∈ {2, 1+p, 1+p²}` with `m_v` the order of `q` mod p. Frobenius is
/// `δ_I·ε·(1+T)ᶜ` with `c = 1` when `m_v > 1` and `c = 2` otherwise.
pub fn lemma_grid(k: u32, n: usize) -> Result<Vec<DecompositionData>> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        for inertia in [1usize, p as usize, (p * p) as usize] {
            for q in [2, 1 + p, 1 + p * p] {
                let m_v = order_mod_p(q, p) as usize;
                let inertia_orders = if inertia == 1 { vec![] } else { vec![inertia] };
                let mut exps = vec![1; inertia_orders.len()];
                if m_v > 1 {
                    exps.push(1);
                }
                let c = if m_v > 1 { 1 } else { 2 };
                out.push(DecompositionData::new(p, k, n, inertia_orders, m_v, q, exps, c)?);
            }
        }
    }
    Ok(out)
}
