//! Ideals and fractional ideals of the truncated group ring.
//!
//! An ideal is compared through the Howell form of the ℤ/pᵏ-span of
//! `{g·b : g a generator, b a basis monomial}`. Truncation is a quotient map,
//! so an inequality found here is an inequality of the exact ideals, while an
//! equality is only evidence at the working precision.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::groupring::{all_characters, char_eval, GroupRingSpec, RingElement, RingHom};
use crate::error::{Error, Result};
use crate::linalg::{CoeffMatrix, HowellBuilder};

struct Canonical {
    builder: HowellBuilder,
    howell: CoeffMatrix,
}

pub struct Ideal {
    spec: Arc<GroupRingSpec>,
    generators: Vec<RingElement>,
    canonical: OnceLock<Canonical>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        // the canonical form is recomputed on demand
        Self { spec: self.spec.clone(), generators: self.generators.clone(), canonical: OnceLock::new() }
    }
}

impl Ideal {
    pub fn new(spec: &Arc<GroupRingSpec>, generators: Vec<RingElement>) -> Result<Self> {
        if generators.iter().any(|g| !g.spec().same(spec)) {
            return Err(Error::SpecMismatch);
        }
        Ok(Self { spec: spec.clone(), generators, canonical: OnceLock::new() })
    }

    pub fn principal(g: RingElement) -> Self {
        let spec = g.spec().clone();
        Self { spec, generators: vec![g], canonical: OnceLock::new() }
    }

    pub fn unit(spec: &Arc<GroupRingSpec>) -> Self {
        Self::principal(RingElement::one(spec))
    }

    pub fn zero(spec: &Arc<GroupRingSpec>) -> Self {
        Self { spec: spec.clone(), generators: Vec::new(), canonical: OnceLock::new() }
    }

    pub fn spec(&self) -> &Arc<GroupRingSpec> {
        &self.spec
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    fn canonical_data(&self) -> &Canonical {
        self.canonical.get_or_init(|| {
            let spec = &self.spec;
            let mut builder = HowellBuilder::new(*spec.coeff_ring(), spec.basis_size());
            let mut seen: Vec<&RingElement> = Vec::new();
            for g in &self.generators {
                if g.is_zero() || seen.contains(&g) {
                    continue;
                }
                seen.push(g);
                // the span so far is an ideal, so a member adds nothing
                if builder.contains(g.coeffs()) {
                    continue;
                }
                for b in 0..spec.basis_size() {
                    let gb = g.mul_basis(b);
                    if !gb.is_zero() {
                        builder.insert(gb.coeffs().to_vec());
                    }
                }
            }
            let howell = builder.to_howell();
            Canonical { builder, howell }
        })
    }

    /// Howell form of the ideal as a ℤ/pᵏ-module.
    pub fn canonical(&self) -> &CoeffMatrix {
        &self.canonical_data().howell
    }

    pub fn contains(&self, x: &RingElement) -> Result<bool> {
        if !x.spec().same(&self.spec) {
            return Err(Error::SpecMismatch);
        }
        Ok(self.canonical_data().builder.contains(x.coeffs()))
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().nrows() == 0
    }

    pub fn is_unit(&self) -> bool {
        self.contains(&RingElement::one(&self.spec)).expect("same spec")
    }

    /// Length of the ideal as a ℤ/pᵏ-module, i.e. log_p of its cardinality.
    pub fn length(&self) -> u32 {
        let ring = self.spec.coeff_ring();
        self.canonical()
            .rows()
            .iter()
            .map(|r| {
                let pivot = r.iter().find(|&&x| x != 0).expect("nonzero row");
                ring.k() - ring.valuation(*pivot)
            })
            .sum()
    }

    /// Image of the generators under a ring homomorphism.
    pub fn image(&self, hom: &RingHom) -> Result<Ideal> {
        if !hom.source().same(&self.spec) {
            return Err(Error::SpecMismatch);
        }
        let gens = self.generators.iter().map(|g| hom.apply(g)).collect::<Result<_>>()?;
        Ideal::new(hom.target(), gens)
    }

    /// A short generating set. Candidates are the given generators, then the
    /// Howell rows read as ring elements, each group in order of increasing
    /// T-degree and size; a candidate is kept only when not already in the
    /// ideal generated by the earlier choices.
    pub fn reduced_generators(&self) -> Vec<RingElement> {
        let spec = &self.spec;
        let key = |x: &RingElement| (x.t_degree().unwrap_or(0), x.terms().count());
        let mut candidates: Vec<RingElement> = self.generators.iter().filter(|g| !g.is_zero()).cloned().collect();
        candidates.sort_by_key(key);
        let mut rows: Vec<RingElement> = self
            .canonical()
            .rows()
            .iter()
            .map(|r| RingElement::from_coeffs(spec, r.clone()).expect("basis-sized row"))
            .collect();
        rows.sort_by_key(key);
        candidates.extend(rows);
        let mut builder = HowellBuilder::new(*spec.coeff_ring(), spec.basis_size());
        let mut kept = Vec::new();
        for x in candidates {
            if builder.contains(x.coeffs()) {
                continue;
            }
            for b in 0..spec.basis_size() {
                let xb = x.mul_basis(b);
                if !xb.is_zero() {
                    builder.insert(xb.coeffs().to_vec());
                }
            }
            kept.push(x);
        }
        kept
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.generators).finish()
    }
}

fn check_specs(a: &Ideal, b: &Ideal) -> Result<()> {
    if a.spec.same(&b.spec) {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

/// Equality of the ideals' images in the truncated ring.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool> {
    check_specs(a, b)?;
    Ok(a.canonical() == b.canonical())
}

pub fn ideal_sum(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    check_specs(a, b)?;
    let gens = a.generators.iter().chain(&b.generators).cloned().collect();
    Ideal::new(&a.spec, gens)
}

pub fn ideal_mul(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    check_specs(a, b)?;
    let mut gens: Vec<RingElement> = Vec::new();
    for x in &a.generators {
        for y in &b.generators {
            let p = x * y;
            if !p.is_zero() && !gens.contains(&p) {
                gens.push(p);
            }
        }
    }
    Ideal::new(&a.spec, gens)
}

pub fn ideal_pow(a: &Ideal, e: u32) -> Ideal {
    let mut acc = Ideal::unit(&a.spec);
    for _ in 0..e {
        acc = ideal_mul(&acc, a).expect("same spec");
    }
    acc
}

/// Multiply every generator by a ring element.
pub fn ideal_scale(a: &Ideal, f: &RingElement) -> Result<Ideal> {
    if !f.spec().same(&a.spec) {
        return Err(Error::SpecMismatch);
    }
    Ideal::new(&a.spec, a.generators.iter().map(|g| g * f).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NzdVerdict {
    /// Proven to be a non-zero-divisor of the exact ring.
    Certified,
    /// Proves nothing.
    Inconclusive,
}

/// Sufficient test that `f` is a non-zero-divisor of the untruncated ring.
///
/// For every character χ of Δ, `χ(f)` must have some T-coefficient whose
/// norm from `(ℤ/pᵏ)[x]/Φ_e` to ℤ/pᵏ is nonzero. Such a coefficient is
/// nonzero in every component of `ℤ_p ⊗ ℤ[ζ_e]`, so `χ(f)` is a
/// non-zero-divisor of the power series ring over each component, and the
/// characters jointly embed the group ring.
pub fn nzd_certificate(f: &RingElement) -> NzdVerdict {
    if f.is_zero() {
        return NzdVerdict::Inconclusive;
    }
    for chi in all_characters(f.spec()) {
        let v = char_eval(&chi, f).expect("same spec");
        let ring = v.ring();
        let ok = v.coefficients().iter().any(|c| c.iter().any(|&x| x != 0) && ring.norm(c) != 0);
        if !ok {
            return NzdVerdict::Inconclusive;
        }
    }
    NzdVerdict::Certified
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NzdStatus {
    Certified,
    Assumed,
}

/// `denominator⁻¹ · numerator` inside the total ring of fractions.
#[derive(Clone, Debug)]
pub struct FractionalIdeal {
    numerator: Ideal,
    denominator: RingElement,
    nzd: NzdStatus,
}

impl FractionalIdeal {
    /// Errors when the denominator is zero, or when it cannot be certified
    /// as a non-zero-divisor and `assume_nzd` is false.
    pub fn new(numerator: Ideal, denominator: RingElement, assume_nzd: bool) -> Result<Self> {
        if !denominator.spec().same(numerator.spec()) {
            return Err(Error::SpecMismatch);
        }
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let nzd = match nzd_certificate(&denominator) {
            NzdVerdict::Certified => NzdStatus::Certified,
            NzdVerdict::Inconclusive if assume_nzd => NzdStatus::Assumed,
            NzdVerdict::Inconclusive => return Err(Error::UncertifiedDenominator),
        };
        Ok(Self { numerator, denominator, nzd })
    }

    pub fn integral(numerator: Ideal) -> Self {
        let one = RingElement::one(numerator.spec());
        Self { numerator, denominator: one, nzd: NzdStatus::Certified }
    }

    pub fn numerator(&self) -> &Ideal {
        &self.numerator
    }
    pub fn denominator(&self) -> &RingElement {
        &self.denominator
    }
    pub fn nzd_status(&self) -> NzdStatus {
        self.nzd
    }
    pub fn spec(&self) -> &Arc<GroupRingSpec> {
        self.numerator.spec()
    }

    /// Apply a ring homomorphism to numerator and denominator.
    pub fn image(&self, hom: &RingHom, assume_nzd: bool) -> Result<FractionalIdeal> {
        let num = self.numerator.image(hom)?;
        let den = hom.apply(&self.denominator)?;
        FractionalIdeal::new(num, den, assume_nzd || self.nzd == NzdStatus::Assumed)
    }

    pub fn mul(&self, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        let num = ideal_mul(&self.numerator, &other.numerator)?;
        let den = self.denominator.try_mul(&other.denominator)?;
        let assumed = self.nzd == NzdStatus::Assumed || other.nzd == NzdStatus::Assumed;
        FractionalIdeal::new(num, den, assumed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FracVerdict {
    /// Equal in the truncated ring; `t_precision` is `N − degT f − degT g`.
    EqualAtPrecision { k: u32, t_precision: i64 },
    /// Certainly different.
    Unequal,
}

impl FracVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, FracVerdict::EqualAtPrecision { .. })
    }
}

/// Compare `I/f` and `J/g` by testing `g·I = f·J`.
pub fn frac_equal(x: &FractionalIdeal, y: &FractionalIdeal) -> Result<FracVerdict> {
    if !x.spec().same(y.spec()) {
        return Err(Error::SpecMismatch);
    }
    if x.denominator.is_zero() || y.denominator.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let lhs = ideal_scale(&x.numerator, &y.denominator)?;
    let rhs = ideal_scale(&y.numerator, &x.denominator)?;
    if ideal_equal(&lhs, &rhs)? {
        let spec = x.spec();
        let deg = x.denominator.t_degree().unwrap_or(0) + y.denominator.t_degree().unwrap_or(0);
        Ok(FracVerdict::EqualAtPrecision { k: spec.k(), t_precision: spec.n() as i64 - deg as i64 })
    } else {
        Ok(FracVerdict::Unequal)
    }
}
