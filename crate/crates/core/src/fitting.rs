//! Fitting ideals of finitely presented modules.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::complexes::RingMatrix;
use crate::error::{Error, Result};
use crate::groupring::{GroupRingSpec, RingElement, RingHom};
use crate::ideals::Ideal;

/// `coker(h : R^b → R^a)` for an `a × b` matrix `h`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    presentation: RingMatrix,
    annihilator_witness: Option<RingElement>,
}

impl PresentedModule {
    pub fn new(presentation: RingMatrix) -> Self {
        Self { presentation, annihilator_witness: None }
    }

    /// Record an element declared to kill the module.
    pub fn with_annihilator(mut self, f: RingElement) -> Result<Self> {
        if !f.spec().same(self.spec()) {
            return Err(Error::SpecMismatch);
        }
        self.annihilator_witness = Some(f);
        Ok(self)
    }

    /// `R/(f₁, …, f_r)`.
    pub fn cyclic(relations: &[RingElement]) -> Result<Self> {
        let spec = relations.first().ok_or_else(|| Error::InvalidSpec("no relations".into()))?.spec().clone();
        Ok(Self::new(RingMatrix::new(&spec, 1, relations.len(), relations.to_vec())?))
    }

    /// The trivial module `R/(δ₁−1, …, δ_s−1, T₁, …, T_d)`.
    pub fn trivial(spec: &Arc<GroupRingSpec>) -> Self {
        let mut rels: Vec<RingElement> = (0..spec.s()).map(|i| RingElement::tau(spec, i).expect("in range")).collect();
        rels.extend((0..spec.d()).map(|j| RingElement::t_var(spec, j).expect("in range")));
        Self::new(RingMatrix::new(spec, 1, rels.len(), rels).expect("shape"))
    }

    pub fn spec(&self) -> &Arc<GroupRingSpec> {
        self.presentation.spec()
    }
    pub fn presentation(&self) -> &RingMatrix {
        &self.presentation
    }
    pub fn annihilator_witness(&self) -> Option<&RingElement> {
        self.annihilator_witness.as_ref()
    }
}

/// Extend a level-`l` table of minors (row subset → determinant on the
/// chosen columns) by one more column.
fn extend_table(h: &RingMatrix, table: &HashMap<u64, RingElement>, col: usize, level: usize) -> HashMap<u64, RingElement> {
    let a = h.nrows();
    let mut next: HashMap<u64, RingElement> = HashMap::new();
    for (&mask, val) in table {
        for r in 0..a {
            if mask >> r & 1 == 1 {
                continue;
            }
            let e = h.get(r, col);
            if e.is_zero() {
                continue;
            }
            // Laplace expansion along the last column
            let pos = (mask & ((1u64 << r) - 1)).count_ones() as usize;
            let term = e * val;
            if term.is_zero() {
                continue;
            }
            let term = if (pos + level) % 2 == 1 { -term } else { term };
            next.entry(mask | 1 << r)
                .and_modify(|acc| *acc = &*acc + &term)
                .or_insert(term);
        }
    }
    next.retain(|_, v| !v.is_zero());
    next
}

fn minors_dfs(h: &RingMatrix, table: &HashMap<u64, RingElement>, start: usize, level: usize, out: &mut Vec<RingElement>) {
    let (a, b) = (h.nrows(), h.ncols());
    if level == a {
        out.extend(table.values().cloned());
        return;
    }
    for c in start..=b - (a - level) {
        let next = extend_table(h, table, c, level);
        if !next.is_empty() {
            minors_dfs(h, &next, c + 1, level + 1, out);
        }
    }
}

/// All nonzero maximal minors of an `a × b` matrix with `a ≤ b`, without
/// duplicates. Column subsets are walked depth first; each level shares the
/// table of sub-determinants with all its extensions, and the first-column
/// choices run in parallel.
///
/// Panics when `a > 64`, far beyond any size this method can finish.
pub fn maximal_minors(h: &RingMatrix) -> Vec<RingElement> {
    let (a, b) = (h.nrows(), h.ncols());
    assert!(a <= 64, "row subsets are bitmasks");
    if a == 0 {
        return vec![RingElement::one(h.spec())];
    }
    if b < a {
        return Vec::new();
    }
    let mut root = HashMap::new();
    root.insert(0u64, RingElement::one(h.spec()));
    let mut minors: Vec<RingElement> = (0..=b - a)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut out = Vec::new();
            let t = extend_table(h, &root, c, 0);
            if !t.is_empty() {
                minors_dfs(h, &t, c + 1, 1, &mut out);
            }
            out
        })
        .collect();
    minors.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
    minors.dedup();
    minors
}

/// The ideal generated by the `a × a` minors of the presentation; the unit
/// ideal when `a = 0` and the zero ideal when `b < a`.
pub fn fitting_ideal(m: &PresentedModule) -> Ideal {
    Ideal::new(m.spec(), maximal_minors(&m.presentation)).expect("minors share the spec")
}

/// A relation killed when passing to a quotient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Killed {
    /// `δᵢ ↦ 1`, kill element `δᵢ − 1`.
    Delta(usize),
    /// `T_j ↦ 0`, kill element `T_j`.
    T(usize),
}

impl Killed {
    pub fn element(&self, spec: &Arc<GroupRingSpec>) -> Result<RingElement> {
        match *self {
            Killed::Delta(i) => RingElement::tau(spec, i),
            Killed::T(j) => RingElement::t_var(spec, j),
        }
    }
}

fn split_killed(killed: &[Killed]) -> (Vec<usize>, Vec<usize>) {
    let mut factors = Vec::new();
    let mut t_vars = Vec::new();
    for k in killed {
        match *k {
            Killed::Delta(i) => factors.push(i),
            Killed::T(j) => t_vars.push(j),
        }
    }
    factors.sort_unstable();
    factors.dedup();
    t_vars.sort_unstable();
    t_vars.dedup();
    (factors, t_vars)
}

/// Same coefficient tuples, read in the bigger ring (exponent 0 for every
/// generator the quotient dropped).
pub fn lift_element(x: &RingElement, target: &Arc<GroupRingSpec>, killed: &[Killed]) -> Result<RingElement> {
    let (factors, t_vars) = split_killed(killed);
    let expected = target.without(&factors, &t_vars)?;
    if !x.spec().same(&expected) {
        return Err(Error::IncompatibleSpecs(format!("{} is not the quotient of {target}", x.spec())));
    }
    let src = x.spec();
    let mut coeffs = vec![0u64; target.basis_size()];
    let mut a = vec![0usize; target.s()];
    let mut bexp = vec![0usize; target.d()];
    for (idx, c) in x.terms() {
        let (g, t) = src.split_index(idx);
        let mut ga = src.group_exps(g).iter();
        for (i, slot) in a.iter_mut().enumerate() {
            *slot = if factors.contains(&i) { 0 } else { *ga.next().expect("factor count") };
        }
        let mut tb = src.t_exps(t).iter();
        for (j, slot) in bexp.iter_mut().enumerate() {
            *slot = if t_vars.contains(&j) { 0 } else { *tb.next().expect("variable count") };
        }
        coeffs[target.index_of(&a, &bexp)?] = c;
    }
    RingElement::from_coeffs(target, coeffs)
}

/// Lift a presentation over `R/(f₁, …, f_r)` to `R`: entries are lifted
/// verbatim and a block `f_t·I_a` is appended for each killed relation, in
/// the order given.
pub fn lift_presentation(m: &PresentedModule, target: &Arc<GroupRingSpec>, killed: &[Killed]) -> Result<PresentedModule> {
    let h = &m.presentation;
    let entries =
        h.entries().iter().map(|e| lift_element(e, target, killed)).collect::<Result<Vec<_>>>()?;
    if killed.is_empty() && !m.spec().same(target) {
        return Err(Error::IncompatibleSpecs(format!("{} vs {target}", m.spec())));
    }
    let mut lifted = RingMatrix::new(target, h.nrows(), h.ncols(), entries)?;
    for k in killed {
        let f = k.element(target)?;
        lifted = lifted.hcat(&RingMatrix::scalar(&f, h.nrows()))?;
    }
    Ok(PresentedModule::new(lifted))
}

/// The module presented by `hᵀ`.
pub fn transpose_dual(m: &PresentedModule) -> Result<PresentedModule> {
    let h = &m.presentation;
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare { rows: h.nrows(), cols: h.ncols() });
    }
    Ok(PresentedModule::new(h.transpose()))
}

pub fn direct_sum(m1: &PresentedModule, m2: &PresentedModule) -> Result<PresentedModule> {
    Ok(PresentedModule::new(m1.presentation.block_diag(&m2.presentation)?))
}

/// `R' ⊗_R M` along a ring homomorphism.
pub fn base_change(m: &PresentedModule, hom: &RingHom) -> Result<PresentedModule> {
    Ok(PresentedModule::new(m.presentation.map_hom(hom)?))
}

/// Restriction of scalars to the coefficient ring `(ℤ/pᵏ)[T₁…T_d]`, over
/// which the group ring is free on the group elements. Each entry becomes
/// the matrix of multiplication by it.
pub fn restrict_scalars(m: &PresentedModule) -> PresentedModule {
    let spec = m.spec();
    let base = spec.augmented();
    let gs = spec.group_size();
    let ts = spec.t_size();
    let h = &m.presentation;
    let mut out = RingMatrix::zeros(&base, h.nrows() * gs, h.ncols() * gs);
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            let x = h.get(i, j);
            // split x into its T-polynomial coefficients x_g
            let mut parts: Vec<Vec<u64>> = vec![vec![0; ts]; gs];
            for (idx, c) in x.terms() {
                let (g, t) = spec.split_index(idx);
                parts[g][t] = c;
            }
            for (g, part) in parts.into_iter().enumerate() {
                if part.iter().all(|&c| c == 0) {
                    continue;
                }
                let xg = RingElement::from_coeffs(&base, part).expect("t-sized");
                for hcol in 0..gs {
                    // x_g·δ^g·δ^h lands on the basis element δ^{g+h}
                    let row = spec.split_index(spec.mul_index(g * ts, hcol * ts).expect("no T part")).0;
                    out.set(i * gs + row, j * gs + hcol, xg.clone()).expect("in range");
                }
            }
        }
    }
    PresentedModule::new(out)
}
