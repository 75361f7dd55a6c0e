//! Matrices over the group ring and the free resolutions of the trivial
//! module built from cyclic-group and T-variable complexes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupring::{norm_element, GroupRingSpec, RingElement, RingHom};

#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    spec: Arc<GroupRingSpec>,
    nrows: usize,
    ncols: usize,
    entries: Vec<RingElement>,
}

impl RingMatrix {
    /// Row-major entries.
    pub fn new(spec: &Arc<GroupRingSpec>, nrows: usize, ncols: usize, entries: Vec<RingElement>) -> Result<Self> {
        if entries.len() != nrows * ncols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {nrows}x{ncols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.spec().same(spec)) {
            return Err(Error::SpecMismatch);
        }
        Ok(Self { spec: spec.clone(), nrows, ncols, entries })
    }

    pub fn from_rows(spec: &Arc<GroupRingSpec>, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(spec, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(spec: &Arc<GroupRingSpec>, nrows: usize, ncols: usize) -> Self {
        Self { spec: spec.clone(), nrows, ncols, entries: vec![RingElement::zero(spec); nrows * ncols] }
    }

    /// `f` times the n×n identity.
    pub fn scalar(f: &RingElement, n: usize) -> Self {
        let mut m = Self::zeros(f.spec(), n, n);
        for i in 0..n {
            m.entries[i * n + i] = f.clone();
        }
        m
    }

    pub fn identity(spec: &Arc<GroupRingSpec>, n: usize) -> Self {
        Self::scalar(&RingElement::one(spec), n)
    }

    pub fn spec(&self) -> &Arc<GroupRingSpec> {
        &self.spec
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RingElement) -> Result<()> {
        if !x.spec().same(&self.spec) {
            return Err(Error::SpecMismatch);
        }
        if i >= self.nrows || j >= self.ncols {
            return Err(Error::IndexOutOfRange(format!("({i},{j}) in {}x{}", self.nrows, self.ncols)));
        }
        self.entries[i * self.ncols + j] = x;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if !self.spec.same(&other.spec) {
            return Err(Error::SpecMismatch);
        }
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = Self::zeros(&self.spec, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for l in 0..self.ncols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let e = &mut out.entries[i * other.ncols + j];
                        *e = &*e + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.ncols {
            for i in 0..self.nrows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { spec: self.spec.clone(), nrows: self.ncols, ncols: self.nrows, entries }
    }

    pub fn block_diag(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if !self.spec.same(&other.spec) {
            return Err(Error::SpecMismatch);
        }
        let mut out = Self::zeros(&self.spec, self.nrows + other.nrows, self.ncols + other.ncols);
        let w = out.ncols;
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.entries[i * w + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.nrows {
            for j in 0..other.ncols {
                out.entries[(self.nrows + i) * w + self.ncols + j] = other.get(i, j).clone();
            }
        }
        Ok(out)
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hcat(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if !self.spec.same(&other.spec) {
            return Err(Error::SpecMismatch);
        }
        if self.nrows != other.nrows {
            return Err(Error::DimensionMismatch(format!("hcat of {} and {} rows", self.nrows, other.nrows)));
        }
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        for i in 0..self.nrows {
            entries.extend_from_slice(&self.entries[i * self.ncols..(i + 1) * self.ncols]);
            entries.extend_from_slice(&other.entries[i * other.ncols..(i + 1) * other.ncols]);
        }
        Ok(Self { spec: self.spec.clone(), nrows: self.nrows, ncols: self.ncols + other.ncols, entries })
    }

    pub fn select_columns(&self, cols: &[usize]) -> RingMatrix {
        let mut entries = Vec::with_capacity(self.nrows * cols.len());
        for i in 0..self.nrows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { spec: self.spec.clone(), nrows: self.nrows, ncols: cols.len(), entries }
    }

    pub fn select_rows(&self, rows: &[usize]) -> RingMatrix {
        let mut entries = Vec::with_capacity(rows.len() * self.ncols);
        for &i in rows {
            entries.extend_from_slice(&self.entries[i * self.ncols..(i + 1) * self.ncols]);
        }
        Self { spec: self.spec.clone(), nrows: rows.len(), ncols: self.ncols, entries }
    }

    /// Apply a ring homomorphism entrywise.
    pub fn map_hom(&self, hom: &RingHom) -> Result<RingMatrix> {
        if !hom.source().same(&self.spec) {
            return Err(Error::SpecMismatch);
        }
        let entries = self.entries.iter().map(|e| hom.apply(e)).collect::<Result<_>>()?;
        Ok(Self { spec: hom.target().clone(), nrows: self.nrows, ncols: self.ncols, entries })
    }

    pub fn map_entries(&self, f: impl Fn(&RingElement) -> RingElement) -> RingMatrix {
        let entries: Vec<RingElement> = self.entries.iter().map(f).collect();
        let spec = entries.first().map_or(self.spec.clone(), |e| e.spec().clone());
        Self { spec, nrows: self.nrows, ncols: self.ncols, entries }
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Label of a basis element of a tensor-product term: the degree and the
/// basis index contributed by each factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeLabel {
    pub degrees: Vec<usize>,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    spec: Arc<GroupRingSpec>,
    ranks: Vec<usize>,
    boundaries: Vec<RingMatrix>,
    degree_labels: Vec<Vec<DegreeLabel>>,
}

impl ChainComplex {
    /// `boundaries[j-1]` is `d_j : C_j → C_{j-1}`, an `r_{j-1} × r_j` matrix.
    pub fn new(spec: &Arc<GroupRingSpec>, r0: usize, boundaries: Vec<RingMatrix>) -> Result<Self> {
        let mut ranks = vec![r0];
        for (j, d) in boundaries.iter().enumerate() {
            if !d.spec().same(spec) {
                return Err(Error::SpecMismatch);
            }
            if d.nrows() != ranks[j] {
                return Err(Error::DimensionMismatch(format!("d_{} has {} rows, expected {}", j + 1, d.nrows(), ranks[j])));
            }
            ranks.push(d.ncols());
        }
        let degree_labels = ranks
            .iter()
            .enumerate()
            .map(|(n, &r)| (0..r).map(|a| DegreeLabel { degrees: vec![n], indices: vec![a] }).collect())
            .collect();
        Ok(Self { spec: spec.clone(), ranks, boundaries, degree_labels })
    }

    pub fn spec(&self) -> &Arc<GroupRingSpec> {
        &self.spec
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    /// Highest degree present.
    pub fn length(&self) -> usize {
        self.boundaries.len()
    }
    pub fn boundaries(&self) -> &[RingMatrix] {
        &self.boundaries
    }
    pub fn degree_labels(&self) -> &[Vec<DegreeLabel>] {
        &self.degree_labels
    }

    /// `d_j` for `1 ≤ j ≤ length`.
    pub fn boundary(&self, j: usize) -> Result<&RingMatrix> {
        if j == 0 || j > self.boundaries.len() {
            return Err(Error::IndexOutOfRange(format!("boundary d_{j} of a length-{} complex", self.boundaries.len())));
        }
        Ok(&self.boundaries[j - 1])
    }

    /// Whether `d_{j-1}·d_j = 0` for all j.
    pub fn is_complex(&self) -> bool {
        self.boundaries.windows(2).all(|w| w[0].mul(&w[1]).map(|m| m.is_zero()).unwrap_or(false))
    }
}

/// `… → R --𝒩ᵢ--> R --δᵢ−1--> R → 0` up to degree `length`.
pub fn cyclic_complex(spec: &Arc<GroupRingSpec>, i: usize, length: usize) -> Result<ChainComplex> {
    cyclic_complex_with(spec, i, 1, length)
}

/// The cyclic complex for the generator `δᵢ^u` of the i-th factor.
pub fn cyclic_complex_with(spec: &Arc<GroupRingSpec>, i: usize, u: usize, length: usize) -> Result<ChainComplex> {
    if i >= spec.s() {
        return Err(Error::IndexOutOfRange(format!("cyclic factor {i} of {}", spec.s())));
    }
    if length == 0 {
        return Err(Error::InvalidSpec("complex length must be at least 1".into()));
    }
    let m = spec.orders()[i];
    if crate::arith::gcd(u as u64, m as u64) != 1 {
        return Err(Error::InvalidSpec(format!("exponent {u} is not prime to the order {m}")));
    }
    let gen = RingElement::delta_pow(spec, i, u % m)?;
    let tau = &gen - &RingElement::one(spec);
    // the norm does not depend on the generator
    let norm = norm_element(spec, &[i])?;
    let boundaries = (1..=length)
        .map(|j| {
            let e = if j % 2 == 1 { tau.clone() } else { norm.clone() };
            RingMatrix::new(spec, 1, 1, vec![e]).expect("1x1")
        })
        .collect();
    ChainComplex::new(spec, 1, boundaries)
}

/// `0 → R --T_j--> R → 0`.
pub fn t_complex(spec: &Arc<GroupRingSpec>, j: usize) -> Result<ChainComplex> {
    let t = RingElement::t_var(spec, j)?;
    ChainComplex::new(spec, 1, vec![RingMatrix::new(spec, 1, 1, vec![t])?])
}

/// Multi-degrees of total degree `n`, first factor's degree highest first.
fn multidegrees(lengths: &[usize], n: usize) -> Vec<Vec<usize>> {
    fn rec(lengths: &[usize], n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if lengths.is_empty() {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest: usize = lengths[1..].iter().sum();
        let hi = lengths[0].min(n);
        let lo = n.saturating_sub(rest);
        if lo > hi {
            return;
        }
        for a in (lo..=hi).rev() {
            prefix.push(a);
            rec(&lengths[1..], n - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(lengths, n, &mut Vec::new(), &mut out);
    out
}

fn index_tuples(ranks: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in ranks {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..r).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Total complex of the tensor product up to degree `length`, with the
/// Koszul sign `d(x⊗y) = dx⊗y + (−1)^{deg x} x⊗dy`.
///
/// Each factor contributes the terms it has; a truncated factor must reach
/// at least degree `length` for the result to be the true total complex.
/// Basis order: multi-degrees with the first factor's degree highest
/// first, then basis indices in lexicographic order.
pub fn tensor(factors: &[ChainComplex], length: usize) -> Result<ChainComplex> {
    let Some(first) = factors.first() else {
        return Err(Error::InvalidSpec("empty tensor product".into()));
    };
    let spec = first.spec.clone();
    if factors.iter().any(|c| !c.spec.same(&spec)) {
        return Err(Error::SpecMismatch);
    }
    let lengths: Vec<usize> = factors.iter().map(|c| c.length()).collect();
    let mut labels: Vec<Vec<DegreeLabel>> = Vec::new();
    for n in 0..=length {
        let mut basis = Vec::new();
        for degs in multidegrees(&lengths, n) {
            let ranks: Vec<usize> = degs.iter().zip(factors).map(|(&a, c)| c.ranks[a]).collect();
            for idx in index_tuples(&ranks) {
                basis.push(DegreeLabel { degrees: degs.clone(), indices: idx });
            }
        }
        if basis.is_empty() {
            break;
        }
        labels.push(basis);
    }
    let mut boundaries = Vec::new();
    for n in 1..labels.len() {
        let position: HashMap<&DegreeLabel, usize> = labels[n - 1].iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut d = RingMatrix::zeros(&spec, labels[n - 1].len(), labels[n].len());
        for (col, lab) in labels[n].iter().enumerate() {
            let mut prefix_degree = 0;
            for (f, c) in factors.iter().enumerate() {
                let a = lab.degrees[f];
                if a > 0 {
                    let df = &c.boundaries[a - 1];
                    let sign_neg = prefix_degree % 2 == 1;
                    for b in 0..df.nrows() {
                        let e = df.get(b, lab.indices[f]);
                        if e.is_zero() {
                            continue;
                        }
                        let mut target = lab.clone();
                        target.degrees[f] -= 1;
                        target.indices[f] = b;
                        let row = position[&target];
                        let v = if sign_neg { -e } else { e.clone() };
                        let cur = d.get(row, col);
                        let sum = cur + &v;
                        d.entries[row * d.ncols + col] = sum;
                    }
                }
                prefix_degree += a;
            }
        }
        boundaries.push(d);
    }
    let ranks = labels.iter().map(|l| l.len()).collect();
    Ok(ChainComplex { spec, ranks, boundaries, degree_labels: labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: i64, k: i64) -> i64 {
        if k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Coefficients of (1+x)^t / (1−x)^s.
    fn expected_ranks(s: i64, t: i64, len: usize) -> Vec<usize> {
        (0..=len as i64)
            .map(|j| {
                let v: i64 = (0..=j).map(|a| binom(t, a) * if s == 0 { (j == a) as i64 } else { binom(s + j - a - 1, j - a) }).sum();
                v as usize
            })
            .collect()
    }

    #[test]
    fn cyclic_boundaries() {
        let spec = GroupRingSpec::new(3, 2, vec![3], 1, 3).unwrap();
        let c = cyclic_complex(&spec, 0, 3).unwrap();
        let tau = RingElement::tau(&spec, 0).unwrap();
        assert_eq!(c.boundary(1).unwrap().get(0, 0), &tau);
        assert_eq!(c.boundary(2).unwrap().get(0, 0), &norm_element(&spec, &[0]).unwrap());
        assert_eq!(c.boundary(3).unwrap().get(0, 0), &tau);
        assert!(c.is_complex());
        assert!(cyclic_complex(&spec, 1, 3).is_err());
        let s2 = GroupRingSpec::new(3, 2, vec![2], 0, 1).unwrap();
        let one_plus_delta = &RingElement::one(&s2) + &RingElement::delta(&s2, 0).unwrap();
        assert_eq!(cyclic_complex(&s2, 0, 2).unwrap().boundary(2).unwrap().get(0, 0), &one_plus_delta);
    }

    #[test]
    fn t_complex_squared() {
        let spec = GroupRingSpec::new(3, 2, vec![], 1, 3).unwrap();
        let t = t_complex(&spec, 0).unwrap();
        let tt = tensor(&[t.clone(), t], 4).unwrap();
        assert_eq!(tt.ranks(), &[1, 2, 1]);
        assert!(tt.is_complex());
    }

    #[test]
    fn rank_generating_function() {
        let spec = GroupRingSpec::new(3, 2, vec![3, 3, 3], 2, 2).unwrap();
        for s in 1..=3usize {
            for t in 0..=2usize {
                let mut fs: Vec<ChainComplex> = (0..s).map(|i| cyclic_complex(&spec, i, 5).unwrap()).collect();
                fs.extend((0..t).map(|j| t_complex(&spec, j).unwrap()));
                let c = tensor(&fs, 5).unwrap();
                assert_eq!(c.ranks(), expected_ranks(s as i64, t as i64, 5).as_slice(), "s={s} t={t}");
                assert!(c.is_complex());
            }
        }
    }

    #[test]
    fn s2_ranks_are_1234() {
        let spec = GroupRingSpec::new(3, 2, vec![3, 3], 0, 1).unwrap();
        let fs = [cyclic_complex(&spec, 0, 4).unwrap(), cyclic_complex(&spec, 1, 4).unwrap()];
        assert_eq!(tensor(&fs, 3).unwrap().ranks(), &[1, 2, 3, 4]);
    }

    #[test]
    fn single_factor_is_itself() {
        let spec = GroupRingSpec::new(3, 2, vec![3], 1, 3).unwrap();
        let c = cyclic_complex(&spec, 0, 3).unwrap();
        let t = tensor(std::slice::from_ref(&c), 3).unwrap();
        assert_eq!(t.boundaries(), c.boundaries());
    }

    #[test]
    fn cyclic_two_variable_shape() {
        let spec = GroupRingSpec::new(3, 2, vec![3], 1, 3).unwrap();
        let c = tensor(&[cyclic_complex(&spec, 0, 4).unwrap(), t_complex(&spec, 0).unwrap()], 3).unwrap();
        let tau = RingElement::tau(&spec, 0).unwrap();
        let t = RingElement::t_var(&spec, 0).unwrap();
        let n = norm_element(&spec, &[0]).unwrap();
        let z = RingElement::zero(&spec);
        let d1 = RingMatrix::from_rows(&spec, vec![vec![tau.clone(), t.clone()]]).unwrap();
        assert_eq!(c.boundary(1).unwrap(), &d1);
        // basis of C_2 is (2,0),(1,1); of C_1 it is (1,0),(0,1)
        let d2 = RingMatrix::from_rows(&spec, vec![vec![n.clone(), -&t], vec![z.clone(), tau.clone()]]).unwrap();
        assert_eq!(c.boundary(2).unwrap(), &d2);
        let d3 = RingMatrix::from_rows(&spec, vec![vec![tau.clone(), t.clone()], vec![z, n]]).unwrap();
        assert_eq!(c.boundary(3).unwrap(), &d3);
        assert_eq!(c.degree_labels()[2][1].degrees, vec![1, 1]);
    }

    #[test]
    fn matrix_ops() {
        let spec = GroupRingSpec::new(3, 2, vec![3], 1, 3).unwrap();
        let tau = RingElement::tau(&spec, 0).unwrap();
        let t = RingElement::t_var(&spec, 0).unwrap();
        let a = RingMatrix::from_rows(&spec, vec![vec![tau.clone(), t.clone()]]).unwrap();
        assert_eq!(a.transpose().transpose(), a);
        let i2 = RingMatrix::identity(&spec, 2);
        assert_eq!(a.mul(&i2).unwrap(), a);
        assert!(a.mul(&a).is_err());
        let b = a.block_diag(&a).unwrap();
        assert_eq!((b.nrows(), b.ncols()), (2, 4));
        assert_eq!(a.hcat(&a).unwrap().ncols(), 4);
        assert_eq!(b.get(1, 2), &tau);
    }
}
