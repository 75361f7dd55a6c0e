//! Canonical row spans over the chain ring ℤ/pᵏ via the Howell normal form.
//!
//! A matrix is in Howell form when it is in row echelon form, every pivot is
//! a power `p^e` with `e < k`, entries above a pivot are reduced into
//! `[0, p^e)`, zero rows are gone, and every element of the row span whose
//! first `c` entries vanish is a combination of the rows with pivot column
//! `≥ c`. The last condition makes reduction against the rows a complete
//! membership test and makes the form unique for each span.

use crate::arith::ChainRing;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffMatrix {
    ring: ChainRing,
    ncols: usize,
    rows: Vec<Vec<u64>>,
}

impl CoeffMatrix {
    pub fn new(ring: ChainRing, ncols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch(format!("row of length {} in a {ncols}-column matrix", r.len())));
        }
        let m = ring.modulus();
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x % m).collect()).collect();
        Ok(Self { ring, ncols, rows })
    }

    /// Build from signed entries.
    pub fn from_i64(ring: ChainRing, ncols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.iter().map(|&x| ring.reduce_i128(x as i128)).collect()).collect();
        Self::new(ring, ncols, rows)
    }

    pub fn identity(ring: ChainRing, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1 % ring.modulus();
                r
            })
            .collect();
        Self { ring, ncols: n, rows }
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
    pub fn into_rows(self) -> Vec<Vec<u64>> {
        self.rows
    }
}

/// Incremental Howell basis: at most one row per pivot column.
#[derive(Clone, Debug)]
pub struct HowellBuilder {
    ring: ChainRing,
    ncols: usize,
    slots: Vec<Option<Vec<u64>>>,
}

impl HowellBuilder {
    pub fn new(ring: ChainRing, ncols: usize) -> Self {
        Self { ring, ncols, slots: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of nonzero rows currently held.
    pub fn rank_rows(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Add a vector to the span.
    pub fn insert(&mut self, row: Vec<u64>) {
        debug_assert_eq!(row.len(), self.ncols);
        let ring = self.ring;
        let mut pending = vec![row];
        while let Some(mut r) = pending.pop() {
            let mut start = 0;
            loop {
                let Some(c) = (start..self.ncols).find(|&c| r[c] != 0) else { break };
                start = c;
                let (v, u) = ring.split(r[c]);
                if u != 1 {
                    let u_inv = ring.inv(u).expect("unit");
                    for x in &mut r[c..] {
                        *x = ring.mul(*x, u_inv);
                    }
                }
                match &mut self.slots[c] {
                    None => {
                        let ann = annihilator_multiple(&ring, &r, c, v);
                        self.slots[c] = Some(r);
                        if let Some(ann) = ann {
                            pending.push(ann);
                        }
                        break;
                    }
                    Some(s) => {
                        let f = ring.valuation(s[c]);
                        if v >= f {
                            let q = ring.p_pow(v - f);
                            sub_scaled(&ring, &mut r, s, q, c);
                        } else {
                            // the new row has the smaller pivot; it takes the slot
                            let ann = annihilator_multiple(&ring, &r, c, v);
                            let mut old = std::mem::replace(s, r);
                            let q = ring.p_pow(f - v);
                            sub_scaled(&ring, &mut old, s, q, c);
                            if let Some(ann) = ann {
                                pending.push(ann);
                            }
                            r = old;
                        }
                    }
                }
            }
        }
    }

    /// Reduce a vector against the basis; the remainder is zero iff the
    /// vector lies in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut v = v.to_vec();
        for c in 0..self.ncols {
            if v[c] == 0 {
                continue;
            }
            let Some(s) = &self.slots[c] else { return v };
            let f = ring.valuation(s[c]);
            if ring.valuation(v[c]) < f {
                return v;
            }
            let q = v[c] / ring.p_pow(f);
            sub_scaled(&ring, &mut v, s, q, c);
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// The Howell normal form of the span.
    pub fn to_howell(&self) -> CoeffMatrix {
        let ring = self.ring;
        let mut rows: Vec<(usize, Vec<u64>)> =
            self.slots.iter().enumerate().filter_map(|(c, s)| s.clone().map(|r| (c, r))).collect();
        for i in 0..rows.len() {
            let (c, pivot_row) = (rows[i].0, rows[i].1.clone());
            let pv = pivot_row[c];
            for row in rows.iter_mut().take(i) {
                let x = row.1[c];
                if x >= pv {
                    sub_scaled(&ring, &mut row.1, &pivot_row, x / pv, c);
                }
            }
        }
        CoeffMatrix { ring, ncols: self.ncols, rows: rows.into_iter().map(|(_, r)| r).collect() }
    }
}

/// `p^(k-v)·r` when it is nonzero (its pivot entry vanishes).
fn annihilator_multiple(ring: &ChainRing, r: &[u64], c: usize, v: u32) -> Option<Vec<u64>> {
    if v == 0 {
        // unit pivot: p^k·r = 0
        return None;
    }
    let q = ring.p_pow(ring.k() - v);
    let mut out = vec![0u64; r.len()];
    let mut nonzero = false;
    for j in c + 1..r.len() {
        out[j] = ring.mul(r[j], q);
        nonzero |= out[j] != 0;
    }
    nonzero.then_some(out)
}

/// `r -= q·s` on columns `from..`.
#[inline]
fn sub_scaled(ring: &ChainRing, r: &mut [u64], s: &[u64], q: u64, from: usize) {
    if q == 0 {
        return;
    }
    for (x, &y) in r[from..].iter_mut().zip(&s[from..]) {
        if y != 0 {
            *x = ring.sub(*x, ring.mul(q, y));
        }
    }
}

/// The Howell normal form of the row span of `a`.
pub fn howell_form(a: &CoeffMatrix) -> CoeffMatrix {
    let mut b = HowellBuilder::new(a.ring, a.ncols);
    for r in &a.rows {
        b.insert(r.clone());
    }
    b.to_howell()
}

fn check_compatible(a: &CoeffMatrix, b: &CoeffMatrix) -> Result<()> {
    if a.ncols != b.ncols || a.ring != b.ring {
        return Err(Error::DimensionMismatch(format!(
            "{} columns mod {} vs {} columns mod {}",
            a.ncols,
            a.ring.modulus(),
            b.ncols,
            b.ring.modulus()
        )));
    }
    Ok(())
}

pub fn same_span(a: &CoeffMatrix, b: &CoeffMatrix) -> Result<bool> {
    check_compatible(a, b)?;
    Ok(howell_form(a) == howell_form(b))
}

pub fn member(v: &[u64], a: &CoeffMatrix) -> Result<bool> {
    if v.len() != a.ncols {
        return Err(Error::DimensionMismatch(format!("vector of length {} vs {} columns", v.len(), a.ncols)));
    }
    let m = a.ring.modulus();
    let v: Vec<u64> = v.iter().map(|x| x % m).collect();
    let mut b = HowellBuilder::new(a.ring, a.ncols);
    for r in &a.rows {
        b.insert(r.clone());
    }
    Ok(b.contains(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn z(p: u64, k: u32) -> ChainRing {
        ChainRing::new(p, k).unwrap()
    }

    /// Full span by closure under addition and scalar multiplication.
    fn brute_span(ring: &ChainRing, rows: &[Vec<u64>], ncols: usize) -> BTreeSet<Vec<u64>> {
        let mut span = BTreeSet::new();
        span.insert(vec![0; ncols]);
        loop {
            let mut grew = false;
            let current: Vec<Vec<u64>> = span.iter().cloned().collect();
            for v in &current {
                for r in rows {
                    for c in 0..ring.modulus() {
                        let w: Vec<u64> = v.iter().zip(r).map(|(&a, &b)| ring.add(a, ring.mul(c, b))).collect();
                        grew |= span.insert(w);
                    }
                }
            }
            if !grew {
                return span;
            }
        }
    }

    #[test]
    fn howell_example_z4() {
        let r = z(2, 2);
        let a = CoeffMatrix::new(r, 2, vec![vec![2, 1]]).unwrap();
        let h = howell_form(&a);
        assert_eq!(h.rows(), &[vec![2, 1], vec![0, 2]]);
        // the frozen value agrees with the brute-force closure
        assert_eq!(brute_span(&r, a.rows(), 2), brute_span(&r, h.rows(), 2));
    }

    #[test]
    fn identity_and_zero() {
        let r = z(3, 2);
        let id = CoeffMatrix::identity(r, 3);
        assert_eq!(howell_form(&id), id);
        let zero = CoeffMatrix::new(r, 2, vec![vec![0, 0]]).unwrap();
        assert_eq!(howell_form(&zero).nrows(), 0);
    }

    #[test]
    fn same_span_examples() {
        let r = z(2, 2);
        let a = CoeffMatrix::new(r, 2, vec![vec![2, 1]]).unwrap();
        let b = CoeffMatrix::new(r, 2, vec![vec![2, 1], vec![0, 2]]).unwrap();
        assert!(same_span(&a, &b).unwrap());
        let e1 = CoeffMatrix::new(r, 2, vec![vec![1, 0]]).unwrap();
        let e2 = CoeffMatrix::new(r, 2, vec![vec![0, 1]]).unwrap();
        assert!(!same_span(&e1, &e2).unwrap());
        assert!(same_span(&a, &a).unwrap());
        let wide = CoeffMatrix::new(r, 3, vec![vec![1, 0, 0]]).unwrap();
        assert!(matches!(same_span(&a, &wide), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn member_examples() {
        let r = z(2, 2);
        let a = CoeffMatrix::new(r, 2, vec![vec![2, 1]]).unwrap();
        assert!(member(&[0, 2], &a).unwrap());
        assert!(!member(&[1, 0], &a).unwrap());
        // brute force: no multiple of (2,1) equals (1,0)
        assert!((0..4).all(|c| [r.mul(c, 2), r.mul(c, 1)] != [1, 0]));
        assert!(member(&[0, 0], &a).unwrap());
        assert!(matches!(member(&[0], &a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn swap_path_is_canonical() {
        // the second row has the smaller pivot valuation and displaces the first
        let r = z(3, 3);
        let a = CoeffMatrix::new(r, 3, vec![vec![9, 1, 2], vec![3, 4, 0], vec![0, 3, 6]]).unwrap();
        let b = CoeffMatrix::new(r, 3, vec![vec![3, 4, 0], vec![0, 3, 6], vec![9, 1, 2]]).unwrap();
        assert_eq!(howell_form(&a), howell_form(&b));
        let h = howell_form(&a);
        for row in a.rows() {
            assert!(member(row, &h).unwrap());
        }
    }
}
