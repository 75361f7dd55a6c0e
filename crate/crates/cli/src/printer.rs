//! Text forms in `tau`/`t` notation.
//!
//! Group-ring elements are re-expanded in the basis `τᵉ·Tᵇ` (`τᵢ = δᵢ − 1`,
//! `0 ≤ eᵢ < mᵢ`), which is a basis because `(τ+1)^m − 1` is monic in `τ`.
//! Coefficients are printed as symmetric residues so that small negative
//! integers read naturally.

use std::sync::Arc;

use fitshift_core::complexes::RingMatrix;
use fitshift_core::groupring::{GroupRingSpec, RingElement};
use fitshift_core::ideals::{FractionalIdeal, Ideal};
use fitshift_core::linalg::{howell_form, CoeffMatrix};

/// One term `c·τᵉ·Tᵇ` with a symmetric coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTerm {
    pub tau: Vec<usize>,
    pub t: Vec<usize>,
    pub coeff: i128,
}

impl TauTerm {
    pub fn degree(&self) -> usize {
        self.tau.iter().sum::<usize>() + self.t.iter().sum::<usize>()
    }
}

fn binomials(m: usize, modulus: u64) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![0u64; m]; m];
    for a in 0..m {
        rows[a][0] = 1 % modulus;
        for j in 1..=a {
            rows[a][j] = (rows[a - 1][j - 1] + if j < a { rows[a - 1][j] } else { 0 }) % modulus;
        }
    }
    rows
}

fn symmetric(c: u64, modulus: u64) -> i128 {
    if c > modulus / 2 {
        c as i128 - modulus as i128
    } else {
        c as i128
    }
}

/// Coordinates of `x` in the `τ`-basis, indexed like the dense basis with
/// the group part read as `τ`-exponents.
pub fn tau_vector(x: &RingElement) -> Vec<u64> {
    let spec = x.spec();
    let modulus = spec.modulus();
    let ring = spec.coeff_ring();
    let binom: Vec<Vec<Vec<u64>>> = spec.orders().iter().map(|&m| binomials(m, modulus)).collect();
    let ts = spec.t_size();
    let mut acc = vec![0u64; spec.basis_size()];
    for (idx, c) in x.terms() {
        let (g, t) = spec.split_index(idx);
        let a = spec.group_exps(g);
        // δᵃ = Π Σ_{e ≤ a} C(a, e) τᵉ
        let mut partial: Vec<(Vec<usize>, u64)> = vec![(Vec::new(), c)];
        for (i, &ai) in a.iter().enumerate() {
            let mut next = Vec::new();
            for (e, v) in &partial {
                for ei in 0..=ai {
                    let b = binom[i][ai][ei];
                    if b == 0 {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2.push(ei);
                    next.push((e2, ring.mul(*v, b)));
                }
            }
            partial = next;
        }
        for (e, v) in partial {
            let slot = spec.group_index(&e) * ts + t;
            acc[slot] = ring.add(acc[slot], v);
        }
    }
    acc
}

/// The elements `τᵉ·Tᵇ`, one per dense basis index.
fn tau_monomials(spec: &Arc<GroupRingSpec>) -> Vec<RingElement> {
    let taus: Vec<RingElement> = (0..spec.s()).map(|i| RingElement::tau(spec, i).expect("factor exists")).collect();
    (0..spec.basis_size())
        .map(|idx| {
            let (g, t) = spec.split_index(idx);
            let mut x = RingElement::monomial(spec, &vec![0; spec.s()], spec.t_exps(t)).expect("in range");
            for (tau, &e) in taus.iter().zip(spec.group_exps(g)) {
                x = x * tau.pow(e as u64);
            }
            x
        })
        .collect()
}

fn degree_of_index(spec: &GroupRingSpec, idx: usize) -> usize {
    let (g, t) = spec.split_index(idx);
    spec.group_exps(g).iter().sum::<usize>() + spec.t_exps(t).iter().sum::<usize>()
}

/// Expand `x` in the `τ`-basis; terms are ordered by total degree, then by
/// exponent vectors.
pub fn tau_terms(x: &RingElement) -> Vec<TauTerm> {
    let spec = x.spec();
    let modulus = spec.modulus();
    let mut out: Vec<TauTerm> = tau_vector(x)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(idx, &c)| {
            let (g, t) = spec.split_index(idx);
            TauTerm { tau: spec.group_exps(g).to_vec(), t: spec.t_exps(t).to_vec(), coeff: symmetric(c, modulus) }
        })
        .collect();
    out.sort_by(|a, b| (a.degree(), &a.tau, &a.t).cmp(&(b.degree(), &b.tau, &b.t)));
    out
}

fn monomial(term: &TauTerm) -> String {
    let mut parts = Vec::new();
    for (i, &e) in term.tau.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("tau{}", i + 1)),
            _ => parts.push(format!("tau{}^{}", i + 1, e)),
        }
    }
    for (j, &b) in term.t.iter().enumerate() {
        match b {
            0 => {}
            1 => parts.push(format!("t{}", j + 1)),
            _ => parts.push(format!("t{}^{}", j + 1, b)),
        }
    }
    parts.join("*")
}

pub fn format_element(x: &RingElement) -> String {
    let terms = tau_terms(x);
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, term) in terms.iter().enumerate() {
        let mono = monomial(term);
        let mag = term.coeff.unsigned_abs();
        if i == 0 {
            if term.coeff < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if term.coeff < 0 { " - " } else { " + " });
        }
        match (mono.is_empty(), mag) {
            (true, _) => s.push_str(&mag.to_string()),
            (false, 1) => s.push_str(&mono),
            (false, _) => s.push_str(&format!("{mag}*{mono}")),
        }
    }
    s
}

/// Wrap in parentheses when the element has several terms.
fn format_factor(x: &RingElement) -> String {
    let s = format_element(x);
    if tau_terms(x).len() > 1 || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

/// Sort key for displaying generators: top degree, then size, then text.
fn display_key(x: &RingElement) -> (usize, usize, String) {
    let terms = tau_terms(x);
    (terms.iter().map(TauTerm::degree).max().unwrap_or(0), terms.len(), format_element(x))
}

pub fn sort_for_display(mut gens: Vec<RingElement>) -> Vec<RingElement> {
    gens.sort_by_cached_key(display_key);
    gens
}

/// The Howell rows of an ideal computed in `τ`-coordinates, with columns
/// ordered by descending degree so that each row leads with its top-degree
/// monomial. Returned as ring elements, smallest degree first.
pub fn canonical_rows(ideal: &Ideal) -> Vec<RingElement> {
    let spec = ideal.spec();
    let n = spec.basis_size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(degree_of_index(spec, i)), i));
    let rows: Vec<Vec<u64>> = ideal
        .canonical()
        .rows()
        .iter()
        .map(|r| {
            let x = RingElement::from_coeffs(spec, r.clone()).expect("row has basis length");
            let v = tau_vector(&x);
            order.iter().map(|&i| v[i]).collect()
        })
        .collect();
    let h = howell_form(&CoeffMatrix::new(*spec.coeff_ring(), n, rows).expect("rows have basis length"));
    let monomials = tau_monomials(spec);
    let out = h
        .rows()
        .iter()
        .map(|r| {
            let mut x = RingElement::zero(spec);
            for (col, &c) in r.iter().enumerate() {
                if c != 0 {
                    x = x + monomials[order[col]].scale(c);
                }
            }
            x
        })
        .collect();
    sort_for_display(out)
}

fn format_generators(gens: &[RingElement]) -> String {
    let parts: Vec<String> = gens.iter().map(format_element).collect();
    match parts.len() {
        0 => "ideal()".into(),
        1 => format!("ideal({})", parts[0]),
        _ => format!("({})", parts.join(", ")),
    }
}

/// An ideal through a small generating set.
pub fn format_ideal(ideal: &Ideal) -> String {
    format_generators(&ideal.reduced_generators())
}

pub fn format_frac(x: &FractionalIdeal) -> String {
    let num = format_ideal(x.numerator());
    if x.denominator().is_one() {
        return num;
    }
    format!("{num} / {}", format_factor(x.denominator()))
}

pub fn format_matrix(m: &RingMatrix) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let entries: Vec<String> = (0..m.ncols()).map(|j| format_element(m.get(i, j))).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// `p=3 k=4 N=6 orders=3,3 d=1`, the argument form of the `spec` command.
pub fn format_spec(spec: &Arc<GroupRingSpec>) -> String {
    let orders: Vec<String> = spec.orders().iter().map(|m| m.to_string()).collect();
    format!("p={} k={} N={} orders={} d={}", spec.p(), spec.k(), spec.n(), orders.join(","), spec.d())
}
