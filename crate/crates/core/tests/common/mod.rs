#![allow(dead_code)]

use acslab_core::acs::AlmostComplexStructure;
use acslab_core::exterior::KForm;
use acslab_core::linalg::RatMatrix;
use acslab_core::scalar::{qi, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn corpus() -> Vec<&'static str> {
    include_str!("../data/algebras.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let num = m[rank][c]
                    .checked_mul(m[r][k])
                    .and_then(|a| m[r][c].checked_mul(m[rank][k]).and_then(|b| a.checked_sub(b)))
                    .expect("overflow in Bareiss step");
                assert_eq!(num % prev, 0, "Bareiss division must be exact");
                m[r][k] = num / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Structure constants `de^k = Σ c[k][(i, j)] e^i∧e^j` (0-based, i < j) read
/// from compact digit notation with integer coefficients.
pub fn naive_structure(salamon: &str) -> Vec<Vec<(usize, usize, i128)>> {
    salamon
        .split(',')
        .map(|entry| {
            let entry = entry.trim();
            if entry == "0" {
                return Vec::new();
            }
            let mut terms = Vec::new();
            let mut rest = entry;
            while !rest.is_empty() {
                let (sign, body) = match rest.as_bytes()[0] {
                    b'-' => (-1, &rest[1..]),
                    b'+' => (1, &rest[1..]),
                    _ => (1, rest),
                };
                let end = body.find(['+', '-']).unwrap_or(body.len());
                let term = &body[..end];
                rest = &body[end..];
                let (coeff, digits) = match term.split_once('*') {
                    Some((c, d)) => (c.parse::<i128>().unwrap(), d),
                    None => (1, term),
                };
                let d: Vec<usize> = digits.bytes().map(|b| (b - b'1') as usize).collect();
                let (i, j, s) = if d[0] < d[1] { (d[0], d[1], 1) } else { (d[1], d[0], -1) };
                terms.push((i, j, sign * s * coeff));
            }
            terms
        })
        .collect()
}

fn masks_of_degree(dim: usize, k: usize) -> Vec<u32> {
    (0u32..1 << dim).filter(|m| m.count_ones() as usize == k).collect()
}

/// `e^a ∧ e^I` on bitmasks: `None` if `a ∈ I`, else the sign.
fn insert_sign(a: usize, mask: u32) -> Option<i128> {
    if mask & (1 << a) != 0 {
        return None;
    }
    Some(if (mask & ((1 << a) - 1)).count_ones() % 2 == 0 { 1 } else { -1 })
}

/// Dense matrix of `d: Λ^k → Λ^{k+1}` (rows indexed by (k+1)-masks).
pub fn naive_differential(dim: usize, structure: &[Vec<(usize, usize, i128)>], k: usize) -> Vec<Vec<i128>> {
    let src = masks_of_degree(dim, k);
    let dst = masks_of_degree(dim, k + 1);
    let mut m = vec![vec![0i128; src.len()]; dst.len()];
    for (col, &mask) in src.iter().enumerate() {
        let idx: Vec<usize> = (0..dim).filter(|b| mask & (1 << b) != 0).collect();
        for (p, &i) in idx.iter().enumerate() {
            let rest = mask & !(1 << i);
            let leibniz = if p % 2 == 0 { 1 } else { -1 };
            for &(a, b, c) in &structure[i] {
                // de^i is even, so it moves to the front without a sign
                let Some(s1) = insert_sign(b, rest) else { continue };
                let Some(s2) = insert_sign(a, rest | (1 << b)) else { continue };
                let row = dst.iter().position(|&d| d == rest | (1 << a) | (1 << b)).unwrap();
                m[row][col] += leibniz * s1 * s2 * c;
            }
        }
    }
    m
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Betti numbers from ranks of the dense differentials.
pub fn naive_betti(salamon: &str) -> Vec<usize> {
    let structure = naive_structure(salamon);
    let dim = structure.len();
    let ranks: Vec<usize> = (0..=dim)
        .map(|k| if k == dim { 0 } else { integer_rank(naive_differential(dim, &structure, k)) })
        .collect();
    (0..=dim)
        .map(|k| binomial(dim, k) - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
        .collect()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, dim: usize) -> RatMatrix {
    loop {
        let rows: Vec<Vec<Scalar>> =
            (0..dim).map(|_| (0..dim).map(|_| qi(rng.random_range(-2..=2))).collect()).collect();
        let m = RatMatrix::from_rows(rows);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// `P J₀ P⁻¹` for a random small-integer `P`.
pub fn random_structure(rng: &mut ChaCha8Rng, dim: usize) -> (AlmostComplexStructure, RatMatrix) {
    let p = random_invertible(rng, dim);
    let j = AlmostComplexStructure::standard(dim).unwrap().conjugate_by(&p).unwrap();
    (j, p)
}

pub fn random_combination(rng: &mut ChaCha8Rng, forms: &[KForm], dim: usize, degree: usize) -> KForm {
    let mut out = KForm::zero(dim, degree);
    for f in forms {
        out.add_scaled(f, &qi(rng.random_range(-3..=3)));
    }
    out
}

pub fn random_nonzero_combination(rng: &mut ChaCha8Rng, forms: &[KForm], dim: usize, degree: usize) -> KForm {
    loop {
        let f = random_combination(rng, forms, dim, degree);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn mask_index(dim: usize, i: usize, j: usize) -> usize {
    let masks: Vec<u32> = (0u32..1 << dim).filter(|m| m.count_ones() == 2).collect();
    masks.iter().position(|&m| m == (1 << i) | (1 << j)).unwrap()
}

/// Real and imaginary parts of `φ^a∧φ^b` (or `φ^a∧φ̄^b`) for `φ^a = e^a + i e^{a+3}`.
pub fn phi_products(conjugate_second: bool) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let sign = if conjugate_second { -1 } else { 1 };
    for a in 0..3 {
        for b in 0..3 {
            if !conjugate_second && a >= b {
                continue;
            }
            let mut re = vec![0i128; 15];
            let mut im = vec![0i128; 15];
            let add = |v: &mut Vec<i128>, i: usize, j: usize, c: i128| {
                if i == j {
                    return;
                }
                let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
                v[mask_index(6, lo, hi)] += s * c;
            };
            // (e^a + i e^{a'}) ∧ (e^b + i·sign·e^{b'})
            add(&mut re, a, b, 1);
            add(&mut re, a + 3, b + 3, -sign);
            add(&mut im, a, b + 3, sign);
            add(&mut im, a + 3, b, 1);
            out.push(re);
            out.push(im);
        }
    }
    out
}

pub fn transpose(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    (0..m[0].len()).map(|c| m.iter().map(|r| r[c]).collect()).collect()
}

pub fn apply(m: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `dim H^±` from ranks only: `dim(Z∩Λ) − dim(B∩Λ)`.
pub fn brute_force_h_dim(structure: &[Vec<(usize, usize, i128)>], span: &[Vec<i128>]) -> usize {
    let d1 = naive_differential(6, structure, 1);
    let d2 = naive_differential(6, structure, 2);
    let rank_span = integer_rank(span.to_vec());
    let images: Vec<Vec<i128>> = span.iter().map(|v| apply(&d2, v)).collect();
    let closed = rank_span - integer_rank(images);
    let exact_rows = transpose(&d1);
    let rank_b = integer_rank(exact_rows.clone());
    let mut stacked = exact_rows;
    stacked.extend(span.iter().cloned());
    let exact_in_span = rank_b + rank_span - integer_rank(stacked);
    closed - exact_in_span
}
