//! Sparse exterior algebra over a fixed dual basis `e^1, ..., e^N`.
//!
//! A [`Form`] stores its nonzero coefficients in a `BTreeMap` keyed by
//! [`MultiIndex`]; zero coefficients are dropped on insertion, so two forms
//! are equal exactly when their maps are. Multi-indices compare
//! lexicographically, and that order fixes every matrix layout built on top
//! of this module.
//!
//! Text syntax: `3/2*e12 - e34`, complex coefficients as `e1 + i*e2`, and
//! `e{1,12}` for indices above 9. Printing uses the braced form whenever the
//! dimension exceeds 9, and `parse(print(f)) == f`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, GaussianScalar, Scalar};

/// Strictly increasing list of 0-based basis indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Builds from 0-based indices, which must be strictly increasing and `< dim`.
    pub fn new(indices: &[usize], dim: usize) -> Result<Self> {
        let ok = indices.windows(2).all(|w| w[0] < w[1]) && indices.iter().all(|&i| i < dim);
        if !ok || dim > u8::MAX as usize {
            return Err(Error::InvalidIndex {
                indices: indices.iter().map(|i| i + 1).collect(),
                dim,
            });
        }
        Ok(MultiIndex(indices.iter().map(|&i| i as u8).collect()))
    }

    /// Sorts arbitrary 0-based indices. Returns `None` on a repeated index,
    /// otherwise the sorted index and whether the sort was an odd permutation.
    pub fn sorted(indices: &[usize], dim: usize) -> Result<Option<(Self, bool)>> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::InvalidIndex { indices: vec![bad + 1], dim });
        }
        let mut v: Vec<usize> = indices.to_vec();
        let mut odd = false;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Ok(None);
        }
        Ok(Some((MultiIndex::new(&v, dim)?, odd)))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&(i as u8)).is_ok()
    }

    /// Concatenation `self ∧ other`: `None` when an index repeats, otherwise
    /// the merged index and whether a sign flip is needed.
    pub fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, bool)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let mut swaps = 0usize;
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // other[j] jumps over the remaining entries of self
                    swaps += self.0.len() - i;
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((MultiIndex(out), swaps % 2 == 1))
    }

    /// All multi-indices of length `k` in `dim` dimensions, in lexicographic order.
    pub fn all(dim: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        if k > dim {
            return out;
        }
        let mut current: Vec<u8> = (0..k as u8).collect();
        loop {
            out.push(MultiIndex(current.clone()));
            // advance to the next combination
            let mut pos = k;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if (current[pos] as usize) < dim - k + pos {
                    current[pos] += 1;
                    for q in pos + 1..k {
                        current[q] = current[q - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn write_label(&self, f: &mut fmt::Formatter<'_>, dim: usize) -> fmt::Result {
        if dim <= 9 {
            write!(f, "e")?;
            for i in self.indices() {
                write!(f, "{}", i + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.indices().map(|i| (i + 1).to_string()).collect();
            write!(f, "e{{{}}}", parts.join(","))
        }
    }
}

/// Alternating form with coefficients in `S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form<S> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, S>,
}

pub type KForm = Form<Scalar>;
pub type ComplexKForm = Form<GaussianScalar>;

impl<S: Coefficient> Form<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form { dim, degree, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, value: S) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(MultiIndex::empty(), value);
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, S::one())
    }

    /// `e^{i1} ∧ ... ∧ e^{ik}` from 1-based indices in any order.
    pub fn basis(dim: usize, one_based: &[usize]) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::InvalidIndex { indices: one_based.to_vec(), dim });
        }
        let zero_based: Vec<usize> = one_based.iter().map(|i| i - 1).collect();
        let mut f = Self::zero(dim, one_based.len());
        if let Some((idx, odd)) = MultiIndex::sorted(&zero_based, dim)? {
            f.add_term(idx, if odd { -S::one() } else { S::one() });
        }
        Ok(f)
    }

    pub fn monomial(dim: usize, index: MultiIndex, coeff: S) -> Self {
        let mut f = Self::zero(dim, index.degree());
        f.add_term(index, coeff);
        f
    }

    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            if idx.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: idx.degree() });
            }
            if idx.0.last().is_some_and(|&m| m as usize >= dim) {
                return Err(Error::InvalidIndex {
                    indices: idx.indices().map(|i| i + 1).collect(),
                    dim,
                });
            }
            f.add_term(idx, c);
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, index: &MultiIndex) -> S {
        self.terms.get(index).cloned().unwrap_or_else(S::zero)
    }

    /// Smallest multi-index with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&MultiIndex, &S)> {
        self.terms.iter().next()
    }

    /// Adds `c·e^index`; a coefficient that cancels to zero is removed.
    pub fn add_term(&mut self, index: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(index.degree(), self.degree);
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim, self.degree);
        }
        Form {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// `self + c·other`, in place.
    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        self.check_same_shape(other);
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone() * c.clone());
        }
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(
            self.dim == other.dim && self.degree == other.degree,
            "forms of different shape: ({}, {}) vs ({}, {})",
            self.dim,
            self.degree,
            other.dim,
            other.degree
        );
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if let Some((idx, odd)) = ka.merge(kb) {
                    let c = va.clone() * vb.clone();
                    out.add_term(idx, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `m`-fold wedge power; the 0th power is the constant 1.
    pub fn wedge_power(&self, m: usize) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..m {
            if acc.is_zero() {
                return Self::zero(self.dim, self.degree * m);
            }
            acc = acc.wedge(self).expect("same dimension");
        }
        acc
    }

    /// Pullback along a linear map given by the images of the basis 1-forms.
    pub fn pullback(&self, images: &[Form<S>]) -> Result<Self> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: images.len() });
        }
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            let mut piece = Self::constant(self.dim, c.clone());
            for i in idx.indices() {
                piece = piece.wedge(&images[i])?;
                if piece.is_zero() {
                    break;
                }
            }
            for (k, v) in piece.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        let mut out = Form::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    /// Dense coefficient vector over `MultiIndex::all(dim, degree)`.
    pub fn to_dense(&self) -> Vec<S> {
        MultiIndex::all(self.dim, self.degree).iter().map(|k| self.coeff(k)).collect()
    }

    pub fn from_dense(dim: usize, degree: usize, coeffs: &[S]) -> Self {
        let basis = MultiIndex::all(dim, degree);
        assert_eq!(basis.len(), coeffs.len());
        let mut out = Self::zero(dim, degree);
        for (k, c) in basis.into_iter().zip(coeffs) {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<S: Coefficient> Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: &Form<S>) -> Form<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &S::one());
        out
    }
}

impl<S: Coefficient> Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &Form<S>) -> Form<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-S::one());
        out
    }
}

impl<S: Coefficient> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.scale(&-S::one())
    }
}

impl<S: Coefficient> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Form<S>) -> Form<S> {
        &self + &rhs
    }
}

impl<S: Coefficient> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Form<S>) -> Form<S> {
        &self - &rhs
    }
}

impl<S: Coefficient> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        -&self
    }
}

impl KForm {
    pub fn parse(dim: usize, text: &str) -> Result<KForm> {
        let (degree, terms) = parse_terms(dim, text)?;
        real_from_parsed(dim, degree.unwrap_or(0), terms)
    }

    /// Like [`KForm::parse`], but also accepts `0` as the zero form of the given degree.
    pub fn parse_with_degree(dim: usize, degree: usize, text: &str) -> Result<KForm> {
        let (found, terms) = parse_terms(dim, text)?;
        if let Some(found) = found {
            if found != degree {
                return Err(Error::DegreeMismatch { expected: degree, found });
            }
        }
        real_from_parsed(dim, degree, terms)
    }

    pub fn complexify(&self) -> ComplexKForm {
        self.map_coeffs(|c| Complex::new(c.clone(), Scalar::zero()))
    }
}

fn real_from_parsed(
    dim: usize,
    degree: usize,
    terms: Vec<(MultiIndex, GaussianScalar)>,
) -> Result<KForm> {
    let mut f = KForm::zero(dim, degree);
    for (idx, c) in terms {
        if !c.im.is_zero() {
            return Err(Error::Syntax {
                column: 0,
                message: "imaginary coefficient in a real form".into(),
            });
        }
        f.add_term(idx, c.re);
    }
    Ok(f)
}

impl ComplexKForm {
    pub fn parse(dim: usize, text: &str) -> Result<ComplexKForm> {
        let (degree, terms) = parse_terms(dim, text)?;
        let mut f = ComplexKForm::zero(dim, degree.unwrap_or(0));
        for (idx, c) in terms {
            f.add_term(idx, c);
        }
        Ok(f)
    }

    pub fn from_parts(re: &KForm, im: &KForm) -> ComplexKForm {
        let mut out = re.complexify();
        let i = Complex::new(Scalar::zero(), Scalar::one());
        out.add_scaled(&im.complexify(), &i);
        out
    }

    /// Splits `c = re + i·im` into real forms.
    pub fn realify(&self) -> (KForm, KForm) {
        let re = self.map_coeffs(|c| c.re.clone());
        let im = self.map_coeffs(|c| c.im.clone());
        (re, im)
    }

    pub fn conjugate(&self) -> ComplexKForm {
        self.map_coeffs(|c| c.conj())
    }
}

type ParsedTerms = (Option<usize>, Vec<(MultiIndex, GaussianScalar)>);

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.bytes[start..self.pos]).ok()
        }
    }

    fn number(&mut self) -> Result<Scalar> {
        let num = match self.digits() {
            Some(d) => d.parse::<BigInt>().expect("digits"),
            None => return self.err("expected a number"),
        };
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            match self.digits() {
                Some(d) => {
                    let den: BigInt = d.parse().expect("digits");
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    return Ok(BigRational::new(num, den));
                }
                None => {
                    self.pos = save;
                    return self.err("expected a denominator");
                }
            }
        }
        self.pos = save;
        Ok(BigRational::from_integer(num))
    }

    /// Returns 0-based indices in the order written.
    fn basis_label(&mut self) -> Result<Vec<usize>> {
        // caller consumed 'e'
        let mut out = Vec::new();
        if self.bytes.get(self.pos) == Some(&b'{') {
            self.pos += 1;
            loop {
                self.skip_ws();
                let d = match self.digits() {
                    Some(d) => d,
                    None => return self.err("expected an index"),
                };
                out.push(d.parse::<usize>().map_err(|_| Error::Syntax {
                    column: self.pos,
                    message: "index too large".into(),
                })?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b'}') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or '}'"),
                }
            }
        } else {
            let d = match self.digits() {
                Some(d) => d,
                None => return self.err("expected basis indices after 'e'"),
            };
            out.extend(d.bytes().map(|b| (b - b'0') as usize));
        }
        for &i in &out {
            if i == 0 || i > self.dim {
                return self.err(format!("index {} out of range 1..{}", i, self.dim));
            }
        }
        Ok(out.into_iter().map(|i| i - 1).collect())
    }

    fn term(&mut self) -> Result<(Vec<usize>, GaussianScalar)> {
        let mut coeff = Complex::new(Scalar::one(), Scalar::zero());
        let mut label: Option<Vec<usize>> = None;
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let n = self.number()?;
                    coeff = coeff * Complex::new(n, Scalar::zero());
                }
                Some(b'i') => {
                    self.pos += 1;
                    coeff = coeff * Complex::new(Scalar::zero(), Scalar::one());
                }
                Some(b'e') => {
                    if label.is_some() {
                        return self.err("more than one basis factor in a term");
                    }
                    self.pos += 1;
                    label = Some(self.basis_label()?);
                }
                _ => return self.err("expected a number, 'i' or a basis form"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((label.unwrap_or_default(), coeff))
    }
}

fn parse_terms(dim: usize, text: &str) -> Result<ParsedTerms> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, dim };
    let mut degree: Option<usize> = None;
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut negative = false;
        match p.peek() {
            None if first => return p.err("empty form"),
            None => break,
            Some(b'+') => p.pos += 1,
            Some(b'-') => {
                p.pos += 1;
                negative = true;
            }
            Some(_) if first => {}
            Some(_) => return p.err("expected '+' or '-'"),
        }
        first = false;
        let start = p.pos;
        let (indices, mut coeff) = p.term()?;
        if negative {
            coeff = -coeff;
        }
        let is_zero_literal = indices.is_empty() && coeff.is_zero();
        if !is_zero_literal {
            match degree {
                None => degree = Some(indices.len()),
                Some(d) if d != indices.len() => {
                    return Err(Error::Syntax {
                        column: start + 1,
                        message: format!("mixed degrees {} and {}", d, indices.len()),
                    })
                }
                _ => {}
            }
        }
        if let Some((idx, odd)) = MultiIndex::sorted(&indices, dim)? {
            terms.push((idx, if odd { -coeff } else { coeff }));
        }
    }
    Ok((degree, terms))
}

fn write_real_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    idx: &MultiIndex,
    c: &Scalar,
    imaginary: bool,
    dim: usize,
) -> fmt::Result {
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let a = c.abs();
    let mut factors: Vec<String> = Vec::new();
    if !a.is_one() || (idx.degree() == 0 && !imaginary) {
        factors.push(a.to_string());
    }
    if imaginary {
        factors.push("i".into());
    }
    write!(f, "{}", factors.join("*"))?;
    if idx.degree() > 0 {
        if !factors.is_empty() {
            write!(f, "*")?;
        }
        idx.write_label(f, dim)?;
    }
    Ok(())
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            write_real_term(f, n == 0, idx, c, false, self.dim)?;
        }
        Ok(())
    }
}

impl fmt::Display for ComplexKForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !c.re.is_zero() {
                write_real_term(f, first, idx, &c.re, false, self.dim)?;
                first = false;
            }
            if !c.im.is_zero() {
                write_real_term(f, first, idx, &c.im, true, self.dim)?;
                first = false;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn kf(dim: usize, s: &str) -> KForm {
        KForm::parse(dim, s).unwrap()
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(kf(6, "e1").wedge(&kf(6, "e2")).unwrap(), kf(6, "e12"));
        assert!(kf(6, "e12").wedge(&kf(6, "e12")).unwrap().is_zero());
        let a = kf(6, "e26 - e15");
        assert_eq!(a.wedge(&a).unwrap(), kf(6, "2*e1256"));
        assert_eq!(kf(6, "e2").wedge(&kf(6, "e1")).unwrap(), kf(6, "-e12"));
    }

    #[test]
    fn wedge_dimension_mismatch() {
        let err = kf(4, "e1").wedge(&kf(6, "e2")).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 6 });
    }

    #[test]
    fn wedge_powers() {
        assert_eq!(kf(4, "e12 + e34").wedge_power(2), kf(4, "2*e1234"));
        assert!(kf(6, "e26 - e15").wedge_power(3).is_zero());
        assert_eq!(kf(6, "e26 - e15").wedge_power(3).degree(), 6);
        assert_eq!(kf(6, "e13").wedge_power(0), KForm::one(6));
    }

    #[test]
    fn realify_one_zero_products() {
        let psi1 = ComplexKForm::parse(6, "e1 + i*e2").unwrap();
        let psi2 = ComplexKForm::parse(6, "e4 + i*e6").unwrap();
        let (re, im) = psi1.wedge(&psi2).unwrap().realify();
        assert_eq!(re, kf(6, "e14 - e26"));
        assert_eq!(im, kf(6, "e16 + e24"));
        let (re, im) = psi1.wedge(&psi2.conjugate()).unwrap().realify();
        assert_eq!(re, kf(6, "e14 + e26"));
        assert_eq!(im, kf(6, "e24 - e16"));
        let (re, im) = kf(6, "e12 - 3*e35").complexify().realify();
        assert_eq!(re, kf(6, "e12 - 3*e35"));
        assert!(im.is_zero());
    }

    #[test]
    fn multi_index_enumeration() {
        let all = MultiIndex::all(4, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(MultiIndex::all(6, 3).len(), 20);
        assert_eq!(MultiIndex::all(3, 0), vec![MultiIndex::empty()]);
        assert!(MultiIndex::all(3, 4).is_empty());
        assert!(MultiIndex::new(&[2, 1], 4).is_err());
        assert!(MultiIndex::new(&[1, 4], 4).is_err());
    }

    #[test]
    fn parse_and_print() {
        let f = kf(6, "3/2*e12 - e34");
        assert_eq!(f.to_string(), "3/2*e12 - e34");
        assert_eq!(f.coeff(&MultiIndex::new(&[0, 1], 6).unwrap()), q(3, 2));
        assert_eq!(kf(6, "e21"), kf(6, "-e12"));
        assert!(kf(6, "e11").is_zero());
        assert_eq!(kf(6, "2*e12 - 2*e12").to_string(), "0");
        assert_eq!(kf(6, "-7").to_string(), "-7");
        assert_eq!(kf(6, "1").to_string(), "1");
        let big = kf(12, "e{1,12} - 2*e{3,10}");
        assert_eq!(big.to_string(), "e{1,12} - 2*e{3,10}");
        let c = ComplexKForm::parse(6, "e1 + i*e2 - 3/4*i*e5").unwrap();
        assert_eq!(c.to_string(), "e1 + i*e2 - 3/4*i*e5");
        assert_eq!(ComplexKForm::parse(6, &c.to_string()).unwrap(), c);
        let z = KForm::parse_with_degree(6, 2, "0").unwrap();
        assert_eq!(z, KForm::zero(6, 2));
        assert_eq!(kf(6, "2*e12*3"), kf(6, "6*e12"));
        let _ = qi(0);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(KForm::parse(6, "e12 + e3"), Err(Error::Syntax { .. })));
        assert!(matches!(KForm::parse(6, "e17"), Err(Error::Syntax { .. })));
        assert!(matches!(KForm::parse(6, "i*e1"), Err(Error::Syntax { .. })));
        assert!(matches!(KForm::parse(6, "e1 e2"), Err(Error::Syntax { .. })));
        assert!(matches!(KForm::parse(6, ""), Err(Error::Syntax { .. })));
        assert!(matches!(KForm::parse(6, "e1*e2"), Err(Error::Syntax { .. })));
        assert!(matches!(KForm::parse(6, "1/0*e1"), Err(Error::Syntax { .. })));
        assert!(matches!(
            KForm::parse_with_degree(6, 2, "e1"),
            Err(Error::DegreeMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn pullback_by_swap() {
        // e1 -> e2, e2 -> e1 flips the sign of e12
        let images = vec![kf(2, "e2"), kf(2, "e1")];
        assert_eq!(kf(2, "e12").pullback(&images).unwrap(), kf(2, "-e12"));
    }
}
