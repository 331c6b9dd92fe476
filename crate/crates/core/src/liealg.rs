//! Lie algebras given by their Maurer–Cartan equations.
//!
//! A [`LieAlgebraSpec`] is the list `de^1, ..., de^N` of 2-forms. The
//! Chevalley–Eilenberg differential extends this to all left-invariant forms
//! by the graded Leibniz rule. Construction checks `d∘d = 0` on every basis
//! 1-form, which is equivalent to the Jacobi identity.
//!
//! Brackets are read off with the convention `dα(X, Y) = −α([X, Y])` for
//! left-invariant `α`, i.e. `[e_i, e_j] = −Σ_k c^k_ij e_k` when
//! `de^k = Σ_{i<j} c^k_ij e^{ij}`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{KForm, MultiIndex};
use crate::scalar::{parse_rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    dim: usize,
    differentials: Vec<KForm>,
}

impl LieAlgebraSpec {
    /// Validates and builds; see [`validate_jacobi`].
    pub fn new(dim: usize, d_of_basis: Vec<KForm>) -> Result<Self> {
        validate_jacobi(dim, d_of_basis)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebraSpec { dim, differentials: vec![KForm::zero(dim, 2); dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `de^i` for 0-based `i`.
    pub fn basis_differential(&self, i: usize) -> &KForm {
        &self.differentials[i]
    }

    pub fn differentials(&self) -> &[KForm] {
        &self.differentials
    }

    /// Chevalley–Eilenberg differential.
    pub fn d(&self, a: &KForm) -> Result<KForm> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        Ok(differential(self.dim, &self.differentials, a))
    }

    pub fn is_closed(&self, a: &KForm) -> Result<bool> {
        Ok(self.d(a)?.is_zero())
    }

    /// Bracket of two vectors in the basis `e_1, ..., e_N`.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (k, dk) in self.differentials.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (idx, c) in dk.terms() {
                let ij: Vec<usize> = idx.indices().collect();
                let (i, j) = (ij[0], ij[1]);
                // de^k(x, y) = c (x_i y_j − x_j y_i)
                acc += c * (&x[i] * &y[j] - &x[j] * &y[i]);
            }
            out[k] = -acc;
        }
        out
    }

    /// Parses compact notation such as `0,0,12,13,14,23` (entry `i` is
    /// `de^i`). Entries may be signed rational sums like `12+2*34` or
    /// `-1/2*13`, or use the general form syntax (`e{1,10} - e{2,11}`).
    pub fn from_salamon(text: &str) -> Result<Self> {
        let entries: Vec<&str> = text.trim().split(',').map(str::trim).collect();
        let dim = entries.len();
        let mut diffs = Vec::with_capacity(dim);
        let mut column = 1;
        for entry in &entries {
            let form = parse_differential(dim, entry).map_err(|e| match e {
                Error::Syntax { column: c, message } => Error::Syntax {
                    column: column + c.saturating_sub(1),
                    message,
                },
                other => other,
            })?;
            diffs.push(form);
            column += entry.len() + 1;
        }
        validate_jacobi(dim, diffs)
    }

    pub fn to_salamon(&self) -> String {
        self.differentials
            .iter()
            .map(|f| salamon_entry(self.dim, f))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn salamon_entry(dim: usize, f: &KForm) -> String {
    if f.is_zero() {
        return "0".into();
    }
    if dim > 9 {
        return f.to_string();
    }
    let mut s = String::new();
    for (n, (idx, c)) in f.terms().enumerate() {
        if c.is_negative() {
            s.push('-');
        } else if n > 0 {
            s.push('+');
        }
        let a = c.abs();
        if !a.is_one() {
            s.push_str(&format!("{}*", a));
        }
        for i in idx.indices() {
            s.push_str(&(i + 1).to_string());
        }
    }
    s
}

/// Parses one entry `de^i` of compact notation in dimension `dim`.
pub fn parse_differential(dim: usize, entry: &str) -> Result<KForm> {
    if entry.contains('e') {
        return KForm::parse_with_degree(dim, 2, entry);
    }
    let syntax = |column: usize, message: &str| Error::Syntax { column, message: message.into() };
    if entry.is_empty() {
        return Err(syntax(1, "empty entry"));
    }
    if dim > 9 {
        return Err(syntax(1, "digit notation needs dimension <= 9; use e{i,j}"));
    }
    let mut out = KForm::zero(dim, 2);
    let bytes = entry.as_bytes();
    let mut start = 0;
    while start < bytes.len() {
        let mut end = start + 1;
        while end < bytes.len() && bytes[end] != b'+' && bytes[end] != b'-' {
            end += 1;
        }
        let raw = entry[start..end].trim();
        let (negative, body) = match raw.as_bytes().first() {
            Some(b'-') => (true, raw[1..].trim()),
            Some(b'+') => (false, raw[1..].trim()),
            _ => (false, raw),
        };
        let (coeff, label) = match body.rsplit_once('*') {
            Some((c, l)) => match parse_rational(c) {
                Some(c) => (c, l.trim()),
                None => return Err(syntax(start + 1, "bad coefficient")),
            },
            None => (Scalar::one(), body),
        };
        let coeff = if negative { -coeff } else { coeff };
        if label == "0" {
            if start == 0 && end == bytes.len() {
                return Ok(out);
            }
            return Err(syntax(start + 1, "'0' must stand alone"));
        }
        if label.len() != 2 || !label.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax(start + 1, "expected two index digits"));
        }
        let ij: Vec<usize> = label.bytes().map(|b| (b - b'0') as usize).collect();
        if ij.iter().any(|&i| i == 0 || i > dim) {
            return Err(syntax(start + 1, "index out of range"));
        }
        let term = KForm::basis(dim, &ij)?.scale(&coeff);
        out = &out + &term;
        start = end;
    }
    Ok(out)
}

fn differential(dim: usize, diffs: &[KForm], a: &KForm) -> KForm {
    let mut out = KForm::zero(dim, a.degree() + 1);
    for (idx, c) in a.terms() {
        let ix: Vec<usize> = idx.indices().collect();
        for (p, &i) in ix.iter().enumerate() {
            if diffs[i].is_zero() {
                continue;
            }
            // d(e^{i1} ∧ ... ∧ e^{ik}) = Σ_p (−1)^p e^{i1..} ∧ de^{ip} ∧ e^{..ik}
            let before = KForm::monomial(
                dim,
                MultiIndex::new(&ix[..p], dim).expect("sub-index"),
                Scalar::one(),
            );
            let after = KForm::monomial(
                dim,
                MultiIndex::new(&ix[p + 1..], dim).expect("sub-index"),
                Scalar::one(),
            );
            let piece = before
                .wedge(&diffs[i])
                .and_then(|f| f.wedge(&after))
                .expect("same dimension");
            let sign = if p % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_scaled(&piece, &sign);
        }
    }
    out
}

/// Checks shapes and `d(de^i) = 0` for every `i`, reporting the first failure.
pub fn validate_jacobi(dim: usize, d_of_basis: Vec<KForm>) -> Result<LieAlgebraSpec> {
    if d_of_basis.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: d_of_basis.len() });
    }
    for f in &d_of_basis {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
        }
        if f.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: f.degree() });
        }
    }
    for (i, f) in d_of_basis.iter().enumerate() {
        let dd = differential(dim, &d_of_basis, f);
        if !dd.is_zero() {
            return Err(Error::Jacobi { index: i + 1, residual: dd });
        }
    }
    Ok(LieAlgebraSpec { dim, differentials: d_of_basis })
}

/// The 6-dimensional nilpotent algebra `(0,0,12,13,14,23)`.
pub fn example_nilpotent() -> LieAlgebraSpec {
    LieAlgebraSpec::from_salamon("0,0,12,13,14,23").expect("valid")
}

/// `su(2) ⊕ ℝ³` with `de¹ = e²³, de² = −e¹³, de³ = e¹²`.
pub fn su2_plus_r3() -> LieAlgebraSpec {
    LieAlgebraSpec::from_salamon("23,-13,12,0,0,0").expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kf(dim: usize, s: &str) -> KForm {
        KForm::parse(dim, s).unwrap()
    }

    #[test]
    fn differential_examples() {
        let g = example_nilpotent();
        assert_eq!(g.d(&kf(6, "e3")).unwrap(), kf(6, "e12"));
        assert!(g.d(&kf(6, "e26")).unwrap().is_zero());
        let s = su2_plus_r3();
        assert_eq!(s.d(&kf(6, "e1")).unwrap(), kf(6, "e23"));
        assert!(g.d(&kf(4, "e1")).is_err());
    }

    #[test]
    fn jacobi_validation() {
        assert!(LieAlgebraSpec::from_salamon("0,0,0,0,0,0").is_ok());
        let bad = vec![
            KForm::zero(4, 2),
            KForm::zero(4, 2),
            kf(4, "e12"),
            kf(4, "e13 + e24"),
        ];
        match validate_jacobi(4, bad) {
            Err(Error::Jacobi { index, residual }) => {
                assert_eq!(index, 4);
                assert_eq!(residual, kf(4, "e123"));
            }
            other => panic!("expected Jacobi failure, got {other:?}"),
        }
        assert!(matches!(
            LieAlgebraSpec::from_salamon("0,0,12,13+24,0,0"),
            Err(Error::Jacobi { index: 4, .. })
        ));
        assert!(matches!(validate_jacobi(3, vec![KForm::zero(3, 2)]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            validate_jacobi(2, vec![KForm::zero(2, 1), KForm::zero(2, 2)]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn salamon_round_trip() {
        for s in ["0,0,12,13,14,23", "23,-13,12,0,0,0", "0,0,0,12,1/2*13-24,0"] {
            match LieAlgebraSpec::from_salamon(s) {
                Ok(g) => {
                    let printed = g.to_salamon();
                    assert_eq!(LieAlgebraSpec::from_salamon(&printed).unwrap(), g);
                }
                Err(Error::Jacobi { .. }) => {}
                Err(e) => panic!("{s}: {e}"),
            }
        }
        assert_eq!(example_nilpotent().to_salamon(), "0,0,12,13,14,23");
        assert_eq!(su2_plus_r3().to_salamon(), "23,-13,12,0,0,0");
        let g = LieAlgebraSpec::from_salamon("0,0,12+2*12").unwrap();
        assert_eq!(g.basis_differential(2), &kf(3, "3*e12"));
        let h = LieAlgebraSpec::from_salamon("0, 0, e12").unwrap();
        assert_eq!(h.basis_differential(2), &kf(3, "e12"));
    }

    #[test]
    fn salamon_syntax_errors() {
        for bad in ["0,0,1", "0,0,12x", "0,,12", "0,0,14", "0,0,0+12", "0,0,a*12"] {
            assert!(
                matches!(LieAlgebraSpec::from_salamon(bad), Err(Error::Syntax { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn brackets_follow_sign_convention() {
        let g = su2_plus_r3();
        let e = |i: usize| {
            let mut v = vec![Scalar::zero(); 6];
            v[i] = Scalar::one();
            v
        };
        // de^1 = e^23 gives [e_2, e_3] = −e_1
        let b = g.bracket(&e(1), &e(2));
        assert_eq!(b, e(0).iter().map(|x| -x).collect::<Vec<_>>());
        assert!(g.bracket(&e(3), &e(4)).iter().all(Zero::is_zero));
    }
}
