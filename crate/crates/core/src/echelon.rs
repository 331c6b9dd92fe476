//! Sparse reduced echelon bases of forms.
//!
//! Each row is normalized so its leading (lexicographically smallest) term has
//! coefficient 1, and no other row has a term at that pivot. Rows may carry a
//! coordinate tag that follows every row operation; reducing a vector then
//! reports which combination of the tagged generators was subtracted.

use num_traits::{One, Zero};

use crate::exterior::{KForm, MultiIndex};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
struct Row {
    form: KForm,
    tag: Vec<Scalar>,
}

impl Row {
    fn pivot(&self) -> &MultiIndex {
        self.form.leading().expect("rows are nonzero").0
    }

    fn axpy(&mut self, other: &Row, c: &Scalar) {
        self.form.add_scaled(&other.form, c);
        for (t, o) in self.tag.iter_mut().zip(&other.tag) {
            *t += c * o;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Echelon {
    dim: usize,
    degree: usize,
    tag_len: usize,
    rows: Vec<Row>,
}

impl Echelon {
    pub fn new(dim: usize, degree: usize, tag_len: usize) -> Self {
        Echelon { dim, degree, tag_len, rows: Vec::new() }
    }

    pub fn from_forms<'a>(dim: usize, degree: usize, forms: impl IntoIterator<Item = &'a KForm>) -> Self {
        let mut e = Self::new(dim, degree, 0);
        for f in forms {
            e.insert(f);
        }
        e
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn forms(&self) -> Vec<KForm> {
        self.rows.iter().map(|r| r.form.clone()).collect()
    }

    pub fn insert(&mut self, form: &KForm) -> bool {
        self.insert_tagged(form, vec![Scalar::zero(); self.tag_len])
    }

    /// Adds a generator; returns false if it was already in the span.
    pub fn insert_tagged(&mut self, form: &KForm, tag: Vec<Scalar>) -> bool {
        assert_eq!(form.dim(), self.dim);
        assert_eq!(form.degree(), self.degree);
        assert_eq!(tag.len(), self.tag_len);
        let (rem, acc) = self.reduce(form);
        if rem.is_zero() {
            return false;
        }
        let mut row = Row { form: rem, tag: tag.iter().zip(&acc).map(|(t, a)| t - a).collect() };
        let lead = row.form.leading().expect("nonzero").1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            row.form = row.form.scale(&inv);
            for t in &mut row.tag {
                *t *= &inv;
            }
        }
        let pivot = row.pivot().clone();
        for other in &mut self.rows {
            let c = other.form.coeff(&pivot);
            if !c.is_zero() {
                other.axpy(&row, &-c);
            }
        }
        let at = self.rows.partition_point(|r| r.pivot() < &pivot);
        self.rows.insert(at, row);
        true
    }

    /// Returns `(form − Σ cᵢ rowᵢ, Σ cᵢ tagᵢ)` with the remainder vanishing at
    /// every pivot. The remainder is the canonical representative of
    /// `form` modulo the span.
    pub fn reduce(&self, form: &KForm) -> (KForm, Vec<Scalar>) {
        let mut rem = form.clone();
        let mut acc = vec![Scalar::zero(); self.tag_len];
        for row in &self.rows {
            let c = rem.coeff(row.pivot());
            if c.is_zero() {
                continue;
            }
            rem.add_scaled(&row.form, &-c.clone());
            for (a, t) in acc.iter_mut().zip(&row.tag) {
                *a += &c * t;
            }
        }
        (rem, acc)
    }

    pub fn contains(&self, form: &KForm) -> bool {
        self.reduce(form).0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn kf(s: &str) -> KForm {
        KForm::parse(4, s).unwrap()
    }

    #[test]
    fn reduced_rows() {
        let mut e = Echelon::new(4, 2, 0);
        assert!(e.insert(&kf("2*e12 + 2*e34")));
        assert!(e.insert(&kf("e12 - e13")));
        assert!(!e.insert(&kf("e34 + e13")));
        let forms = e.forms();
        assert_eq!(forms[0], kf("e12 + e34"));
        assert_eq!(forms[1], kf("e13 + e34"));
        assert!(e.contains(&kf("e12 - e13")));
        assert!(!e.contains(&kf("e14")));
    }

    #[test]
    fn tags_track_combinations() {
        let mut e = Echelon::new(4, 1, 2);
        e.insert_tagged(&kf("e1 + e2"), vec![qi(1), qi(0)]);
        e.insert_tagged(&kf("e1 - e2"), vec![qi(0), qi(1)]);
        // 3 e1 + e2 = 2 (e1 + e2) + (e1 - e2)
        let (rem, acc) = e.reduce(&kf("3*e1 + e2"));
        assert!(rem.is_zero());
        assert_eq!(acc, vec![qi(2), qi(1)]);
    }
}
