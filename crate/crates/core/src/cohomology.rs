//! Exact Lie algebra cohomology and subspace arithmetic inside `H^k`.
//!
//! Cocycles are the kernel of `d: Λ^k → Λ^{k+1}`, coboundaries the image of
//! `d: Λ^{k−1} → Λ^k`; both are kept as reduced echelon bases in
//! lexicographic multi-index order. Quotient representatives are the cocycle
//! basis vectors that are independent modulo coboundaries, each reduced
//! against the coboundary basis. A class is identified by its coordinates in
//! that quotient basis, and its canonical representative is the input reduced
//! modulo coboundaries.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};

use crate::echelon::Echelon;
use crate::error::{Error, Result};
use crate::exterior::{KForm, MultiIndex};
use crate::liealg::LieAlgebraSpec;
use crate::linalg::RatMatrix;
use crate::scalar::Scalar;

/// Identifies the `H^k` a subspace lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AmbientId {
    pub degree: usize,
    pub betti: usize,
    fingerprint: u64,
}

#[derive(Clone, Debug)]
pub struct CohomologySpace {
    algebra: LieAlgebraSpec,
    degree: usize,
    cocycles: Vec<KForm>,
    coboundaries: Vec<KForm>,
    quotient: Vec<KForm>,
    b_echelon: Echelon,
    coord_echelon: Echelon,
    ambient: AmbientId,
}

/// Matrix of `d` restricted to `Λ^k`; columns follow `MultiIndex::all(dim, k)`.
pub fn differential_matrix(g: &LieAlgebraSpec, k: usize) -> RatMatrix {
    let n = g.dim();
    let source = MultiIndex::all(n, k);
    let target = MultiIndex::all(n, k + 1);
    let mut m = RatMatrix::zeros(target.len(), source.len());
    for (j, idx) in source.iter().enumerate() {
        let image = g.d(&KForm::monomial(n, idx.clone(), Scalar::one())).expect("same dim");
        for (t, tgt) in target.iter().enumerate() {
            m[(t, j)] = image.coeff(tgt);
        }
    }
    m
}

impl CohomologySpace {
    pub fn compute(g: &LieAlgebraSpec, k: usize) -> Result<Self> {
        let n = g.dim();
        if k > n {
            return Err(Error::Precondition(format!("degree {k} exceeds dimension {n}")));
        }
        let d_k = differential_matrix(g, k);
        let cocycles = Echelon::from_forms(
            n,
            k,
            d_k.nullspace().iter().map(|v| KForm::from_dense(n, k, v)).collect::<Vec<_>>().iter(),
        );
        let mut b_echelon = Echelon::new(n, k, 0);
        if k > 0 {
            for idx in MultiIndex::all(n, k - 1) {
                let image = g.d(&KForm::monomial(n, idx, Scalar::one()))?;
                b_echelon.insert(&image);
            }
        }
        let mut span = b_echelon.clone();
        let mut quotient = Vec::new();
        for z in cocycles.forms() {
            if span.insert(&z) {
                quotient.push(b_echelon.reduce(&z).0);
            }
        }
        let betti = quotient.len();
        let mut coord_echelon = Echelon::new(n, k, betti);
        for b in b_echelon.forms() {
            coord_echelon.insert_tagged(&b, vec![Scalar::zero(); betti]);
        }
        for (i, qf) in quotient.iter().enumerate() {
            let mut tag = vec![Scalar::zero(); betti];
            tag[i] = Scalar::one();
            coord_echelon.insert_tagged(qf, tag);
        }
        let mut hasher = DefaultHasher::new();
        g.to_salamon().hash(&mut hasher);
        k.hash(&mut hasher);
        let ambient = AmbientId { degree: k, betti, fingerprint: hasher.finish() };
        Ok(CohomologySpace {
            algebra: g.clone(),
            degree: k,
            cocycles: cocycles.forms(),
            coboundaries: b_echelon.forms(),
            quotient,
            b_echelon,
            coord_echelon,
            ambient,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn betti(&self) -> usize {
        self.quotient.len()
    }

    pub fn cocycles(&self) -> &[KForm] {
        &self.cocycles
    }

    pub fn coboundaries(&self) -> &[KForm] {
        &self.coboundaries
    }

    pub fn quotient_basis(&self) -> &[KForm] {
        &self.quotient
    }

    pub fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    pub fn ambient(&self) -> AmbientId {
        self.ambient
    }

    fn check_form(&self, a: &KForm) -> Result<()> {
        if a.dim() != self.algebra.dim() {
            return Err(Error::DimensionMismatch { expected: self.algebra.dim(), found: a.dim() });
        }
        if a.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: a.degree() });
        }
        let da = self.algebra.d(a)?;
        if !da.is_zero() {
            return Err(Error::NotClosed { differential: da });
        }
        Ok(())
    }

    pub fn class_of(&self, a: &KForm) -> Result<CohomologyClass> {
        self.check_form(a)?;
        let (rem, coords) = self.coord_echelon.reduce(a);
        debug_assert!(rem.is_zero(), "closed forms lie in B + span(quotient)");
        let representative = self.b_echelon.reduce(a).0;
        Ok(CohomologyClass { ambient: self.ambient, representative, coords })
    }

    pub fn is_exact(&self, a: &KForm) -> Result<bool> {
        Ok(self.class_of(a)?.is_zero())
    }

    pub fn span(&self, reps: &[KForm]) -> Result<SubspaceOfH> {
        let mut rows = Vec::with_capacity(reps.len());
        for r in reps {
            rows.push(self.class_of(r)?.coords);
        }
        Ok(SubspaceOfH::from_rows(self.ambient, rows))
    }

    pub fn whole(&self) -> SubspaceOfH {
        let rows = (0..self.betti())
            .map(|i| {
                let mut v = vec![Scalar::zero(); self.betti()];
                v[i] = Scalar::one();
                v
            })
            .collect();
        SubspaceOfH::from_rows(self.ambient, rows)
    }

    pub fn zero_subspace(&self) -> SubspaceOfH {
        SubspaceOfH::from_rows(self.ambient, Vec::new())
    }

    /// Closed forms representing the basis of a subspace.
    pub fn representatives(&self, sub: &SubspaceOfH) -> Result<Vec<KForm>> {
        if sub.ambient != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(sub
            .basis
            .iter()
            .map(|row| {
                let mut f = KForm::zero(self.algebra.dim(), self.degree);
                for (c, qf) in row.iter().zip(&self.quotient) {
                    f.add_scaled(qf, c);
                }
                f
            })
            .collect())
    }
}

pub fn cohomology(g: &LieAlgebraSpec, k: usize) -> Result<CohomologySpace> {
    CohomologySpace::compute(g, k)
}

/// All Betti numbers `b_0, ..., b_N`.
pub fn betti_numbers(g: &LieAlgebraSpec) -> Vec<usize> {
    (0..=g.dim())
        .map(|k| CohomologySpace::compute(g, k).expect("k <= dim").betti())
        .collect()
}

#[derive(Clone, Debug)]
pub struct CohomologyClass {
    ambient: AmbientId,
    representative: KForm,
    coords: Vec<Scalar>,
}

impl CohomologyClass {
    pub fn degree(&self) -> usize {
        self.ambient.degree
    }

    /// The input reduced modulo coboundaries.
    pub fn representative(&self) -> &KForm {
        &self.representative
    }

    pub fn coordinates(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.representative == other.representative
    }
}

impl Eq for CohomologyClass {}

impl Hash for CohomologyClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.representative.to_string().hash(state);
    }
}

/// Subspace of `H^k`, stored as reduced echelon rows of quotient-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceOfH {
    ambient: AmbientId,
    basis: Vec<Vec<Scalar>>,
}

impl SubspaceOfH {
    fn from_rows(ambient: AmbientId, rows: Vec<Vec<Scalar>>) -> Self {
        let basis = if rows.is_empty() {
            Vec::new()
        } else {
            RatMatrix::from_rows(rows).row_space_basis()
        };
        SubspaceOfH { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.ambient.degree
    }

    pub fn ambient(&self) -> AmbientId {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, class: &CohomologyClass) -> Result<bool> {
        if class.ambient != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        let mut rows = self.basis.clone();
        rows.push(class.coords.clone());
        Ok(RatMatrix::from_rows(rows).rank() == self.dim())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::from_rows(self.ambient, rows))
    }

    /// Zassenhaus: reduce `[a | a]` over `[b | 0]`; rows with vanishing left
    /// half span the intersection in their right half.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        let n = self.ambient.betti;
        if self.basis.is_empty() || other.basis.is_empty() {
            return Ok(Self::from_rows(self.ambient, Vec::new()));
        }
        let mut rows = Vec::new();
        for a in &self.basis {
            rows.push(a.iter().chain(a).cloned().collect::<Vec<_>>());
        }
        for b in &other.basis {
            rows.push(b.iter().cloned().chain(std::iter::repeat_n(Scalar::zero(), n)).collect());
        }
        let reduced = RatMatrix::from_rows(rows).row_space_basis();
        let meet = reduced
            .into_iter()
            .filter(|r| r[..n].iter().all(Zero::is_zero))
            .map(|r| r[n..].to_vec())
            .collect();
        Ok(Self::from_rows(self.ambient, meet))
    }
}
