//! Constant almost complex structures on a Lie algebra model.
//!
//! `J` is stored as the matrix of its action on tangent vectors (column `j`
//! is `J e_j`). Forms are acted on by precomposition,
//! `(Jα)(X_1, ..., X_k) = α(JX_1, ..., JX_k)`, which on 1-forms reads
//! `J e^i = Σ_j J_ij e^j`. A complex 1-form `ψ` has type (1,0) when
//! `ψ ∘ J = iψ`. With these conventions `Λ⁺_J` (type (1,1)) is the +1
//! eigenspace of `J` on 2-forms and `Λ⁻_J` (type (2,0)+(0,2)) the −1
//! eigenspace.

use num_traits::{One, Signed, Zero};

use crate::echelon::Echelon;
use crate::error::{Error, Result};
use crate::exterior::{ComplexKForm, KForm, MultiIndex};
use crate::liealg::LieAlgebraSpec;
use crate::linalg::{dot, row_as_one_form, two_form_to_skew, RatMatrix};
use crate::scalar::{gaussian, rational_sqrt, Scalar};

/// Selects `Λ⁺_J` or `Λ⁻_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeSign {
    Plus,
    Minus,
}

impl TypeSign {
    pub fn eigenvalue(self) -> Scalar {
        match self {
            TypeSign::Plus => Scalar::one(),
            TypeSign::Minus => -Scalar::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostComplexStructure {
    matrix: RatMatrix,
}

impl AlmostComplexStructure {
    pub fn from_matrix(matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let n = matrix.nrows();
        if &matrix * &matrix != RatMatrix::identity(n).scale(&-Scalar::one()) {
            return Err(Error::NotComplexStructure);
        }
        Ok(AlmostComplexStructure { matrix })
    }

    /// `J e_{2k−1} = e_{2k}`, `J e_{2k} = −e_{2k−1}`.
    pub fn standard(dim: usize) -> Result<Self> {
        if dim % 2 != 0 {
            return Err(Error::Precondition(format!("odd dimension {dim}")));
        }
        let mut m = RatMatrix::zeros(dim, dim);
        for k in (0..dim).step_by(2) {
            m[(k + 1, k)] = Scalar::one();
            m[(k, k + 1)] = -Scalar::one();
        }
        Self::from_matrix(m)
    }

    /// The unique `J` for which every `ψ^j` has type (1,0).
    ///
    /// Writing `ψ = a + ib` with real covectors, `ψ ∘ J = iψ` means
    /// `aJ = −b` and `bJ = a`; stacking all `a` over all `b` into `M` gives
    /// `M J = [−B; A]`, solvable exactly when the ψ's and their conjugates
    /// span the complexified dual.
    pub fn from_one_zero_forms(dim: usize, psis: &[ComplexKForm]) -> Result<Self> {
        if dim % 2 != 0 || psis.len() * 2 != dim {
            return Err(Error::Precondition(format!(
                "need {} (1,0)-forms in dimension {dim}, got {}",
                dim / 2,
                psis.len()
            )));
        }
        let mut re_rows = Vec::new();
        let mut im_rows = Vec::new();
        for psi in psis {
            if psi.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: psi.dim() });
            }
            if psi.degree() != 1 {
                return Err(Error::DegreeMismatch { expected: 1, found: psi.degree() });
            }
            let (re, im) = psi.realify();
            re_rows.push(re.to_dense());
            im_rows.push(im.to_dense());
        }
        let m = RatMatrix::from_rows(re_rows.iter().chain(&im_rows).cloned().collect());
        let rhs = RatMatrix::from_rows(
            im_rows
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .chain(re_rows.iter().cloned())
                .collect(),
        );
        let inv = m.inverse().ok_or(Error::NotCoframe)?;
        Self::from_matrix(&inv * &rhs)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v)
    }

    /// `P J P⁻¹`, the structure transported by the basis change `P`.
    pub fn conjugate_by(&self, p: &RatMatrix) -> Result<Self> {
        let inv = p.inverse().ok_or(Error::Precondition("singular basis change".into()))?;
        Self::from_matrix(&(p * &self.matrix) * &inv)
    }

    /// Images `J e^i` of the basis 1-forms.
    pub fn covector_images(&self) -> Vec<KForm> {
        (0..self.dim()).map(|i| row_as_one_form(&self.matrix, i)).collect()
    }

    pub fn act_on_form(&self, a: &KForm) -> Result<KForm> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim() });
        }
        a.pullback(&self.covector_images())
    }

    /// Matrix of the induced action on `Λ^k`, columns in multi-index order.
    pub fn induced_matrix(&self, k: usize) -> RatMatrix {
        let n = self.dim();
        let basis = MultiIndex::all(n, k);
        let images = self.covector_images();
        let cols: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|idx| {
                KForm::monomial(n, idx.clone(), Scalar::one())
                    .pullback(&images)
                    .expect("same dim")
                    .to_dense()
            })
            .collect();
        RatMatrix::from_columns(&cols)
    }

    /// Echelon basis of `Λ^±_J ⊂ Λ²`.
    ///
    /// Spanned by the real and imaginary parts of `ψᵃ∧ψ̄ᵇ` (invariant) or
    /// `ψᵃ∧ψᵇ` (anti-invariant) over a (1,0)-coframe.
    pub fn type_space(&self, sign: TypeSign) -> Vec<KForm> {
        let n = self.dim();
        let psis = self.one_zero_coframe();
        let mut parts = Vec::new();
        for (a, psi) in psis.iter().enumerate() {
            for (b, other) in psis.iter().enumerate().skip(a) {
                let product = match sign {
                    TypeSign::Plus => psi.wedge(&other.conjugate()),
                    TypeSign::Minus if b > a => psi.wedge(other),
                    TypeSign::Minus => continue,
                }
                .expect("same dim");
                let (re, im) = product.realify();
                parts.push(re);
                parts.push(im);
            }
        }
        Echelon::from_forms(n, 2, &parts).forms()
    }

    /// `(plus, minus) = ((a + Ja)/2, (a − Ja)/2)`.
    pub fn decompose_2form(&self, a: &KForm) -> Result<(KForm, KForm)> {
        if a.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: a.degree() });
        }
        let ja = self.act_on_form(a)?;
        let half = Scalar::new(1.into(), 2.into());
        Ok(((a + &ja).scale(&half), (a - &ja).scale(&half)))
    }

    fn covector_times_j(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.matrix.transpose().mul_vec(a)
    }

    pub fn is_one_zero(&self, psi: &ComplexKForm) -> bool {
        if psi.degree() != 1 || psi.dim() != self.dim() {
            return false;
        }
        let (re, im) = psi.realify();
        let (a, b) = (re.to_dense(), im.to_dense());
        let neg_b: Vec<Scalar> = b.iter().map(|x| -x).collect();
        self.covector_times_j(&a) == neg_b && self.covector_times_j(&b) == a
    }

    /// A basis of (1,0)-forms `e^k − i (e^k ∘ J)`, taking the first `k`
    /// that keep the coframe independent.
    pub fn one_zero_coframe(&self) -> Vec<ComplexKForm> {
        let n = self.dim();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut out = Vec::new();
        for k in 0..n {
            if out.len() * 2 == n {
                break;
            }
            let mut a = vec![Scalar::zero(); n];
            a[k] = Scalar::one();
            let b: Vec<Scalar> = self.covector_times_j(&a).iter().map(|x| -x).collect();
            let mut trial = rows.clone();
            trial.push(a.clone());
            trial.push(b.clone());
            if RatMatrix::from_rows(trial.clone()).rank() == trial.len() {
                rows = trial;
                out.push(ComplexKForm::from_parts(
                    &KForm::from_dense(n, 1, &a),
                    &KForm::from_dense(n, 1, &b),
                ));
            }
        }
        out
    }

    /// Sign of the orientation defined by `J`: the sign of
    /// `det[v_1, Jv_1, ..., v_n, Jv_n]` for any complex basis `v_j`.
    pub fn orientation(&self) -> Orientation {
        let n = self.dim();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for k in 0..n {
            if cols.len() == n {
                break;
            }
            let mut v = vec![Scalar::zero(); n];
            v[k] = Scalar::one();
            let jv = self.apply(&v);
            let mut trial = cols.clone();
            trial.push(v);
            trial.push(jv);
            if RatMatrix::from_rows(trial.clone()).rank() == trial.len() {
                cols = trial;
            }
        }
        if RatMatrix::from_columns(&cols).determinant().is_positive() {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    }
}

/// Values `N(e_i, e_j)` of the Nijenhuis tensor on left-invariant fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisTensor {
    dim: usize,
    entries: Vec<Vec<Scalar>>,
}

impl NijenhuisTensor {
    pub fn get(&self, i: usize, j: usize) -> &[Scalar] {
        &self.entries[i * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.iter().all(Zero::is_zero))
    }

    /// Nonzero entries `(i, j, N(e_i, e_j))` with `i < j`, 0-based.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, Vec<Scalar>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.get(i, j);
                if !v.iter().all(Zero::is_zero) {
                    out.push((i, j, v.to_vec()));
                }
            }
        }
        out
    }
}

/// `N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]`.
pub fn nijenhuis(g: &LieAlgebraSpec, j: &AlmostComplexStructure) -> Result<NijenhuisTensor> {
    let n = g.dim();
    if j.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: j.dim() });
    }
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        v
    };
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (unit(a), unit(b));
            let (jx, jy) = (j.apply(&x), j.apply(&y));
            let t1 = g.bracket(&jx, &jy);
            let t2 = j.apply(&g.bracket(&jx, &y));
            let t3 = j.apply(&g.bracket(&x, &jy));
            let t4 = g.bracket(&x, &y);
            entries.push(
                (0..n)
                    .map(|k| &t1[k] - &t2[k] - &t3[k] - &t4[k])
                    .collect(),
            );
        }
    }
    Ok(NijenhuisTensor { dim: n, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    fn sign(self) -> Scalar {
        match self {
            Orientation::Positive => Scalar::one(),
            Orientation::Negative => -Scalar::one(),
        }
    }
}

/// Positive-definite metric on a 4-dimensional space, optionally paired with `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpec {
    g: RatMatrix,
    orientation: Orientation,
    structure: Option<AlmostComplexStructure>,
    compatible: bool,
}

impl MetricSpec {
    pub fn new(g: RatMatrix) -> Result<Self> {
        if g.nrows() != 4 || g.ncols() != 4 {
            return Err(Error::InvalidMetric(format!(
                "only 4x4 metrics are supported, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        if !g.is_symmetric() {
            return Err(Error::InvalidMetric("not symmetric".into()));
        }
        if !g.is_positive_definite() {
            return Err(Error::InvalidMetric("not positive definite".into()));
        }
        Ok(MetricSpec { g, orientation: Orientation::Positive, structure: None, compatible: false })
    }

    pub fn euclidean() -> Self {
        Self::new(RatMatrix::identity(4)).expect("identity is a metric")
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Attaches `J`, records whether `g(JX, JY) = g(X, Y)`, and orients by `J`.
    pub fn with_structure(mut self, j: AlmostComplexStructure) -> Result<Self> {
        if j.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: j.dim() });
        }
        let jm = j.matrix();
        self.compatible = &(&jm.transpose() * &self.g) * jm == self.g;
        self.orientation = j.orientation();
        self.structure = Some(j);
        Ok(self)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.g
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn structure(&self) -> Option<&AlmostComplexStructure> {
        self.structure.as_ref()
    }

    pub fn is_compatible(&self) -> bool {
        self.compatible
    }

    /// `ω(X, Y) = g(X, JY)`, for a compatible structure.
    pub fn fundamental_form(&self) -> Option<KForm> {
        let j = self.structure.as_ref().filter(|_| self.compatible)?;
        let omega = &self.g * j.matrix();
        crate::linalg::skew_to_two_form(&omega).ok()
    }

    fn volume_factor(&self) -> Result<Scalar> {
        rational_sqrt(&self.g.determinant()).ok_or_else(|| {
            Error::InvalidMetric("sqrt(det g) is irrational; the star has no rational matrix".into())
        })
    }
}

/// Hodge star on 2-forms in dimension 4.
pub fn hodge_star_2(metric: &MetricSpec, a: &KForm) -> Result<KForm> {
    if a.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: a.dim() });
    }
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: a.degree() });
    }
    let vol = metric.volume_factor()? * metric.orientation.sign();
    let ginv = metric.g.inverse().expect("positive definite");
    let raised = &(&ginv * &two_form_to_skew(a)?) * &ginv;
    let mut out = KForm::zero(4, 2);
    for idx in MultiIndex::all(4, 2) {
        let kl: Vec<usize> = idx.indices().collect();
        let ij: Vec<usize> = (0..4).filter(|i| !kl.contains(i)).collect();
        let (_, odd) = MultiIndex::sorted(&[ij[0], ij[1], kl[0], kl[1]], 4)?.expect("distinct");
        let eps = if odd { -Scalar::one() } else { Scalar::one() };
        out.add_term(idx, &vol * &eps * &raised[(ij[0], ij[1])]);
    }
    Ok(out)
}

/// Matrix of the star on `Λ²` in multi-index order.
pub fn hodge_star_matrix(metric: &MetricSpec) -> Result<RatMatrix> {
    let cols = MultiIndex::all(4, 2)
        .into_iter()
        .map(|idx| Ok(hodge_star_2(metric, &KForm::monomial(4, idx, Scalar::one()))?.to_dense()))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::from_columns(&cols))
}

/// Echelon basis of the self-dual (+1) or anti-self-dual (−1) 2-forms.
pub fn star_eigenspace(metric: &MetricSpec, sign: TypeSign) -> Result<Vec<KForm>> {
    let shifted = hodge_star_matrix(metric)?.sub(&RatMatrix::identity(6).scale(&sign.eigenvalue()));
    let vectors: Vec<KForm> =
        shifted.nullspace().iter().map(|v| KForm::from_dense(4, 2, v)).collect();
    Ok(Echelon::from_forms(4, 2, &vectors).forms())
}

/// Outcome of comparing the self-dual forms with `span(ω) + Λ⁻_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeIdentityReport {
    pub compatible: bool,
    pub dim_self_dual: usize,
    pub dim_anti_self_dual: usize,
    pub dim_omega_plus_anti_invariant: usize,
    pub identity_holds: bool,
}

pub fn hodge_identity(metric: &MetricSpec) -> Result<HodgeIdentityReport> {
    let sd = star_eigenspace(metric, TypeSign::Plus)?;
    let asd = star_eigenspace(metric, TypeSign::Minus)?;
    let (dim_rhs, holds) = match (metric.structure(), metric.fundamental_form()) {
        (Some(j), Some(omega)) => {
            let mut gens = j.type_space(TypeSign::Minus);
            gens.push(omega);
            let rhs = Echelon::from_forms(4, 2, &gens).forms();
            (rhs.len(), rhs == sd)
        }
        _ => (0, false),
    };
    Ok(HodgeIdentityReport {
        compatible: metric.is_compatible(),
        dim_self_dual: sd.len(),
        dim_anti_self_dual: asd.len(),
        dim_omega_plus_anti_invariant: dim_rhs,
        identity_holds: holds,
    })
}

/// Pairing of a complex 1-form with a real vector.
pub fn evaluate_one_form(psi: &ComplexKForm, v: &[Scalar]) -> crate::scalar::GaussianScalar {
    let (re, im) = psi.realify();
    gaussian(dot(&re.to_dense(), v), dot(&im.to_dense(), v))
}
