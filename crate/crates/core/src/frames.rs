//! Symplectic frames and anti-invariant structures built from them.
//!
//! A frame is `V_1..V_n, W_1..W_n` with `ω(V_i, W_j) = δ_ij` and
//! `ω(V_i, V_j) = ω(W_i, W_j) = 0`; in that order the pairing matrix is
//! `[[0, I], [−I, 0]]`.

use num_traits::{One, Signed, Zero};

use crate::acs::AlmostComplexStructure;
use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::linalg::{row_as_one_form, two_form_to_skew, RatMatrix};
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameSet {
    dim: usize,
    v: Vec<Vector>,
    w: Vec<Vector>,
    pairing: RatMatrix,
}

impl FrameSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn v(&self) -> &[Vector] {
        &self.v
    }

    pub fn w(&self) -> &[Vector] {
        &self.w
    }

    /// `V_1, ..., V_n, W_1, ..., W_n`.
    pub fn vectors(&self) -> Vec<Vector> {
        self.v.iter().chain(&self.w).cloned().collect()
    }

    /// Matrix whose columns are [`FrameSet::vectors`].
    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(&self.vectors())
    }

    /// Recomputed `ω(u_a, u_b)` over the frame vectors.
    pub fn pairing(&self) -> &RatMatrix {
        &self.pairing
    }

    pub fn is_symplectic(&self) -> bool {
        self.pairing == standard_symplectic(self.dim)
    }
}

/// `[[0, I], [−I, 0]]`.
pub fn standard_symplectic(dim: usize) -> RatMatrix {
    let n = dim / 2;
    let mut m = RatMatrix::zeros(dim, dim);
    for i in 0..n {
        m[(i, n + i)] = Scalar::one();
        m[(n + i, i)] = -Scalar::one();
    }
    m
}

fn pairing_matrix(omega: &RatMatrix, vectors: &[Vector]) -> RatMatrix {
    let k = vectors.len();
    let mut m = RatMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] = omega.bilinear(&vectors[a], &vectors[b]);
        }
    }
    m
}

fn check_pairing(omega: &RatMatrix) -> Result<()> {
    if !omega.is_skew() {
        return Err(Error::Precondition("pairing matrix is not skew-symmetric".into()));
    }
    if omega.nrows() % 2 != 0 || omega.determinant().is_zero() {
        return Err(Error::DegeneratePairing);
    }
    Ok(())
}

/// Processes the inputs in order: the first remaining vector becomes `V_k`,
/// its partner is the first remaining vector pairing nontrivially with it,
/// rescaled to `W_k`, and the rest are projected onto the ω-complement.
pub fn symplectic_gram_schmidt(vectors: &[Vector], omega: &RatMatrix) -> Result<FrameSet> {
    check_pairing(omega)?;
    let dim = omega.nrows();
    if vectors.len() != dim || vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: vectors.len() });
    }
    if RatMatrix::from_rows(vectors.to_vec()).rank() < dim {
        return Err(Error::DependentVectors);
    }
    let mut remaining: Vec<Vector> = vectors.to_vec();
    let (mut vs, mut ws) = (Vec::new(), Vec::new());
    while !remaining.is_empty() {
        let u = remaining.remove(0);
        let partner = remaining
            .iter()
            .position(|x| !omega.bilinear(&u, x).is_zero())
            .ok_or(Error::DependentVectors)?;
        let x = remaining.remove(partner);
        let scale = omega.bilinear(&u, &x).recip();
        let w: Vector = x.iter().map(|c| c * &scale).collect();
        for r in &mut remaining {
            // r ← r + ω(r, V) W − ω(r, W) V
            let rv = omega.bilinear(r, &u);
            let rw = omega.bilinear(r, &w);
            for k in 0..dim {
                let delta = &rv * &w[k] - &rw * &u[k];
                r[k] += delta;
            }
        }
        vs.push(u);
        ws.push(w);
    }
    let all: Vec<Vector> = vs.iter().chain(&ws).cloned().collect();
    let pairing = pairing_matrix(omega, &all);
    Ok(FrameSet { dim, v: vs, w: ws, pairing })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiInvariantPair {
    pub j: AlmostComplexStructure,
    pub omega: KForm,
    pub note: &'static str,
}

pub const BLOCKWISE_NOTE: &str =
    "symplectic planes paired in order (1,2), (3,4), ...; J V_odd = V_even, J W_odd = -W_even";

/// For `n` even, pairs the planes `(V_{2i−1}, W_{2i−1})` and `(V_{2i}, W_{2i})`
/// with `J V_{2i−1} = V_{2i}`, `J W_{2i−1} = −W_{2i}` (and `J² = −Id`), and
/// returns `J` together with `ω = Σ V^i ∧ W^i`; `Jω = −ω` is verified exactly.
pub fn anti_invariant_pair_from_frame(frame: &FrameSet) -> Result<AntiInvariantPair> {
    let dim = frame.dim;
    let n = dim / 2;
    if n % 2 != 0 {
        return Err(Error::OddHalfDimension { n, dim });
    }
    if !frame.is_symplectic() {
        return Err(Error::Precondition("frame is not symplectic".into()));
    }
    let f = frame.matrix();
    let f_inv = f.inverse().ok_or(Error::DependentVectors)?;
    // J in frame coordinates: columns are images of V_1..V_n, W_1..W_n
    let mut jf = RatMatrix::zeros(dim, dim);
    for i in (0..n).step_by(2) {
        let (v1, v2, w1, w2) = (i, i + 1, n + i, n + i + 1);
        jf[(v2, v1)] = Scalar::one(); // J V1 = V2
        jf[(v1, v2)] = -Scalar::one(); // J V2 = −V1
        jf[(w2, w1)] = -Scalar::one(); // J W1 = −W2
        jf[(w1, w2)] = Scalar::one(); // J W2 = W1
    }
    let j = AlmostComplexStructure::from_matrix(&(&f * &jf) * &f_inv)?;
    let mut omega = KForm::zero(dim, 2);
    for i in 0..n {
        let vi = row_as_one_form(&f_inv, i);
        let wi = row_as_one_form(&f_inv, n + i);
        omega = &omega + &vi.wedge(&wi)?;
    }
    if j.act_on_form(&omega)? != -&omega {
        return Err(Error::Precondition("constructed J does not reverse omega".into()));
    }
    Ok(AntiInvariantPair { j, omega, note: BLOCKWISE_NOTE })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReverseCheck {
    pub name: &'static str,
    pub value: Scalar,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReverseReport {
    pub checks: Vec<ReverseCheck>,
    pub independent: bool,
    pub frame: Option<FrameSet>,
}

impl ReverseReport {
    pub fn passed(&self) -> bool {
        self.independent && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> =
            self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        if !self.independent {
            out.push("independence of {V1, JV1, KV1, JKV1}");
        }
        out
    }
}

/// Whether `K` is calibrated by `ω`: the symmetric part of `X, Y ↦ ω(X, KY)`
/// is positive definite.
pub fn is_calibrated(omega: &RatMatrix, k: &AlmostComplexStructure) -> bool {
    let g = omega * k.matrix();
    let sym = g.add(&g.transpose()).scale(&Scalar::new(1.into(), 2.into()));
    sym.is_positive_definite()
}

/// Checks, in dimension 4, that an anti-invariant `ω` and a calibrated `K`
/// give `ω(V1, JV1) = 0`, `ω(KV1, JKV1) = 0`, `ω(V1, KV1) > 0`,
/// `ω(JV1, JKV1) < 0`, and that `{V1, JV1, KV1, JKV1}` can be turned into a
/// symplectic frame.
pub fn verify_reverse_direction(
    omega: &KForm,
    j: &AlmostComplexStructure,
    k: &AlmostComplexStructure,
    v1: &[Scalar],
) -> Result<ReverseReport> {
    if omega.dim() != 4 || j.dim() != 4 || k.dim() != 4 || v1.len() != 4 {
        return Err(Error::Precondition("reverse-direction check is 4-dimensional".into()));
    }
    if j.act_on_form(omega)? != -omega {
        return Err(Error::Precondition("omega is not J-anti-invariant".into()));
    }
    let om = two_form_to_skew(omega)?;
    check_pairing(&om)?;
    if !is_calibrated(&om, k) {
        return Err(Error::Precondition("K is not calibrated by omega".into()));
    }
    if v1.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("V1 = 0".into()));
    }
    let jv = j.apply(v1);
    let kv = k.apply(v1);
    let jkv = j.apply(&kv);
    let checks = vec![
        {
            let value = om.bilinear(v1, &jv);
            ReverseCheck { name: "omega(V1, JV1) = 0", passed: value.is_zero(), value }
        },
        {
            let value = om.bilinear(&kv, &jkv);
            ReverseCheck { name: "omega(KV1, JKV1) = 0", passed: value.is_zero(), value }
        },
        {
            let value = om.bilinear(v1, &kv);
            ReverseCheck { name: "omega(V1, KV1) > 0", passed: value.is_positive(), value }
        },
        {
            let value = om.bilinear(&jv, &jkv);
            ReverseCheck { name: "omega(JV1, JKV1) < 0", passed: value.is_negative(), value }
        },
    ];
    let family = vec![v1.to_vec(), jv, kv, jkv];
    let independent = RatMatrix::from_rows(family.clone()).rank() == 4;
    let frame = if independent { symplectic_gram_schmidt(&family, &om).ok() } else { None };
    Ok(ReverseReport { checks, independent, frame })
}
