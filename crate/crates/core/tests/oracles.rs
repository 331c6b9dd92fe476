mod common;

use acslab_core::acs::{nijenhuis, AlmostComplexStructure};
use acslab_core::cohomology::betti_numbers;
use acslab_core::exterior::{ComplexKForm, KForm};
use acslab_core::invariant::purity_report;
use acslab_core::liealg::LieAlgebraSpec;
use acslab_core::linalg::{two_form_to_skew, RatMatrix};
use acslab_core::scalar::{q, Scalar};
use common::*;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn engine_betti_numbers_match_dense_rank_oracle() {
    for text in corpus() {
        let g = LieAlgebraSpec::from_salamon(text).unwrap();
        assert_eq!(betti_numbers(&g), naive_betti(text), "algebra {text}");
    }
}

#[test]
fn oracle_reproduces_known_values() {
    assert_eq!(naive_betti("0,0,0,0"), vec![1, 4, 6, 4, 1]);
    assert_eq!(naive_betti("0,0,12,13,14,23"), vec![1, 2, 4, 6, 4, 2, 1]);
    assert_eq!(integer_rank(vec![vec![2, 4], vec![1, 2]]), 1);
    assert_eq!(integer_rank(vec![vec![0, 3], vec![5, 1], vec![5, 4]]), 2);
}

#[test]
fn su2_plus_r3_matches_kunneth() {
    // H(su(2)) has Poincaré polynomial 1 + t³, H(ℝ³) has (1 + t)³
    let su2 = [1usize, 0, 0, 1];
    let r3 = [1usize, 3, 3, 1];
    let mut product = vec![0usize; 7];
    for (i, a) in su2.iter().enumerate() {
        for (j, b) in r3.iter().enumerate() {
            product[i + j] += a * b;
        }
    }
    let g = LieAlgebraSpec::from_salamon("23,-13,12,0,0,0").unwrap();
    assert_eq!(betti_numbers(&g), product);
    assert_eq!(naive_betti("23,-13,12,0,0,0"), product);
}

#[test]
fn su2_purity_matches_brute_force_oracle() {
    let text = "23,-13,12,0,0,0";
    let structure = naive_structure(text);
    let b2 = naive_betti(text)[2];
    let h_plus = brute_force_h_dim(&structure, &phi_products(true));
    let h_minus = brute_force_h_dim(&structure, &phi_products(false));
    assert_eq!((b2, h_plus, h_minus), (3, 3, 3));
    // H⁺ is already all of H², so the sum is H² and the intersection is H⁻
    let full = h_plus == b2;
    let intersection = h_plus + h_minus - b2;

    let g = LieAlgebraSpec::from_salamon(text).unwrap();
    let psis: Vec<ComplexKForm> = ["e1 + i*e4", "e2 + i*e5", "e3 + i*e6"]
        .iter()
        .map(|s| ComplexKForm::parse(6, s).unwrap())
        .collect();
    let j = AlmostComplexStructure::from_one_zero_forms(6, &psis).unwrap();
    let report = purity_report(&g, &j).unwrap();
    assert_eq!(report.betti2, b2);
    assert_eq!(report.h_plus.dim(), h_plus);
    assert_eq!(report.h_minus.dim(), h_minus);
    assert_eq!(report.dim_intersection, intersection);
    assert_eq!(report.is_full, full);
    assert!(!report.is_pure);
}

/// Complex matrix as a (real, imaginary) pair.
struct CMat(RatMatrix, RatMatrix);

impl CMat {
    fn mul(&self, o: &CMat) -> CMat {
        CMat((&self.0 * &o.0).sub(&(&self.1 * &o.1)), (&self.0 * &o.1).add(&(&self.1 * &o.0)))
    }

    fn transpose(&self) -> CMat {
        CMat(self.0.transpose(), self.1.transpose())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
}

/// `(0,2)` part of a complex 2-form, as the matrix `Pᵀ B P` with `P = (I + iJ)/2`.
fn zero_two_part(b: &ComplexKForm, j: &AlmostComplexStructure) -> CMat {
    let (re, im) = b.realify();
    let dim = j.dim();
    let half = q(1, 2);
    let p = CMat(RatMatrix::identity(dim).scale(&half), j.matrix().scale(&half));
    let bm = CMat(two_form_to_skew(&re).unwrap(), two_form_to_skew(&im).unwrap());
    p.transpose().mul(&bm).mul(&p)
}

/// Integrable exactly when `dψ` has no `(0,2)` part for every `(1,0)`-form `ψ`.
fn integrable_by_forms(g: &LieAlgebraSpec, j: &AlmostComplexStructure) -> bool {
    j.one_zero_coframe().iter().all(|psi| {
        let (re, im) = psi.realify();
        let dpsi = ComplexKForm::from_parts(&g.d(&re).unwrap(), &g.d(&im).unwrap());
        zero_two_part(&dpsi, j).is_zero()
    })
}

fn structure_from(dim: usize, psis: &[&str]) -> AlmostComplexStructure {
    let forms: Vec<ComplexKForm> = psis.iter().map(|s| ComplexKForm::parse(dim, s).unwrap()).collect();
    AlmostComplexStructure::from_one_zero_forms(dim, &forms).unwrap()
}

#[test]
fn example_structure_dpsi3_has_expected_zero_two_part() {
    let g = LieAlgebraSpec::from_salamon("0,0,12,13,14,23").unwrap();
    let j = structure_from(6, &["e1 + i*e2", "e4 + i*e6", "e3 + i*e5"]);
    let dpsi3 = ComplexKForm::from_parts(&g.d(&KForm::basis(6, &[3]).unwrap()).unwrap(), &g.d(&KForm::basis(6, &[5]).unwrap()).unwrap());
    // (i/4) ψ̄¹∧ψ̄² with ψ̄¹ = e1 − i e2, ψ̄² = e4 − i e6
    let bar = ComplexKForm::parse(6, "e14 - e26 - i*e16 - i*e24").unwrap();
    let expected = bar.map_coeffs(|c| c * &acslab_core::scalar::gaussian(Scalar::zero(), q(1, 4)));
    let got = zero_two_part(&dpsi3, &j);
    let want = zero_two_part(&expected, &j);
    assert_eq!((got.0, got.1), (want.0, want.1));
    assert!(!integrable_by_forms(&g, &j));
    assert!(!nijenhuis(&g, &j).unwrap().is_zero());
}

#[test]
fn nijenhuis_agrees_with_form_criterion() {
    let cases: Vec<(&str, AlmostComplexStructure)> = vec![
        ("0,0,0,0,13-24,14+23", structure_from(6, &["e1 + i*e2", "e3 + i*e4", "e5 + i*e6"])),
        ("0,0,0,0,13-24,14+23", structure_from(6, &["e1 + i*e2", "e3 - i*e4", "e5 + i*e6"])),
        ("0,0,12,13,14,23", structure_from(6, &["e1 + i*e2", "e4 + i*e6", "e3 + i*e5"])),
        ("23,-13,12,0,0,0", structure_from(6, &["e1 + i*e4", "e2 + i*e5", "e3 + i*e6"])),
        ("0,0,0,0,0,12", structure_from(6, &["e1 + i*e2", "e3 + i*e4", "e5 + i*e6"])),
    ];
    let mut integrable_seen = false;
    for (text, j) in &cases {
        let g = LieAlgebraSpec::from_salamon(text).unwrap();
        let by_forms = integrable_by_forms(&g, j);
        integrable_seen |= by_forms;
        assert_eq!(nijenhuis(&g, j).unwrap().is_zero(), by_forms, "{text}");
    }
    assert!(integrable_seen);

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for text in ["0,0,12,13,14,23", "0,0,0,12,13,23", "0,0,0,0,12,34", "23,-13,12,0,0,0"] {
        let g = LieAlgebraSpec::from_salamon(text).unwrap();
        for _ in 0..4 {
            let (j, _) = random_structure(&mut rng, 6);
            assert_eq!(nijenhuis(&g, &j).unwrap().is_zero(), integrable_by_forms(&g, &j), "{text}");
        }
    }
}
