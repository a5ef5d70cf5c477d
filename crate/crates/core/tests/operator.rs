mod common;

use common::{c, columns, gauss_solve, lu_det, random_complex, random_matrix, random_orthonormal, rng, rows, singular_values_hermitian, spectral_norm, CMatrix};
use num_complex::Complex64;
use rand::Rng;
use zerofree::operator::{
    det_bound, finite_rank_solve, fredholm_det, fredholm_det_spec, inverse_norm_certificate, regularized_inverse,
    strip_grid, trace_norm, CoeffFamily, DiagonalFactor, FiniteRankSpec, TraceClassMatrix,
};
use zerofree::GrowthEnvelope;

fn env() -> GrowthEnvelope {
    GrowthEnvelope::new(1.0, 1, 0.0).unwrap()
}

fn random_spec<R: Rng>(r: &mut R, n: usize, d: usize) -> FiniteRankSpec {
    let e = random_orthonormal(r, d, n);
    let c0 = random_matrix(r, n, n, 0.3);
    let c1 = random_matrix(r, n, n, 0.05);
    FiniteRankSpec::new(d, columns(&e), CoeffFamily::Polynomial { coeffs: vec![rows(&c0), rows(&c1)] }, env()).unwrap()
}

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    num / den
}

#[test]
fn finite_rank_solve_matches_dense_solve() {
    let mut r = rng(3);
    for _ in 0..200 {
        let n = r.random_range(1..=8);
        let d = r.random_range(n..=64);
        let spec = random_spec(&mut r, n, d);
        let z = c(r.random_range(-5.0..5.0), 0.5);
        let g: Vec<Complex64> = (0..d).map(|_| random_complex(&mut r, 1.0)).collect();
        let dense = CMatrix::identity(d, d) + spec.dense_operator(z).unwrap();
        let oracle = gauss_solve(&dense, &g);
        let s = finite_rank_solve(&spec, z, &g).unwrap();
        assert!(rel(&s.f, &oracle) <= 1e-9);
        // the complement contributes a factor 1 to the determinant
        let det = fredholm_det_spec(&spec, z).unwrap();
        assert!((det - lu_det(&dense)).norm() <= 1e-10 * det.norm().max(1.0));
    }
}

#[test]
fn fredholm_determinant_matches_elimination() {
    let mut r = rng(5);
    for _ in 0..100 {
        let n = r.random_range(1..=8);
        let m = random_matrix(&mut r, n, n, 0.7);
        let t = TraceClassMatrix::new(m.clone()).unwrap();
        let det = fredholm_det(&t).unwrap();
        let oracle = lu_det(&(CMatrix::identity(n, n) + m));
        assert!((det - oracle).norm() <= 1e-10 * oracle.norm(), "{det} vs {oracle}");
        assert!(det.norm() <= det_bound(&t) * (1.0 + 1e-12));
    }
}

#[test]
fn trace_norm_matches_hermitian_oracle() {
    let mut r = rng(9);
    for _ in 0..50 {
        let m = random_matrix(&mut r, 6, 6, 1.0);
        let t = TraceClassMatrix::new(m.clone()).unwrap();
        let oracle: f64 = singular_values_hermitian(&m).iter().sum();
        assert!((trace_norm(&t) - oracle).abs() <= 1e-10 * oracle);
        assert!(t.singular_values().windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn regularized_inverse_polynomial_identity_and_bound() {
    let mut r = rng(13);
    for draw in 0..100 {
        let n = r.random_range(1..=14);
        let m = random_matrix(&mut r, n, n, 0.5);
        let t = TraceClassMatrix::new(m.clone()).unwrap();
        // alternate between generic points and eigen-singular points mu = -1/l
        let mu = if draw % 2 == 0 {
            Complex64::from_polar(2.0, r.random_range(0.0..std::f64::consts::TAU))
        } else {
            let eig = zerofree::operator::eigenvalues(&m).unwrap();
            let l = eig.iter().copied().find(|l| l.norm() > 1e-3).unwrap_or(c(1.0, 0.0));
            -1.0 / l
        };
        let a = CMatrix::identity(n, n) + &m * mu;
        let f = regularized_inverse(&t, mu);
        let det = lu_det(&a);
        let defect = &f * &a - CMatrix::identity(n, n) * det;
        assert!(defect.norm() <= 1e-9 * (1.0 + f.norm()) * (1.0 + a.norm()), "n = {n}: {}", defect.norm());
        assert!(spectral_norm(&f) <= (trace_norm(&t) * mu.norm()).exp() * (1.0 + 1e-9));
    }
}

#[test]
fn certificate_never_under_reports() {
    let mut r = rng(17);
    let xs: Vec<f64> = (-10..=10).map(|j| j as f64 * 3.0).collect();
    for _ in 0..20 {
        let n = r.random_range(1..=4);
        let d = r.random_range(n..=12);
        let e = random_orthonormal(&mut r, d, n);
        let factors = (0..n)
            .map(|_| DiagonalFactor {
                rate: r.random_range(0.0..1.0),
                zeros: (0..r.random_range(0..3)).map(|_| c(r.random_range(-20.0..20.0), r.random_range(1.5..4.0))).collect(),
            })
            .collect();
        let u = random_orthonormal(&mut r, n, n);
        let spec = FiniteRankSpec::new(
            d,
            columns(&e),
            CoeffFamily::BlaschkeDiag { factors, unitary: Some(rows(&u)) },
            GrowthEnvelope::new(1.0, 0, 1.0).unwrap(),
        )
        .unwrap();
        let report = inverse_norm_certificate(&spec, &xs, &strip_grid(&xs), &[0.01, 0.1], None).unwrap();
        for cert in &report.certificates {
            let z = c(cert.x, 0.5);
            let dense = CMatrix::identity(d, d) + spec.dense_operator(z).unwrap();
            let inv = dense.try_inverse().unwrap();
            let direct = spectral_norm(&inv);
            assert!(cert.norm_bound >= direct * (1.0 - 1e-9), "x = {}: {} < {direct}", cert.x, cert.norm_bound);
        }
    }
}

#[test]
fn rank_one_blaschke_certificate() {
    let spec = FiniteRankSpec::new(
        2,
        FiniteRankSpec::standard_basis(2, 1),
        CoeffFamily::BlaschkeDiag { factors: vec![DiagonalFactor { rate: 0.0, zeros: vec![c(2.0, 2.0)] }], unitary: None },
        GrowthEnvelope::new(1.0, 0, 0.0).unwrap(),
    )
    .unwrap();
    let xs: Vec<f64> = (-20..=20).map(|j| j as f64).collect();
    let report = inverse_norm_certificate(&spec, &xs, &strip_grid(&xs), &[0.1], None).unwrap();
    for cert in &report.certificates {
        let z = c(cert.x, 0.5);
        let a = (z - c(2.0, 2.0)) / (z - c(2.0, -2.0));
        assert!((cert.det_lower_bound - a.norm()).abs() < 1e-14);
        let direct = (1.0 / a.norm()).max(1.0);
        assert!(cert.norm_bound >= direct * (1.0 - 1e-12));
    }
    for x in [-100.0, -3.0, 0.0, 2.0, 50.0] {
        assert!((spec.det(c(x, 0.0)).unwrap().norm() - 1.0).abs() <= 1e-10);
    }
}
