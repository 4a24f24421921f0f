mod support;

use fibwqed::eigen::{eigh, eigh_tridiagonal};
use fibwqed::lattice::{build_coupled, build_waveguide, EmitterSpec, WaveguideSpec};
use fibwqed::linalg::SymMatrix;
use fibwqed::spectral::{eigensolve, eigenvalues};
use fibwqed::words::SubstitutionRule;
use proptest::prelude::*;
use support::{jacobi_eigen, rows, sturm_eigenvalues};

fn sym_matrix(max_dim: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-3.0f64..3.0, n * n).prop_map(move |v| {
            let mut m = SymMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    m.set(i, j, v[i * n + j]);
                }
            }
            m
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dense_solver_matches_jacobi(m in sym_matrix(64)) {
        let d = eigh(&m).unwrap();
        let (oracle, _) = jacobi_eigen(&rows(m.as_slice(), m.dim()));
        for (a, b) in d.values().iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!(d.max_residual(&m) <= 1e-10 * scale);
        prop_assert!(d.max_orthogonality_error() <= 1e-10);
        prop_assert!((d.values().iter().sum::<f64>() - m.trace()).abs() < 1e-8);
    }

    #[test]
    fn tridiagonal_solver_matches_sturm(
        diag in prop::collection::vec(-2.0f64..2.0, 2..80),
        seed in prop::collection::vec(0.05f64..2.0, 80),
    ) {
        let off = &seed[..diag.len() - 1];
        let d = eigh_tridiagonal(&diag, off).unwrap();
        let oracle = sturm_eigenvalues(&diag, off);
        for (a, b) in d.values().iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        let m = SymMatrix::tridiagonal(&diag, off);
        prop_assert!(d.max_residual(&m) <= 1e-10 * m.frobenius_norm());
    }

    #[test]
    fn chiral_hosts_have_symmetric_spectra(
        n in 4usize..120, p in 1u32..4, q in 1u32..4, tb in 0.1f64..1.5, g in 0.0f64..0.3, pos in 0usize..1000,
    ) {
        let spec = WaveguideSpec::fibonacci(SubstitutionRule::new(p, q).unwrap(), n, tb);
        let h = build_coupled(&spec, &[EmitterSpec::local(pos % n, g)]).unwrap();
        let e = eigenvalues(&h).unwrap();
        let d = e.len();
        for i in 0..d {
            prop_assert!((e[i] + e[d - 1 - i]).abs() <= 1e-8);
        }
        prop_assert!(e.iter().sum::<f64>().abs() <= 1e-8);
    }
}

#[test]
fn two_site_chain() {
    let e = eigenvalues(&build_waveguide(&WaveguideSpec::uniform(2)).unwrap()).unwrap();
    assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
}

#[test]
fn bloch_spectrum_periodic() {
    for n in [3usize, 16, 64, 257] {
        let e = eigenvalues(&build_waveguide(&WaveguideSpec::uniform(n).periodic()).unwrap()).unwrap();
        let mut want: Vec<f64> = (0..n)
            .map(|k| 2.0 * (std::f64::consts::TAU * k as f64 / n as f64).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "N={n}: {a} vs {b}");
        }
    }
}

#[test]
fn fibonacci_1597_matches_bisection() {
    let spec = WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, 1597, 0.5);
    let h = build_waveguide(&spec).unwrap();
    let d = eigensolve(&h).unwrap();
    let m = h.matrix();
    let oracle = sturm_eigenvalues(&m.diagonal(), &m.off_diagonal());
    let worst = d
        .values()
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "max deviation {worst:e}");
    assert!(d.max_residual(m) <= 1e-10 * m.frobenius_norm());
}

#[test]
fn dense_path_agrees_with_tridiagonal_path() {
    let spec = WaveguideSpec::fibonacci(SubstitutionRule::new(1, 2).unwrap(), 200, 0.3);
    let h = build_waveguide(&spec).unwrap();
    let a = eigh(h.matrix()).unwrap();
    let b = eigensolve(&h).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).abs() < 1e-12);
    }
}
