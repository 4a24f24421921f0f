mod support;

use fibwqed::bound_states::{allowed_positions, dressed_state, giant_vds, giant_vds_condition, local_vds, vds_verify};
use fibwqed::lattice::{build_coupled, EmitterSpec, WaveguideSpec};
use fibwqed::linalg::norm;
use fibwqed::multifractal::{BoxCounting, ProbabilityMeasure};
use fibwqed::words::{HoppingSequence, SubstitutionRule};
use support::{jacobi_eigen, projected_weight, rows};

fn host(p: u32, q: u32, n: usize) -> WaveguideSpec {
    WaveguideSpec::fibonacci(SubstitutionRule::new(p, q).unwrap(), n, 0.2)
}

fn seq(spec: &WaveguideSpec) -> HoppingSequence {
    spec.hopping_sequence().unwrap().unwrap()
}

/// The closed form must lie in the E = 0 eigenspace found by Jacobi rotations.
fn assert_in_null_space(spec: &WaveguideSpec, e: EmitterSpec) {
    let st = dressed_state(spec, &e).unwrap();
    let h = build_coupled(spec, &[e]).unwrap();
    let psi = st.vector_in(&h, 0).unwrap();
    let (values, vectors) = jacobi_eigen(&rows(h.matrix().as_slice(), h.dim()));
    let null: Vec<Vec<f64>> = values
        .iter()
        .zip(vectors)
        .filter(|(v, _)| v.abs() < 1e-9)
        .map(|(_, vec)| vec)
        .collect();
    assert!(!null.is_empty(), "{e:?}: no zero mode");
    let w = projected_weight(&psi, &null);
    assert!(w >= 1.0 - 1e-8, "{e:?}: overlap {w}");
}

#[test]
fn giant_states_match_numerical_zero_modes() {
    let spec = host(1, 1, 40);
    let s = seq(&spec);
    let mut checked = 0;
    for d in [2, 6, 10] {
        for n0 in allowed_positions(&s, d, 40) {
            assert_in_null_space(&spec, EmitterSpec::giant(n0, d, 0.07));
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn local_states_match_numerical_zero_modes() {
    let spec = host(1, 2, 40);
    for n in 2..38 {
        assert_in_null_space(&spec, EmitterSpec::local(n, 0.05));
    }
}

#[test]
fn perturbed_amplitude_fails_the_residual() {
    let spec = host(1, 1, 60);
    let e = EmitterSpec::giant(5, 6, 0.05);
    let st = dressed_state(&spec, &e).unwrap();
    let h = build_coupled(&spec, &[e]).unwrap();
    assert!(vds_verify(&st, &h).unwrap().pass);
    let mut psi = st.vector_in(&h, 0).unwrap();
    psi[8] *= 1.0 + 1e-3;
    let r = norm(&h.matrix().mul_vec(&psi));
    assert!(r > 1e-10 * h.matrix().frobenius_norm(), "residual {r:e}");
}

#[test]
fn giant_support_is_confined() {
    let spec = host(1, 1, 233);
    let s = seq(&spec);
    for d in [2, 6, 10, 14] {
        for n0 in allowed_positions(&s, d, 233) {
            let st = giant_vds(&s, n0, d, 0.05).unwrap();
            for (site, _) in st.photonic() {
                assert!(site > n0 && site < n0 + d && (site - n0) % 2 == 1);
            }
            assert_eq!(st.amplitude_at(n0), 0.0);
            assert_eq!(st.amplitude_at(n0 + d), 0.0);
        }
    }
}

#[test]
fn condition_reports_odd_legs() {
    let s = seq(&host(1, 1, 60));
    let c = giant_vds_condition(&s, 5, 7).unwrap();
    assert!(!c.satisfied);
    assert_eq!(c.reason.as_deref(), Some("odd interior site count required"));
}

#[test]
fn one_two_amplitude_ratios() {
    // Successive amplitudes change by ρ across a t_B bond and stay equal across two t_A bonds.
    let spec = host(1, 2, 200);
    let s = seq(&spec);
    let rho = s.rho();
    for n_j in [41usize, 60, 97, 150] {
        let st = local_vds(&s, n_j, 0.05).unwrap();
        let ph = st.photonic();
        for w in ph.windows(2) {
            let ((a, va), (b, vb)) = (w[0], w[1]);
            let ratio = (vb / va).abs();
            let b_between = s.beta_count(a.min(b), a.max(b)).unwrap();
            // sites are ascending: an odd emitter's cloud approaches the atom, an even one recedes
            let k = b_between as i32;
            let expected = if n_j % 2 == 1 { rho.powi(-k) } else { rho.powi(k) };
            assert!((ratio - expected).abs() < 1e-12 * expected.max(1.0), "n_j={n_j} {a}->{b}");
            assert!(b_between <= 1);
        }
    }
}

#[test]
fn long_giant_state_is_multifractal() {
    // The widest allowed giant atom on a long (1,1) chain.
    let n = 2584;
    let spec = host(1, 1, n);
    let s = seq(&spec);
    let (n0, d) = (2..n)
        .rev()
        .filter(|d| d % 4 == 2)
        .find_map(|d| allowed_positions(&s, d, n).first().map(|&n0| (n0, d)))
        .unwrap();
    assert!(d > n / 2, "widest leg only {d}");
    let st = giant_vds(&s, n0, d, 0.05).unwrap();
    let mu = ProbabilityMeasure::from_weights(&st.photonic_vector().iter().map(|x| x * x).collect::<Vec<_>>()).unwrap();
    let sp = BoxCounting::for_size(n).spectrum(&mu).unwrap();
    assert!(sp.support_width() > 0.2, "width {}", sp.support_width());
}
