//! Randomised invariants across modules.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vnqpe_core::blockenc::{lcu_block_encoding, verify_block_encoding};
use vnqpe_core::numerics::{
    hermitian_eigendecomposition, kron, operator_norm, random_hermitian, random_state,
    vector_norm, ComplexMatrix,
};
use vnqpe_core::pauli::{
    couple_pointer, lcp_to_matrix, momentum_operator, parse_lcp, LcpHamiltonian, Pauli,
    PauliString,
};
use vnqpe_core::qet::{jacobi_anger_coefficients, qsp_response, PhaseSequence, Rotation};
use vnqpe_core::resources::{lcp_pipeline_cost, thm3_cost};
use vnqpe_core::vnqpe::{
    analytic_kappa, inverse_qft, qft, select_parameters_with, slack_for_delta, ParameterPolicy,
    PointerSizing, TimeScale,
};

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(pauli(), n).prop_map(|v| PauliString::new(v).unwrap())
}

fn lcp(n: usize) -> impl Strategy<Value = LcpHamiltonian> {
    prop::collection::vec((0.05f64..1.0, any::<bool>(), pauli_string(n)), 1..5).prop_map(|t| {
        let terms = t
            .into_iter()
            .map(|(c, neg, p)| (if neg { -c } else { c }, p))
            .collect();
        LcpHamiltonian::new(terms).unwrap()
    })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pauli_action_matches_matrix(p in pauli_string(3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_state(8, &mut rng);
        let mut out = vec![c(0.0, 0.0); 8];
        p.action().accumulate(c(1.0, 0.0), &v, &mut out);
        let want = p.to_matrix().unwrap().mul_vec(&v);
        for (a, b) in out.iter().zip(&want) {
            prop_assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn lcp_text_roundtrip(h in lcp(3)) {
        let back = parse_lcp(&h.to_text()).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn lcp_apply_matches_matrix(h in lcp(2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_state(4, &mut rng);
        let want = lcp_to_matrix(&h).unwrap().mul_vec(&v);
        for (a, b) in h.apply(&v).iter().zip(&want) {
            prop_assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(dim in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(dim, &mut rng);
        let s = hermitian_eigendecomposition(&h).unwrap();
        prop_assert!(operator_norm(&s.reconstruct().sub(&h)) < 1e-12);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn lcu_encodes_hamiltonian(h in lcp(2)) {
        let be = lcu_block_encoding(&h).unwrap();
        prop_assert!((be.beta() - h.one_norm()).abs() < 1e-15);
        prop_assert!(verify_block_encoding(&be, &lcp_to_matrix(&h).unwrap()).unwrap() < 1e-13);
    }

    #[test]
    fn coupling_is_tensor_with_momentum(h in lcp(1), r in 1usize..4) {
        let coupled = lcp_to_matrix(&couple_pointer(&h, r).unwrap()).unwrap();
        let p = ComplexMatrix::from_real_diagonal(&momentum_operator(r).unwrap());
        let want = kron(&lcp_to_matrix(&h).unwrap(), &p);
        prop_assert!(operator_norm(&coupled.sub(&want)) < 1e-13);
    }

    #[test]
    fn response_is_bounded(angles in prop::collection::vec((-3.0f64..3.0, 0.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 1..8), theta in -3.2f64..3.2) {
        let mut rot: Vec<Rotation> = angles
            .into_iter()
            .map(|(gamma, theta, phi, lambda)| Rotation { gamma, theta, phi, lambda })
            .collect();
        if rot.len() % 2 == 0 {
            rot.push(Rotation::IDENTITY);
        }
        let seq = PhaseSequence::new(rot).unwrap();
        prop_assert!(qsp_response(&seq, theta).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn jacobi_anger_reciprocal(t in -20.0f64..20.0, r in 0usize..12) {
        let p = jacobi_anger_coefficients(t, r);
        for k in 0..=p.degree() as i64 {
            prop_assert_eq!(p.coeff(k), p.coeff(-k));
        }
        let theta = 0.37;
        let g = p.eval_angle(theta);
        let h = p.eval_angle(-theta);
        prop_assert!((g - h).norm() < 1e-12);
    }

    #[test]
    fn qft_roundtrip(r in 1usize..7, extra in 0usize..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(1 << (r + extra), &mut rng);
        let mut v = psi.clone();
        inverse_qft(&mut v, r, r).unwrap();
        prop_assert!((vector_norm(&v) - 1.0).abs() < 1e-12);
        qft(&mut v, r).unwrap();
        for (a, b) in v.iter().zip(&psi) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn kappa_is_a_distribution(lambda in -2.0f64..2.0, t in 0.1f64..100.0, r in 1usize..9) {
        let total: f64 = (0..1i64 << r).map(|x| analytic_kappa(x, lambda, t, r)).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parameter_invariants(
        dk in 0.05f64..2.0,
        frac in 0.01f64..1.0,
        delta in 0.02f64..0.9,
        beta in 0.1f64..3.0,
        gap_time in any::<bool>(),
        formula in any::<bool>(),
    ) {
        let policy = ParameterPolicy {
            time: if gap_time { TimeScale::Gap } else { TimeScale::Precision },
            pointer: if formula { PointerSizing::Formula } else { PointerSizing::CoverSpectrum },
        };
        match select_parameters_with(dk, dk * frac, delta, beta, 0.0, policy) {
            Ok(p) => {
                p.validate().unwrap();
                prop_assert_eq!(p.k, slack_for_delta(delta));
                prop_assert!(p.r >= p.r_precision);
                prop_assert_eq!(p.signal_calls, 2 * p.d);
                prop_assert!(p.budget.eps_qet < p.budget.eps_hs);
            }
            // only pointer overflow may fail here
            Err(e) => {
                let overflow = matches!(e, vnqpe_core::Error::TooLarge { .. });
                prop_assert!(overflow, "unexpected error {:?}", e);
            }
        }
    }

    #[test]
    fn cost_breakdowns_sum(
        p in 1usize..20, n in 1usize..8, alpha in 0.1f64..4.0,
        dk in 0.05f64..2.0, delta in 0.01f64..0.9, frac in 0.001f64..1.0, eps in 1e-12f64..1.0,
    ) {
        for c in [
            lcp_pipeline_cost(p, n, 16, alpha, dk, delta, dk * frac).unwrap(),
            thm3_cost(alpha, dk, delta, eps).unwrap(),
        ] {
            let g: f64 = c.breakdown.iter().map(|b| b.gate_count).sum();
            let d: f64 = c.breakdown.iter().map(|b| b.depth).sum();
            let q: f64 = c.breakdown.iter().map(|b| b.query_count).sum();
            prop_assert_eq!(g, c.gate_count);
            prop_assert_eq!(d, c.depth);
            prop_assert_eq!(q, c.query_count);
            prop_assert!(c.gate_count >= 0.0 && c.depth >= 0.0 && c.query_count >= 0.0);
        }
    }
}
