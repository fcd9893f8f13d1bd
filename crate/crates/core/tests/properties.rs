use proptest::prelude::*;

use rlc_thermo::closed_forms;
use rlc_thermo::oracle::OraclePoint;
use rlc_thermo::verify::characteristic_partner;
use rlc_thermo::{CircuitParams, ThermalState};

fn underdamped() -> impl Strategy<Value = (CircuitParams, f64)> {
    (0.2f64..5.0, 0.2f64..5.0, 0.0f64..0.95, 0.05f64..20.0)
        .prop_map(|(l, c, f, beta)| (CircuitParams::new(l, c, f * (l / c).sqrt()).unwrap(), beta))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_forms_are_consistent((p, beta) in underdamped()) {
        let u = closed_forms::internal_energy(&p, beta).unwrap();
        let s = closed_forms::entropy(&p, beta).unwrap();
        let ln_z = closed_forms::log_partition(&p, beta).unwrap();
        let w = closed_forms::omega(&p).unwrap().omega;
        prop_assert!(u >= 0.5 * w * (1.0 - 1e-12));
        prop_assert!(s > 0.0);
        prop_assert!(closed_forms::fluctuation(&p, beta).unwrap() > 0.0);
        // S = beta U + ln Z
        prop_assert!((s - (beta * u + ln_z)).abs() <= 1e-10 * (1.0 + s.abs()));
        if p.resistance > 0.0 {
            prop_assert!(closed_forms::resistor_energy(&p, beta).unwrap() < 0.0);
            prop_assert!(closed_forms::entropy_slope_resistance(&p, beta).unwrap() > 0.0);
        }
    }

    #[test]
    fn characteristic_partners_agree((p, beta) in underdamped(), s in 0.25f64..4.0) {
        let q = characteristic_partner(&p, s).unwrap();
        let a = closed_forms::characteristic_invariants(&p).unwrap();
        let b = closed_forms::characteristic_invariants(&q).unwrap();
        prop_assert!((a.c2 - b.c2).abs() <= 1e-12 * a.c2.abs());
        let ua = closed_forms::internal_energy(&p, beta).unwrap();
        let ub = closed_forms::internal_energy(&q, beta).unwrap();
        prop_assert!((ua - ub).abs() <= 1e-12 * ua);
        let y = a.c2;
        let from_y = closed_forms::characteristic_energy(a.c1, y, beta, 1.0).unwrap();
        prop_assert!((from_y - ua).abs() <= 1e-12 * ua);
    }

    #[test]
    fn gibbs_state_is_normalized(
        energies in prop::collection::vec(-10.0f64..50.0, 1..40),
        beta in 0.01f64..10.0,
    ) {
        let state = ThermalState::from_energies(&energies, beta, 1.0).unwrap();
        let total: f64 = state.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(state.entropy() >= -1e-14);
        prop_assert!(state.entropy() <= (energies.len() as f64).ln() + 1e-12);
        prop_assert!(state.fluctuation() >= -1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn oracle_spectrum_is_harmonic(
        l in 0.3f64..3.0,
        c in 0.3f64..3.0,
        f in 0.0f64..0.7,
    ) {
        let p = CircuitParams::new(l, c, f * (l / c).sqrt()).unwrap();
        let w = closed_forms::omega(&p).unwrap().omega;
        let point = OraclePoint::at_dim(&p, 1.0, 256).unwrap();
        let e = point.spectrum().eigenvalues();
        for (n, en) in e.iter().take(16).enumerate() {
            let expect = w * (n as f64 + 0.5);
            prop_assert!((en - expect).abs() < 1e-9 * expect, "n = {} {} vs {}", n, en, expect);
        }
    }
}
