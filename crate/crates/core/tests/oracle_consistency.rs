use proptest::prelude::*;
use thermgraph_core::oracle::{
    boltzmann_density, build_pure_state, dense_expectation, stabilizer_check, thermal_density,
    MonomialOp,
};
use thermgraph_core::pauli::stabilizer_product;
use thermgraph_core::stabilizer::{generalized_product, hypergraph_stabilizer};
use thermgraph_core::thermal::{expectation_general, fidelity};
use thermgraph_core::{BitVec, GraphSpec, HypergraphSpec, PauliString, SettingVector, ThermalParams};

fn beta(b: f64) -> ThermalParams {
    ThermalParams::from_beta(b).unwrap()
}

/// Exact expectation under the phase-flip model by summing over every
/// error pattern: each flip on an X/Y site negates the outcome.
fn parity_model(x_mask: &BitVec, p: f64) -> f64 {
    let n = x_mask.len();
    let x = x_mask.to_u64().unwrap();
    (0..1u64 << n)
        .map(|e| {
            let w = e.count_ones() as i32;
            let pr = p.powi(w) * (1.0 - p).powi(n as i32 - w);
            if (e & x).count_ones() % 2 == 0 {
                pr
            } else {
                -pr
            }
        })
        .sum()
}

fn arb_hypergraph(min_n: usize, max_n: usize) -> impl Strategy<Value = HypergraphSpec> {
    (min_n..=max_n).prop_flat_map(|n| {
        let e2 = proptest::collection::vec((1..=n, 1..=n), 0..n + 2);
        let e3 = proptest::collection::vec((1..=n, 1..=n, 1..=n), 0..n + 2);
        (Just(n), e2, e3).prop_map(|(n, e2, e3)| {
            let e2 = e2.into_iter().filter(|(a, b)| a != b);
            let e3 = e3
                .into_iter()
                .filter(|(a, b, c)| a != b && b != c && a != c);
            HypergraphSpec::new(n, e2, e3).unwrap()
        })
    })
}

#[test]
fn small_state_amplitudes() {
    let psi = build_pure_state(&HypergraphSpec::new(1, [], []).unwrap()).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!(psi.amplitudes().iter().all(|a| (a.re - h).abs() < 1e-15 && a.im == 0.0));
    let psi = build_pure_state(&HypergraphSpec::new(3, [], [(1, 2, 3)]).unwrap()).unwrap();
    let negative: Vec<usize> = (0..8).filter(|&x| psi.amplitudes()[x].re < 0.0).collect();
    assert_eq!(negative, vec![0b111]);
}

#[test]
fn four_qubit_path_thermal_values() {
    let g = HypergraphSpec::from(GraphSpec::path(4).unwrap());
    let th = ThermalParams::from_boltzmann_ratio(0.5).unwrap();
    let rho = thermal_density(&g, &th).unwrap();
    let psi = build_pure_state(&g).unwrap();
    assert!((rho.overlap(&psi).unwrap() - 16.0 / 81.0).abs() < 1e-12);
    let s = stabilizer_product(&GraphSpec::path(4).unwrap(), &"1100".parse().unwrap()).unwrap();
    assert!((dense_expectation(&rho, &s).unwrap() - 1.0 / 9.0).abs() < 1e-12);
    assert!((dense_expectation(&rho, &PauliString::identity(4)).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn gibbs_limits() {
    let g = HypergraphSpec::new(4, [(1, 2), (2, 3)], [(2, 3, 4)]).unwrap();
    let psi = build_pure_state(&g).unwrap();
    let cold = boltzmann_density(&g, &beta(30.0)).unwrap();
    assert!(cold.max_entry_distance(&psi.projector().unwrap()) < 1e-8);
    let zero = boltzmann_density(&g, &ThermalParams::zero_temperature()).unwrap();
    assert!(zero.max_entry_distance(&psi.projector().unwrap()) < 1e-10);
    let hot = boltzmann_density(&g, &beta(0.0)).unwrap();
    let hot_channel = thermal_density(&g, &beta(0.0)).unwrap();
    for x in 0..16 {
        for y in 0..16 {
            let want = if x == y { 1.0 / 16.0 } else { 0.0 };
            assert!((hot.matrix()[(x, y)].re - want).abs() < 1e-12);
            assert!((hot_channel.matrix()[(x, y)].re - want).abs() < 1e-12);
        }
    }
}

#[test]
fn single_generator_is_not_stabilizer_alone() {
    let g = HypergraphSpec::new(2, [(1, 2)], []).unwrap();
    let psi = build_pure_state(&g).unwrap();
    assert!(!stabilizer_check(&psi, &"XI".parse::<PauliString>().unwrap()));
    assert!(stabilizer_check(&psi, &"XZ".parse::<PauliString>().unwrap()));
}

#[test]
fn large_states_stabilized_by_generators() {
    let inst = thermgraph_core::supremacy::build_family(20, &[(1, 20), (4, 9)]).unwrap();
    let psi = build_pure_state(&inst.spec).unwrap();
    for i in 1..=20 {
        let g = hypergraph_stabilizer(&inst.spec, i).unwrap();
        assert!(stabilizer_check(&psi, &g), "generator {i}");
    }
}

#[test]
fn triangle_over_all_settings() {
    let graphs = [
        GraphSpec::ring(6).unwrap(),
        GraphSpec::new(5, [(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap(),
        GraphSpec::path(7).unwrap(),
    ];
    for g in &graphs {
        let h = HypergraphSpec::from(g);
        let n = g.n();
        for b in [0.3, 1.0] {
            let th = beta(b);
            let channel = thermal_density(&h, &th).unwrap();
            let gibbs = boltzmann_density(&h, &th).unwrap();
            for mask in 0..1u64 << n {
                let l = SettingVector::new(BitVec::from_u64(n, mask));
                let s = stabilizer_product(g, &l).unwrap();
                let a = dense_expectation(&channel, &s).unwrap();
                let c = dense_expectation(&gibbs, &s).unwrap();
                let p = parity_model(s.x_mask(), th.p_flip);
                let closed = expectation_general(n, l.weight(), &th).unwrap();
                assert!((a - c).abs() < 1e-8 && (a - p).abs() < 1e-8 && (a - closed).abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hypergraph_triangle(h in arb_hypergraph(2, 7), b in prop::sample::select(vec![0.3, 1.0, 2.0]), seed in any::<u64>()) {
        let n = h.n();
        let th = beta(b);
        let channel = thermal_density(&h, &th).unwrap();
        let gibbs = boltzmann_density(&h, &th).unwrap();
        prop_assert!(channel.max_entry_distance(&gibbs) < 1e-8);
        prop_assert!(channel.min_eigenvalue() >= -1e-12);
        prop_assert!(channel.hermiticity_error() < 1e-14);
        let psi = build_pure_state(&h).unwrap();
        prop_assert!((channel.overlap(&psi).unwrap() - fidelity(n, &th).unwrap()).abs() < 1e-10);
        let s = generalized_product(&h, &SettingVector::new(BitVec::from_u64(n, seed))).unwrap();
        let a = dense_expectation(&channel, &s).unwrap();
        prop_assert!((a - parity_model(s.x_mask(), th.p_flip)).abs() < 1e-8);
    }

    #[test]
    fn pure_state_stabilized(h in arb_hypergraph(2, 14)) {
        let psi = build_pure_state(&h).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
        for i in 1..=h.n() {
            let g = hypergraph_stabilizer(&h, i).unwrap();
            prop_assert!(stabilizer_check(&psi, &g));
            let dense = MonomialOp::hypergraph_generator(&h, i).unwrap().apply(&psi).unwrap();
            prop_assert!(dense.max_distance(&psi) < 1e-12);
        }
    }
}
