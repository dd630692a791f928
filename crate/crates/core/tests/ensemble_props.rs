use std::f64::consts::PI;

use kicked_atoms::decoherence::{RecoilLaw, SEModel};
use kicked_atoms::ensemble::{Ensemble, EnsembleResult, InitialDistribution, Sampling};
use kicked_atoms::units::DimensionlessParams;
use proptest::prelude::*;

fn params(
    tau: f64,
    n_kicks: usize,
    n_se_mean: f64,
    atoms: usize,
    init: &InitialDistribution,
) -> DimensionlessParams {
    DimensionlessParams {
        tau,
        n_kicks,
        n_se_mean,
        n_atoms: atoms,
        ..Default::default()
    }
    .with_auto_n_max(init.extent())
}

fn run_in_pool(threads: usize, ens: &Ensemble) -> EnsembleResult {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(|| ens.run().unwrap())
}

#[test]
fn bitwise_identical_across_thread_counts() {
    let init = InitialDistribution::gaussian(6.0);
    let p = params(2.0 * PI, 12, 0.1, 700, &init);
    let se = SEModel::new(0.1, RecoilLaw::Uniform).unwrap();
    let ens = Ensemble::new(p, init, se).record_at([0, 6, 12]);
    let a = run_in_pool(1, &ens);
    let b = run_in_pool(4, &ens);
    let c = run_in_pool(3, &ens);
    for (x, y) in [(&a, &b), (&a, &c)] {
        let bits = |r: &EnsembleResult| {
            r.energies
                .iter()
                .flat_map(|e| {
                    [
                        e.energy.to_bits(),
                        e.stderr.to_bits(),
                        e.mean_momentum.to_bits(),
                    ]
                })
                .chain(
                    r.histograms
                        .iter()
                        .flat_map(|h| h.probs.iter().map(|v| v.to_bits())),
                )
                .collect::<Vec<u64>>()
        };
        assert_eq!(bits(x), bits(y));
        assert_eq!(x.fingerprint, y.fingerprint);
    }
}

#[test]
fn arms_share_initial_momenta() {
    let init = InitialDistribution::gaussian(6.0);
    let coherent = Ensemble::new(
        params(2.0 * PI, 5, 0.0, 300, &init),
        init.clone(),
        SEModel::none(),
    )
    .run()
    .unwrap();
    let noisy_se = SEModel::new(0.3, RecoilLaw::Uniform).unwrap();
    let noisy = Ensemble::new(params(2.0 * PI, 5, 0.3, 300, &init), init, noisy_se)
        .run()
        .unwrap();
    assert_eq!(coherent.energies[0].energy, noisy.energies[0].energy);
    assert_ne!(coherent.energies[5].energy, noisy.energies[5].energy);
}

#[test]
fn free_atoms_gain_half_the_diffusion_per_kick() {
    let init = InitialDistribution::delta();
    let n_se = 0.5;
    let p = DimensionlessParams {
        phi_d: 0.0,
        ..params(2.0 * PI, 20, n_se, 8000, &init)
    };
    let r = Ensemble::new(p, init, SEModel::new(n_se, RecoilLaw::TwoPoint).unwrap())
        .run()
        .unwrap();
    let d = n_se / 12.0;
    let gain = r.final_energy().energy / 20.0;
    // E[p^2] / 2 after 20 kicks: 20 D / 2, relative error ~ sqrt(2 / 8000)
    assert!(
        (gain / (d / 2.0) - 1.0).abs() < 0.05,
        "gain {gain}, D/2 {}",
        d / 2.0
    );
}

#[test]
fn independent_and_stratified_sampling_agree_on_the_mean() {
    let init = InitialDistribution::gaussian(6.0);
    let p = params(3.0, 10, 0.0, 4000, &init);
    let strat = Ensemble::new(p.clone(), init.clone(), SEModel::none())
        .run()
        .unwrap();
    let iid = Ensemble::new(p, init, SEModel::none())
        .sampling(Sampling::Independent)
        .run()
        .unwrap();
    let (a, b) = (strat.final_energy(), iid.final_energy());
    let sigma = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    assert!(
        (a.energy - b.energy).abs() < 4.0 * sigma,
        "{} vs {}",
        a.energy,
        b.energy
    );
}

#[test]
fn ballistic_wings_move_linearly() {
    // n' = 0 with quasimomentum spread uniformly over the zone
    let init = InitialDistribution::unit_bin();
    let p = params(2.0 * PI, 30, 0.0, 20_000, &init);
    let r = Ensemble::new(p, init, SEModel::none())
        .record_at([10, 20, 30])
        .run()
        .unwrap();
    let peaks: Vec<(f64, f64)> = r
        .histograms
        .iter()
        .map(|h| {
            (
                h.kick as f64,
                h.outermost_peak(1e-4).expect("wing peak") as f64,
            )
        })
        .collect();
    let c = peaks.iter().map(|(n, x)| n * x).sum::<f64>()
        / peaks.iter().map(|(n, _)| n * n).sum::<f64>();
    for (n, x) in &peaks {
        assert!(
            (x / (c * n) - 1.0).abs() < 0.15,
            "peak {x} at N = {n}, fit {c} N"
        );
    }
    assert!(c > 1.5 && c < 0.8 * PI, "wing speed {c}");
}

fn truncated_exponential_variance(l: f64, radius: i64) -> f64 {
    let (mut w, mut m2) = (0.0, 0.0);
    for n in -radius..=radius {
        let p = (-(n.abs() as f64) / l).exp();
        w += p;
        m2 += (n * n) as f64 * p;
    }
    m2 / w
}

#[test]
fn resonant_centre_is_narrower_than_localized_exponential() {
    let init = InitialDistribution::gaussian(6.0);
    let hist = |tau: f64| {
        let r = Ensemble::new(
            params(tau, 30, 0.0, 5000, &init),
            init.clone(),
            SEModel::none(),
        )
        .run()
        .unwrap();
        r.histograms[0].clone()
    };
    let resonant = hist(2.0 * PI);
    let localized = hist(2.0 * PI * 1.618);
    let l = localized.exponential_decay_length(10);
    let v_res = resonant.central_variance(10);
    let v_exp = truncated_exponential_variance(l, 10);
    assert!(
        v_res < v_exp,
        "resonant {v_res}, exponential fit {v_exp} (l = {l})"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn histograms_are_normalized(
        tau in 0.5f64..13.0,
        n_se in 0.0f64..0.5,
        kicks in 0usize..12,
        seed in any::<u64>(),
    ) {
        let init = InitialDistribution::gaussian(6.0);
        let p = DimensionlessParams { seed, ..params(tau, kicks, n_se, 128, &init) };
        let se = SEModel::new(n_se, RecoilLaw::Uniform).unwrap();
        let r = Ensemble::new(p, init, se).record_at(0..=kicks).run().unwrap();
        for h in &r.histograms {
            prop_assert!((h.total() - 1.0).abs() < 1e-9);
        }
        let e_hist = r.histograms.last().unwrap().energy();
        prop_assert!(e_hist.is_finite());
    }
}
