//! Filter plus conversion stage against a closed-form two-group mixture.

use opconv::alignment::FilterParams;
use opconv::pipeline::{run_pipeline, ConversionParams, FilterMode, MoleculePopulation, PopulationBin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bin(j: u32, mj: i32, et: f64, w: f64) -> PopulationBin<f64> {
    PopulationBin {
        j,
        mj,
        et_ev: et,
        weight: w,
    }
}

/// Half cartwheel, half helicopter, both below the barrier.
fn even_mixture() -> MoleculePopulation<f64> {
    MoleculePopulation::new(vec![bin(1, 0, 0.1, 0.5), bin(1, 1, 0.2, 0.25), bin(1, -1, 0.2, 0.25)]).unwrap()
}

#[test]
fn even_mixture_enhancement() {
    let rho = 2.0;
    let conv = ConversionParams::new(rho, 1e-4, 1.0).unwrap();
    let rep = run_pipeline(&even_mixture(), FilterMode::Slow, &FilterParams::default(), &conv).unwrap();
    // linear regime: p ~ r tau, mixture converts at (rho + 1)/2, filtered at rho
    let oracle = rho / ((rho + 1.0) / 2.0);
    assert!((rep.filtered.enhancement - oracle).abs() < 1e-3);
    assert!((rep.filtered.enhancement - 4.0 / 3.0).abs() < 1e-3);
    assert!((rep.unfiltered.mean_alignment + 0.25).abs() < 1e-12);
    assert!(rep.filtered.mean_alignment < 0.0);
}

#[test]
fn exact_mixture_probability() {
    let conv = ConversionParams::new(3.0, 0.2, 2.0).unwrap();
    let rep = run_pipeline(&even_mixture(), FilterMode::None, &FilterParams::default(), &conv).unwrap();
    let p_clr = 1.0 - (-0.2_f64 * 3.0 * 2.0).exp();
    let p_hlr = 1.0 - (-0.2_f64 * 2.0).exp();
    assert!((rep.unfiltered.conversion_probability - 0.5 * (p_clr + p_hlr)).abs() < 1e-14);
}

fn random_population(rng: &mut ChaCha8Rng) -> MoleculePopulation<f64> {
    let mut bins = Vec::new();
    for slow in [true, false] {
        for _ in 0..rng.gen_range(1..6) {
            let j = rng.gen_range(1..6u32);
            let et = if slow {
                rng.gen_range(0.0..0.45)
            } else {
                rng.gen_range(0.55..1.5)
            };
            for _ in 0..rng.gen_range(1..4) {
                let mj = rng.gen_range(-(j as i32)..=j as i32);
                bins.push(bin(j, mj, et, rng.gen_range(0.01..1.0)));
            }
        }
    }
    MoleculePopulation::new(bins).unwrap()
}

#[test]
fn filter_ordering_on_random_populations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b_0a_2d);
    let params = FilterParams::default();
    for case in 0..500 {
        let pop = random_population(&mut rng);
        let rho = rng.gen_range(1.01..10.0);
        let conv = ConversionParams::new(rho, rng.gen_range(1e-4..0.5), 1.0).unwrap();
        let p = |mode| {
            run_pipeline(&pop, mode, &params, &conv)
                .unwrap()
                .filtered
                .conversion_probability
        };
        let (slow, none, fast) = (p(FilterMode::Slow), p(FilterMode::None), p(FilterMode::Fast));
        let tol = 1e-12 * none;
        assert!(slow >= none - tol, "case {case}: slow {slow} < none {none}");
        assert!(none >= fast - tol, "case {case}: none {none} < fast {fast}");
    }
}
