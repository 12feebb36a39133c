use std::f64::consts::{PI, TAU};

use wavesource_core::forward::default_options;
use wavesource_core::perturbation::{auto_t_tilde, simulate, Observation};
use wavesource_core::reconstruct::{system_for_modes, Reconstructor};
use wavesource_core::source::BumpSource;
use wavesource_core::spectrum::build_modes;
use wavesource_core::MediumConfig;

fn round_trip(n: usize, z: [f64; 3]) -> f64 {
    let src = BumpSource::standard([0.0; 3], 0.5, 2.0).unwrap();
    let cfg = MediumConfig::with_scale(2.0, 0.01, 1.0, z).unwrap();
    let modes = build_modes(&cfg, n).unwrap();
    let x = [3.0, 0.0, 0.0];
    let obs = Observation {
        x,
        t_tilde: auto_t_tilde(&src, &cfg, x),
        dt: TAU / 2048.0,
        n_modes: n,
    };
    let sim = simulate(&src, &cfg, &modes, &obs, &default_options()).unwrap();
    let sys = system_for_modes(&modes, n, &cfg).unwrap();
    let rec = Reconstructor::new(sys, &cfg, sim.window.intervals()).unwrap();
    let res = rec.reconstruct(&sim.window, &modes, &cfg, Some(&sim.vz)).unwrap();
    res.residual.unwrap()
}

#[test]
fn bump_source_round_trip() {
    let _ = PI;
    for z in [[0.0; 3], [0.1, 0.05, -0.1], [-0.3, 0.2, 0.25]] {
        let e64 = round_trip(64, z);
        let e128 = round_trip(128, z);
        println!("z={z:?}: N=64 {e64:.3e}, N=128 {e128:.3e}");
        assert!(e64 < 5e-2);
        assert!(e128 <= 1.1 * e64);
    }
}
