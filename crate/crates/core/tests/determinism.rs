use landscape_paths::experiments::{choc_curve, rmf_theta_coupling, sweep_alpha, McConfig};
use landscape_paths::landscape::{generate_with, read_text, write_text, GenOptions};
use landscape_paths::pathcount::count_accessible_with;
use landscape_paths::{EtaSpec, ExecMode, ModelSpec};

const MODES: [ExecMode; 2] = [ExecMode::Sequential, ExecMode::Parallel];

#[test]
fn generation_and_counting_ignore_mode() {
    let spec = ModelSpec::Rmf {
        theta: 0.2,
        eta: EtaSpec::Normal { mean: 0.0, sd: 1.0 },
    };
    let lands: Vec<_> = MODES
        .iter()
        .map(|&mode| {
            generate_with(
                spec,
                14,
                77,
                GenOptions {
                    mode,
                    ..Default::default()
                },
            )
            .unwrap()
        })
        .collect();
    assert_eq!(lands[0], lands[1]);
    let counts: Vec<_> = MODES
        .iter()
        .map(|&m| count_accessible_with(&lands[0], m).unwrap())
        .collect();
    assert_eq!(counts[0], counts[1]);
}

#[test]
fn sweeps_ignore_mode() {
    let base = McConfig::new(150, 21);
    let alphas = [0.0, 0.1, 0.2];
    let runs: Vec<_> = MODES
        .iter()
        .map(|&m| {
            let cfg = base.with_mode(m);
            (
                sweep_alpha(&[5, 9], &alphas, &cfg).unwrap(),
                choc_curve(&[3, 6, 9], &cfg).unwrap(),
                rmf_theta_coupling(8, &[0.0, 0.3], EtaSpec::Exponential { rate: 2.0 }, &cfg).unwrap(),
            )
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn dumped_landscape_counts_the_same() {
    let land = generate_with(ModelSpec::Percolation { epsilon: 0.7 }, 9, 5, GenOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_text(&land, &mut buf).unwrap();
    let back = read_text(&buf[..]).unwrap();
    assert_eq!(
        count_accessible_with(&land, ExecMode::Sequential).unwrap(),
        count_accessible_with(&back, ExecMode::Sequential).unwrap()
    );
}
