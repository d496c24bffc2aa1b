use landscape_paths::combinatorics::{
    bound_diagnostics, c_eta_theta, expected_paths, s1_s2_split, second_moment_bound, t_table,
};
use landscape_paths::experiments::{
    choc_curve, dip_witness, estimate_moments, estimate_p, rmf_theta_coupling, second_moment_sanity, sweep_alpha,
    EstimateResult, McConfig, SweepRow, MC_MAX_DIMENSION,
};
use landscape_paths::landscape::{generate_with, GenOptions};
use landscape_paths::pathcount::count_accessible_with;
use landscape_paths::{EtaSpec, ExecMode, ModelSpec};
use serde_json::{json, Value};

use crate::config::{parse_grid, Command, Quantity, RunConfig};
use crate::output::Table;
use crate::CliError;

pub fn run(cfg: &RunConfig, mode: ExecMode) -> Result<Table, CliError> {
    let command = cfg.command.ok_or_else(|| CliError::Config("no command given".into()))?;
    match command {
        Command::Count => count(cfg, mode),
        Command::Tnk => tnk(cfg),
        Command::Moments => moments(cfg),
        Command::Estimate => estimate(cfg, mode),
        Command::SweepAlpha => sweep(cfg, mode),
        Command::ChocCurve => choc(cfg, mode),
        Command::RmfCoupling => rmf(cfg, mode),
        Command::Diagnostics => diagnostics(cfg),
    }
}

fn model(cfg: &RunConfig) -> Result<ModelSpec, CliError> {
    let name = cfg
        .model
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("{} needs --model", cfg.command_name())))?;
    let alpha = cfg.alpha.map(|v| v.to_string());
    let theta = cfg.theta.map(|v| v.to_string());
    let epsilon = cfg.epsilon.map(|v| v.to_string());
    let params = [
        ("alpha", &alpha),
        ("theta", &theta),
        ("eta", &cfg.eta),
        ("epsilon", &epsilon),
    ];
    let present = params.iter().filter_map(|(k, v)| v.as_deref().map(|v| (*k, v)));
    Ok(ModelSpec::from_parts(name, present)?)
}

fn eta(cfg: &RunConfig) -> Result<EtaSpec, CliError> {
    let text = cfg
        .eta
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("{} needs --eta", cfg.command_name())))?;
    Ok(text.parse::<EtaSpec>()?)
}

fn mc(cfg: &RunConfig, mode: ExecMode) -> Result<McConfig, CliError> {
    let mc = McConfig {
        replicates: cfg.require(cfg.replicates, "replicates")?,
        seed: cfg.require(cfg.seed, "seed")?,
        confidence: cfg.require(cfg.confidence, "confidence")?,
        mode,
        max_dimension: cfg.max_dimension.unwrap_or(MC_MAX_DIMENSION),
    };
    mc.validate()?;
    Ok(mc)
}

fn count(cfg: &RunConfig, mode: ExecMode) -> Result<Table, CliError> {
    let spec = model(cfg)?;
    let n = cfg.require(cfg.n, "n")?;
    let seed = cfg.require(cfg.seed, "seed")?;
    let mut opts = GenOptions {
        mode,
        ..Default::default()
    };
    if let Some(cap) = cfg.max_dimension {
        opts.max_dimension = cap;
    }
    let land = generate_with(spec, n, seed, opts)?;
    let paths = count_accessible_with(&land, mode)?;
    let mut t = Table::new(&["model", "params", "n", "seed", "paths", "exists"]);
    t.push(vec![
        json!(spec.name()),
        json!(spec.params()),
        json!(n),
        json!(seed),
        json!(paths.to_string()),
        json!(!paths.is_zero()),
    ]);
    Ok(t)
}

fn tnk(cfg: &RunConfig) -> Result<Table, CliError> {
    let n_max = cfg.require(cfg.n_max, "n-max")?;
    let table = t_table(n_max)?;
    let mut t = Table::new(&["n", "k", "T"]);
    for n in 1..=n_max {
        for (i, v) in table.row(n).iter().enumerate() {
            t.push(vec![json!(n), json!(i + 1), json!(v.to_string())]);
        }
    }
    Ok(t)
}

fn moments(cfg: &RunConfig) -> Result<Table, CliError> {
    let alpha = cfg.require(cfg.alpha, "alpha")?;
    let delta = cfg.require(cfg.delta, "delta")?;
    let dims = cfg.dims()?;
    let tnk = t_table(dims.iter().copied().max().unwrap_or(1))?;
    let mut t = Table::new(&[
        "n",
        "alpha",
        "expected_paths",
        "second_moment_bound",
        "s1",
        "s2",
        "delta",
    ]);
    for n in dims {
        let split = s1_s2_split(n, alpha, delta, &tnk)?;
        t.push(vec![
            json!(n),
            json!(alpha),
            json!(expected_paths(n, alpha)?.to_f64()),
            json!(second_moment_bound(n, alpha, &tnk)?.to_f64()),
            json!(split.s1.to_f64()),
            json!(split.s2.to_f64()),
            json!(delta),
        ]);
    }
    Ok(t)
}

const ESTIMATE_COLUMNS: [&str; 11] = [
    "quantity",
    "model",
    "params",
    "n",
    "estimate",
    "std_error",
    "ci_low",
    "ci_high",
    "confidence",
    "replicates",
    "seed",
];

fn estimate_row(quantity: &str, e: &EstimateResult) -> Vec<Value> {
    vec![
        json!(quantity),
        json!(e.spec.name()),
        json!(e.spec.params()),
        json!(e.n),
        json!(e.estimate),
        json!(e.std_error),
        json!(e.ci_low),
        json!(e.ci_high),
        json!(e.confidence),
        json!(e.replicates),
        json!(e.seed),
    ]
}

fn estimate(cfg: &RunConfig, mode: ExecMode) -> Result<Table, CliError> {
    let spec = model(cfg)?;
    let n = cfg.require(cfg.n, "n")?;
    let mc = mc(cfg, mode)?;
    match cfg.quantity.unwrap_or_default() {
        Quantity::P => {
            let mut t = Table::new(&ESTIMATE_COLUMNS);
            t.push(estimate_row("p", &estimate_p(spec, n, &mc)?));
            Ok(t)
        }
        Quantity::Moments => {
            let m = estimate_moments(spec, n, &mc)?;
            let mut t = Table::new(&ESTIMATE_COLUMNS);
            t.push(estimate_row("mean_x", &m.first));
            t.push(estimate_row("mean_x2", &m.second));
            Ok(t)
        }
        Quantity::Sanity => {
            let r = second_moment_sanity(spec, n, &mc)?;
            let mut t = Table::new(&[
                "model",
                "params",
                "n",
                "replicates",
                "seed",
                "p_hat",
                "mean_x",
                "mean_x2",
                "lower_bound",
                "combined_se",
                "holds",
                "vacuous",
                "variance_ratio",
                "variance_ratio_se",
            ]);
            t.push(vec![
                json!(spec.name()),
                json!(spec.params()),
                json!(n),
                json!(r.replicates),
                json!(r.seed),
                json!(r.p_hat),
                json!(r.mean_x),
                json!(r.mean_x2),
                json!(r.lower_bound),
                json!(r.combined_se),
                json!(r.holds),
                json!(r.vacuous),
                json!(r.variance_ratio),
                json!(r.variance_ratio_se),
            ]);
            Ok(t)
        }
    }
}

const SWEEP_COLUMNS: [&str; 10] = [
    "n",
    "parameter",
    "estimate",
    "std_error",
    "ci_low",
    "ci_high",
    "confidence",
    "replicates",
    "seed",
    "mean_paths",
];

fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&SWEEP_COLUMNS);
    for r in rows {
        t.push(vec![
            json!(r.n),
            json!(r.parameter),
            json!(r.estimate),
            json!(r.std_error),
            json!(r.ci_low),
            json!(r.ci_high),
            json!(r.confidence),
            json!(r.replicates),
            json!(r.seed),
            json!(r.mean_paths),
        ]);
    }
    t
}

fn sweep(cfg: &RunConfig, mode: ExecMode) -> Result<Table, CliError> {
    let dims = cfg.dims()?;
    let alphas = parse_grid(
        cfg.alpha_list
            .as_deref()
            .ok_or_else(|| CliError::Config("sweep-alpha needs --alpha-list".into()))?,
    )?;
    let out = sweep_alpha(&dims, &alphas, &mc(cfg, mode)?)?;
    let mut t = sweep_table(&out.rows);
    for c in &out.crossings {
        t.note(
            format!("crossing n={}", c.n),
            json!({"alpha_hat": c.alpha_hat, "ratio": c.ratio}),
        );
    }
    Ok(t)
}

fn choc(cfg: &RunConfig, mode: ExecMode) -> Result<Table, CliError> {
    let rows = choc_curve(&cfg.dims()?, &mc(cfg, mode)?)?;
    let mut t = sweep_table(&rows);
    let witness = dip_witness(&rows, 0.99)?;
    t.note("dip_witness_99", serde_json::to_value(witness).unwrap_or(Value::Null));
    Ok(t)
}

fn rmf(cfg: &RunConfig, mode: ExecMode) -> Result<Table, CliError> {
    let n = cfg.require(cfg.n, "n")?;
    let thetas = parse_grid(
        cfg.theta_list
            .as_deref()
            .ok_or_else(|| CliError::Config("rmf-coupling needs --theta-list".into()))?,
    )?;
    let out = rmf_theta_coupling(n, &thetas, eta(cfg)?, &mc(cfg, mode)?)?;
    let mut t = sweep_table(&out.rows);
    t.note("monotone_replicates", out.monotone_replicates);
    Ok(t)
}

fn diagnostics(cfg: &RunConfig) -> Result<Table, CliError> {
    let n_max = cfg.require(cfg.n_max, "n-max")?;
    let report = bound_diagnostics(&t_table(n_max)?)?;
    let mut t = Table::new(&["quantity", "value"]);
    t.push(vec![
        json!("first_column_below_factorial"),
        json!(report.first_column_below_factorial),
    ]);
    t.push(vec![json!("small_k_constant"), json!(report.small_k_constant)]);
    for (l, c) in &report.fixed_l_constants {
        t.push(vec![json!(format!("fixed_l_constant_{l}")), json!(c)]);
    }
    t.push(vec![json!("large_k_constant"), json!(report.large_k_constant)]);
    t.push(vec![json!("first_column_deficit"), json!(report.first_column_deficit)]);
    if let Some(theta) = cfg.theta {
        let mass = c_eta_theta(&eta(cfg)?, theta)?;
        t.push(vec![json!("interval_mass"), json!(mass.value)]);
        t.push(vec![json!("interval_mass_left"), json!(mass.left)]);
        t.push(vec![json!("interval_mass_resolution"), json!(mass.resolution)]);
    }
    Ok(t)
}
