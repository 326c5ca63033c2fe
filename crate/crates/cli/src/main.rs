//! `stochord` command-line front end.
//!
//! Exit codes: 0 = findings consistent / relation holds, 1 = anomaly or
//! failed check, 2 = usage or configuration error.

mod report;
mod scenario;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use stochord_core::{
    check_hr, check_lr, check_rh, check_st, counterexample, oracle_compare,
    simulate_random_extreme, verify_theorem, Classification, CounterCase, ExtremeKind,
    OrderingVerdict, SystemSpec, TheoremId,
};

use report::{describe_ordering, print_oracle_report, print_theorem_report, write_csv, write_plot_stub};
use scenario::{Overrides, Scenario, ScenarioFile};

#[derive(Parser)]
#[command(name = "stochord", about = "stochastic orders of random extremes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the scenario grid size.
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Override the monotonicity tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Override the Monte Carlo seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run a bundled scenario end to end and write its figure CSVs.
    Reproduce {
        /// example1 | example5 | example6 | counterexamples | propositions
        name: String,
    },
    /// Run one preservation-theorem driver on a scenario file.
    Theorem {
        file: PathBuf,
        /// Theorem id 3.1..3.8; defaults to the scenario's run list.
        #[arg(long)]
        id: Option<String>,
    },
    /// Check one stochastic order between the scenario's random extremes.
    Check {
        file: PathBuf,
        /// st | hr | rh | lr
        #[arg(long)]
        relation: String,
    },
    /// Compare the analytic mixture against a Monte Carlo run.
    Oracle { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        grid_points: cli.grid_points,
        tol: cli.tol,
        seed: cli.seed,
    };
    match run(cli.command, overrides, &cli.out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, overrides: Overrides, out: &Path) -> Result<u8> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    match command {
        Command::Reproduce { name } => cmd_reproduce(&name, overrides, out),
        Command::Theorem { file, id } => cmd_theorem(&file, id.as_deref(), overrides),
        Command::Check { file, relation } => cmd_check(&file, &relation, overrides),
        Command::Oracle { file } => cmd_oracle(&file, overrides, out),
    }
}

fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "example1" => Some(include_str!("../scenarios/example1.toml")),
        "example5" => Some(include_str!("../scenarios/example5.toml")),
        "example6" => Some(include_str!("../scenarios/example6.toml")),
        _ => None,
    }
}

fn load_scenario(path: &Path, overrides: Overrides) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading scenario {}", path.display()))?;
    ScenarioFile::parse(&text)?.build(overrides)
}

fn theorem_of(scenario: &Scenario, explicit: Option<&str>) -> Result<TheoremId> {
    let label = match explicit {
        Some(l) => l.to_string(),
        None => scenario
            .theorems
            .first()
            .cloned()
            .context("no --id given and the scenario lists no theorems")?,
    };
    let id: TheoremId = label.parse()?;
    if id.kind() != scenario.kind {
        bail!(
            "theorem {} is a {:?} result but the scenario kind is {:?}",
            id.label(),
            id.kind(),
            scenario.kind
        );
    }
    Ok(id)
}

fn cmd_theorem(path: &Path, id: Option<&str>, overrides: Overrides) -> Result<u8> {
    let sc = load_scenario(path, overrides)?;
    let id = theorem_of(&sc, id)?;
    let report = verify_theorem(id, &sc.fam_x, &sc.fam_y, &sc.pmf, &sc.grid)?;
    print_theorem_report(&report);
    Ok(match report.classification {
        Classification::Anomaly => 1,
        _ => 0,
    })
}

fn cmd_check(path: &Path, relation: &str, overrides: Overrides) -> Result<u8> {
    let sc = load_scenario(path, overrides)?;
    let (mx, my) = (sc.mix_x()?, sc.mix_y()?);
    let kind = sc.kind;
    let sf = |m: &stochord_core::RandomExtremeSpec, x: f64| match kind {
        ExtremeKind::Min => m.rand_min_sf(x).unwrap_or(f64::NAN),
        ExtremeKind::Max => 1.0 - m.rand_max_cdf(x).unwrap_or(f64::NAN),
    };
    let cdf = |m: &stochord_core::RandomExtremeSpec, x: f64| match kind {
        ExtremeKind::Min => 1.0 - m.rand_min_sf(x).unwrap_or(f64::NAN),
        ExtremeKind::Max => m.rand_max_cdf(x).unwrap_or(f64::NAN),
    };
    let pdf = |m: &stochord_core::RandomExtremeSpec, x: f64| m.rand_pdf(x).unwrap_or(f64::NAN);
    let verdict: OrderingVerdict = match relation {
        "st" => check_st(|x| sf(&mx, x), |x| sf(&my, x), &sc.grid),
        "hr" => check_hr(|x| sf(&mx, x), |x| sf(&my, x), &sc.grid)?,
        "rh" => check_rh(|x| cdf(&mx, x), |x| cdf(&my, x), &sc.grid)?,
        "lr" => check_lr(|x| pdf(&mx, x), |x| pdf(&my, x), &sc.grid)?,
        other => bail!("unknown relation `{other}` (expected st|hr|rh|lr)"),
    };
    println!(
        "check [{label}] {relation}: X <= Y in {relation} order {}",
        describe_ordering(&verdict),
        label = sc.label,
    );
    println!(
        "SUMMARY check={relation} result={}",
        if verdict.holds { "holds" } else { "fails" }
    );
    Ok(if verdict.holds { 0 } else { 1 })
}

fn cmd_oracle(path: &Path, overrides: Overrides, out: &Path) -> Result<u8> {
    let sc = load_scenario(path, overrides)?;
    let cfg = sc
        .mc
        .clone()
        .context("scenario has no [mc] section for the oracle")?;
    let spec = sc.mix_x()?;
    let curve = simulate_random_extreme(&spec, &cfg);
    let analytic = |x: f64| match sc.kind {
        ExtremeKind::Min => spec.rand_min_sf(x).unwrap_or(f64::NAN),
        ExtremeKind::Max => spec.rand_max_cdf(x).unwrap_or(f64::NAN),
    };
    let report = oracle_compare(analytic, &curve, cfg.confidence_k);
    print_oracle_report(&sc.label, &report);
    let rows: Vec<Vec<f64>> = report
        .rows
        .iter()
        .map(|r| vec![r.x, r.analytic, r.empirical, r.se, r.z])
        .collect();
    write_csv(
        &out.join(format!("oracle_{}.csv", sc.label)),
        "checkpoint,analytic,empirical,se,z",
        &rows,
    )?;
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_reproduce(name: &str, overrides: Overrides, out: &Path) -> Result<u8> {
    if name == "counterexamples" {
        return reproduce_counterexamples(out);
    }
    if name == "propositions" {
        return reproduce_propositions(out);
    }
    let text = bundled(name)
        .with_context(|| format!("unknown bundled scenario `{name}`"))?;
    let sc = ScenarioFile::parse(text)?.build(overrides)?;
    let id = theorem_of(&sc, None)?;
    let report = verify_theorem(id, &sc.fam_x, &sc.fam_y, &sc.pmf, &sc.grid)?;
    print_theorem_report(&report);

    let csvs = match name {
        "example5" => write_sf_ratio_figures(&sc, out, "example5_fig1.csv")?,
        "example6" => write_density_ratio_figures(&sc, out)?,
        "example1" => write_example1_figures(&sc, out)?,
        _ => unreachable!(),
    };
    write_plot_stub(out, &csvs)?;
    for c in &csvs {
        println!("wrote {}", out.join(c).display());
    }
    Ok(match report.classification {
        Classification::Consistent => 0,
        _ => 1,
    })
}

/// Mixture survival ratio against y = exp(-x): the quantity behind the
/// hr-order figure.
fn write_sf_ratio_figures(sc: &Scenario, out: &Path, file: &str) -> Result<Vec<String>> {
    let (mx, my) = (sc.mix_x()?, sc.mix_y()?);
    let mut rows = Vec::new();
    for &x in sc.grid.points() {
        let (a, b) = (mx.rand_min_sf(x)?, my.rand_min_sf(x)?);
        if b > sc.grid.trim_floor() && a > sc.grid.trim_floor() {
            rows.push(vec![(-x).exp(), x, a / b]);
        }
    }
    write_csv(&out.join(file), "y,x,ratio", &rows)?;
    Ok(vec![file.to_string()])
}

/// The three density-ratio figures: per-size Y/X ratio, within-X
/// size-pair ratios, and the mixture-level Y/X ratio.
fn write_density_ratio_figures(sc: &Scenario, out: &Path) -> Result<Vec<String>> {
    let ns: Vec<u32> = sc.pmf.atoms().iter().map(|&(n, _)| n).collect();
    let sys = |fam: &stochord_core::ComponentFamily, n: u32| {
        SystemSpec::new(fam.clone(), n as usize, sc.kind)
    };
    let floor = sc.grid.trim_floor();

    let mut per_n_rows = Vec::new();
    let mut pair_rows = Vec::new();
    let mut mix_rows = Vec::new();
    let x_systems: Vec<SystemSpec> = ns
        .iter()
        .map(|&n| sys(&sc.fam_x, n))
        .collect::<stochord_core::Result<_>>()?;
    let y_systems: Vec<SystemSpec> = ns
        .iter()
        .map(|&n| sys(&sc.fam_y, n))
        .collect::<stochord_core::Result<_>>()?;
    let (mx, my) = (sc.mix_x()?, sc.mix_y()?);
    for &x in sc.grid.points() {
        let fx: Vec<f64> = x_systems
            .iter()
            .map(|s| s.min_pdf(x).unwrap_or(f64::NAN))
            .collect();
        let fy: Vec<f64> = y_systems
            .iter()
            .map(|s| s.min_pdf(x).unwrap_or(f64::NAN))
            .collect();
        if fx.iter().chain(&fy).any(|v| !v.is_finite() || *v <= floor) {
            continue;
        }
        let y = (-x).exp();
        let mut row = vec![y, x];
        row.extend(fy.iter().zip(&fx).map(|(g, f)| g / f));
        per_n_rows.push(row);

        let mut row = vec![y, x];
        for i in 0..ns.len() {
            for j in i + 1..ns.len() {
                row.push(fx[i] / fx[j]);
            }
        }
        pair_rows.push(row);

        let (f_mix, g_mix) = (mx.rand_min_pdf(x)?, my.rand_min_pdf(x)?);
        mix_rows.push(vec![y, x, g_mix / f_mix]);
    }
    let per_n_header = {
        let cols: Vec<String> = ns.iter().map(|n| format!("g_over_f_n{n}")).collect();
        format!("y,x,{}", cols.join(","))
    };
    let pair_header = {
        let mut cols = Vec::new();
        for i in 0..ns.len() {
            for j in i + 1..ns.len() {
                cols.push(format!("f{}_over_f{}", ns[i], ns[j]));
            }
        }
        format!("y,x,{}", cols.join(","))
    };
    write_csv(&out.join("example6_fig3.csv"), &per_n_header, &per_n_rows)?;
    write_csv(&out.join("example6_fig4.csv"), &pair_header, &pair_rows)?;
    write_csv(&out.join("example6_fig5.csv"), "y,x,ratio", &mix_rows)?;
    Ok(vec![
        "example6_fig3.csv".into(),
        "example6_fig4.csv".into(),
        "example6_fig5.csv".into(),
    ])
}

/// Survival-ratio curves per size plus the hazard sums of the two
/// families at the largest size.
fn write_example1_figures(sc: &Scenario, out: &Path) -> Result<Vec<String>> {
    let ns: Vec<u32> = sc.pmf.atoms().iter().map(|&(n, _)| n).collect();
    let floor = sc.grid.trim_floor();
    let x_systems: Vec<SystemSpec> = ns
        .iter()
        .map(|&n| SystemSpec::new(sc.fam_x.clone(), n as usize, sc.kind))
        .collect::<stochord_core::Result<_>>()?;
    let y_systems: Vec<SystemSpec> = ns
        .iter()
        .map(|&n| SystemSpec::new(sc.fam_y.clone(), n as usize, sc.kind))
        .collect::<stochord_core::Result<_>>()?;
    let (mx, my) = (sc.mix_x()?, sc.mix_y()?);
    let n_top = *ns.last().unwrap() as usize;
    let top_x = SystemSpec::new(sc.fam_x.clone(), n_top, sc.kind)?;
    let top_y = SystemSpec::new(sc.fam_y.clone(), n_top, sc.kind)?;

    let mut ratio_rows = Vec::new();
    let mut hazard_rows = Vec::new();
    for &x in sc.grid.points() {
        let sx: Vec<f64> = x_systems
            .iter()
            .map(|s| s.min_sf(x).unwrap_or(f64::NAN))
            .collect();
        let sy: Vec<f64> = y_systems
            .iter()
            .map(|s| s.min_sf(x).unwrap_or(f64::NAN))
            .collect();
        if sx.iter().chain(&sy).all(|v| v.is_finite() && *v > floor) {
            let mut row = vec![(-x).exp(), x];
            row.extend(sx.iter().zip(&sy).map(|(a, b)| a / b));
            row.push(mx.rand_min_sf(x)? / my.rand_min_sf(x)?);
            ratio_rows.push(row);
        }
        if let (Ok(hx), Ok(hy)) = (top_x.min_hazard(x), top_y.min_hazard(x)) {
            hazard_rows.push(vec![x, hx, hy]);
        }
    }
    let header = {
        let cols: Vec<String> = ns.iter().map(|n| format!("ratio_n{n}")).collect();
        format!("y,x,{},ratio_mix", cols.join(","))
    };
    write_csv(&out.join("example1_ratio.csv"), &header, &ratio_rows)?;
    write_csv(
        &out.join("example1_hazard.csv"),
        "x,hazard_sum_x,hazard_sum_y",
        &hazard_rows,
    )?;
    Ok(vec!["example1_ratio.csv".into(), "example1_hazard.csv".into()])
}

fn reproduce_propositions(out: &Path) -> Result<u8> {
    let n_grid: Vec<u32> = (1..=30).collect();
    let mut all_ok = true;
    let mut csvs = Vec::new();
    for sc in stochord_core::bundled_proposition_scenarios() {
        let report = stochord_core::verify_proposition(
            sc.id, &sc.f, &sc.kernel, &n_grid, &sc.x_grid, None, sc.n_max, 1e-9,
        )?;
        let rows: Vec<Vec<f64>> = report
            .transform
            .iter()
            .map(|p| vec![p.x, p.value, (sc.closed_form)(p.x)])
            .collect();
        let file = format!("proposition_{}.csv", sc.name);
        write_csv(&out.join(&file), "x,series_value,closed_form_value", &rows)?;
        println!(
            "proposition {} [{}]: {} (sign pattern `{}`, kernel `{}`)",
            report.id,
            sc.name,
            report.classification,
            report.sign_report.pattern,
            sc.kernel.name()
        );
        if report.classification != Classification::Consistent {
            all_ok = false;
        }
        csvs.push(file);
    }
    write_plot_stub(out, &csvs)?;
    println!(
        "SUMMARY propositions result={}",
        if all_ok { "PASS" } else { "FAIL" }
    );
    Ok(if all_ok { 0 } else { 1 })
}

fn reproduce_counterexamples(out: &Path) -> Result<u8> {
    let mut all_ok = true;
    let mut csvs = Vec::new();
    for case in CounterCase::ALL {
        let run = counterexample(case)?;
        let rows: Vec<Vec<f64>> = run
            .samples
            .iter()
            .map(|&(x, series, closed)| vec![x, series, closed])
            .collect();
        let file = format!("counterexample_case_{}.csv", case.label().to_lowercase());
        write_csv(&out.join(&file), "x,series_value,closed_form_value", &rows)?;
        println!(
            "case {}: {} sign changes (pattern {}), series vs closed form within {:.3e}",
            case.label(),
            run.report.count,
            run.report.pattern,
            run.max_abs_diff
        );
        for (a, b) in &run.report.change_locations {
            println!("  sign change bracketed in ({a:.6}, {b:.6})");
        }
        if run.report.count < 2 || run.max_abs_diff > 1e-8 {
            all_ok = false;
        }
        csvs.push(file);
    }
    write_plot_stub(out, &csvs)?;
    println!(
        "SUMMARY counterexamples result={}",
        if all_ok { "PASS" } else { "FAIL" }
    );
    Ok(if all_ok { 0 } else { 1 })
}
