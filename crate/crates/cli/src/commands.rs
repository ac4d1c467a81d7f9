//! Implementations of the simulate, scan, convergence and benchmark
//! subcommands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde_json::Value;

use contact_dynamics::diagnostics::{
    benchmark as run_benchmark, convergence_order, stability_scan, Reference,
};
use contact_dynamics::integrators::{integrate, StepMethod, Trajectory};
use contact_dynamics::models::{damped_oscillator_exact, SeparableContactModel};
use contact_dynamics::state::ContactState;

use crate::config::{
    build_method, load_config_file, InitialState, MethodConfig, ModelConfig, ModelInstance,
    OutputFormat, RunConfig,
};
use crate::output::{
    format_float, render_table, write_trajectory_csv, write_trajectory_jsonl, EitherWriter,
    ExtraColumn,
};
use crate::{
    BenchmarkArgs, Cli, CliError, ConvergenceArgs, InitialArgs, ModelArgs, Outcome, ScanArgs,
    SimulateArgs,
};

/// Merge config file and flags into a RunConfig (flags win), then execute.
pub fn simulate(args: &SimulateArgs, cli: &Cli) -> Result<Outcome, CliError> {
    let config = resolve_run_config(args, cli)?;
    let (model, method, initial) = config.prepare()?;

    let clock = Instant::now();
    let trajectory = integrate(
        model.as_dyn(),
        method,
        &initial,
        config.tau,
        config.t_end,
        config.output.sample_every,
    );
    let wall_time_s = clock.elapsed().as_secs_f64();

    write_run_output(
        config.output.path.as_deref(),
        config.output.format,
        model.as_dyn(),
        &trajectory,
        None,
        wall_time_s,
    )?;

    if !cli.quiet {
        eprintln!(
            "{} on {}: {} ({} steps, {:.3}s)",
            method.id(),
            config.model.id,
            trajectory.status,
            trajectory.steps_taken,
            wall_time_s
        );
    }
    Ok(if trajectory.status.is_completed() {
        Outcome::Success
    } else {
        Outcome::RunFailed
    })
}

pub fn scan(args: &ScanArgs, cli: &Cli) -> Result<Outcome, CliError> {
    let (model, model_id) = build_model_from_args(&args.model, None)?;
    let methods = crate::parse_method_list(&args.methods)?;
    if methods.is_empty() {
        return Err(CliError::config("--methods must list at least one method"));
    }
    let tau_grid = crate::parse_float_list(&args.tau_grid, "--tau-grid")?;
    if tau_grid.is_empty() {
        return Err(CliError::config("--tau-grid must list at least one step"));
    }
    if tau_grid.iter().any(|&tau| !tau.is_finite() || tau <= 0.0) {
        return Err(CliError::config(
            "--tau-grid entries must be positive and finite",
        ));
    }
    if args.bound <= 0.0 {
        return Err(CliError::config("--bound must be positive"));
    }
    let initial = resolve_initial(&model, &args.initial, None)?;
    if !args.t_end.is_finite() || args.t_end < initial.t {
        return Err(CliError::config(format!(
            "--t-end ({}) must be finite and not precede the initial time ({})",
            args.t_end, initial.t
        )));
    }

    let reports = stability_scan(
        model.as_dyn(),
        &methods,
        &initial,
        &tau_grid,
        args.t_end,
        args.bound,
    );

    let mut writer = open_writer(cli.output.as_deref())?;
    writeln!(writer, "method,tau,stable")?;
    for report in &reports {
        for (tau, stable) in report.tau_grid.iter().zip(report.stable.iter()) {
            writeln!(
                writer,
                "{},{},{}",
                report.method.id(),
                format_float(*tau),
                stable
            )?;
        }
    }
    for report in &reports {
        match report.max_stable_tau {
            Some(tau) => writeln!(
                writer,
                "# max_stable_tau_{}={}",
                report.method.id(),
                format_float(tau)
            )?,
            None => writeln!(writer, "# max_stable_tau_{}=none", report.method.id())?,
        }
    }

    if !cli.quiet {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|report| {
                vec![
                    report.method.id(),
                    report
                        .max_stable_tau
                        .map(|t| format!("{t}"))
                        .unwrap_or_else(|| "none".to_string()),
                    report
                        .stable
                        .iter()
                        .map(|&ok| if ok { 'S' } else { '.' })
                        .collect(),
                ]
            })
            .collect();
        eprintln!("stability scan on {model_id}, t_end={}", args.t_end);
        eprint!(
            "{}",
            render_table(&["method", "max stable tau", "per-step result"], &rows)
        );
    }
    Ok(Outcome::Success)
}

pub fn convergence(args: &ConvergenceArgs, cli: &Cli) -> Result<Outcome, CliError> {
    let (model, model_id) = build_model_from_args(&args.model, None)?;
    let method = build_method(&MethodConfig {
        id: args.method.clone(),
        b_map_compat: args.b_map_compat,
    })?;
    let tau_list = crate::parse_float_list(&args.tau_list, "--tau-list")?;
    let initial = resolve_initial(&model, &args.initial, None)?;
    if !args.t_end.is_finite() || args.t_end < initial.t {
        return Err(CliError::config(format!(
            "--t-end ({}) must be finite and not precede the initial time ({})",
            args.t_end, initial.t
        )));
    }

    // the linear oscillator has a closed-form solution; other models use a
    // fine trajectory of the same method family (exact-update mode)
    let analytic;
    let reference = match &model {
        ModelInstance::Linear(linear) => {
            let (omega0, damping) = (linear.omega0, linear.damping);
            if damping >= 2.0 * omega0 {
                return Err(CliError::config(
                    "analytic reference needs the underdamped regime (damping < 2*omega0)",
                ));
            }
            let (q0, p0) = (initial.q[0], initial.p[0]);
            analytic = move |t: f64| {
                let (q, p) = damped_oscillator_exact(q0, p0, omega0, damping, t)
                    .expect("underdamped checked above");
                (vec![q], vec![p])
            };
            Reference::Analytic(&analytic)
        }
        _ => Reference::Fine {
            method: method.with_b_map_compat(false),
            tau_ref: tau_list.last().copied().unwrap_or(0.025) / 40.0,
        },
    };

    let study = convergence_order(
        model.as_dyn(),
        method,
        &initial,
        args.t_end,
        &tau_list,
        reference,
    )
    .map_err(|err| CliError::config(format!("convergence study: {err}")))?;

    let mut writer = open_writer(cli.output.as_deref())?;
    writeln!(writer, "tau,error")?;
    for (tau, error) in study.taus.iter().zip(study.errors.iter()) {
        writeln!(writer, "{},{}", format_float(*tau), format_float(*error))?;
    }
    writeln!(writer, "# slope={}", format_float(study.slope))?;

    if !cli.quiet {
        eprintln!(
            "{} on {model_id}: measured order {:.3}",
            method.id(),
            study.slope
        );
    }
    Ok(Outcome::Success)
}

pub fn benchmark(args: &BenchmarkArgs, cli: &Cli) -> Result<Outcome, CliError> {
    let (model, model_id) = build_model_from_args(&args.model, Some("quadratic_oscillator"))?;
    let methods = crate::parse_method_list(&args.methods)?;
    if methods.is_empty() {
        return Err(CliError::config("--methods must list at least one method"));
    }
    if args.repeats == 0 {
        return Err(CliError::config("--repeats must be at least 1"));
    }
    if !args.tau.is_finite() || args.tau <= 0.0 {
        return Err(CliError::config("--tau must be positive and finite"));
    }
    let initial = resolve_initial(&model, &args.initial, Some(default_benchmark_start(&model)))?;
    if !args.t_end.is_finite() || args.t_end < initial.t {
        return Err(CliError::config(format!(
            "--t-end ({}) must be finite and not precede the initial time ({})",
            args.t_end, initial.t
        )));
    }

    let rows = run_benchmark(
        model.as_dyn(),
        &methods,
        &initial,
        args.tau,
        args.t_end,
        args.repeats,
    );

    let mut writer = open_writer(cli.output.as_deref())?;
    writeln!(
        writer,
        "method,order,mean_time_s,std_time_s,steps,status,{}",
        rows[0]
            .counters
            .entries()
            .iter()
            .map(|(name, _)| *name)
            .collect::<Vec<_>>()
            .join(",")
    )?;
    for row in &rows {
        writeln!(
            writer,
            "{},{},{},{},{},{},{}",
            row.method.id(),
            row.method.order(),
            format_float(row.mean_seconds),
            format_float(row.std_seconds),
            row.steps,
            row.status.label(),
            row.counters
                .entries()
                .iter()
                .map(|(_, value)| value.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )?;
    }

    let table = render_table(
        &[
            "Integrator (order)",
            &format!("Mean time [s] (from {} runs)", args.repeats),
            "Standard deviation",
        ],
        &rows
            .iter()
            .map(|row| {
                vec![
                    format!("{} ({})", family_name(row.method), row.method.order()),
                    format!("{:.4}", row.mean_seconds),
                    format!("±{:.4}", row.std_seconds),
                ]
            })
            .collect::<Vec<_>>(),
    );
    if !cli.quiet {
        eprintln!(
            "benchmark on {model_id}: tau={}, t_end={}",
            args.tau, args.t_end
        );
    }
    // keep stdout machine-parseable: the aligned table goes to stdout only
    // when the CSV is redirected to a file, to stderr otherwise
    drop(writer);
    if cli.output.is_some() {
        println!("{table}");
    } else if !cli.quiet {
        eprint!("{table}");
    }
    Ok(Outcome::Success)
}

fn family_name(method: StepMethod) -> &'static str {
    match method.kind() {
        contact_dynamics::integrators::MethodKind::Chi => "CHI",
        contact_dynamics::integrators::MethodKind::Cvi => "CVI",
        contact_dynamics::integrators::MethodKind::Rk4 => "Runge-Kutta",
        contact_dynamics::integrators::MethodKind::Midpoint => "Midpoint",
    }
}

fn default_benchmark_start(model: &ModelInstance) -> ContactState {
    match model {
        ModelInstance::Quadratic(_) => ContactState::scalar(0.0, -1.0, -7.0, 0.0),
        other => other.default_initial(),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

/// Apply model flags on top of an optional config-file model section.
pub(crate) fn merge_model_args(
    base: Option<ModelConfig>,
    args: &ModelArgs,
    fallback_id: Option<&str>,
) -> Result<ModelConfig, CliError> {
    let id = args
        .model
        .clone()
        .or(base.as_ref().map(|m| m.id.clone()))
        .or_else(|| fallback_id.map(str::to_string))
        .ok_or_else(|| CliError::config("missing required flag --model"))?;
    let mut params = base
        .filter(|m| m.id == id)
        .map(|m| m.params)
        .unwrap_or_default();

    let provided: [(&str, Option<f64>); 8] = [
        ("mu", args.mu),
        ("alpha", args.alpha),
        ("omega", args.omega),
        ("eps_radius", args.eps_radius),
        ("gamma", args.gamma),
        ("C", args.big_c),
        ("omega0", args.omega0),
        ("damping", args.damping),
    ];
    let accepted = crate::config::params_of(&id);
    for (key, value) in provided {
        if let Some(value) = value {
            if !accepted.contains(&key) {
                return Err(CliError::config(format!(
                    "--{} is not a parameter of model `{id}` (accepted: {})",
                    key.replace('_', "-"),
                    accepted.join(", ")
                )));
            }
            params.insert(key.to_string(), Value::from(value));
        }
    }
    Ok(ModelConfig { id, params })
}

pub(crate) fn parse_vector_flag(
    text: &Option<String>,
    flag: &str,
) -> Result<Option<Vec<f64>>, CliError> {
    match text {
        None => Ok(None),
        Some(text) => Ok(Some(crate::parse_float_list(text, flag)?)),
    }
}

/// Initial state from (optional) config section plus flag overrides, with
/// the model default filling whatever remains unspecified.
pub(crate) fn resolve_initial(
    model: &ModelInstance,
    args: &InitialArgs,
    override_default: Option<ContactState>,
) -> Result<ContactState, CliError> {
    let default = override_default.unwrap_or_else(|| model.default_initial());
    let q = parse_vector_flag(&args.q0, "--q0")?.unwrap_or(default.q);
    let p = parse_vector_flag(&args.p0, "--p0")?.unwrap_or(default.p);
    let s = args.s0.unwrap_or(default.s);
    let t = args.t0.unwrap_or(default.t);
    let state = ContactState::new(q, p, s, t)
        .map_err(|err| CliError::config(format!("initial state: {err}")))?;
    if state.dim() != model.as_dyn().dim() {
        return Err(CliError::config(format!(
            "initial state has dimension {} but the model has dimension {}",
            state.dim(),
            model.as_dyn().dim()
        )));
    }
    Ok(state)
}

pub(crate) fn build_model_from_args(
    args: &ModelArgs,
    fallback_id: Option<&str>,
) -> Result<(ModelInstance, String), CliError> {
    let config = merge_model_args(None, args, fallback_id)?;
    let model = crate::config::build_model(&config)?;
    Ok((model, config.id))
}

fn resolve_run_config(args: &SimulateArgs, cli: &Cli) -> Result<RunConfig, CliError> {
    let base = match &args.config {
        Some(path) => Some(load_config_file(path)?),
        None => None,
    };

    let model = merge_model_args(base.as_ref().map(|c| c.model.clone()), &args.model, None)?;

    let method = {
        let base_method = base.as_ref().map(|c| c.method.clone());
        let id = args
            .method
            .clone()
            .or(base_method.as_ref().map(|m| m.id.clone()))
            .ok_or_else(|| CliError::config("missing required flag --method"))?;
        let b_map_compat =
            args.b_map_compat || base_method.as_ref().is_some_and(|m| m.b_map_compat);
        MethodConfig { id, b_map_compat }
    };

    let tau = args
        .tau
        .or(base.as_ref().map(|c| c.tau))
        .ok_or_else(|| CliError::config("missing required flag --tau"))?;
    let t_end = args
        .t_end
        .or(base.as_ref().map(|c| c.t_end))
        .ok_or_else(|| CliError::config("missing required flag --t-end"))?;

    // initial state: flags override the config section component-wise; the
    // model default fills the rest at prepare() time
    let base_initial = base.as_ref().and_then(|c| c.initial.clone());
    let initial = if args.initial.q0.is_some()
        || args.initial.p0.is_some()
        || args.initial.s0.is_some()
        || args.initial.t0.is_some()
        || base_initial.is_some()
    {
        let model_instance = crate::config::build_model(&model)?;
        let default = match &base_initial {
            Some(init) => ContactState::new(init.q.clone(), init.p.clone(), init.s, init.t)
                .map_err(|err| CliError::config(format!("initial state: {err}")))?,
            None => model_instance.default_initial(),
        };
        let state = resolve_initial(&model_instance, &args.initial, Some(default))?;
        Some(InitialState {
            q: state.q,
            p: state.p,
            s: state.s,
            t: state.t,
        })
    } else {
        None
    };

    let mut output = base.as_ref().map(|c| c.output.clone()).unwrap_or_default();
    if let Some(path) = &cli.output {
        output.path = Some(path.clone());
    }
    if let Some(format) = cli.format {
        output.format = format;
    }
    if let Some(sample_every) = args.sample_every {
        output.sample_every = sample_every;
    }

    Ok(RunConfig {
        model,
        method,
        tau,
        t_end,
        initial,
        output,
        seed: args.seed.or(base.as_ref().map(|c| c.seed)).unwrap_or(0),
    })
}

pub(crate) fn open_writer(path: Option<&Path>) -> Result<EitherWriter, CliError> {
    match path {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            Ok(EitherWriter::File(BufWriter::new(File::create(path)?)))
        }
        None => Ok(EitherWriter::Stdout(std::io::stdout().lock())),
    }
}

pub(crate) fn write_run_output(
    path: Option<&Path>,
    format: OutputFormat,
    model: &dyn SeparableContactModel,
    trajectory: &Trajectory,
    extra: Option<&ExtraColumn>,
    wall_time_s: f64,
) -> Result<(), CliError> {
    let mut writer = open_writer(path)?;
    match format {
        OutputFormat::Csv => {
            write_trajectory_csv(&mut writer, model, trajectory, extra, wall_time_s)?
        }
        OutputFormat::Jsonl => {
            write_trajectory_jsonl(&mut writer, model, trajectory, extra, wall_time_s)?
        }
    }
    Ok(())
}
