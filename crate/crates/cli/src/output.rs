//! Trajectory and table writers: locale-independent CSV with `#` metadata
//! trailers, JSONL with matching field names, and aligned text tables.

use std::io::{self, Write};

use contact_dynamics::dynamics::hamiltonian;
use contact_dynamics::integrators::Trajectory;
use contact_dynamics::models::SeparableContactModel;
use contact_dynamics::state::ContactState;

/// 17 significant digits: round-trip exact for f64, so downstream diffs are
/// stable across runs.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writer over either a file or locked stdout.
pub enum EitherWriter {
    File(io::BufWriter<std::fs::File>),
    Stdout(io::StdoutLock<'static>),
}

impl Write for EitherWriter {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            EitherWriter::File(w) => w.write(buf),
            EitherWriter::Stdout(w) => w.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            EitherWriter::File(w) => w.flush(),
            EitherWriter::Stdout(w) => w.flush(),
        }
    }
}

/// An extra per-sample column (e.g. the sphere distance in the oscillator
/// experiments).
pub struct ExtraColumn<'a> {
    pub name: &'static str,
    pub value: &'a dyn Fn(&ContactState) -> f64,
}

fn header_names(n: usize, extra: Option<&ExtraColumn>) -> Vec<String> {
    let mut names = vec!["t".to_string()];
    names.extend((1..=n).map(|i| format!("q{i}")));
    names.extend((1..=n).map(|i| format!("p{i}")));
    names.push("s".to_string());
    names.push("H".to_string());
    if let Some(extra) = extra {
        names.push(extra.name.to_string());
    }
    names
}

fn row_values<M: SeparableContactModel + ?Sized>(
    model: &M,
    state: &ContactState,
    extra: Option<&ExtraColumn>,
) -> Vec<f64> {
    let mut values = vec![state.t];
    values.extend_from_slice(&state.q);
    values.extend_from_slice(&state.p);
    values.push(state.s);
    values.push(hamiltonian(model, state).unwrap_or(f64::NAN));
    if let Some(extra) = extra {
        values.push((extra.value)(state));
    }
    values
}

/// Columns `t, q1..qn, p1..pn, s, H` plus any extra column; metadata
/// (status, steps, counters, wall time) as `#`-prefixed trailing comments.
pub fn write_trajectory_csv<M: SeparableContactModel + ?Sized>(
    out: &mut dyn Write,
    model: &M,
    trajectory: &Trajectory,
    extra: Option<&ExtraColumn>,
    wall_time_s: f64,
) -> io::Result<()> {
    writeln!(out, "{}", header_names(model.dim(), extra).join(","))?;
    for state in &trajectory.samples {
        let row: Vec<String> = row_values(model, state, extra)
            .into_iter()
            .map(format_float)
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    writeln!(out, "# method={}", trajectory.method.id())?;
    writeln!(out, "# tau={}", format_float(trajectory.tau))?;
    writeln!(out, "# status={}", trajectory.status.label())?;
    if let Some(t) = trajectory.status.failure_time() {
        writeln!(out, "# t_fail={}", format_float(t))?;
    }
    writeln!(out, "# steps={}", trajectory.steps_taken)?;
    for (name, value) in trajectory.counters.entries() {
        writeln!(out, "# {name}={value}")?;
    }
    writeln!(out, "# wall_time_s={}", format_float(wall_time_s))?;
    Ok(())
}

/// One JSON object per sample with the same field names as the CSV header,
/// then a metadata record.
pub fn write_trajectory_jsonl<M: SeparableContactModel + ?Sized>(
    out: &mut dyn Write,
    model: &M,
    trajectory: &Trajectory,
    extra: Option<&ExtraColumn>,
    wall_time_s: f64,
) -> io::Result<()> {
    let names = header_names(model.dim(), extra);
    for state in &trajectory.samples {
        let fields: Vec<String> = names
            .iter()
            .zip(row_values(model, state, extra))
            .map(|(name, value)| format!("\"{name}\":{}", format_float(value)))
            .collect();
        writeln!(out, "{{{}}}", fields.join(","))?;
    }
    let counters: Vec<String> = trajectory
        .counters
        .entries()
        .iter()
        .map(|(name, value)| format!("\"{name}\":{value}"))
        .collect();
    let t_fail = trajectory
        .status
        .failure_time()
        .map(|t| format!(",\"t_fail\":{}", format_float(t)))
        .unwrap_or_default();
    writeln!(
        out,
        "{{\"method\":\"{}\",\"tau\":{},\"status\":\"{}\"{},\"steps\":{},\"counters\":{{{}}},\"wall_time_s\":{}}}",
        trajectory.method.id(),
        format_float(trajectory.tau),
        trajectory.status.label(),
        t_fail,
        trajectory.steps_taken,
        counters.join(","),
        format_float(wall_time_s),
    )
}

/// Render an aligned plain-text table.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let columns = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(columns) {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut text = String::new();
    let render_row = |cells: Vec<&str>, widths: &[usize]| -> String {
        cells
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{:<width$}", cell, width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    text.push_str(&render_row(headers.to_vec(), &widths));
    text.push('\n');
    text.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (columns - 1)));
    text.push('\n');
    for row in rows {
        text.push_str(&render_row(
            row.iter().map(String::as_str).collect(),
            &widths,
        ));
        text.push('\n');
    }
    text
}
