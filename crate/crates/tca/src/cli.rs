//! `tca` command line.
//!
//! Exit codes: 0 on success, 2 for usage and input errors, 3 when an exact
//! solver would exceed its enumeration budget.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use taxicab_core::taxicab::SolverMode;

use crate::analysis::{self, ResidualChoice, SearchChoice, TableInput};
use crate::csv_io::{parse_counts_csv, parse_number_list, parse_table_csv, read};
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::report::{write_report, AnalysisReport, Details};
use crate::svg::render_map;
use crate::tensor_io::parse_tensor;

#[derive(Debug, Parser)]
#[command(name = "tca", version, about = "Taxicab correspondence analysis and related L1 tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Source {
    /// Input CSV: column labels on the first line, row labels in the first field.
    input: Option<PathBuf>,
    /// Use an embedded table instead of a file.
    #[arg(long, value_enum, conflicts_with = "input")]
    dataset: Option<Dataset>,
}

#[derive(Debug, Args)]
struct Solver {
    /// Exhaustive search over sign vectors; fails past the enumeration budget.
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    /// Alternating maximization from deterministic starts.
    #[arg(long)]
    heuristic: bool,
}

impl Solver {
    fn mode(&self) -> SolverMode {
        match (self.exact, self.heuristic) {
            (true, _) => SolverMode::Exact,
            (_, true) => SolverMode::Heuristic,
            _ => SolverMode::Auto,
        }
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MapOutput {
    /// Write an SVG factor map here.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Axis pair drawn on the map.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [1, 2])]
    map_axes: Vec<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mean absolute deviation, standard deviation and LAD of one column.
    Dispersion {
        /// A CSV table (pick a column with --column) or a bare list of numbers.
        input: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "input")]
        dataset: Option<Dataset>,
        #[arg(long)]
        column: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Taxicab correspondence analysis.
    Tca {
        #[command(flatten)]
        source: Source,
        /// Number of axes; all of them by default.
        #[arg(long)]
        axes: Option<usize>,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        map: MapOutput,
    },
    /// Classical correspondence analysis.
    Ca {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        axes: Option<usize>,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        map: MapOutput,
    },
    /// CA and TCA contributions on one axis.
    Compare {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        axis: usize,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        output: Output,
    },
    /// Balanced 2-blocks seriation of one TCA axis.
    Seriate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        axis: usize,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        output: Output,
    },
    /// Taxicab norm of a triple-centered three-way array.
    Tensor {
        /// Text file: "n m t", then n·t lines of m numbers, one k-slab after another.
        input: PathBuf,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        output: Output,
    },
    /// Maximal-interaction two-mode clustering.
    Cluster {
        #[command(flatten)]
        source: Source,
        #[arg(long = "r")]
        r: usize,
        #[arg(long = "c")]
        c: usize,
        #[arg(long = "p", default_value_t = 1.0)]
        p: f64,
        #[arg(long, value_enum, default_value = "multiplicative")]
        residual: ResidualChoice,
        #[arg(long, value_enum, default_value = "auto")]
        search: SearchChoice,
        #[command(flatten)]
        output: Output,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Human-readable results go to `out`, diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = e.print();
                    2
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tca: {e}");
            e.exit_code()
        }
    }
}

fn load_source(source: &Source, counts: bool) -> Result<TableInput> {
    let (name, text) = source_text(source.input.as_deref(), source.dataset)?;
    let table = if counts {
        parse_counts_csv(&text)?
    } else {
        parse_table_csv(&text)?
    };
    Ok(TableInput {
        name,
        bytes: text.into_bytes(),
        table,
    })
}

fn source_text(input: Option<&Path>, dataset: Option<Dataset>) -> Result<(String, String)> {
    match (input, dataset) {
        (_, Some(d)) => Ok((d.name().to_owned(), d.csv().to_owned())),
        (Some(path), None) => Ok((path.display().to_string(), read(path)?)),
        (None, None) => Err(Error::Usage("give an input file or --dataset".into())),
    }
}

fn finish(report: &AnalysisReport, output: &Output) -> Result<()> {
    if let Some(path) = &output.out {
        write_report(path, report)?;
    }
    Ok(())
}

fn write_map(report: &AnalysisReport, map: &MapOutput) -> Result<()> {
    if let Some(path) = &map.map {
        let svg = render_map(report, (map.map_axes[0], map.map_axes[1]))?;
        std::fs::write(path, svg).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    let report = match &command {
        Command::Dispersion {
            input,
            dataset,
            column,
            ..
        } => {
            let (name, text) = source_text(input.as_deref(), *dataset)?;
            let values = match (column, parse_number_list(&text)) {
                (None, Some(list)) => list?,
                (_, _) => {
                    let table = parse_table_csv(&text)?;
                    match column {
                        Some(c) => table
                            .column(c)
                            .ok_or_else(|| Error::Usage(format!("no column named {c:?}")))?,
                        None if table.col_labels.len() == 1 => table.values.column(0).collect(),
                        None => return Err(Error::Usage("the table has several columns; pick one with --column".into())),
                    }
                }
            };
            analysis::dispersion_report(&name, text.as_bytes(), values)?
        }
        Command::Tca {
            source, axes, solver, ..
        } => analysis::tca_report(&load_source(source, true)?, *axes, solver.mode())?,
        Command::Ca { source, axes, .. } => analysis::ca_report(&load_source(source, true)?, *axes)?,
        Command::Compare {
            source, axis, solver, ..
        } => analysis::compare_report(&load_source(source, true)?, *axis, solver.mode())?,
        Command::Seriate {
            source, axis, solver, ..
        } => analysis::seriate_report(&load_source(source, true)?, *axis, solver.mode())?,
        Command::Tensor { input, solver, .. } => {
            let text = read(input)?;
            let array = parse_tensor(&text)?;
            analysis::tensor_report(&input.display().to_string(), text.as_bytes(), &array, solver.mode())?
        }
        Command::Cluster {
            source,
            r,
            c,
            p,
            residual,
            search,
            ..
        } => {
            let input = load_source(source, *residual == ResidualChoice::Multiplicative)?;
            analysis::cluster_report(&input, *r, *c, *p, *residual, *search)?
        }
    };

    print_report(&report, out).map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })?;
    match &command {
        Command::Dispersion { output, .. }
        | Command::Compare { output, .. }
        | Command::Seriate { output, .. }
        | Command::Tensor { output, .. }
        | Command::Cluster { output, .. } => finish(&report, output),
        Command::Tca { output, map, .. } | Command::Ca { output, map, .. } => {
            finish(&report, output)?;
            write_map(&report, map)
        }
    }
}

/// Rounded, human-readable summary; the JSON report keeps full precision.
fn print_report(report: &AnalysisReport, out: &mut dyn Write) -> std::io::Result<()> {
    let inputs = &report.inputs;
    let shape: Vec<String> = inputs.shape.iter().map(usize::to_string).collect();
    writeln!(out, "{} [{}]", inputs.name, shape.join("×"))?;
    let label = |labels: &[String], i: usize| labels.get(i).cloned().unwrap_or_else(|| i.to_string());

    for axis in &report.axes {
        match axis.inertia {
            Some(l) => writeln!(out, "axis {}: sigma = {:.6}, inertia = {:.6}", axis.index, axis.value, l)?,
            None => writeln!(
                out,
                "axis {}: delta = {:.6}{}",
                axis.index,
                axis.value,
                if axis.exact == Some(false) { " (heuristic)" } else { "" }
            )?,
        }
        writeln!(out, "  {:<16} {:>10} {:>8}", "row", "score", "contrib")?;
        for (i, (s, c)) in axis.row_scores.iter().zip(&axis.row_contributions).enumerate() {
            writeln!(out, "  {:<16} {:>10.4} {:>8.4}", label(&inputs.row_labels, i), s, c)?;
        }
        writeln!(out, "  {:<16} {:>10} {:>8}", "column", "score", "contrib")?;
        for (j, (s, c)) in axis.col_scores.iter().zip(&axis.col_contributions).enumerate() {
            writeln!(out, "  {:<16} {:>10.4} {:>8.4}", label(&inputs.col_labels, j), s, c)?;
        }
        if let Some(b) = axis.block_sums {
            writeln!(out, "  block sums: {:.4} {:.4} {:.4} {:.4}", b[0], b[1], b[2], b[3])?;
        }
    }

    match &report.details {
        Some(Details::Tca { rank_used, .. }) if report.axes.is_empty() => {
            writeln!(out, "no axes ({rank_used} requested or available)")?
        }
        Some(Details::Ca { total_inertia }) => writeln!(out, "total inertia = {total_inertia:.6}")?,
        Some(Details::Dispersion(d)) => {
            writeln!(out, "n = {}, mean = {:.6}, median = {:.6}", d.n, d.mean, d.median)?;
            writeln!(out, "d = {:.6}, s = {:.6}, LAD = {:.6}, cut norm = {:.6}", d.d, d.s, d.lad, d.cut_norm)?;
            if !d.heavyweights.is_empty() {
                writeln!(out, "heavyweights: {:?}", d.heavyweights)?;
            }
        }
        Some(Details::Seriation(s)) => {
            writeln!(out, "seriation of axis {}: cut norm = {:.6}", s.axis, s.cut_norm)?;
            writeln!(out, "  S = {{{}}}", s.s_opt.join(", "))?;
            writeln!(out, "  T = {{{}}}", s.t_opt.join(", "))?;
            writeln!(out, "  row order: {}", s.row_order.join(", "))?;
            writeln!(out, "  column order: {}", s.col_order.join(", "))?;
        }
        Some(Details::Comparison(c)) => {
            writeln!(out, "axis {} contributions", c.axis)?;
            writeln!(out, "  {:<16} {:>8} {:>8}", "", "CA", "TCA")?;
            for r in c.rows.iter().chain(&c.cols) {
                writeln!(out, "  {:<16} {:>8.3} {:>8.3}", r.label, r.ca, r.tca)?;
            }
            for (name, peak) in [("CA", &c.max_ca), ("TCA", &c.max_tca)] {
                if let Some(p) = peak {
                    writeln!(out, "  largest {name} contribution: {} {} = {:.3}", p.kind, p.label, p.value)?;
                }
            }
        }
        Some(Details::Tensor(t)) => {
            writeln!(out, "delta = {:.6}{}", t.delta, if t.exact { "" } else { " (heuristic)" })?;
            let sums: Vec<String> = t.octant_sums.iter().map(|v| format!("{v:.4}")).collect();
            writeln!(out, "octant sums: {}", sums.join(" "))?;
        }
        Some(Details::Cluster(c)) => {
            writeln!(out, "f_{} = {:.6} ({}, {} residual)", c.p, c.objective, c.method, c.residual)?;
            for (k, b) in c.row_blocks.iter().enumerate() {
                writeln!(out, "  row block {}: {}", k + 1, b.join(", "))?;
            }
            for (k, b) in c.col_blocks.iter().enumerate() {
                writeln!(out, "  column block {}: {}", k + 1, b.join(", "))?;
            }
        }
        _ => {}
    }
    Ok(())
}
