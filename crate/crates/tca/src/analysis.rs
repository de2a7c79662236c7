//! Runs the core algorithms on loaded inputs and packages the results as
//! [`AnalysisReport`]s.

use taxicab_core::ca::{ca, compare_ca_tca, PeakContribution, PointKind, RANK_TOLERANCE};
use taxicab_core::cluster::{maximize, Method as ClusterMethod};
use taxicab_core::dispersion::{self, cut_norm_vec, relative_contributions, Sample};
use taxicab_core::residual::{
    additive_double_center, correspondence_residual, triple_center, Array3, CorrespondenceMatrix,
    ResidualMatrix, CENTERING_TOLERANCE,
};
use taxicab_core::sign::ZERO_FLOOR_REL;
use taxicab_core::taxicab::{tca, SolverMode, TcaDecomposition, TcaOptions, STOP_REL};
use taxicab_core::tensor::tensor_norm;
use taxicab_core::Error as CoreError;

use crate::csv_io::LabeledMatrix;
use crate::error::{Error, Result};
use crate::report::*;

/// A table together with where it came from.
#[derive(Debug, Clone)]
pub struct TableInput {
    pub name: String,
    pub bytes: Vec<u8>,
    pub table: LabeledMatrix,
}

pub fn solver_name(mode: SolverMode) -> &'static str {
    match mode {
        SolverMode::Auto => "auto",
        SolverMode::Exact => "exact",
        SolverMode::Heuristic => "heuristic",
    }
}

fn summary(input: &TableInput) -> InputSummary {
    InputSummary {
        name: input.name.clone(),
        shape: vec![input.table.values.nrows(), input.table.values.ncols()],
        total: input.table.total(),
        row_labels: input.table.row_labels.clone(),
        col_labels: input.table.col_labels.clone(),
    }
}

fn taxicab_provenance(input: &TableInput, solver: SolverMode) -> Provenance {
    Provenance::new(&input.name, &input.bytes, solver_name(solver))
        .with_tolerance("centering", CENTERING_TOLERANCE)
        .with_tolerance("heavyweight", taxicab_core::taxicab::HEAVYWEIGHT_TOLERANCE)
        .with_tolerance("stop_rel", STOP_REL)
        .with_tolerance("zero_floor_rel", ZERO_FLOOR_REL)
}

fn correspondence(input: &TableInput) -> Result<CorrespondenceMatrix> {
    Ok(CorrespondenceMatrix::from_counts(&input.table.values)?)
}

/// Taxicab correspondence analysis; `axes = None` runs to full rank.
pub fn tca_report(input: &TableInput, axes: Option<usize>, solver: SolverMode) -> Result<AnalysisReport> {
    Ok(build_tca(input, axes, solver)?.1)
}

fn build_tca(input: &TableInput, axes: Option<usize>, solver: SolverMode) -> Result<(TcaDecomposition, AnalysisReport)> {
    let p = correspondence(input)?;
    let dec = tca(&p, &TcaOptions { max_axes: axes, solver })?;
    let mut records = Vec::with_capacity(dec.axes.len());
    for (k, axis) in dec.axes.iter().enumerate() {
        let rc = dec.rc_axis(k)?;
        let ser = dec.seriate(k)?;
        records.push(AxisRecord {
            index: k + 1,
            value: axis.axis.delta,
            inertia: None,
            exact: Some(axis.axis.exact),
            row_scores: axis.f.clone(),
            col_scores: axis.g.clone(),
            row_contributions: rc.rc_rows,
            col_contributions: rc.rc_cols,
            heavyweight_rows: rc.heavyweight_rows,
            heavyweight_cols: rc.heavyweight_cols,
            row_signs: Some(axis.axis.v.as_slice().to_vec()),
            col_signs: Some(axis.axis.u.as_slice().to_vec()),
            block_sums: Some(ser.block_sums),
        });
    }
    let report = AnalysisReport {
        method: Method::Tca,
        inputs: summary(input),
        axes: records,
        details: Some(Details::Tca {
            rank_used: dec.rank_used,
            remainder_l1: dec.remainder.matrix().l1_norm(),
        }),
        provenance: taxicab_provenance(input, solver),
    };
    Ok((dec, report))
}

/// Classical correspondence analysis.
pub fn ca_report(input: &TableInput, axes: Option<usize>) -> Result<AnalysisReport> {
    let p = correspondence(input)?;
    let dec = ca(&p, axes)?;
    let records = (0..dec.n_axes())
        .map(|k| AxisRecord {
            index: k + 1,
            value: dec.singular_values[k],
            inertia: Some(dec.principal_inertias[k]),
            exact: None,
            row_scores: dec.row_scores[k].clone(),
            col_scores: dec.col_scores[k].clone(),
            row_contributions: dec.row_ctr[k].clone(),
            col_contributions: dec.col_ctr[k].clone(),
            heavyweight_rows: Vec::new(),
            heavyweight_cols: Vec::new(),
            row_signs: None,
            col_signs: None,
            block_sums: None,
        })
        .collect();
    Ok(AnalysisReport {
        method: Method::Ca,
        inputs: summary(input),
        axes: records,
        details: Some(Details::Ca {
            total_inertia: dec.total_inertia,
        }),
        provenance: Provenance::new(&input.name, &input.bytes, "exact").with_tolerance("rank", RANK_TOLERANCE),
    })
}

fn check_axis(axis: usize) -> Result<usize> {
    axis.checked_sub(1)
        .ok_or_else(|| Error::Usage("axes are numbered from 1".into()))
}

/// CA and TCA contributions side by side on one (1-based) axis.
pub fn compare_report(input: &TableInput, axis: usize, solver: SolverMode) -> Result<AnalysisReport> {
    let k = check_axis(axis)?;
    let p = correspondence(input)?;
    let cmp = compare_ca_tca(&p, k, solver)?;
    if cmp.is_empty() {
        return Err(CoreError::AxisOutOfRange {
            index: k,
            available: k,
        }
        .into());
    }
    let t = &input.table;
    let records = |pairs: &[taxicab_core::ca::ContributionPair], labels: &[String]| {
        pairs
            .iter()
            .map(|c| ContributionRecord {
                label: labels[c.index].clone(),
                ca: c.ca,
                tca: c.tca,
            })
            .collect()
    };
    let peak = |p: Option<PeakContribution>| {
        p.map(|p| {
            let (kind, labels) = match p.kind {
                PointKind::Row => ("row", &t.row_labels),
                PointKind::Column => ("column", &t.col_labels),
            };
            PeakRecord {
                kind: kind.into(),
                label: labels[p.index].clone(),
                value: p.value,
            }
        })
    };
    Ok(AnalysisReport {
        method: Method::Compare,
        inputs: summary(input),
        axes: Vec::new(),
        details: Some(Details::Comparison(ComparisonDetails {
            axis,
            rows: records(&cmp.rows, &t.row_labels),
            cols: records(&cmp.cols, &t.col_labels),
            max_ca: peak(cmp.max_ca),
            max_tca: peak(cmp.max_tca),
            same_sign_structure: cmp.same_sign_structure,
        })),
        provenance: taxicab_provenance(input, solver).with_tolerance("rank", RANK_TOLERANCE),
    })
}

/// Balanced 2-blocks seriation of one (1-based) TCA axis.
pub fn seriate_report(input: &TableInput, axis: usize, solver: SolverMode) -> Result<AnalysisReport> {
    let k = check_axis(axis)?;
    let (dec, mut report) = build_tca(input, Some(axis), solver)?;
    let ser = dec.seriate(k)?;
    let t = &input.table;
    let names = |idx: &[usize], labels: &[String]| idx.iter().map(|&i| labels[i].clone()).collect();
    report.method = Method::Seriate;
    report.details = Some(Details::Seriation(SeriationDetails {
        axis,
        delta: ser.delta,
        cut_norm: ser.cut_norm,
        s_opt: names(&ser.s_opt, &t.row_labels),
        t_opt: names(&ser.t_opt, &t.col_labels),
        block_sums: ser.block_sums,
        row_order: names(&ser.row_order, &t.row_labels),
        col_order: names(&ser.col_order, &t.col_labels),
    }));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ResidualChoice {
    /// `p_ij − p_i*·p_*j` of the table scaled to total 1.
    Multiplicative,
    /// Row and column means removed from the raw values.
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SearchChoice {
    Auto,
    Exhaustive,
    LocalSearch,
}

pub fn residual_of(input: &TableInput, choice: ResidualChoice) -> Result<ResidualMatrix> {
    Ok(match choice {
        ResidualChoice::Multiplicative => correspondence_residual(&correspondence(input)?),
        ResidualChoice::Additive => additive_double_center(&input.table.values)?,
    })
}

/// Maximal-interaction two-mode clustering.
pub fn cluster_report(
    input: &TableInput,
    r: usize,
    c: usize,
    p: f64,
    residual: ResidualChoice,
    search: SearchChoice,
) -> Result<AnalysisReport> {
    let x = residual_of(input, residual)?;
    let method = match search {
        SearchChoice::Auto => ClusterMethod::Auto,
        SearchChoice::Exhaustive => ClusterMethod::Exhaustive,
        SearchChoice::LocalSearch => ClusterMethod::LocalSearch,
    };
    let res = maximize(&x, r, c, p, method)?;
    let t = &input.table;
    let named = |blocks: Vec<Vec<usize>>, labels: &[String]| {
        blocks
            .into_iter()
            .map(|b| b.into_iter().map(|i| labels[i].clone()).collect())
            .collect()
    };
    Ok(AnalysisReport {
        method: Method::Cluster,
        inputs: summary(input),
        axes: Vec::new(),
        details: Some(Details::Cluster(ClusterDetails {
            r,
            c,
            p,
            method: match res.method {
                ClusterMethod::Exhaustive => "exhaustive",
                _ => "local_search",
            }
            .into(),
            residual: match residual {
                ResidualChoice::Multiplicative => "multiplicative",
                ResidualChoice::Additive => "additive",
            }
            .into(),
            objective: res.objective,
            row_blocks: named(res.partition.row_blocks(), &t.row_labels),
            col_blocks: named(res.partition.col_blocks(), &t.col_labels),
        })),
        provenance: Provenance::new(&input.name, &input.bytes, solver_name(SolverMode::Auto))
            .with_tolerance("centering", CENTERING_TOLERANCE)
            .with_tolerance("exhaustive_limit", taxicab_core::cluster::EXHAUSTIVE_LIMIT),
    })
}

/// Mean absolute deviation, standard deviation and LAD of one sample.
pub fn dispersion_report(name: &str, bytes: &[u8], values: Vec<f64>) -> Result<AnalysisReport> {
    let sample = Sample::new(values)?;
    let rep = relative_contributions(&sample);
    let cut = cut_norm_vec(&dispersion::center(&sample)).value;
    Ok(AnalysisReport {
        method: Method::Dispersion,
        inputs: InputSummary {
            name: name.to_owned(),
            shape: vec![sample.len()],
            total: sample.values().iter().sum(),
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        },
        axes: Vec::new(),
        details: Some(Details::Dispersion(DispersionDetails {
            n: rep.n,
            mean: rep.mean,
            median: rep.median,
            d: rep.d,
            s: rep.s,
            s2: rep.s2,
            lad: rep.lad,
            cut_norm: cut,
            rc_d: rep.rc_d,
            rc_s2: rep.rc_s2,
            rc_lad: rep.rc_lad,
            heavyweights: rep.heavyweight_indices,
            degenerate: rep.degenerate,
        })),
        provenance: Provenance::new(name, bytes, "exact")
            .with_tolerance("centering", dispersion::CENTERING_TOLERANCE)
            .with_tolerance("heavyweight", dispersion::HEAVYWEIGHT_TOLERANCE),
    })
}

/// Taxicab norm of the triple-centered version of `array`.
pub fn tensor_report(name: &str, bytes: &[u8], array: &Array3, solver: SolverMode) -> Result<AnalysisReport> {
    let x = triple_center(array)?;
    let axis = tensor_norm(&x, solver)?;
    Ok(AnalysisReport {
        method: Method::Tensor,
        inputs: InputSummary {
            name: name.to_owned(),
            shape: array.dims().to_vec(),
            total: array.as_slice().iter().sum(),
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        },
        axes: Vec::new(),
        details: Some(Details::Tensor(TensorDetails {
            delta: axis.delta,
            exact: axis.exact,
            u: axis.u.as_slice().to_vec(),
            v: axis.v.as_slice().to_vec(),
            w: axis.w.as_slice().to_vec(),
            octant_sums: axis.octant_sums,
        })),
        provenance: Provenance::new(name, bytes, solver_name(solver))
            .with_tolerance("centering", CENTERING_TOLERANCE)
            .with_tolerance("zero_floor_rel", ZERO_FLOOR_REL),
    })
}
