use std::collections::BTreeMap;

use proptest::prelude::*;
use tca::csv_io::parse_counts_csv;
use tca::report::{from_json, to_json, AnalysisReport, AxisRecord, InputSummary, Method, Provenance};
use tca::tensor_io::{format_tensor, parse_tensor};
use taxicab_core::residual::Array3;

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

proptest! {
    #[test]
    fn counts_survive_csv(n in 1usize..6, m in 1usize..6, cells in prop::collection::vec(0.0..1e6_f64, 36)) {
        let mut text = String::from("corner");
        for j in 0..m {
            text.push_str(&format!(",c{j}"));
        }
        text.push('\n');
        for i in 0..n {
            text.push_str(&format!("r{i}"));
            for j in 0..m {
                text.push_str(&format!(",{:?}", cells[i * m + j]));
            }
            text.push('\n');
        }
        let t = parse_counts_csv(&text).unwrap();
        for i in 0..n {
            for j in 0..m {
                prop_assert_eq!(t.values[(i, j)], cells[i * m + j]);
            }
        }
    }

    #[test]
    fn tensors_survive_text(dims in (1usize..4, 1usize..4, 1usize..4), cells in prop::collection::vec(finite(), 27)) {
        let (n, m, t) = dims;
        let x = Array3::from_fn(n, m, t, |i, j, k| cells[(i * m + j) * t + k]);
        prop_assert_eq!(parse_tensor(&format_tensor(&x)).unwrap(), x);
    }

    #[test]
    fn reports_survive_json(values in prop::collection::vec(finite(), 1..20), signs in prop::collection::vec(prop_oneof![Just(-1i8), Just(1i8)], 0..8)) {
        let report = AnalysisReport {
            method: Method::Tca,
            inputs: InputSummary {
                name: "random".into(),
                shape: vec![values.len(), 1],
                total: values.len() as f64,
                row_labels: (0..values.len()).map(|i| format!("row \"{i}\"")).collect(),
                col_labels: vec!["c,1".into()],
            },
            axes: vec![AxisRecord {
                index: 1,
                value: values[0],
                inertia: None,
                exact: Some(true),
                row_scores: values.clone(),
                col_scores: values.iter().rev().copied().collect(),
                row_contributions: values.clone(),
                col_contributions: vec![],
                heavyweight_rows: vec![0],
                heavyweight_cols: vec![],
                row_signs: Some(signs.clone()),
                col_signs: None,
                block_sums: Some([values[0], -values[0], 0.0, 1.5]),
            }],
            details: None,
            provenance: Provenance {
                dataset: "random".into(),
                sha256: "00".repeat(32),
                solver: "exact".into(),
                tolerances: BTreeMap::from([("stop_rel".to_owned(), 1e-12)]),
                tool_version: "0".into(),
            },
        };
        let text = to_json(&report).unwrap();
        let back = from_json(&text).unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert_eq!(to_json(&back).unwrap(), text);
    }
}
