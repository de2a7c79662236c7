//! Tables shipped with the binary.

use crate::csv_io::{parse_counts_csv, LabeledMatrix};

/// Lung asbestosis grade by years of exposure, 1117 workers.
pub const ASBESTOS_CSV: &str = include_str!("../data/asbestos.csv");

/// Membership of 22 American countries in 15 regional organizations.
pub const AMERICAS_CSV: &str = include_str!("../data/americas.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Dataset {
    Asbestos,
    Americas,
}

impl Dataset {
    pub fn name(self) -> &'static str {
        match self {
            Dataset::Asbestos => "asbestos",
            Dataset::Americas => "americas",
        }
    }

    pub fn csv(self) -> &'static str {
        match self {
            Dataset::Asbestos => ASBESTOS_CSV,
            Dataset::Americas => AMERICAS_CSV,
        }
    }

    pub fn load(self) -> LabeledMatrix {
        parse_counts_csv(self.csv()).expect("embedded tables are well formed")
    }
}

pub fn asbestos() -> LabeledMatrix {
    Dataset::Asbestos.load()
}

pub fn americas() -> LabeledMatrix {
    Dataset::Americas.load()
}
