//! On-disk formats: JSONL corpora, CSV reports, `calibration.json`, and the
//! synthetic corpus generator.

mod calibration;
mod corpus;
mod flags;
mod report;
mod synthetic;

pub use calibration::{parse_calibration, CalibrationFile, CalibrationFileError};
pub use corpus::{
    corpus_arms, load_records, load_records_from_path, parse_record_line, write_record, write_records, CorpusError,
    RecordError,
};
pub use flags::{parse_arms, parse_float_list, ListError};
pub use report::{write_correlation_csv, write_curve_csv, DecisionLine, CORRELATION_HEADER, CURVE_HEADER};
pub use synthetic::{generate_synthetic, InvalidSpec, SyntheticSpec, GENERATOR_RNG};
