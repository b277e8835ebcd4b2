//! Parsers for the comma-separated list arguments accepted on the command line.

use thiserror::Error;

use crate::types::{validate_arms, Arm, ConfigError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ListError {
    #[error("empty list")]
    Empty,
    #[error("item {index} ('{item}') is not a finite number")]
    NotANumber { index: usize, item: String },
    #[error("item {index} ('{item}') must look like name:cost")]
    BadArm { index: usize, item: String },
    #[error(transparent)]
    Arms(#[from] ConfigError),
}

/// `"0.6, 0.4"` → `[0.6, 0.4]`. Whitespace around items is ignored.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>, ListError> {
    if s.trim().is_empty() {
        return Err(ListError::Empty);
    }
    s.split(',')
        .enumerate()
        .map(|(index, item)| {
            let item = item.trim();
            item.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ListError::NotANumber { index, item: item.to_string() })
        })
        .collect()
}

/// `"small:0.0485,large:0.5724"` → arms ranked in the given order.
pub fn parse_arms(s: &str) -> Result<Vec<Arm>, ListError> {
    if s.trim().is_empty() {
        return Err(ListError::Empty);
    }
    let mut arms = Vec::new();
    for (index, item) in s.split(',').enumerate() {
        let bad = || ListError::BadArm { index, item: item.trim().to_string() };
        let (name, cost) = item.trim().rsplit_once(':').ok_or_else(bad)?;
        let cost: f64 = cost.trim().parse().map_err(|_| bad())?;
        arms.push(Arm::new(name.trim(), cost, index));
    }
    validate_arms(&arms)?;
    Ok(arms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats() {
        assert_eq!(parse_float_list("0.6, 0.4").unwrap(), vec![0.6, 0.4]);
        assert_eq!(parse_float_list("-0.5").unwrap(), vec![-0.5]);
        assert_eq!(parse_float_list(""), Err(ListError::Empty));
        assert!(matches!(parse_float_list("0.2,,0.3"), Err(ListError::NotANumber { index: 1, .. })));
        assert!(matches!(parse_float_list("inf"), Err(ListError::NotANumber { .. })));
        assert!(matches!(parse_float_list("NaN"), Err(ListError::NotANumber { .. })));
    }

    #[test]
    fn arms() {
        let arms = parse_arms("small:0.0485, medium:0.097,large:0.5724").unwrap();
        assert_eq!(arms.len(), 3);
        assert_eq!((arms[1].name.as_str(), arms[1].rank), ("medium", 1));
        assert!(matches!(parse_arms("small"), Err(ListError::BadArm { .. })));
        assert!(matches!(parse_arms("a:2,b:1"), Err(ListError::Arms(ConfigError::ArmCostOrder(_)))));
        assert!(matches!(parse_arms("a:x"), Err(ListError::BadArm { .. })));
    }
}
