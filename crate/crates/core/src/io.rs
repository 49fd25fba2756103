//! JSON state files and number formatting.
//!
//! ```json
//! {
//!   "kind": "state",
//!   "dim": 2,
//!   "matrix": [
//!     [[0.5, 0], [0, 0]],
//!     [[0, 0], [0.5, 0]]
//!   ],
//!   "metadata": {"note": "optional"}
//! }
//! ```
//!
//! `matrix` is row-major with `[re, im]` pairs. Floats are written with 17
//! significant digits so that a write/read cycle is exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::error::GeometryError;
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::state::{DensityState, Hamiltonian};

/// Significant digits for floats in state files.
pub const FILE_DIGITS: usize = 17;

/// Significant digits for scalar results printed by the CLI.
pub const SCALAR_DIGITS: usize = 15;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed state file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid state file: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    State,
    Hamiltonian,
}

impl FileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FileKind::State => "state",
            FileKind::Hamiltonian => "hamiltonian",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStateFile {
    kind: FileKind,
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

/// Parsed but not yet validated contents of a state file.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFile {
    pub kind: FileKind,
    pub matrix: ComplexMatrix,
    pub metadata: BTreeMap<String, String>,
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: RawStateFile = serde_json::from_str(text)?;
        if raw.dim == 0 {
            return Err(FileError::Schema("dim must be positive".into()));
        }
        if raw.matrix.len() != raw.dim || raw.matrix.iter().any(|row| row.len() != raw.dim) {
            return Err(FileError::Schema(format!(
                "matrix must be {0}x{0} to match dim",
                raw.dim
            )));
        }
        let n = raw.dim;
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| {
            let [re, im] = raw.matrix[i][j];
            Complex64::new(re, im)
        });
        Ok(StateFile {
            kind: raw.kind,
            matrix,
            metadata: raw.metadata,
        })
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        std::fs::write(path, self.to_json()).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn from_state(state: &DensityState) -> Self {
        StateFile {
            kind: FileKind::State,
            matrix: state.matrix().as_matrix().clone(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn from_hamiltonian(h: &Hamiltonian) -> Self {
        StateFile {
            kind: FileKind::Hamiltonian,
            matrix: h.matrix().as_matrix().clone(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: &str) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    /// Validates the matrix as a state with positivity threshold `eps`.
    pub fn to_state(&self, eps: f64) -> Result<DensityState, GeometryError> {
        DensityState::with_eps(HermitianMatrix::new(self.matrix.clone())?, eps)
    }

    pub fn to_hamiltonian(&self) -> Result<Hamiltonian, GeometryError> {
        Ok(Hamiltonian::new(HermitianMatrix::new(self.matrix.clone())?))
    }

    pub fn to_json(&self) -> String {
        let n = self.dim();
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"kind\": \"{}\",", self.kind.as_str());
        let _ = writeln!(out, "  \"dim\": {n},");
        out.push_str("  \"matrix\": [\n");
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = self.matrix[(i, j)];
                    format!(
                        "[{}, {}]",
                        format_sig(z.re, FILE_DIGITS),
                        format_sig(z.im, FILE_DIGITS)
                    )
                })
                .collect();
            let sep = if i + 1 < n { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
        }
        if self.metadata.is_empty() {
            out.push_str("  ]\n");
        } else {
            out.push_str("  ],\n  \"metadata\": {\n");
            let entries: Vec<String> = self
                .metadata
                .iter()
                .map(|(k, v)| format!("    {}: {}", json_string(k), json_string(v)))
                .collect();
            out.push_str(&entries.join(",\n"));
            out.push_str("\n  }\n");
        }
        out.push_str("}\n");
        out
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

/// C-style `%.{digits}g` formatting: `digits` significant digits, trailing
/// zeros removed, scientific notation for exponents below -4 or at least
/// `digits`. Zero (of either sign) prints as `0`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn format_matches_printf_g() {
        // reference strings from C printf
        let cases = [
            (0.5, 17, "0.5"),
            (0.1, 17, "0.10000000000000001"),
            (1.0 / 3.0, 17, "0.33333333333333331"),
            (1f64.tanh(), 15, "0.761594155955765"),
            (1e-5, 15, "1e-05"),
            (1e-5, 17, "1.0000000000000001e-05"),
            (123456.0, 15, "123456"),
            (1e20, 15, "1e+20"),
            (-2.5e-7, 15, "-2.5e-07"),
            (0.0001, 15, "0.0001"),
            (999999999999999.9, 15, "1e+15"),
            (-0.0, 15, "0"),
            (2.0 * 0.5493061443340549, 15, "1.09861228866811"),
        ];
        for (x, d, expected) in cases {
            assert_eq!(format_sig(x, d), expected, "{x} with {d} digits");
        }
    }

    #[test]
    fn parse_schema_errors() {
        let bad_kind = r#"{"kind": "banana", "dim": 1, "matrix": [[[1, 0]]]}"#;
        assert!(matches!(
            StateFile::parse(bad_kind),
            Err(FileError::Parse(_))
        ));
        let bad_dim = r#"{"kind": "state", "dim": 2, "matrix": [[[1, 0]]]}"#;
        assert!(matches!(
            StateFile::parse(bad_dim),
            Err(FileError::Schema(_))
        ));
        let ragged = r#"{"kind": "state", "dim": 2, "matrix": [[[1, 0], [0, 0]], [[0, 0]]]}"#;
        assert!(matches!(
            StateFile::parse(ragged),
            Err(FileError::Schema(_))
        ));
        let missing = r#"{"dim": 1, "matrix": [[[1, 0]]]}"#;
        assert!(StateFile::parse(missing).is_err());
        assert!(StateFile::parse("not json").is_err());
    }

    #[test]
    fn writes_expected_layout() {
        let s = DensityState::uniform(2).unwrap();
        let json = StateFile::from_state(&s)
            .with_metadata("note", "a \"quoted\" value")
            .to_json();
        let expected = "{\n  \"kind\": \"state\",\n  \"dim\": 2,\n  \"matrix\": [\n    [[0.5, 0], [0, 0]],\n    [[0, 0], [0.5, 0]]\n  ],\n  \"metadata\": {\n    \"note\": \"a \\\"quoted\\\" value\"\n  }\n}\n";
        assert_eq!(json, expected);
        let back = StateFile::parse(&json).unwrap();
        assert_eq!(back.metadata["note"], "a \"quoted\" value");
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format_sig(x, FILE_DIGITS);
            prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        }

        #[test]
        fn state_file_round_trip(seed in any::<u64>(), n in 2usize..=5) {
            let s = DensityState::random(n, seed).unwrap();
            let file = StateFile::from_state(&s);
            let back = StateFile::parse(&file.to_json()).unwrap();
            prop_assert_eq!(&back, &file);
            let reread = back.to_state(1e-12).unwrap();
            prop_assert_eq!(reread.matrix(), s.matrix());
        }
    }
}
