//! JSON state files.
//!
//! ```text
//! {
//!   "schema": 1,
//!   "kind": "operator_tuple",
//!   "dims": [2, 2],
//!   "data": [
//!     [
//!       [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]],
//!       ...
//!     ]
//!   ]
//! }
//! ```
//!
//! `operator_tuple` data is a list of matrices written row by row;
//! `pure_state` data is a list of vectors. Complex numbers are `[re, im]`
//! pairs printed in shortest round-trip form, one matrix row or vector per
//! line, so writing, reading and writing again gives identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::tensor_core::{CMatrix, Dims, OperatorTuple};
use crate::C64;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Operators(OperatorTuple),
    PureStates { dims: Dims, vectors: Vec<Vec<C64>> },
}

fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite")
}

fn complex_list(zs: &[C64]) -> String {
    let parts: Vec<String> = zs.iter().map(|z| format!("[{}, {}]", number(z.re), number(z.im))).collect();
    format!("[{}]", parts.join(", "))
}

fn join_block(out: &mut String, items: &[String], indent: &str) {
    for (k, item) in items.iter().enumerate() {
        let sep = if k + 1 < items.len() { "," } else { "" };
        let _ = writeln!(out, "{indent}{item}{sep}");
    }
}

impl StateFile {
    pub fn dims(&self) -> &Dims {
        match self {
            StateFile::Operators(ops) => ops.dims(),
            StateFile::PureStates { dims, .. } => dims,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateFile::Operators(_) => "operator_tuple",
            StateFile::PureStates { .. } => "pure_state",
        }
    }

    pub fn pure_states(dims: Dims, vectors: Vec<Vec<C64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::arg("no vectors given"));
        }
        let d = dims.total();
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::arg(format!("vector of length {} for total dimension {d}", v.len())));
        }
        if vectors.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::arg("amplitudes must be finite"));
        }
        Ok(StateFile::PureStates { dims, vectors })
    }

    /// Operators as stored, or the projectors `|v⟩⟨v|` of stored vectors.
    pub fn to_operators(&self) -> Result<OperatorTuple> {
        match self {
            StateFile::Operators(ops) => Ok(ops.clone()),
            StateFile::PureStates { dims, vectors } => {
                OperatorTuple::new(dims.clone(), vectors.iter().map(|v| CMatrix::outer(v, v)).collect())
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let dims: Vec<String> = self.dims().as_slice().iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"schema\": {SCHEMA_VERSION},");
        let _ = writeln!(out, "  \"kind\": \"{}\",", self.kind());
        let _ = writeln!(out, "  \"dims\": [{}],", dims.join(", "));
        let _ = writeln!(out, "  \"data\": [");
        match self {
            StateFile::Operators(ops) => {
                for (k, m) in ops.matrices().iter().enumerate() {
                    let _ = writeln!(out, "    [");
                    let rows: Vec<String> = (0..m.rows()).map(|i| complex_list(m.row(i))).collect();
                    join_block(&mut out, &rows, "      ");
                    let sep = if k + 1 < ops.len() { "," } else { "" };
                    let _ = writeln!(out, "    ]{sep}");
                }
            }
            StateFile::PureStates { vectors, .. } => {
                let lines: Vec<String> = vectors.iter().map(|v| complex_list(v)).collect();
                join_block(&mut out, &lines, "    ");
            }
        }
        let _ = writeln!(out, "  ]");
        let _ = writeln!(out, "}}");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::parse(format!("state file: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Error::parse("state file must be a JSON object"))?;
        let field = |k: &str| obj.get(k).ok_or_else(|| Error::parse(format!("missing field {k:?}")));
        match field("schema")?.as_u64() {
            Some(SCHEMA_VERSION) => {}
            other => return Err(Error::parse(format!("unsupported schema {other:?}"))),
        }
        let dims = field("dims")?
            .as_array()
            .ok_or_else(|| Error::parse("dims must be an array"))?
            .iter()
            .map(|d| d.as_u64().map(|x| x as usize).ok_or_else(|| Error::parse("dims must be integers")))
            .collect::<Result<Vec<_>>>()?;
        let dims = Dims::new(dims)?;
        let data = field("data")?.as_array().ok_or_else(|| Error::parse("data must be an array"))?;
        match field("kind")?.as_str() {
            Some("operator_tuple") => {
                let d = dims.total();
                let mats = data
                    .iter()
                    .map(|m| {
                        let rows = m.as_array().ok_or_else(|| Error::parse("matrix must be an array of rows"))?;
                        if rows.len() != d {
                            return Err(Error::parse(format!("matrix has {} rows, expected {d}", rows.len())));
                        }
                        let mut entries = Vec::with_capacity(d * d);
                        for row in rows {
                            let row = parse_complex_list(row)?;
                            if row.len() != d {
                                return Err(Error::parse(format!("row has {} entries, expected {d}", row.len())));
                            }
                            entries.extend(row);
                        }
                        CMatrix::new(d, d, entries)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(StateFile::Operators(OperatorTuple::new(dims, mats)?))
            }
            Some("pure_state") => {
                let vectors = data.iter().map(parse_complex_list).collect::<Result<Vec<_>>>()?;
                StateFile::pure_states(dims, vectors)
            }
            other => Err(Error::parse(format!("unknown kind {other:?}"))),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}

fn parse_complex_list(v: &Value) -> Result<Vec<C64>> {
    v.as_array()
        .ok_or_else(|| Error::parse("expected an array of [re, im] pairs"))?
        .iter()
        .map(|z| match z.as_array().map(|p| p.as_slice()) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(Error::parse("complex entries must be numbers")),
            },
            _ => Err(Error::parse("complex entries must be [re, im] pairs")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::{random_operator_tuple, random_pure_vector, seeded_rng};

    #[test]
    fn operator_round_trip_is_lossless_and_stable() {
        let ops = random_operator_tuple(&Dims::new(vec![2, 3]).unwrap(), 2, 1).unwrap();
        let f = StateFile::Operators(ops);
        let text = f.to_json();
        let back = StateFile::from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
        assert_eq!(text.lines().count(), 23);
    }

    #[test]
    fn pure_state_round_trip() {
        let mut rng = seeded_rng(2);
        let f = StateFile::pure_states(Dims::uniform(2, 2).unwrap(), vec![random_pure_vector(4, &mut rng)]).unwrap();
        let text = f.to_json();
        assert_eq!(StateFile::from_json(&text).unwrap().to_json(), text);
        let p = f.to_operators().unwrap();
        assert!((p.get(0).trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn awkward_numbers_survive() {
        let xs = [0.1, -0.0, 1e-300, 5e-324, 1.0 / 3.0, -2.5e17, f64::MAX];
        let v: Vec<C64> = xs.iter().map(|&x| C64::new(x, -x)).collect();
        let f = StateFile::pure_states(Dims::new(vec![7]).unwrap(), vec![v.clone()]).unwrap();
        let StateFile::PureStates { vectors, .. } = StateFile::from_json(&f.to_json()).unwrap() else { panic!() };
        for (a, b) in vectors[0].iter().zip(&v) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn hand_written_file() {
        let text = r#"{"schema": 1, "kind": "operator_tuple", "dims": [2],
            "data": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}"#;
        let StateFile::Operators(ops) = StateFile::from_json(text).unwrap() else { panic!() };
        assert_eq!(ops.get(0)[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_bad_files() {
        let bad = [
            "not json",
            "[]",
            r#"{"schema": 2, "kind": "pure_state", "dims": [2], "data": [[[1,0],[0,0]]]}"#,
            r#"{"schema": 1, "kind": "mixed", "dims": [2], "data": []}"#,
            r#"{"schema": 1, "kind": "pure_state", "dims": [2], "data": [[[1,0]]]}"#,
            r#"{"schema": 1, "kind": "pure_state", "dims": [2], "data": [[[1,0,0],[0,0]]]}"#,
            r#"{"schema": 1, "kind": "pure_state", "dims": [0], "data": [[]]}"#,
            r#"{"schema": 1, "kind": "operator_tuple", "dims": [2], "data": [[[[1,0],[0,0]]]]}"#,
            r#"{"schema": 1, "kind": "operator_tuple", "dims": [2], "data": []}"#,
            r#"{"schema": 1, "kind": "pure_state", "dims": [2], "data": [[["a",0],[0,0]]]}"#,
        ];
        for b in bad {
            assert!(StateFile::from_json(b).is_err(), "{b}");
        }
    }
}
