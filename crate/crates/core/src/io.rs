//! The on-disk matrix format shared with the command line tool:
//! `{"rows": m, "cols": n, "entries": [[[w, x, y, z], ...] per row]}`.

use serde::{Deserialize, Serialize};

use crate::matrix::QMatrix;
use crate::quat::Quaternion;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<[f64; 4]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &QMatrix) -> MatrixFile {
        let entries = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| {
                        let q = m[(i, j)];
                        [q.w, q.x, q.y, q.z]
                    })
                    .collect()
            })
            .collect();
        MatrixFile { rows: m.rows(), cols: m.cols(), entries }
    }

    pub fn to_matrix(&self) -> Result<QMatrix, String> {
        if self.entries.len() != self.rows {
            return Err(format!(
                "entries has {} rows, header says {}",
                self.entries.len(),
                self.rows
            ));
        }
        let mut out = QMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(format!(
                    "row {} has {} entries, header says {}",
                    i,
                    row.len(),
                    self.cols
                ));
            }
            for (j, comp) in row.iter().enumerate() {
                if comp.iter().any(|c| !c.is_finite()) {
                    return Err(format!("entry ({i}, {j}) has a non-finite component"));
                }
                out[(i, j)] = Quaternion::new(comp[0], comp[1], comp[2], comp[3]);
            }
        }
        Ok(out)
    }
}

/// Parses the JSON matrix format; error strings carry serde's line/column
/// diagnostics or the offending field.
pub fn read_matrix(text: &str) -> Result<QMatrix, String> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.to_matrix()
}

pub fn matrix_json(m: &QMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("matrix serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat;

    #[test]
    fn round_trip() {
        let m = QMatrix::from_rows(vec![
            vec![quat::ONE, Quaternion::j()],
            vec![-Quaternion::j(), Quaternion::new(0.5, -1.0, 0.25, 3.0)],
        ]);
        let text = serde_json::to_string(&MatrixFile::from_matrix(&m)).unwrap();
        let back = read_matrix(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let text = r#"{"rows": 2, "cols": 1, "entries": [[[1, 0, 0, 0]]]}"#;
        let err = read_matrix(text).unwrap_err();
        assert!(err.contains("rows"), "got: {err}");
    }

    #[test]
    fn non_finite_is_rejected() {
        let file = MatrixFile {
            rows: 1,
            cols: 1,
            entries: vec![vec![[f64::NAN, 0.0, 0.0, 0.0]]],
        };
        assert!(file.to_matrix().is_err());
    }

    #[test]
    fn malformed_json_is_reported_with_position() {
        let err = read_matrix("{\"rows\": 1,").unwrap_err();
        assert!(err.contains("line"), "got: {err}");
    }
}
