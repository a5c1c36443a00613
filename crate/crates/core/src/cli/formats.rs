//! File formats: JSON state files and CSV tables.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::states::DensityMatrix;

use num_complex::Complex64;

/// JSON form of a density matrix: `{"dims": [a, b], "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub data: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let n = m.nrows();
        let data = (0..n * n)
            .map(|k| {
                let z = m[(k / n, k % n)];
                [z.re, z.im]
            })
            .collect();
        StateFile {
            dims: [rho.dim_a(), rho.dim_b()],
            data,
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let [a, b] = self.dims;
        if a == 0 || b == 0 {
            return Err(Error::Parse(format!("field dims: {:?} has a zero entry", self.dims)));
        }
        let n = a * b;
        if self.data.len() != n * n {
            return Err(Error::Parse(format!(
                "field data: expected {} entries for dims {:?}, found {}",
                n * n,
                self.dims,
                self.data.len()
            )));
        }
        let m = CMatrix::from_fn(n, n, |r, s| {
            let [re, im] = self.data[r * n + s];
            Complex64::new(re, im)
        });
        DensityMatrix::new(a, b, m)
    }

    /// Parse JSON text; syntax errors report line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }
}

/// `x` with 12 significant digits, shortest form, `.` as decimal separator.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A CSV table whose cells are optional numbers (empty when `None`).
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Csv {
    pub fn new(header: Vec<String>) -> Self {
        Csv {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| v.map(format_number).unwrap_or_default())
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::Spin;
    use crate::states::rho_p;

    #[test]
    fn numbers_have_twelve_significant_digits() {
        assert_eq!(format_number(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.5e-7), "1.5e-7");
        assert_eq!(format_number(123456.0), "123456");
        assert_eq!(format_number(2.0 / 3.0), "0.666666666667");
        for x in [0.1, 1e-3, 3.25e20, -7.0 / 3.0] {
            let back: f64 = format_number(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }

    #[test]
    fn state_file_round_trip() {
        let rho = rho_p(Spin::ONE, 0.7).unwrap();
        let file = StateFile::from_density(&rho);
        let back = StateFile::parse(&file.to_json()).unwrap().to_density().unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn malformed_files_report_context() {
        let err = StateFile::parse("{\n  \"dims\": [2, 2],\n  \"data\": [[1, 0],\n}").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
        let err = StateFile::parse(r#"{"dims": [1, 2], "data": [[1, 0]]}"#)
            .unwrap()
            .to_density()
            .unwrap_err();
        assert!(err.to_string().contains("field data"), "{err}");
        let err = StateFile::parse(r#"{"dims": [1, 2], "values": []}"#).unwrap_err();
        assert!(err.to_string().contains("values"), "{err}");
    }

    #[test]
    fn csv_leaves_missing_cells_empty() {
        let mut csv = Csv::new(vec!["p".into(), "a".into()]);
        csv.push(vec![Some(0.5), None]);
        csv.push(vec![Some(1.0), Some(0.25)]);
        assert_eq!(csv.render(), "p,a\n0.5,\n1,0.25\n");
    }
}
