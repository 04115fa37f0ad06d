//! Text formats: JSON reports and CSV tables.
//!
//! Doubles are always written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly.

use serde::{Deserialize, Serialize};

use crate::criteria::GapReport;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DimensionFactorization};
use crate::scalar::Real;
use crate::states::DensityMatrix;

/// A double with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    // negative zero prints as zero
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Builds one flat JSON object field by field.
#[derive(Debug, Default)]
pub struct JsonObject {
    buf: String,
}

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(&mut self, name: &str) {
        self.buf.push(if self.buf.is_empty() { '{' } else { ',' });
        self.buf.push_str(&serde_json::to_string(name).expect("string keys serialize"));
        self.buf.push(':');
    }

    pub fn number(mut self, name: &str, value: f64) -> Self {
        self.key(name);
        if value.is_finite() {
            self.buf.push_str(&fmt17(value));
        } else {
            self.buf.push_str("null");
        }
        self
    }

    pub fn integer(mut self, name: &str, value: u64) -> Self {
        self.key(name);
        self.buf.push_str(&value.to_string());
        self
    }

    pub fn string(mut self, name: &str, value: &str) -> Self {
        self.key(name);
        self.buf.push_str(&serde_json::to_string(value).expect("strings serialize"));
        self
    }

    pub fn boolean(mut self, name: &str, value: bool) -> Self {
        self.key(name);
        self.buf.push_str(if value { "true" } else { "false" });
        self
    }

    pub fn numbers(mut self, name: &str, values: &[f64]) -> Self {
        self.key(name);
        self.buf.push('[');
        self.buf.push_str(&values.iter().map(|v| fmt17(*v)).collect::<Vec<_>>().join(","));
        self.buf.push(']');
        self
    }

    /// Inserts already-serialized JSON.
    pub fn raw(mut self, name: &str, json: &str) -> Self {
        self.key(name);
        self.buf.push_str(json);
        self
    }

    pub fn finish(mut self) -> String {
        if self.buf.is_empty() {
            self.buf.push('{');
        }
        self.buf.push('}');
        self.buf
    }
}

/// `{scenario, xi, lhs, penalty, rhs, gap, steerable}`.
pub fn gap_report_json<T: Real>(report: &GapReport<T>) -> String {
    JsonObject::new()
        .string("scenario", report.scenario.as_str())
        .number("xi", report.xi.as_f64())
        .number("lhs", report.lhs.as_f64())
        .number("penalty", report.penalty.as_f64())
        .number("rhs", report.rhs.as_f64())
        .number("gap", report.gap.as_f64())
        .boolean("steerable", report.steerable)
        .finish()
}

/// Row-major real and imaginary parts plus the subsystem dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityJson {
    pub fn from_state<T: Real>(rho: &DensityMatrix<T>) -> Self {
        let m = rho.matrix();
        let n = m.rows();
        let rows = |part: fn(&num_complex::Complex<T>) -> T| {
            (0..n)
                .map(|i| (0..n).map(|j| part(&m[(i, j)]).as_f64()).collect())
                .collect()
        };
        Self {
            dims: rho.dims().parts().to_vec(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_state<T: Real>(&self) -> Result<DensityMatrix<T>> {
        let dims = DimensionFactorization::new(self.dims.clone())?;
        let n = dims.total();
        let square = |rows: &[Vec<f64>], part: &str| -> Result<Vec<T>> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("`{part}` must be {n}x{n} for dims {dims}")));
            }
            Ok(rows.iter().flatten().map(|&x| T::lit(x)).collect())
        };
        let re = square(&self.re, "re")?;
        let im = square(&self.im, "im")?;
        DensityMatrix::new(ComplexMatrix::from_parts(n, n, &re, &im)?, dims)
    }

    pub fn to_json(&self) -> String {
        let rows = |m: &[Vec<f64>]| {
            let inner: Vec<String> = m
                .iter()
                .map(|r| format!("[{}]", r.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(",")))
                .collect();
            format!("[{}]", inner.join(","))
        };
        let dims = serde_json::to_string(&self.dims).expect("dims serialize");
        JsonObject::new()
            .raw("dims", &dims)
            .raw("re", &rows(&self.re))
            .raw("im", &rows(&self.im))
            .finish()
    }
}

pub fn density_to_json<T: Real>(rho: &DensityMatrix<T>) -> String {
    DensityJson::from_state(rho).to_json()
}

pub fn density_from_json<T: Real>(text: &str) -> Result<DensityMatrix<T>> {
    serde_json::from_str::<DensityJson>(text)
        .map_err(|e| Error::Json(e.to_string()))?
        .to_state()
}

/// One CSV line (no trailing newline) from pre-formatted cells.
pub fn csv_line<S: AsRef<str>>(cells: &[S]) -> String {
    cells.iter().map(|c| c.as_ref()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Scenario;
    use crate::random::{density, rng_from_seed};

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 4.82e-5, -2.5e300, 0.0] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt17(-0.0), fmt17(0.0));
    }

    #[test]
    fn report_json_fields() {
        let r = GapReport {
            scenario: Scenario::AToBC,
            xi: 1e-5,
            lhs: 1.5,
            penalty: 0.1,
            rhs: 0.9,
            gap: 0.5,
            steerable: true,
        };
        let v: serde_json::Value = serde_json::from_str(&gap_report_json(&r)).unwrap();
        assert_eq!(v["scenario"], "A->BC");
        assert_eq!(v["xi"].as_f64().unwrap(), 1e-5);
        assert_eq!(v["steerable"], true);
        assert_eq!(v.as_object().unwrap().len(), 7);
    }

    #[test]
    fn density_round_trip_is_exact() {
        let dims = DimensionFactorization::new(vec![2, 3]).unwrap();
        let rho = density::<f64, _>(&dims, &mut rng_from_seed(8)).unwrap();
        let back: DensityMatrix<f64> = density_from_json(&density_to_json(&rho)).unwrap();
        assert_eq!(back.dims(), rho.dims());
        assert!(back.matrix().approx_eq(rho.matrix(), 0.0));
    }

    #[test]
    fn density_json_rejects_bad_shapes() {
        let bad = r#"{"dims":[2],"re":[[1,0]],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(density_from_json::<f64>(bad), Err(Error::Dimension(_))));
        assert!(matches!(density_from_json::<f64>("{"), Err(Error::Json(_))));
        let not_psd = r#"{"dims":[2],"re":[[1.5,0],[0,-0.5]],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(density_from_json::<f64>(not_psd), Err(Error::NotDensity(_))));
    }

    #[test]
    fn empty_object() {
        assert_eq!(JsonObject::new().finish(), "{}");
        assert_eq!(csv_line(&["a", "b"]), "a,b");
    }
}
