//! CSV and JSON trajectory files.

use std::io::{Read, Write};

use thiserror::Error;

use super::Trajectory;
use crate::catalog::{integral_set, SystemId};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed trajectory: {0}")]
    Malformed(String),
}

/// Column names: `t`, the state components (`_re`/`_im` on complex charts),
/// then each integral's real and imaginary part.
pub fn csv_header(id: SystemId) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    for v in id.variables() {
        if id.is_complex() {
            cols.push(format!("{v}_re"));
            cols.push(format!("{v}_im"));
        } else {
            cols.push(v.to_string());
        }
    }
    for name in id.integral_names() {
        cols.push(format!("{name}_re"));
        cols.push(format!("{name}_im"));
    }
    cols
}

impl Trajectory {
    /// One row per sample. Integrals that cannot be evaluated are written as
    /// `NaN`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ExportError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(csv_header(self.system))?;
        let n_int = self.system.integral_names().len();
        for i in 0..self.len() {
            let mut row: Vec<String> = Vec::with_capacity(1 + self.states[i].len() + 2 * n_int);
            row.push(self.times[i].to_string());
            row.extend(self.states[i].iter().map(f64::to_string));
            match integral_set(self.system, &self.params, &self.state(i)) {
                Ok(vals) => {
                    for v in vals {
                        row.push(v.value.re.to_string());
                        row.push(v.value.im.to_string());
                    }
                }
                Err(_) => row.extend(std::iter::repeat_n("NaN".to_string(), 2 * n_int)),
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, ExportError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| ExportError::Malformed(e.to_string()))
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<(), ExportError> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn to_json_string(&self) -> Result<String, ExportError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Reads a trajectory written by [`Trajectory::write_json`] and checks
    /// its shape.
    pub fn read_json<R: Read>(r: R) -> Result<Trajectory, ExportError> {
        let tr: Trajectory = serde_json::from_reader(r)?;
        tr.check_shape()?;
        Ok(tr)
    }

    pub fn from_json_str(s: &str) -> Result<Trajectory, ExportError> {
        Self::read_json(s.as_bytes())
    }

    fn check_shape(&self) -> Result<(), ExportError> {
        if self.times.len() != self.states.len() {
            return Err(ExportError::Malformed(format!(
                "{} times but {} states",
                self.times.len(),
                self.states.len()
            )));
        }
        if self.times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ExportError::Malformed("times are not strictly increasing".into()));
        }
        let dim = self.system.real_dim();
        if let Some(bad) = self.states.iter().position(|s| s.len() != dim) {
            return Err(ExportError::Malformed(format!("state {bad} does not have {dim} components")));
        }
        Ok(())
    }
}
