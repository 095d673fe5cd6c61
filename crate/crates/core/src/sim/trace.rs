use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::export::fmt17;
use crate::{AdrcError, Result};

pub const TRACE_HEADER: &str = "t,r,r_filtered,y_clean,y_measured,u,u_lim,lim_mag,lim_rate";

/// Per-sample record of one closed-loop run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trace {
    pub sample_time: f64,
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub r_filtered: Vec<f64>,
    pub y_clean: Vec<f64>,
    pub y_measured: Vec<f64>,
    pub u: Vec<f64>,
    pub u_lim: Vec<f64>,
    pub lim_mag: Vec<bool>,
    pub lim_rate: Vec<bool>,
    /// Observer estimate per sample, when requested and available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xhat: Option<Vec<Vec<f64>>>,
}

impl Trace {
    pub fn with_capacity(sample_time: f64, n: usize) -> Self {
        Trace {
            sample_time,
            t: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            r_filtered: Vec::with_capacity(n),
            y_clean: Vec::with_capacity(n),
            y_measured: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            u_lim: Vec::with_capacity(n),
            lim_mag: Vec::with_capacity(n),
            lim_rate: Vec::with_capacity(n),
            xhat: None,
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 200);
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for k in 0..self.len() {
            let nums = [
                self.t[k],
                self.r[k],
                self.r_filtered[k],
                self.y_clean[k],
                self.y_measured[k],
                self.u[k],
                self.u_lim[k],
            ];
            for x in nums {
                out.push_str(&fmt17(x));
                out.push(',');
            }
            out.push(if self.lim_mag[k] { '1' } else { '0' });
            out.push(',');
            out.push(if self.lim_rate[k] { '1' } else { '0' });
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| AdrcError::Io(format!("{}: {e}", path.display())))?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn from_csv(text: &str, sample_time: f64) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(TRACE_HEADER) {
            return Err(AdrcError::Io("trace CSV header mismatch".into()));
        }
        let mut tr = Trace::with_capacity(sample_time, 0);
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 9 {
                return Err(AdrcError::Io(format!("trace row {} has {} fields", i + 1, fields.len())));
            }
            let num = |j: usize| {
                fields[j]
                    .parse::<f64>()
                    .map_err(|e| AdrcError::Io(format!("trace row {}: {e}", i + 1)))
            };
            tr.t.push(num(0)?);
            tr.r.push(num(1)?);
            tr.r_filtered.push(num(2)?);
            tr.y_clean.push(num(3)?);
            tr.y_measured.push(num(4)?);
            tr.u.push(num(5)?);
            tr.u_lim.push(num(6)?);
            tr.lim_mag.push(fields[7] == "1");
            tr.lim_rate.push(fields[8] == "1");
        }
        Ok(tr)
    }

    /// Index range `[start, end)` of samples with `t` in `[t0, t1)`.
    pub fn window(&self, t0: f64, t1: f64) -> (usize, usize) {
        let eps = 1e-9 * self.sample_time;
        let start = self.t.iter().position(|&t| t >= t0 - eps).unwrap_or(self.len());
        let end = self.t.iter().position(|&t| t >= t1 - eps).unwrap_or(self.len());
        (start, end.max(start))
    }
}
