use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One row of a [`Trace`]. Estimator signals that an architecture does not
/// have (the plain PI) are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub u: f64,
    pub x_hat: Vec<f64>,
    pub theta_hat: Vec<f64>,
    /// Perturbation signal `θ̃ᵀx`.
    pub ttx: f64,
    /// `V = ½ x̃ᵀPx̃ + |θ̃|²/(2γ)`.
    pub lyapunov: f64,
    /// `‖full integrated state‖∞`.
    pub norm_inf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Termination {
    pub t: f64,
    pub cause: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    n: usize,
    samples: Vec<Sample>,
    pub terminated_early: Option<Termination>,
}

impl Trace {
    pub fn new(n: usize) -> Self {
        Trace { n, samples: Vec::new(), terminated_early: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, sample: Sample) {
        debug_assert_eq!(sample.x.len(), self.n);
        self.samples.push(sample);
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Samples in the trailing `fraction` of the horizon `[0, t_last]`.
    pub fn tail(&self, fraction: f64) -> &[Sample] {
        let Some(last) = self.samples.last() else {
            return &[];
        };
        let cutoff = last.t * (1.0 - fraction);
        let start = self.samples.partition_point(|s| s.t < cutoff);
        &self.samples[start..]
    }

    pub fn csv_header(n: usize) -> String {
        let mut cols = vec!["t".to_string()];
        cols.extend((1..=n).map(|i| format!("x{i}")));
        cols.push("u".into());
        cols.extend((1..=n).map(|i| format!("xhat{i}")));
        cols.extend((1..=n).map(|i| format!("thhat{i}")));
        cols.extend(["ttx", "V", "norminf"].map(String::from));
        cols.join(",")
    }

    /// CSV with a header row and every float at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = Trace::csv_header(self.n);
        out.push('\n');
        for s in &self.samples {
            let mut first = true;
            let mut put = |v: f64| {
                if !first {
                    out.push(',');
                }
                first = false;
                write!(out, "{v:.16e}").expect("write to string");
            };
            put(s.t);
            s.x.iter().for_each(|&v| put(v));
            put(s.u);
            s.x_hat.iter().for_each(|&v| put(v));
            s.theta_hat.iter().for_each(|&v| put(v));
            put(s.ttx);
            put(s.lyapunov);
            put(s.norm_inf);
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Trace> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::invalid("empty CSV"))?;
        let cols = header.split(',').count();
        if cols < 8 || (cols - 5) % 3 != 0 {
            return Err(Error::invalid(format!("unexpected trace header with {cols} columns")));
        }
        let n = (cols - 5) / 3;
        if header != Trace::csv_header(n) {
            return Err(Error::invalid("trace header does not match the expected layout"));
        }
        let mut trace = Trace::new(n);
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let vals = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::invalid(format!("line {}: {e}", lineno + 1)))?;
            if vals.len() != cols {
                return Err(Error::invalid(format!(
                    "line {}: {} fields, expected {cols}",
                    lineno + 1,
                    vals.len()
                )));
            }
            trace.push(Sample {
                t: vals[0],
                x: vals[1..n + 1].to_vec(),
                u: vals[n + 1],
                x_hat: vals[n + 2..2 * n + 2].to_vec(),
                theta_hat: vals[2 * n + 2..3 * n + 2].to_vec(),
                ttx: vals[3 * n + 2],
                lyapunov: vals[3 * n + 3],
                norm_inf: vals[3 * n + 4],
            });
        }
        Ok(trace)
    }
}
