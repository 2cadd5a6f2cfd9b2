//! Identified parameters of a robot arm link for five excitation speeds,
//! as published to three decimals.

use crate::params::InertialParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Unconstrained least squares over ℝ¹⁰.
    Linear,
    /// Manifold-constrained least squares.
    Manifold,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Linear => "R10",
            Method::Manifold => "manifold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    /// Point-to-point trajectory completion time, s.
    pub segment_time: f64,
    pub method: Method,
    pub params: InertialParams,
    /// Marked in the source as not fully physically consistent.
    pub highlighted: bool,
}

impl TableRow {
    pub fn label(&self) -> String {
        format!("{}s/{}", self.segment_time, self.method.as_str())
    }
}

pub fn table_one() -> Vec<TableRow> {
    use Method::*;
    let rows: [(f64, Method, bool, [f64; 10]); 10] = [
        (10.0, Linear, true, [1.836, 0.062, 0.001, 0.208, 0.580, 0.593, -0.541, 1.022, 0.190, -0.129]),
        (10.0, Manifold, false, [1.836, 0.062, 0.001, 0.208, 0.215, 0.012, -0.064, 0.227, 0.038, 0.028]),
        (5.0, Linear, true, [1.842, 0.061, 0.000, 0.206, 0.128, -0.018, -0.125, 0.125, 0.026, -0.001]),
        (5.0, Manifold, false, [1.842, 0.060, 0.000, 0.206, 0.166, 0.001, -0.089, 0.216, 0.001, 0.050]),
        (2.0, Linear, false, [1.852, 0.060, 0.001, 0.206, 0.065, 0.001, -0.035, 0.066, 0.006, 0.007]),
        (2.0, Manifold, false, [1.852, 0.060, 0.001, 0.206, 0.067, 0.001, -0.030, 0.086, 0.003, 0.014]),
        (1.0, Linear, false, [1.820, 0.060, 0.002, 0.205, 0.032, 0.0014, -0.017, 0.036, 0.002, 0.008]),
        (1.0, Manifold, false, [1.820, 0.060, 0.002, 0.205, 0.034, 0.001, -0.015, 0.042, 0.001, 0.009]),
        (0.5, Linear, false, [1.843, 0.060, 0.005, 0.204, 0.033, 0.003, -0.014, 0.035, 0.000, 0.008]),
        (0.5, Manifold, false, [1.844, 0.059, 0.004, 0.204, 0.037, 0.001, -0.013, 0.039, 0.000, 0.008]),
    ];
    rows.iter()
        .map(|&(segment_time, method, highlighted, v)| TableRow {
            segment_time,
            method,
            params: InertialParams::from_array(v),
            highlighted,
        })
        .collect()
}
