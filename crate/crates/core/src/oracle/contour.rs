//! Piecewise-smooth contours in the complex plane.

use num_complex::Complex64 as C64;

use super::quad::{integrate, QuadOptions, QuadResult};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// Arc of `center + radius·e^{iθ}` for θ from `start` to `end`.
    Arc { center: C64, radius: f64, start: f64, end: f64 },
}

impl Segment {
    pub fn point(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, start, end } => {
                center + C64::from_polar(radius, start + (end - start) * t)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, end, .. } => {
                let th = start + (end - start) * t;
                C64::new(0.0, 1.0) * C64::from_polar(radius, th) * (end - start)
            }
        }
    }

    pub fn start(&self) -> C64 {
        self.point(0.0)
    }

    pub fn end(&self) -> C64 {
        self.point(1.0)
    }
}

/// A chain of segments, each integrated separately with adaptive
/// Gauss–Kronrod after parametrisation by `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub segments: Vec<Segment>,
    /// Radius used for the indentations around bypassed points.
    pub bypass_radius: f64,
}

impl ContourPath {
    pub fn new(bypass_radius: f64) -> Self {
        Self { segments: Vec::new(), bypass_radius }
    }

    pub fn line(mut self, from: C64, to: C64) -> Self {
        if from != to {
            self.segments.push(Segment::Line { from, to });
        }
        self
    }

    pub fn arc(mut self, center: C64, radius: f64, start: f64, end: f64) -> Self {
        self.segments.push(Segment::Arc { center, radius, start, end });
        self
    }

    pub fn is_continuous(&self) -> bool {
        self.segments.windows(2).all(|w| (w[0].end() - w[1].start()).norm() <= 1e-12 * (1.0 + w[0].end().norm()))
    }

    /// Smallest distance from the sampled contour to `p`.
    pub fn distance_to(&self, p: C64) -> f64 {
        let mut best = f64::INFINITY;
        for s in &self.segments {
            for j in 0..=256 {
                best = best.min((s.point(j as f64 / 256.0) - p).norm());
            }
        }
        best
    }

    pub fn integrate<F: FnMut(C64) -> C64>(&self, mut f: F, opts: QuadOptions) -> Result<QuadResult> {
        let mut acc = QuadResult::zero();
        for s in &self.segments {
            let r = integrate(|t| f(s.point(t)) * s.derivative(t), 0.0, 1.0, opts)?;
            acc = acc.add(r);
        }
        Ok(acc)
    }
}
