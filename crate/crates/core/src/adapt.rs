//! Perturbation-degree control and the acceptance threshold.

use std::collections::VecDeque;

/// Perturbation degree of one removal heuristic, steered so that the
/// realized solution distance tracks a reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicStats {
    /// Kept real so multiplicative updates do not stall at integers.
    omega: f64,
    distance_sum: f64,
    uses: usize,
}

impl HeuristicStats {
    pub fn new(omega: f64) -> Self {
        Self { omega: omega.max(1.0), distance_sum: 0.0, uses: 0 }
    }

    /// Number of customers to remove.
    pub fn omega(&self) -> usize {
        self.omega.round().max(1.0) as usize
    }

    pub fn omega_real(&self) -> f64 {
        self.omega
    }

    pub fn uses(&self) -> usize {
        self.uses
    }

    /// Accumulates one observed distance. Every `gamma` uses, rescales the
    /// degree by `d_beta / mean distance` and clamps it to `[1, n]`; a zero
    /// mean counts as 1. Returns whether an adjustment happened.
    pub fn record_and_adjust(&mut self, distance: f64, d_beta: f64, gamma: usize, n: usize) -> bool {
        self.distance_sum += distance;
        self.uses += 1;
        if self.uses < gamma.max(1) {
            return false;
        }
        let mut mean = self.distance_sum / self.uses as f64;
        if mean <= 0.0 {
            mean = 1.0;
        }
        self.omega = (self.omega * d_beta / mean).clamp(1.0, n.max(1) as f64);
        self.distance_sum = 0.0;
        self.uses = 0;
        true
    }
}

/// Running statistics of local-optimum objectives that decide acceptance.
#[derive(Debug, Clone)]
pub struct AcceptState {
    average: f64,
    window: VecDeque<f64>,
    it: usize,
    eta: f64,
    lambda: usize,
}

impl AcceptState {
    pub fn new(eta: f64, lambda: usize) -> Self {
        let lambda = lambda.max(1);
        Self { average: 0.0, window: VecDeque::with_capacity(lambda), it: 0, eta, lambda }
    }

    /// Cumulative mean for the first `lambda` samples, then an exponential
    /// average with weight `1 / lambda`. Also slides the window.
    pub fn update_average(&mut self, f: f64) {
        self.it += 1;
        if self.it <= self.lambda {
            self.average = (self.average * (self.it - 1) as f64 + f) / self.it as f64;
        } else {
            let w = 1.0 / self.lambda as f64;
            self.average = self.average * (1.0 - w) + f * w;
        }
        if self.window.len() == self.lambda {
            self.window.pop_front();
        }
        self.window.push_back(f);
    }

    pub fn average(&self) -> f64 {
        self.average
    }

    /// Best value among the last `lambda` samples.
    pub fn window_min(&self) -> f64 {
        self.window.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn iterations(&self) -> usize {
        self.it
    }

    pub fn threshold(&self) -> f64 {
        lerp(self.window_min(), self.average, self.eta)
    }

    /// Minimization: accepted when not above the threshold.
    pub fn accept(&self, f: f64) -> bool {
        f <= self.threshold()
    }
}

/// Interpolation that is exact at both ends and monotone in `t`.
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t >= 1.0 {
        return b;
    }
    let x = a + t * (b - a);
    if a <= b {
        x.min(b)
    } else {
        x.max(b)
    }
}
