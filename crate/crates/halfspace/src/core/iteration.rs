use serde::Serialize;

/// One Picard step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationStep {
    pub step: usize,
    /// `‖u^m‖`.
    pub solution_norm: f64,
    /// `‖u^{m+1} − u^m‖`.
    pub increment_norm: f64,
    /// `‖U^m‖ / ‖U^{m−1}‖`, absent for the first increment.
    pub ratio: Option<f64>,
}

/// Norm history of a Picard iteration.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IterationTrace {
    pub data_norm: f64,
    pub beta: f64,
    pub p: f64,
    pub steps: Vec<IterationStep>,
    pub converged: bool,
}

impl IterationTrace {
    pub fn new(data_norm: f64, beta: f64, p: f64) -> Self {
        Self {
            data_norm,
            beta,
            p,
            steps: Vec::new(),
            converged: false,
        }
    }

    /// Appends a step and returns the ratio to the previous increment.
    pub fn push(&mut self, solution_norm: f64, increment_norm: f64) -> Option<f64> {
        let ratio = self.steps.last().map(|s| {
            if s.increment_norm > 0.0 {
                increment_norm / s.increment_norm
            } else if increment_norm > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        });
        self.steps.push(IterationStep {
            step: self.steps.len() + 1,
            solution_norm,
            increment_norm,
            ratio,
        });
        ratio
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.steps.iter().filter_map(|s| s.ratio).collect()
    }

    /// Number of trailing steps whose ratio is at least one.
    pub fn trailing_non_contracting(&self) -> usize {
        self.steps
            .iter()
            .rev()
            .take_while(|s| s.ratio.is_some_and(|r| r >= 1.0))
            .count()
    }

    pub fn max_solution_norm(&self) -> f64 {
        self.steps.iter().fold(0.0, |m, s| m.max(s.solution_norm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_start_at_second_step() {
        let mut t = IterationTrace::new(1.0, 0.5, 1.5);
        assert_eq!(t.push(1.0, 0.5), None);
        assert_eq!(t.push(1.1, 0.25), Some(0.5));
        assert_eq!(t.ratios(), vec![0.5]);
        assert_eq!(t.trailing_non_contracting(), 0);
        t.push(1.2, 0.5);
        t.push(1.3, 0.6);
        assert_eq!(t.trailing_non_contracting(), 2);
    }
}
