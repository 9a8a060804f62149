//! State and wall-clock budgets for the search procedures.

use std::time::{Duration, Instant};

pub const DEFAULT_MAX_STATES: usize = 1_000_000;
pub const DEFAULT_MAX_SECS: u64 = 30;

/// Caps for one exploration. `max_states` counts stored configurations,
/// `max_time` is wall clock measured from the start of the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_states: usize,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn states(max_states: usize) -> Budget {
        Budget { max_states, max_time: None }
    }

    pub fn unlimited() -> Budget {
        Budget { max_states: usize::MAX, max_time: None }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_states: DEFAULT_MAX_STATES,
            max_time: Some(Duration::from_secs(DEFAULT_MAX_SECS)),
        }
    }
}

/// Consumption snapshot taken when a search stopped or ran out.
#[derive(Clone, Copy, Debug)]
pub struct BudgetReport {
    pub states: usize,
    pub elapsed: Duration,
}

/// Accumulates consumption against a budget.
pub struct Meter {
    budget: Budget,
    start: Instant,
    states: usize,
}

impl Meter {
    pub fn new(budget: Budget) -> Meter {
        Meter { budget, start: Instant::now(), states: 0 }
    }

    /// Records `n` more stored states, failing with the consumption snapshot
    /// once either cap is crossed.
    pub fn charge(&mut self, n: usize) -> Result<(), BudgetReport> {
        self.states = self.states.saturating_add(n);
        if self.states > self.budget.max_states {
            return Err(self.report());
        }
        if self.budget.max_time.is_some_and(|cap| self.start.elapsed() > cap) {
            return Err(self.report());
        }
        Ok(())
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn report(&self) -> BudgetReport {
        BudgetReport { states: self.states, elapsed: self.start.elapsed() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_cap_trips_once_exceeded() {
        let mut meter = Meter::new(Budget::states(2));
        assert!(meter.charge(1).is_ok());
        assert!(meter.charge(1).is_ok());
        let report = meter.charge(1).unwrap_err();
        assert_eq!(report.states, 3);
    }

    #[test]
    fn unlimited_budget_never_trips() {
        let mut meter = Meter::new(Budget::unlimited());
        for _ in 0..10_000 {
            meter.charge(100).unwrap();
        }
    }

    #[test]
    fn time_cap_trips() {
        let budget = Budget { max_states: usize::MAX, max_time: Some(Duration::ZERO) };
        let mut meter = Meter::new(budget);
        std::thread::sleep(Duration::from_millis(2));
        assert!(meter.charge(1).is_err());
    }
}
