use crate::error::{Error, Result};

/// Counts work units against a hard limit; exceeding it is an error, never a
/// silent truncation.
#[derive(Debug, Clone)]
pub struct Meter {
    what: &'static str,
    used: u64,
    limit: u64,
}

impl Meter {
    pub fn new(what: &'static str, limit: u64) -> Self {
        Self {
            what,
            used: 0,
            limit,
        }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.add(1)
    }

    pub fn add(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                what: self.what,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
