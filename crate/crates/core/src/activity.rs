//! Week-long activity programs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::categories::Purpose;
use crate::clock::{day_index, Minute, MINUTES_PER_WEEK};
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Activity {
    pub purpose: Purpose,
    /// Minute of week.
    pub planned_start: Minute,
    /// Minutes, at least 1.
    pub duration: u32,
}

impl Activity {
    pub fn new(purpose: Purpose, planned_start: Minute, duration: u32) -> Self {
        Activity {
            purpose,
            planned_start,
            duration,
        }
    }

    pub fn planned_end(&self) -> Minute {
        self.planned_start + self.duration
    }

    /// Day index (0 = Monday) of the planned start.
    pub fn day(&self) -> u32 {
        day_index(self.planned_start)
    }
}

/// Ordered activities of one person for the simulated week.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivityProgram {
    activities: Vec<Activity>,
}

impl ActivityProgram {
    /// Validates and wraps a program. `person` only labels errors.
    pub fn new(person: u32, activities: Vec<Activity>) -> Result<Self> {
        let fail = |reason: String| Error::InvalidProgram { person, reason };
        let Some(first) = activities.first() else {
            return Err(fail("program is empty".into()));
        };
        if first.purpose != Purpose::Home && first.planned_start == 0 {
            return Err(fail(format!(
                "first activity `{}` starts at minute 0 away from home, so the preceding trip would start before the week",
                first.purpose
            )));
        }
        for (k, a) in activities.iter().enumerate() {
            if a.planned_start >= MINUTES_PER_WEEK {
                return Err(fail(format!(
                    "activity {k} starts at minute {} beyond the week",
                    a.planned_start
                )));
            }
            if a.duration == 0 {
                return Err(fail(format!("activity {k} has zero duration")));
            }
            if k > 0 {
                let prev = &activities[k - 1];
                if a.planned_start < prev.planned_start {
                    return Err(fail(format!("activity {k} starts before activity {}", k - 1)));
                }
                if a.purpose == Purpose::Home && prev.purpose == Purpose::Home {
                    return Err(fail(format!(
                        "activities {} and {k} are consecutive home activities",
                        k - 1
                    )));
                }
            }
        }
        Ok(ActivityProgram { activities })
    }

    pub fn activities(&self) -> &[Activity] {
        &self.activities
    }

    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&Activity> {
        self.activities.get(k)
    }

    pub fn contains(&self, purpose: Purpose) -> bool {
        self.activities.iter().any(|a| a.purpose == purpose)
    }

    /// Index of the last activity planned on `day`.
    pub fn last_of_day(&self, day: u32) -> Option<usize> {
        self.activities.iter().rposition(|a| a.day() == day)
    }

    /// True if `k` is the last activity of its day and a later day follows.
    pub fn ends_day(&self, k: usize) -> bool {
        match (self.activities.get(k), self.activities.get(k + 1)) {
            (Some(a), Some(b)) => b.day() > a.day(),
            _ => false,
        }
    }

    /// True if `k` is the first activity planned on its day.
    pub fn starts_day(&self, k: usize) -> bool {
        k == 0 || self.activities[k - 1].day() < self.activities[k].day()
    }
}
