//! Choice of the next activity once the clock has drifted from the plan.
//!
//! * `none` follows the program as is.
//! * `truncate_day` drops activities whose day is over and whose planned end
//!   has passed.
//! * `skip_keep_last` drops what is left of a past day except its last
//!   activity. The engine also fits the last activity of each day so the next
//!   day's first activity starts on time.

use core::fmt;
use core::str::FromStr;

use crate::activity::ActivityProgram;
use crate::clock::{day_index, Minute, MINUTES_PER_DAY};
use crate::Error;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum Rescheduling {
    None,
    TruncateDay,
    #[default]
    SkipKeepLast,
}

impl Rescheduling {
    pub const ALL: &'static [Rescheduling] = &[
        Rescheduling::None,
        Rescheduling::TruncateDay,
        Rescheduling::SkipKeepLast,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rescheduling::None => "none",
            Rescheduling::TruncateDay => "truncate_day",
            Rescheduling::SkipKeepLast => "skip_keep_last",
        }
    }

    /// Index of the activity to head for after `cursor` (`None` before the
    /// first activity) at minute `clock`.
    pub fn next_index(self, program: &ActivityProgram, cursor: Option<usize>, clock: Minute) -> Option<usize> {
        let mut j = cursor.map_or(0, |k| k + 1);
        let today = day_index(clock);
        match self {
            Rescheduling::None => {}
            Rescheduling::TruncateDay => {
                while let Some(a) = program.get(j) {
                    let day_over = (a.day() + 1) * MINUTES_PER_DAY <= clock;
                    if day_over && a.planned_end() <= clock {
                        j += 1;
                    } else {
                        break;
                    }
                }
            }
            Rescheduling::SkipKeepLast => {
                if let Some(a) = program.get(j) {
                    if a.day() < today {
                        j = program.last_of_day(a.day()).unwrap_or(j);
                    }
                }
            }
        }
        (j < program.len()).then_some(j)
    }
}

impl fmt::Display for Rescheduling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rescheduling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Rescheduling::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::UnknownCategory {
                kind: "rescheduling strategy",
                value: s.into(),
            })
    }
}
