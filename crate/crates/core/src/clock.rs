//! Minute-of-week arithmetic. Minute 0 is Monday 00:00.

use crate::categories::DayType;

pub type Minute = u32;

pub const MINUTES_PER_HOUR: Minute = 60;
pub const MINUTES_PER_DAY: Minute = 24 * MINUTES_PER_HOUR;
pub const MINUTES_PER_WEEK: Minute = 7 * MINUTES_PER_DAY;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weekday {
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
}

impl Weekday {
    pub const ALL: [Weekday; 7] = [
        Weekday::Monday,
        Weekday::Tuesday,
        Weekday::Wednesday,
        Weekday::Thursday,
        Weekday::Friday,
        Weekday::Saturday,
        Weekday::Sunday,
    ];

    /// Day of a minute; minutes past the week wrap around.
    pub fn of_minute(minute: Minute) -> Weekday {
        Self::ALL[(day_index(minute) % 7) as usize]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Weekday::Monday => "monday",
            Weekday::Tuesday => "tuesday",
            Weekday::Wednesday => "wednesday",
            Weekday::Thursday => "thursday",
            Weekday::Friday => "friday",
            Weekday::Saturday => "saturday",
            Weekday::Sunday => "sunday",
        }
    }

    pub fn day_type(self) -> DayType {
        match self {
            Weekday::Saturday => DayType::Saturday,
            Weekday::Sunday => DayType::Sunday,
            _ => DayType::Workday,
        }
    }
}

impl core::fmt::Display for Weekday {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn day_index(minute: Minute) -> u32 {
    minute / MINUTES_PER_DAY
}

pub fn hour_of_day(minute: Minute) -> u32 {
    (minute % MINUTES_PER_DAY) / MINUTES_PER_HOUR
}

pub fn minute_of_day(minute: Minute) -> u32 {
    minute % MINUTES_PER_DAY
}

/// Skim minutes to whole clock minutes: rounded up, never zero.
pub fn travel_minutes(skim_minutes: f64) -> Minute {
    let m = libm::ceil(skim_minutes);
    if m < 1.0 {
        1
    } else {
        m as Minute
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        assert_eq!(Weekday::of_minute(0), Weekday::Monday);
        assert_eq!(Weekday::of_minute(10079), Weekday::Sunday);
        assert_eq!(hour_of_day(10079), 23);
        assert_eq!(hour_of_day(60), 1);
        assert_eq!(Weekday::of_minute(MINUTES_PER_DAY), Weekday::Tuesday);
    }

    #[test]
    fn travel_minutes_round_up() {
        assert_eq!(travel_minutes(8.0), 8);
        assert_eq!(travel_minutes(8.01), 9);
        assert_eq!(travel_minutes(0.0), 1);
    }
}
