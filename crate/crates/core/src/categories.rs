//! Categorical variables shared by the models, each with a stable text key
//! used in scenario and parameter files.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use crate::Error;

macro_rules! keyed_enum {
    ($(#[$meta:meta])* $name:ident, $kind:literal { $($variant:ident => $key:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $key),+
                }
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                match s.trim() {
                    $($key => Ok($name::$variant),)+
                    other => Err(Error::UnknownCategory {
                        kind: $kind,
                        value: other.to_string(),
                    }),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyed_enum!(
    /// Main transport mode of a trip.
    Mode, "mode" {
        Walking => "walking",
        Cycling => "cycling",
        PublicTransport => "public_transport",
        CarDriver => "car_driver",
        CarPassenger => "car_passenger",
        CarsharingStation => "carsharing_station",
        CarsharingFreefloat => "carsharing_freefloat",
    }
);

impl Mode {
    pub const BASE: [Mode; 5] = [
        Mode::Walking,
        Mode::Cycling,
        Mode::PublicTransport,
        Mode::CarDriver,
        Mode::CarPassenger,
    ];

    pub fn is_carsharing(self) -> bool {
        matches!(self, Mode::CarsharingStation | Mode::CarsharingFreefloat)
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Set of modes, iterated in declaration order.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash)]
pub struct ModeSet(u8);

impl ModeSet {
    pub const EMPTY: ModeSet = ModeSet(0);

    pub fn of(modes: &[Mode]) -> ModeSet {
        modes.iter().fold(ModeSet::EMPTY, |s, &m| s.with(m))
    }

    pub fn all() -> ModeSet {
        ModeSet::of(Mode::ALL)
    }

    pub fn with(self, mode: Mode) -> ModeSet {
        ModeSet(self.0 | mode.bit())
    }

    pub fn without(self, mode: Mode) -> ModeSet {
        ModeSet(self.0 & !mode.bit())
    }

    pub fn insert(&mut self, mode: Mode) {
        *self = self.with(mode);
    }

    pub fn remove(&mut self, mode: Mode) {
        *self = self.without(mode);
    }

    pub fn contains(self, mode: Mode) -> bool {
        self.0 & mode.bit() != 0
    }

    pub fn union(self, other: ModeSet) -> ModeSet {
        ModeSet(self.0 | other.0)
    }

    pub fn difference(self, other: ModeSet) -> ModeSet {
        ModeSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Mode> {
        Mode::ALL.iter().copied().filter(move |m| self.contains(*m))
    }
}

impl fmt::Debug for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Mode> for ModeSet {
    fn from_iter<I: IntoIterator<Item = Mode>>(iter: I) -> Self {
        iter.into_iter().fold(ModeSet::EMPTY, |s, m| s.with(m))
    }
}

keyed_enum!(
    /// Activity purpose.
    Purpose, "purpose" {
        Home => "home",
        Work => "work",
        Education => "education",
        Business => "business",
        Service => "service",
        PrivateBusiness => "private_business",
        PrivateVisit => "private_visit",
        ShoppingDaily => "shopping_daily",
        ShoppingOther => "shopping_other",
        LeisureIndoor => "leisure_indoor",
        LeisureOutdoor => "leisure_outdoor",
        LeisureOther => "leisure_other",
        Strolling => "strolling",
        Other => "other",
    }
);

impl Purpose {
    /// Home, work and education take place at locations fixed before the
    /// simulation; everything else is chosen on the way.
    pub fn is_fixed_location(self) -> bool {
        matches!(self, Purpose::Home | Purpose::Work | Purpose::Education)
    }
}

keyed_enum!(
    /// Employment status of a person.
    Employment, "employment" {
        FullTime => "fulltime",
        PartTime => "parttime",
        Unemployed => "unemployed",
        Vocational => "vocational",
        Homemaker => "homemaker",
        Retired => "retired",
        StudentPrimary => "student_primary",
        StudentSecondary => "student_secondary",
        StudentTertiary => "student_tertiary",
        Infant => "infant",
        Other => "other",
    }
);

keyed_enum!(
    Sex, "sex" {
        Male => "male",
        Female => "female",
    }
);

keyed_enum!(
    AgeGroup, "age group" {
        Age0To9 => "0-9",
        Age10To17 => "10-17",
        Age18To25 => "18-25",
        Age26To35 => "26-35",
        Age36To50 => "36-50",
        Age51To60 => "51-60",
        Age61To70 => "61-70",
        Age71Plus => "71+",
    }
);

keyed_enum!(
    /// How freely a person can use a household car.
    CarAvailability, "car availability" {
        None => "none",
        Personal => "personal",
        AfterConsultation => "after_consultation",
    }
);

keyed_enum!(
    /// Day-of-week classes of the mode choice model.
    DayType, "day type" {
        Workday => "workday",
        Saturday => "saturday",
        Sunday => "sunday",
    }
);
