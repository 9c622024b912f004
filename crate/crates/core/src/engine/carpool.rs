//! Household car pools.

use alloc::vec::Vec;

use crate::population::PersonId;
use crate::{Error, Result};

/// Cars of one household. Cars are interchangeable, so the pool only tracks
/// who holds one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarPool {
    total: u32,
    holders: Vec<PersonId>,
    takes: u64,
    returns: u64,
}

impl CarPool {
    pub fn new(total: u32) -> Self {
        CarPool {
            total,
            holders: Vec::new(),
            takes: 0,
            returns: 0,
        }
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn free(&self) -> u32 {
        self.total - self.held()
    }

    pub fn held(&self) -> u32 {
        self.holders.len() as u32
    }

    pub fn holds(&self, person: PersonId) -> bool {
        self.holders.binary_search(&person).is_ok()
    }

    pub fn takes(&self) -> u64 {
        self.takes
    }

    pub fn returns(&self) -> u64 {
        self.returns
    }

    pub fn take(&mut self, person: PersonId) -> Result<()> {
        match self.holders.binary_search(&person) {
            Ok(_) => Err(Error::Invalid(alloc::format!("person {person} already holds a car"))),
            Err(_) if self.free() == 0 => Err(Error::Invalid(alloc::format!("no free car for person {person}"))),
            Err(pos) => {
                self.holders.insert(pos, person);
                self.takes += 1;
                Ok(())
            }
        }
    }

    /// Returns the car held by `person`; false if none is held.
    pub fn give_back(&mut self, person: PersonId) -> bool {
        match self.holders.binary_search(&person) {
            Ok(pos) => {
                self.holders.remove(pos);
                self.returns += 1;
                true
            }
            Err(_) => false,
        }
    }
}
