//! Ride offers posted by drivers and matched to passengers.
//!
//! Matching is zone-exact: a request matches an offer with the same origin
//! and destination, a departure inside the request window and a free seat.
//! The earliest departure wins, ties go to the lower driver id.

use alloc::vec::Vec;

use crate::clock::Minute;
use crate::population::PersonId;
use crate::world::ZoneIdx;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RideshareOptions {
    /// How far ahead of an activity end the choice is made.
    pub lookahead_min: u32,
    pub max_wait_min: u32,
    pub check_interval_min: u32,
    pub seats: u32,
}

impl Default for RideshareOptions {
    fn default() -> Self {
        RideshareOptions {
            lookahead_min: 30,
            max_wait_min: 30,
            check_interval_min: 5,
            seats: 3,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RideOffer {
    pub driver: PersonId,
    pub origin: ZoneIdx,
    pub destination: ZoneIdx,
    pub departure: Minute,
    pub arrival: Minute,
    pub seats: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RideRequest {
    pub passenger: PersonId,
    pub origin: ZoneIdx,
    pub destination: ZoneIdx,
    pub earliest: Minute,
    pub latest: Minute,
}

/// Index of the offer `request` would take, if any.
pub fn match_offer(request: &RideRequest, offers: &[RideOffer]) -> Option<usize> {
    offers
        .iter()
        .enumerate()
        .filter(|(_, o)| {
            o.seats >= 1
                && o.origin == request.origin
                && o.destination == request.destination
                && (request.earliest..=request.latest).contains(&o.departure)
        })
        .min_by_key(|(_, o)| (o.departure, o.driver))
        .map(|(k, _)| k)
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct RideStats {
    pub offers: u64,
    pub matches: u64,
    pub fallbacks: u64,
}

/// Open offers, mutated only inside the minute loop.
#[derive(Clone, Debug, Default)]
pub struct RideBook {
    offers: Vec<RideOffer>,
    stats: RideStats,
}

impl RideBook {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn post(&mut self, offer: RideOffer) {
        self.stats.offers += 1;
        self.offers.push(offer);
    }

    /// Drops offers whose departure lies before `now`.
    pub fn expire(&mut self, now: Minute) {
        self.offers.retain(|o| o.departure >= now);
    }

    /// Takes a seat on the best matching offer.
    pub fn accept(&mut self, request: &RideRequest) -> Option<RideOffer> {
        let k = match_offer(request, &self.offers)?;
        let offer = &mut self.offers[k];
        offer.seats -= 1;
        self.stats.matches += 1;
        Some(*offer)
    }

    pub fn record_fallback(&mut self) {
        self.stats.fallbacks += 1;
    }

    pub fn offers(&self) -> &[RideOffer] {
        &self.offers
    }

    pub fn stats(&self) -> RideStats {
        self.stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offer(driver: u32, departure: Minute, seats: u32) -> RideOffer {
        RideOffer {
            driver: PersonId(driver),
            origin: ZoneIdx(0),
            destination: ZoneIdx(1),
            departure,
            arrival: departure + 10,
            seats,
        }
    }

    fn request(earliest: Minute, latest: Minute) -> RideRequest {
        RideRequest {
            passenger: PersonId(99),
            origin: ZoneIdx(0),
            destination: ZoneIdx(1),
            earliest,
            latest,
        }
    }

    #[test]
    fn earliest_departure_wins() {
        let offers = [offer(1, 112, 3), offer(2, 105, 3)];
        assert_eq!(match_offer(&request(100, 130), &offers), Some(1));
        assert_eq!(match_offer(&request(100, 130), &[]), None);
        let tie = [offer(7, 105, 1), offer(3, 105, 1)];
        assert_eq!(match_offer(&request(100, 130), &tie), Some(1));
    }

    #[test]
    fn window_zone_and_seats() {
        assert_eq!(match_offer(&request(100, 130), &[offer(1, 105, 0)]), None);
        assert_eq!(match_offer(&request(100, 104), &[offer(1, 105, 2)]), None);
        let mut other = offer(1, 105, 2);
        other.destination = ZoneIdx(2);
        assert_eq!(match_offer(&request(100, 130), &[other]), None);
    }

    #[test]
    fn seats_are_consumed() {
        let mut book = RideBook::new();
        book.post(offer(1, 105, 2));
        assert!(book.accept(&request(100, 130)).is_some());
        assert!(book.accept(&request(100, 130)).is_some());
        assert!(book.accept(&request(100, 130)).is_none());
        assert_eq!(book.stats().matches, 2);
        book.expire(106);
        assert!(book.offers().is_empty());
    }
}
