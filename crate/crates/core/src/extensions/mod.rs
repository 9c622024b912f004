//! Optional extensions layered onto the engine: ridesharing and carsharing.

pub mod carsharing;
pub mod ridesharing;

pub use carsharing::{carsharing_availability, CarsharingFleet, CarsharingSituation};
pub use ridesharing::{match_offer, RideBook, RideOffer, RideRequest, RideshareOptions};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Extensions {
    pub ridesharing: bool,
    pub carsharing: bool,
}
