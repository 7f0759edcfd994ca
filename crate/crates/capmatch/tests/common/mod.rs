use capmatch::fitness::Request;
use capmatch::inventory::{self, Fleet};

/// The worked ten-node sample fleet shipped with the crate.
pub fn ten_node_fleet() -> Fleet {
    inventory::load_fleet_str(include_str!("../../data/fleet10.csv")).unwrap()
}

pub fn request_50_30_20() -> Request {
    Request::with_default_tolerance(vec![50, 30, 20]).unwrap()
}
