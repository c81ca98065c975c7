//! Input generators shared by the benchmarks.

use tracehom::{CENet, PlaceId};

/// A buffer chain with `stages` places: one feeder event, one drain event,
/// and a mover between each adjacent pair of places. Reachable markings
/// from the empty one cover all 2^stages subsets.
pub fn chain_net(stages: usize) -> CENet {
    let places: Vec<String> = (0..stages).map(|i| format!("p{i}")).collect();
    let mut events = Vec::with_capacity(stages + 1);
    events.push(("feed".to_string(), vec![], vec![PlaceId(0)]));
    for i in 1..stages {
        events.push((
            format!("move{i}"),
            vec![PlaceId(i - 1)],
            vec![PlaceId(i)],
        ));
    }
    events.push(("drain".to_string(), vec![PlaceId(stages - 1)], vec![]));
    CENet::new(places, events, vec![]).expect("generated net is well formed")
}

/// Small deterministic generator for benchmark data.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}
