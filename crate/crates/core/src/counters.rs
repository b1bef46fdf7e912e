//! Operation counters threaded through every query.

use std::ops::AddAssign;

/// Work counters for one query (or a sum over several).
///
/// `comparisons` counts key comparisons in binary searches, heaps and walks;
/// `accesses` counts element reads from implicit sorted streams;
/// `bridge_steps` counts cascade pointer moves; `reported` counts items
/// emitted by reporting walks before exact filtering. Work spent on the final
/// tie-resolution pass is kept apart in `tie_pass`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub comparisons: u64,
    pub accesses: u64,
    pub bridge_steps: u64,
    pub reported: u64,
    pub heap_ops: u64,
    pub extract_max: u64,
    pub tie_pass: u64,
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Self) {
        self.comparisons += o.comparisons;
        self.accesses += o.accesses;
        self.bridge_steps += o.bridge_steps;
        self.reported += o.reported;
        self.heap_ops += o.heap_ops;
        self.extract_max += o.extract_max;
        self.tie_pass += o.tie_pass;
    }
}
