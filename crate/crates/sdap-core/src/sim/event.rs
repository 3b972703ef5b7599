//! Event queue with a total, deterministic order.
//!
//! Events fire in `(timestamp, insertion sequence)` order, so simultaneous
//! events execute in the order they were scheduled.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::mapping::DrbId;
use crate::packet::Packet;
use crate::time::SimTime;

#[derive(Debug)]
pub(crate) enum EventKind {
    /// A traffic source hands one packet to the stack.
    Emit { flow_idx: usize, seq: u64 },
    /// The bottleneck server finishes transmitting the in-service packet.
    ServiceComplete,
    /// A packet arrives at the far end after propagation.
    Deliver { packet: Packet, traveled: DrbId },
}

struct Scheduled {
    time: SimTime,
    id: u64,
    kind: EventKind,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.id == other.id
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    // Reversed so the max-heap pops the earliest (time, id) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .cmp(&self.time)
            .then_with(|| other.id.cmp(&self.id))
    }
}

pub(crate) struct EventQueue {
    heap: BinaryHeap<Scheduled>,
    next_id: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        EventQueue {
            heap: BinaryHeap::new(),
            next_id: 0,
        }
    }

    pub fn push(&mut self, time: SimTime, kind: EventKind) {
        let id = self.next_id;
        self.next_id += 1;
        self.heap.push(Scheduled { time, id, kind });
    }

    pub fn pop(&mut self) -> Option<(SimTime, EventKind)> {
        self.heap.pop().map(|s| (s.time, s.kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_time_then_insertion_order() {
        let mut queue = EventQueue::new();
        queue.push(SimTime::from_nanos(5), EventKind::ServiceComplete);
        queue.push(
            SimTime::from_nanos(3),
            EventKind::Emit {
                flow_idx: 1,
                seq: 0,
            },
        );
        queue.push(
            SimTime::from_nanos(3),
            EventKind::Emit {
                flow_idx: 2,
                seq: 0,
            },
        );

        let (t1, e1) = queue.pop().unwrap();
        assert_eq!(t1, SimTime::from_nanos(3));
        assert!(matches!(e1, EventKind::Emit { flow_idx: 1, .. }));

        let (t2, e2) = queue.pop().unwrap();
        assert_eq!(t2, SimTime::from_nanos(3));
        assert!(matches!(e2, EventKind::Emit { flow_idx: 2, .. }));

        let (t3, _) = queue.pop().unwrap();
        assert_eq!(t3, SimTime::from_nanos(5));
        assert!(queue.pop().is_none());
    }
}
