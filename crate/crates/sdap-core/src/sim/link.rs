//! The bottleneck link: per-DRB FIFO queues drained by a single server.
//!
//! This is the stand-in for everything below SDAP. Under `SharedFifo` every
//! packet joins one queue regardless of its DRB; under `PerDrbRoundRobin`
//! each logical DRB gets its own FIFO and the server takes one packet per
//! non-empty queue per turn, in DRB-id order.

use std::collections::{BTreeMap, VecDeque};
use std::ops::Bound;

use crate::mapping::DrbId;
use crate::packet::Packet;
use crate::scenario::{LinkConfig, Scheduler};

#[derive(Debug)]
pub(crate) struct QueuedPacket {
    pub packet: Packet,
    /// The logical DRB selected at TX time; retained even when the physical
    /// queue is shared.
    pub drb: DrbId,
}

pub(crate) struct BottleneckLink {
    service_rate: u64,
    scheduler: Scheduler,
    capacity: usize,
    queues: BTreeMap<DrbId, VecDeque<QueuedPacket>>,
    in_service: Option<QueuedPacket>,
    rr_cursor: Option<DrbId>,
}

impl BottleneckLink {
    pub fn new(config: &LinkConfig) -> Self {
        BottleneckLink {
            service_rate: config.service_rate,
            scheduler: config.scheduler,
            capacity: config.per_queue_capacity,
            queues: BTreeMap::new(),
            in_service: None,
            rr_cursor: None,
        }
    }

    /// Transmission time for `bytes` at the configured rate, in nanoseconds.
    pub fn service_nanos(&self, bytes: usize) -> u64 {
        ((bytes as u128 * 1_000_000_000) / u128::from(self.service_rate)) as u64
    }

    /// Queues a packet on its DRB. Returns the packet back when the target
    /// queue is at capacity so the caller can account the drop.
    pub fn enqueue(&mut self, drb: DrbId, packet: Packet) -> Result<(), Packet> {
        let key = match self.scheduler {
            Scheduler::SharedFifo => DrbId(0),
            Scheduler::PerDrbRoundRobin => drb,
        };
        let queue = self.queues.entry(key).or_default();
        if self.capacity > 0 && queue.len() >= self.capacity {
            return Err(packet);
        }
        queue.push_back(QueuedPacket { packet, drb });
        Ok(())
    }

    /// When the server is idle and work is queued, moves the next head into
    /// service and returns its transmission time.
    pub fn try_start_service(&mut self) -> Option<u64> {
        if self.in_service.is_some() {
            return None;
        }
        let key = self.pick_next()?;
        let item = self
            .queues
            .get_mut(&key)
            .and_then(VecDeque::pop_front)
            .expect("picked queue is non-empty");
        let nanos = self.service_nanos(item.packet.serialized_len());
        self.rr_cursor = Some(key);
        self.in_service = Some(item);
        Some(nanos)
    }

    pub fn complete_service(&mut self) -> QueuedPacket {
        self.in_service
            .take()
            .expect("service completion while the server is idle")
    }

    fn pick_next(&self) -> Option<DrbId> {
        fn first_nonempty<'a>(
            range: impl Iterator<Item = (&'a DrbId, &'a VecDeque<QueuedPacket>)>,
        ) -> Option<DrbId> {
            let mut range = range;
            range.find_map(|(k, q)| if q.is_empty() { None } else { Some(*k) })
        }
        match self.rr_cursor {
            Some(cursor) => first_nonempty(
                self.queues
                    .range((Bound::Excluded(cursor), Bound::Unbounded)),
            )
            .or_else(|| first_nonempty(self.queues.range(..=cursor))),
            None => first_nonempty(self.queues.iter()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(scheduler: Scheduler, capacity: usize) -> BottleneckLink {
        BottleneckLink::new(&LinkConfig {
            service_rate: 1000,
            scheduler,
            propagation_delay_nanos: 0,
            per_queue_capacity: capacity,
        })
    }

    fn packet(marker: u8) -> Packet {
        Packet::new(vec![marker; 10])
    }

    fn served_marker(link: &mut BottleneckLink) -> u8 {
        link.try_start_service().expect("work available");
        let item = link.complete_service();
        item.packet.payload()[0]
    }

    #[test]
    fn service_time_is_bytes_over_rate() {
        let link = link(Scheduler::SharedFifo, 0);
        // 10 bytes at 1000 B/s = 10 ms.
        assert_eq!(link.service_nanos(10), 10_000_000);
    }

    #[test]
    fn shared_fifo_ignores_drb_boundaries() {
        let mut link = link(Scheduler::SharedFifo, 0);
        link.enqueue(DrbId(3), packet(3)).unwrap();
        link.enqueue(DrbId(1), packet(1)).unwrap();
        link.enqueue(DrbId(2), packet(2)).unwrap();

        // Strict arrival order, and the logical DRB rides along.
        link.try_start_service().unwrap();
        let first = link.complete_service();
        assert_eq!(first.packet.payload()[0], 3);
        assert_eq!(first.drb, DrbId(3));
        assert_eq!(served_marker(&mut link), 1);
        assert_eq!(served_marker(&mut link), 2);
    }

    #[test]
    fn round_robin_serves_one_per_queue_per_turn() {
        let mut link = link(Scheduler::PerDrbRoundRobin, 0);
        for seq in 0..2u8 {
            link.enqueue(DrbId(0), packet(10 + seq)).unwrap();
            link.enqueue(DrbId(1), packet(20 + seq)).unwrap();
            link.enqueue(DrbId(2), packet(30 + seq)).unwrap();
        }

        let order: Vec<u8> = (0..6).map(|_| served_marker(&mut link)).collect();
        assert_eq!(order, vec![10, 20, 30, 11, 21, 31]);
    }

    #[test]
    fn round_robin_skips_empty_queues() {
        let mut link = link(Scheduler::PerDrbRoundRobin, 0);
        link.enqueue(DrbId(0), packet(1)).unwrap();
        link.enqueue(DrbId(2), packet(2)).unwrap();
        link.enqueue(DrbId(2), packet(3)).unwrap();

        assert_eq!(served_marker(&mut link), 1);
        assert_eq!(served_marker(&mut link), 2);
        assert_eq!(served_marker(&mut link), 3);
        assert!(link.try_start_service().is_none());
    }

    #[test]
    fn capacity_bound_rejects_overflow() {
        let mut link = link(Scheduler::PerDrbRoundRobin, 2);
        link.enqueue(DrbId(0), packet(1)).unwrap();
        link.enqueue(DrbId(0), packet(2)).unwrap();
        let rejected = link.enqueue(DrbId(0), packet(3)).unwrap_err();
        assert_eq!(rejected.payload()[0], 3);
        // A different queue still has room.
        link.enqueue(DrbId(1), packet(4)).unwrap();
    }

    #[test]
    fn server_is_single_occupancy() {
        let mut link = link(Scheduler::SharedFifo, 0);
        link.enqueue(DrbId(0), packet(1)).unwrap();
        link.enqueue(DrbId(0), packet(2)).unwrap();
        assert!(link.try_start_service().is_some());
        assert!(link.try_start_service().is_none());
        link.complete_service();
        assert!(link.try_start_service().is_some());
    }
}
