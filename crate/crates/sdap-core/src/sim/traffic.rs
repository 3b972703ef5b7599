//! Constant-bit-rate traffic sources.
//!
//! Flow phases are staggered (flow k starts k/n of a period late) so the
//! sources do not fire in lockstep, and an optional per-packet jitter drawn
//! from a seeded, per-flow RNG stream desynchronizes them further. Payloads
//! are a deterministic pattern of (flow, sequence) so receivers can detect
//! corruption without carrying the original bytes around.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{Ipv4Header, TcpHeader, TransportHeader, TransportKind, UdpHeader};
use crate::packet::{HeaderChunk, Packet, QosFlowTag, Tag};
use crate::scenario::FlowConfig;
use crate::time::SimTime;

/// Source address used by every simulated flow (10.0.0.1).
pub const SRC_ADDR: u32 = 0x0A00_0001;
/// Destination address used by every simulated flow (10.0.0.2).
pub const DST_ADDR: u32 = 0x0A00_0002;

/// Deterministic payload fill for packet `seq` of `flow_id`.
pub fn cbr_payload(flow_id: u32, seq: u64, len: usize) -> Vec<u8> {
    (0..len as u64)
        .map(|i| {
            u64::from(flow_id)
                .wrapping_mul(151)
                .wrapping_add(seq.wrapping_mul(97))
                .wrapping_add(i.wrapping_mul(43))
                .wrapping_add(7) as u8
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Emission {
    pub seq: u64,
    pub time: SimTime,
}

/// All emission instants for one flow.
///
/// Base ticks run at the flow period from `start_time + phase` and stop at
/// `min(stop_time, duration)`; jitter shifts each packet's entry into the
/// stack but never changes how many packets a flow sends.
pub(crate) fn plan_emissions(
    flow: &FlowConfig,
    flow_idx: usize,
    num_flows: usize,
    duration_nanos: u64,
    seed: u64,
) -> Vec<Emission> {
    let period = flow.period_nanos();
    let phase = flow_idx as u64 * period / num_flows.max(1) as u64;
    let horizon = flow.stop_time.as_nanos().min(duration_nanos);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(flow.flow_id).wrapping_add(1));

    let mut emissions = Vec::new();
    let mut seq = 0u64;
    loop {
        let base = flow.start_time.as_nanos() + phase + seq * period;
        if base >= horizon {
            break;
        }
        let jitter = if flow.jitter_nanos > 0 {
            rng.gen_range(0..=flow.jitter_nanos)
        } else {
            0
        };
        emissions.push(Emission {
            seq,
            time: SimTime::from_nanos(base + jitter),
        });
        seq += 1;
    }
    emissions
}

/// Builds the packet for emission `seq` of `flow`: deterministic payload,
/// transport and IP headers with consistent length fields, and the flow's
/// QosFlowTag attached.
pub(crate) fn build_packet(flow: &FlowConfig, seq: u64, now: SimTime) -> Packet {
    let mut packet = Packet::new(cbr_payload(flow.flow_id, seq, flow.payload_size));
    packet.created_at = now;
    packet.flow_id = flow.flow_id;
    packet.seq = seq;

    let transport = match flow.transport {
        TransportKind::Udp => TransportHeader::Udp(UdpHeader::new(
            flow.src_port,
            flow.dst_port,
            (UdpHeader::ENCODED_LEN + flow.payload_size) as u16,
        )),
        TransportKind::Tcp => TransportHeader::Tcp(TcpHeader::new(flow.src_port, flow.dst_port)),
    };
    let total_length =
        (Ipv4Header::ENCODED_LEN + transport.encoded_len() + flow.payload_size) as u16;
    packet.push_front(HeaderChunk::Transport(transport));
    packet.push_front(HeaderChunk::Ipv4(Ipv4Header::new(
        flow.transport.protocol_id(),
        total_length,
        SRC_ADDR,
        DST_ADDR,
    )));
    packet.set_tag(Tag::QosFlow(QosFlowTag { qfi: flow.qfi }));
    packet
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Qfi;

    fn flow(rate: f64, start: u64, stop: u64, jitter: u64) -> FlowConfig {
        FlowConfig {
            flow_id: 0,
            qfi: Qfi::new(5).unwrap(),
            packet_rate: rate,
            payload_size: 160,
            src_port: 1000,
            dst_port: 2000,
            transport: TransportKind::Udp,
            start_time: SimTime::from_nanos(start),
            stop_time: SimTime::from_nanos(stop),
            jitter_nanos: jitter,
        }
    }

    #[test]
    fn emission_count_is_rate_times_window() {
        let f = flow(50.0, 0, 20_000_000_000, 0);
        let plan = plan_emissions(&f, 0, 4, 20_000_000_000, 1);
        assert_eq!(plan.len(), 1000);
        assert_eq!(plan[0].time, SimTime::ZERO);
        assert_eq!(plan[1].time, SimTime::from_nanos(20_000_000));
    }

    #[test]
    fn phase_staggers_flows_without_changing_counts() {
        let f = flow(50.0, 0, 20_000_000_000, 0);
        for idx in 0..4 {
            let plan = plan_emissions(&f, idx, 4, 20_000_000_000, 1);
            assert_eq!(plan.len(), 1000, "flow index {idx}");
            assert_eq!(
                plan[0].time,
                SimTime::from_nanos(idx as u64 * 5_000_000),
                "flow index {idx}"
            );
        }
    }

    #[test]
    fn jitter_is_deterministic_and_count_preserving() {
        let f = flow(50.0, 0, 20_000_000_000, 8_000_000);
        let a = plan_emissions(&f, 0, 4, 20_000_000_000, 7);
        let b = plan_emissions(&f, 0, 4, 20_000_000_000, 7);
        assert_eq!(a.len(), 1000);
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(x, y)| x.time == y.time));

        let other_seed = plan_emissions(&f, 0, 4, 20_000_000_000, 8);
        assert_eq!(other_seed.len(), a.len());
        assert!(a.iter().zip(&other_seed).any(|(x, y)| x.time != y.time));
    }

    #[test]
    fn stop_time_clamps_to_duration() {
        let f = flow(50.0, 0, 40_000_000_000, 0);
        let plan = plan_emissions(&f, 0, 1, 10_000_000_000, 1);
        assert_eq!(plan.len(), 500);
    }

    #[test]
    fn payload_pattern_detects_corruption() {
        let good = cbr_payload(3, 17, 160);
        assert_eq!(good, cbr_payload(3, 17, 160));
        assert_ne!(good, cbr_payload(3, 18, 160));
        assert_ne!(good, cbr_payload(4, 17, 160));
    }

    #[test]
    fn built_packet_has_consistent_lengths_and_tag() {
        let f = flow(50.0, 0, 1_000_000_000, 0);
        let packet = build_packet(&f, 2, SimTime::from_nanos(123));
        assert_eq!(packet.serialized_len(), 20 + 8 + 160);
        assert_eq!(packet.qos_flow_tag().unwrap().qfi.value(), 5);
        assert_eq!(packet.created_at, SimTime::from_nanos(123));
        assert_eq!(packet.seq, 2);

        let bytes = packet.serialize();
        // IP total length covers header + UDP + payload.
        assert_eq!(u16::from_be_bytes([bytes[2], bytes[3]]), 188);
        // UDP length covers UDP header + payload.
        assert_eq!(u16::from_be_bytes([bytes[24], bytes[25]]), 168);
    }
}
