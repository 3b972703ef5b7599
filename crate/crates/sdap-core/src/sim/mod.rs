//! Deterministic discrete-event simulation of the end-to-end user plane.
//!
//! CBR sources emit tagged packets into the TX SDAP entity; packets then sit
//! in per-DRB FIFO queues drained by a single bottleneck server (the stand-in
//! for PDCP/RLC/MAC/PHY), cross a fixed propagation delay, pass through the
//! RX SDAP entity, and land in per-flow statistics. Event order is a pure
//! function of the scenario config, so two runs with the same config produce
//! byte-identical logs and reports.

mod event;
mod link;
pub mod stats;
mod traffic;
pub mod validation;

pub use stats::{latency_summary, render_csv, FlowStats, LatencySummary, CSV_HEADER};
pub use traffic::{cbr_payload, DST_ADDR, SRC_ADDR};
pub use validation::{all_passed, checklist, ChecklistRow, CheckStatus, ValidationCounters};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::codec::{SdapHeader, TransportKind};
use crate::entity::{RxSdapEntity, TxRecord, TxSdapEntity};
use crate::mapping::{DrbId, QfiDrbTable};
use crate::packet::{HeaderChunk, Packet};
use crate::scenario::{ConfigError, FlowConfig, ScenarioConfig};
use crate::time::SimTime;

use event::{EventKind, EventQueue};
use link::BottleneckLink;

/// Everything a finished run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    /// One entry per configured flow, sorted by flow id.
    pub flows: Vec<FlowStats>,
    pub validation: ValidationCounters,
    pub warnings: Vec<String>,
    /// The full event log text.
    pub event_log: String,
    /// Canonical rendering of the configuration that was in effect.
    pub config_echo: String,
}

impl ScenarioReport {
    pub fn stats_csv(&self) -> String {
        render_csv(&self.flows)
    }

    pub fn checklist(&self) -> Vec<ChecklistRow> {
        checklist(&self.validation)
    }
}

/// Runs one scenario to completion.
///
/// Sources stop emitting at `min(stop_time, duration)`; the run then drains
/// every queued and in-flight packet, so `sent == received + lost` holds in
/// the final report.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport, ConfigError> {
    config.validate()?;
    let tx_table = Arc::new(config.tx_table()?);
    let rx_table = Arc::new(config.rx_table()?);
    // A separate instance of the mapping, parsed independently of the one the
    // TX entity consults, for cross-checking its DRB selections.
    let audit_table = config.tx_table()?;

    let mut sim = Simulator {
        config,
        flow_index: config
            .flows
            .iter()
            .enumerate()
            .map(|(idx, f)| (f.flow_id, idx))
            .collect(),
        tx: TxSdapEntity::new(tx_table.clone()),
        rx: RxSdapEntity::new(rx_table),
        audit_table,
        link: BottleneckLink::new(&config.link),
        events: EventQueue::new(),
        log: Vec::new(),
        tallies: vec![FlowTally::default(); config.flows.len()],
        pre_tx_bytes: HashMap::new(),
        counters: ValidationCounters {
            sdap_enabled: config.sdap_enabled,
            ..Default::default()
        },
        warnings: Vec::new(),
    };

    sim.log.push("# sdapsim event log".to_string());
    sim.log.push(format!(
        "# sdap={} scheduler={} seed={} flows={}",
        config.sdap_enabled,
        config.link.scheduler.as_str(),
        config.seed,
        config.flows.len()
    ));
    sim.check_offered_load();

    for (flow_idx, flow) in config.flows.iter().enumerate() {
        for emission in traffic::plan_emissions(
            flow,
            flow_idx,
            config.flows.len(),
            config.duration_nanos,
            config.seed,
        ) {
            sim.events.push(
                emission.time,
                EventKind::Emit {
                    flow_idx,
                    seq: emission.seq,
                },
            );
        }
    }

    while let Some((now, kind)) = sim.events.pop() {
        match kind {
            EventKind::Emit { flow_idx, seq } => sim.on_emit(now, flow_idx, seq),
            EventKind::ServiceComplete => sim.on_service_complete(now),
            EventKind::Deliver { packet, traveled } => sim.on_deliver(now, packet, traveled),
        }
    }

    let mut flows = Vec::with_capacity(config.flows.len());
    for (idx, flow) in config.flows.iter().enumerate() {
        let tally = &sim.tallies[idx];
        let summary = latency_summary(&tally.latencies);
        debug_assert_eq!(tally.sent, tally.received + tally.lost);
        flows.push(FlowStats {
            flow_id: flow.flow_id,
            qfi: flow.qfi.value(),
            drb: if config.sdap_enabled {
                tx_table.lookup(flow.qfi).value()
            } else {
                0
            },
            sent: tally.sent,
            received: tally.received,
            lost: tally.lost,
            mean_latency_secs: summary.mean_secs,
            std_latency_secs: summary.std_secs,
            latency_samples: summary.samples,
            drb_mismatches: tally.drb_mismatches,
            integrity_failures: tally.integrity_failures,
        });
    }

    let mut event_log = sim.log.join("\n");
    event_log.push('\n');
    Ok(ScenarioReport {
        flows,
        validation: sim.counters,
        warnings: sim.warnings,
        event_log,
        config_echo: config.render(),
    })
}

#[derive(Debug, Clone, Default)]
struct FlowTally {
    sent: u64,
    received: u64,
    lost: u64,
    latencies: Vec<u64>,
    drb_mismatches: u64,
    integrity_failures: u64,
}

struct Simulator<'a> {
    config: &'a ScenarioConfig,
    flow_index: BTreeMap<u32, usize>,
    tx: TxSdapEntity,
    rx: RxSdapEntity,
    audit_table: QfiDrbTable,
    link: BottleneckLink,
    events: EventQueue,
    log: Vec<String>,
    tallies: Vec<FlowTally>,
    /// Serialized pre-TX image of every in-flight packet, keyed by
    /// (flow id, seq), consumed at delivery to verify exact restoration.
    pre_tx_bytes: HashMap<(u32, u64), Vec<u8>>,
    counters: ValidationCounters,
    warnings: Vec<String>,
}

impl Simulator<'_> {
    fn check_offered_load(&mut self) {
        let sdap_extra = usize::from(self.config.sdap_enabled);
        let offered: f64 = self
            .config
            .flows
            .iter()
            .map(|f| f.packet_rate * (wire_len(f) + sdap_extra) as f64)
            .sum();
        if offered > self.config.link.service_rate as f64 {
            let warning = format!(
                "offered load {offered:.0} B/s exceeds link service rate {} B/s",
                self.config.link.service_rate
            );
            self.log.push(format!("# warning: {warning}"));
            self.warnings.push(warning);
        }
    }

    fn on_emit(&mut self, now: SimTime, flow_idx: usize, seq: u64) {
        let flow = &self.config.flows[flow_idx];
        let packet = traffic::build_packet(flow, seq, now);
        self.tallies[flow_idx].sent += 1;
        self.counters.sent += 1;

        let (packet, logical_drb) = if self.config.sdap_enabled {
            let pre_bytes = packet.serialize();
            let (packet, record) = self
                .tx
                .process(packet, now)
                .expect("traffic sources build pipeline-legal packets");

            self.counters.tx_processed += 1;
            if record.had_tag {
                self.counters.tx_tagged += 1;
            }
            if !record.had_tag || record.qfi != flow.qfi {
                self.counters.tx_tag_qfi_mismatches += 1;
            }
            if !tx_output_well_formed(&packet, &record, flow, pre_bytes.len()) {
                self.counters.tx_header_insertion_errors += 1;
            }
            if record.drb != self.audit_table.lookup(record.qfi) {
                self.counters.tx_mapping_errors += 1;
            }

            self.log.push(format!(
                "t={now} TX flow={} seq={seq} drb={}",
                flow.flow_id, record.drb
            ));
            for line in TxSdapEntity::log_lines(&record) {
                self.log.push(line);
            }
            self.pre_tx_bytes.insert((flow.flow_id, seq), pre_bytes);
            (packet, record.drb)
        } else {
            self.log
                .push(format!("t={now} TX flow={} seq={seq} drb=0", flow.flow_id));
            (packet, DrbId(0))
        };

        if let Err(dropped) = self.link.enqueue(logical_drb, packet) {
            self.tallies[flow_idx].lost += 1;
            self.counters.lost += 1;
            self.pre_tx_bytes.remove(&(dropped.flow_id, dropped.seq));
            self.log.push(format!(
                "t={now} DROP flow={} seq={seq} drb={logical_drb}",
                flow.flow_id
            ));
        }
        self.kick_server(now);
    }

    fn on_service_complete(&mut self, now: SimTime) {
        let item = self.link.complete_service();
        self.events.push(
            now.plus_nanos(self.config.link.propagation_delay_nanos),
            EventKind::Deliver {
                packet: item.packet,
                traveled: item.drb,
            },
        );
        self.kick_server(now);
    }

    fn on_deliver(&mut self, now: SimTime, packet: Packet, traveled: DrbId) {
        let flow_idx = self.flow_index[&packet.flow_id];
        let flow = &self.config.flows[flow_idx];
        let seq = packet.seq;
        let latency = now.nanos_since(packet.created_at);

        let packet = if self.config.sdap_enabled {
            self.counters.rx_processed += 1;
            let (restored, record) = self
                .rx
                .process(packet, now)
                .expect("TX-processed packets carry an SDAP header");

            let pre = self.pre_tx_bytes.remove(&(flow.flow_id, seq));
            let no_sdap_left = !restored
                .chunks()
                .any(|c| matches!(c, HeaderChunk::Sdap(_)));
            if pre.as_deref() != Some(restored.serialize().as_slice()) || !no_sdap_left {
                self.counters.rx_removal_errors += 1;
            }
            if record.qfi != flow.qfi {
                self.counters.rx_qfi_mismatches += 1;
            }
            if !self.rx.verify_drb(&record, traveled) {
                self.tallies[flow_idx].drb_mismatches += 1;
                self.counters.drb_mismatches += 1;
            }

            self.log.push(format!(
                "t={now} RX flow={} seq={seq} drb={traveled} latency={}",
                flow.flow_id,
                SimTime::from_nanos(latency)
            ));
            for line in RxSdapEntity::log_lines(&record) {
                self.log.push(line);
            }
            restored
        } else {
            self.log.push(format!(
                "t={now} RX flow={} seq={seq} drb={traveled} latency={}",
                flow.flow_id,
                SimTime::from_nanos(latency)
            ));
            packet
        };

        if packet.payload() != cbr_payload(flow.flow_id, seq, flow.payload_size) {
            self.tallies[flow_idx].integrity_failures += 1;
            self.counters.integrity_failures += 1;
        }
        self.tallies[flow_idx].latencies.push(latency);
        self.tallies[flow_idx].received += 1;
        self.counters.delivered += 1;
    }

    fn kick_server(&mut self, now: SimTime) {
        if let Some(service_nanos) = self.link.try_start_service() {
            self.events
                .push(now.plus_nanos(service_nanos), EventKind::ServiceComplete);
        }
    }
}

/// Serialized length of a flow's packets before SDAP processing.
fn wire_len(flow: &FlowConfig) -> usize {
    let transport = match flow.transport {
        TransportKind::Udp => crate::codec::UdpHeader::ENCODED_LEN,
        TransportKind::Tcp => crate::codec::TcpHeader::ENCODED_LEN,
    };
    crate::codec::Ipv4Header::ENCODED_LEN + transport + flow.payload_size
}

/// Post-TX cross-check: the chunk stack, SDAP fields, and length fields must
/// all be exactly one SDAP byte away from the packet the source built.
fn tx_output_well_formed(
    packet: &Packet,
    record: &TxRecord,
    flow: &FlowConfig,
    pre_len: usize,
) -> bool {
    if packet.serialized_len() != pre_len + 1 {
        return false;
    }
    let chunks: Vec<_> = packet.chunks().collect();
    let [HeaderChunk::Ipv4(ip), HeaderChunk::Transport(transport), HeaderChunk::Sdap(sdap)] =
        chunks[..]
    else {
        return false;
    };
    if *sdap != SdapHeader::data(record.qfi) {
        return false;
    }
    if usize::from(ip.total_length) != wire_len(flow) + 1 {
        return false;
    }
    match transport {
        crate::codec::TransportHeader::Udp(udp) => {
            usize::from(udp.length)
                == crate::codec::UdpHeader::ENCODED_LEN + flow.payload_size + 1
        }
        crate::codec::TransportHeader::Tcp(_) => true,
    }
}
