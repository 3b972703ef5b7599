//! SDAP user-plane building blocks and a deterministic stack simulator.
//!
//! The crate provides, bottom to top:
//!
//! - [`codec`]: bit-exact codecs for the one-byte SDAP PDU header and the
//!   simplified IPv4/UDP/TCP header models.
//! - [`packet`]: a layered packet made of typed header chunks over a payload,
//!   plus out-of-band metadata tags that never hit the wire.
//! - [`mapping`]: the `qfiToDrbMapping` configuration table resolving QoS
//!   flows to logical data radio bearers, default DRB 0.
//! - [`entity`]: transmit- and receive-side SDAP entities that insert/remove
//!   the SDAP header, keep IP/transport length fields consistent, and log
//!   their QFI and DRB decisions.
//! - [`scenario`] and [`sim`]: INI-style experiment descriptions and the
//!   discrete-event simulator that runs them — CBR sources, per-DRB queues
//!   over one bottleneck server, per-flow latency/loss/integrity accounting,
//!   and a seven-point functional validation checklist.

pub mod codec;
pub mod entity;
pub mod mapping;
pub mod packet;
pub mod scenario;
pub mod sim;
pub mod time;

pub use codec::{
    CodecError, Dc, Ipv4Header, Qfi, QfiOutOfRange, SdapHeader, TcpHeader, TransportHeader,
    TransportKind, UdpHeader, PROTO_TCP, PROTO_UDP,
};
pub use entity::{RxRecord, RxSdapEntity, SdapError, TxRecord, TxSdapEntity};
pub use mapping::{DrbId, MalformedMapping, QfiDrbTable};
pub use packet::{EmptyPacket, HeaderChunk, Packet, QosFlowTag, Tag, TagKind};
pub use scenario::{ConfigError, FlowConfig, LinkConfig, ScenarioConfig, Scheduler};
pub use sim::{run_scenario, FlowStats, ScenarioReport, ValidationCounters};
pub use time::SimTime;
