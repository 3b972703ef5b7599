//! Transmit-side SDAP entity.
//!
//! For each outgoing packet the entity reads the QFI from the attached
//! QosFlowTag (default 0 when untagged), removes the IP and transport
//! headers, inserts the one-byte SDAP header in front of the payload,
//! re-attaches the headers with their length fields bumped by one byte, and
//! resolves the logical DRB for the flow.

use std::sync::Arc;

use crate::codec::{Qfi, SdapHeader, TransportHeader, PROTO_TCP, PROTO_UDP};
use crate::entity::SdapError;
use crate::mapping::{DrbId, QfiDrbTable};
use crate::packet::{HeaderChunk, Packet};
use crate::time::SimTime;

/// Outcome of one TX processing step, used for logging and verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TxRecord {
    pub qfi: Qfi,
    pub drb: DrbId,
    /// Whether a QosFlowTag was present on the incoming packet.
    pub had_tag: bool,
    pub timestamp: SimTime,
}

pub struct TxSdapEntity {
    table: Arc<QfiDrbTable>,
}

impl TxSdapEntity {
    pub fn new(table: Arc<QfiDrbTable>) -> Self {
        TxSdapEntity { table }
    }

    pub fn table(&self) -> &QfiDrbTable {
        &self.table
    }

    /// Processes one packet with chunk order `[IP | transport | payload]`,
    /// returning it as `[IP | transport | SDAP | payload]`.
    ///
    /// The payload and the tag set are untouched; the serialized packet grows
    /// by exactly one byte, reflected in the UDP length (UDP only) and IP
    /// total-length fields.
    pub fn process(
        &self,
        mut packet: Packet,
        now: SimTime,
    ) -> Result<(Packet, TxRecord), SdapError> {
        let (qfi, had_tag) = match packet.qos_flow_tag() {
            Some(tag) => (tag.qfi, true),
            None => (Qfi::default(), false),
        };

        let ip = match packet.pop_front() {
            Ok(HeaderChunk::Ipv4(ip)) => ip,
            Ok(_) => return Err(SdapError::MalformedStack("outermost chunk is not IPv4")),
            Err(_) => return Err(SdapError::MalformedStack("packet has no header chunks")),
        };
        if ip.protocol != PROTO_UDP && ip.protocol != PROTO_TCP {
            return Err(SdapError::UnsupportedProtocol(ip.protocol));
        }

        let transport = match packet.pop_front() {
            Ok(HeaderChunk::Transport(t)) => t,
            Ok(_) | Err(_) => {
                return Err(SdapError::MalformedStack(
                    "IPv4 header is not followed by a transport header",
                ))
            }
        };
        if transport.protocol_id() != ip.protocol {
            return Err(SdapError::MalformedStack(
                "transport header kind does not match the IP protocol field",
            ));
        }

        packet.push_front(HeaderChunk::Sdap(SdapHeader::data(qfi)));

        let transport = match transport {
            TransportHeader::Udp(mut udp) => {
                udp.length = udp
                    .length
                    .checked_add(1)
                    .ok_or(SdapError::LengthOverflow("UDP length field"))?;
                TransportHeader::Udp(udp)
            }
            tcp @ TransportHeader::Tcp(_) => tcp,
        };
        packet.push_front(HeaderChunk::Transport(transport));

        let mut ip = ip;
        ip.total_length = ip
            .total_length
            .checked_add(1)
            .ok_or(SdapError::LengthOverflow("IP total-length field"))?;
        packet.push_front(HeaderChunk::Ipv4(ip));

        let record = TxRecord {
            qfi,
            drb: self.table.lookup(qfi),
            had_tag,
            timestamp: now,
        };
        Ok((packet, record))
    }

    /// The three audit log lines for one processed packet.
    pub fn log_lines(record: &TxRecord) -> [String; 3] {
        let qfi = record.qfi;
        let first = if record.had_tag {
            format!("[TX] QFI = {qfi} extracted from QosTagReq;")
        } else {
            format!("[TX] QFI = {qfi} assumed (no QosTagReq);")
        };
        [
            first,
            format!("[TX] Inserted SDAP header with QFI = {qfi};"),
            format!("[TX] Selected DRB = {} for QFI = {qfi}.", record.drb),
        ]
    }
}
