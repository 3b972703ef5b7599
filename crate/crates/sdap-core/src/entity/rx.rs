//! Receive-side SDAP entity.
//!
//! Mirrors the transmit side: removes the IP and transport headers, strips
//! the SDAP header to recover the QFI, restores the length fields, and
//! re-evaluates the DRB mapping so end-to-end consistency can be checked.
//! A fresh QosFlowTag carrying the extracted QFI is attached so downstream
//! consumers know which flow carried the packet; any tag a transmit-side
//! holdover might carry is replaced, since tags do not survive a real
//! serialization boundary.

use std::sync::Arc;

use crate::codec::{Ipv4Header, Qfi, TransportHeader, UdpHeader, PROTO_TCP, PROTO_UDP};
use crate::entity::SdapError;
use crate::mapping::{DrbId, QfiDrbTable};
use crate::packet::{HeaderChunk, Packet, QosFlowTag, Tag};
use crate::time::SimTime;

/// Outcome of one RX processing step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RxRecord {
    pub qfi: Qfi,
    pub drb: DrbId,
    pub timestamp: SimTime,
}

pub struct RxSdapEntity {
    table: Arc<QfiDrbTable>,
    drb_mismatches: u64,
}

impl RxSdapEntity {
    pub fn new(table: Arc<QfiDrbTable>) -> Self {
        RxSdapEntity {
            table,
            drb_mismatches: 0,
        }
    }

    pub fn table(&self) -> &QfiDrbTable {
        &self.table
    }

    /// Processes one packet with chunk order `[IP | transport | SDAP |
    /// payload]`, returning it as `[IP | transport | payload]` plus the
    /// extracted QFI and its DRB mapping.
    pub fn process(
        &self,
        mut packet: Packet,
        now: SimTime,
    ) -> Result<(Packet, RxRecord), SdapError> {
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

        let sdap = match packet.pop_front() {
            Ok(HeaderChunk::Sdap(sdap)) => sdap,
            Ok(_) | Err(_) => {
                return Err(SdapError::MalformedStack(
                    "no SDAP header behind the transport header",
                ))
            }
        };
        let qfi = sdap.qfi;

        let transport = match transport {
            TransportHeader::Udp(mut udp) => {
                if udp.length <= UdpHeader::ENCODED_LEN as u16 {
                    return Err(SdapError::LengthUnderflow("UDP length field"));
                }
                udp.length -= 1;
                TransportHeader::Udp(udp)
            }
            tcp @ TransportHeader::Tcp(_) => tcp,
        };
        packet.push_front(HeaderChunk::Transport(transport));

        let mut ip = ip;
        if ip.total_length <= Ipv4Header::ENCODED_LEN as u16 {
            return Err(SdapError::LengthUnderflow("IP total-length field"));
        }
        ip.total_length -= 1;
        packet.push_front(HeaderChunk::Ipv4(ip));

        packet.set_tag(Tag::QosFlow(QosFlowTag { qfi }));

        let record = RxRecord {
            qfi,
            drb: self.table.lookup(qfi),
            timestamp: now,
        };
        Ok((packet, record))
    }

    /// Compares the DRB the packet actually traveled on with the mapping the
    /// receive side derives from the extracted QFI. A mismatch is counted,
    /// not dropped; returns whether the two agree.
    pub fn verify_drb(&mut self, record: &RxRecord, traveled: DrbId) -> bool {
        let matched = record.drb == traveled;
        if !matched {
            self.drb_mismatches += 1;
        }
        matched
    }

    pub fn drb_mismatches(&self) -> u64 {
        self.drb_mismatches
    }

    /// The two audit log lines for one received packet.
    pub fn log_lines(record: &RxRecord) -> [String; 2] {
        [
            format!("[RX] Extracted QFI = {}", record.qfi),
            format!("[RX] Mapped DRB = {}", record.drb),
        ]
    }
}
