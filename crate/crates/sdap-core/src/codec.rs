//! Bit-exact header codecs for the user-plane pipeline.
//!
//! The SDAP PDU header is a single byte:
//!
//! ```text
//!   7     6     5 . . . . . . 0
//! +-----+-----+-----------------+
//! | D/C | RQI |       QFI       |
//! +-----+-----+-----------------+
//! ```
//!
//! D/C = 1 marks a data PDU, RQI = 1 sets the reflective-QoS indicator, and
//! the low six bits carry the QoS Flow Identifier. Every byte value decodes
//! to a valid header, so decoding is total.
//!
//! The IPv4, UDP, and TCP headers are deliberately simplified models: fixed
//! 20/8/20-byte encodings with no options. Checksums are carried as stored
//! values and never validated or recomputed.

use thiserror::Error;

/// IANA protocol number for TCP.
pub const PROTO_TCP: u8 = 6;
/// IANA protocol number for UDP.
pub const PROTO_UDP: u8 = 17;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("insufficient bytes: need {needed}, have {available}")]
    InsufficientBytes { needed: usize, available: usize },
    #[error("unsupported transport protocol id {0} (expected 6 or 17)")]
    UnsupportedProtocol(u8),
    #[error("unsupported IPv4 version/IHL byte {0:#04x} (only 20-byte option-less headers are modeled)")]
    UnsupportedIpv4(u8),
}

/// A QoS Flow Identifier, constrained to the 6-bit range `0..=63`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qfi(u8);

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("QFI {0} is outside the 6-bit range 0..=63")]
pub struct QfiOutOfRange(pub i64);

impl Qfi {
    pub const MAX_VALUE: u8 = 63;

    pub fn new(value: u8) -> Result<Self, QfiOutOfRange> {
        if value <= Self::MAX_VALUE {
            Ok(Qfi(value))
        } else {
            Err(QfiOutOfRange(i64::from(value)))
        }
    }

    pub const fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Qfi {
    type Error = QfiOutOfRange;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Qfi::new(value)
    }
}

impl std::fmt::Display for Qfi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Data/Control indicator of an SDAP PDU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dc {
    Control,
    Data,
}

impl std::fmt::Display for Dc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dc::Control => write!(f, "Control"),
            Dc::Data => write!(f, "Data"),
        }
    }
}

/// The one-byte SDAP PDU header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SdapHeader {
    pub dc: Dc,
    pub rqi: bool,
    pub qfi: Qfi,
}

impl SdapHeader {
    pub const ENCODED_LEN: usize = 1;

    const DC_BIT: u8 = 0x80;
    const RQI_BIT: u8 = 0x40;
    const QFI_MASK: u8 = 0x3F;

    /// A data PDU header with RQI cleared, the shape the TX entity emits.
    pub fn data(qfi: Qfi) -> Self {
        SdapHeader {
            dc: Dc::Data,
            rqi: false,
            qfi,
        }
    }

    pub fn to_byte(self) -> u8 {
        let mut byte = self.qfi.value();
        if self.dc == Dc::Data {
            byte |= Self::DC_BIT;
        }
        if self.rqi {
            byte |= Self::RQI_BIT;
        }
        byte
    }

    /// Total over all 256 byte values.
    pub fn from_byte(byte: u8) -> Self {
        SdapHeader {
            dc: if byte & Self::DC_BIT != 0 {
                Dc::Data
            } else {
                Dc::Control
            },
            rqi: byte & Self::RQI_BIT != 0,
            qfi: Qfi(byte & Self::QFI_MASK),
        }
    }

    pub fn encode(self, out: &mut Vec<u8>) {
        out.push(self.to_byte());
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        match bytes.first() {
            Some(&b) => Ok(Self::from_byte(b)),
            None => Err(CodecError::InsufficientBytes {
                needed: Self::ENCODED_LEN,
                available: 0,
            }),
        }
    }
}

/// Simplified IPv4 header: fixed 20-byte encoding, no options.
///
/// `total_length` covers this header plus everything behind it. Fields other
/// than `protocol`, `total_length`, and the addresses are carried verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ipv4Header {
    pub tos: u8,
    pub total_length: u16,
    pub identification: u16,
    pub flags_fragment: u16,
    pub ttl: u8,
    pub protocol: u8,
    pub checksum: u16,
    pub src_addr: u32,
    pub dst_addr: u32,
}

impl Ipv4Header {
    pub const ENCODED_LEN: usize = 20;

    /// Version 4, IHL 5 (20 bytes).
    const VERSION_IHL: u8 = 0x45;

    pub fn new(protocol: u8, total_length: u16, src_addr: u32, dst_addr: u32) -> Self {
        Ipv4Header {
            tos: 0,
            total_length,
            identification: 0,
            flags_fragment: 0,
            ttl: 64,
            protocol,
            checksum: 0,
            src_addr,
            dst_addr,
        }
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        out.push(Self::VERSION_IHL);
        out.push(self.tos);
        out.extend_from_slice(&self.total_length.to_be_bytes());
        out.extend_from_slice(&self.identification.to_be_bytes());
        out.extend_from_slice(&self.flags_fragment.to_be_bytes());
        out.push(self.ttl);
        out.push(self.protocol);
        out.extend_from_slice(&self.checksum.to_be_bytes());
        out.extend_from_slice(&self.src_addr.to_be_bytes());
        out.extend_from_slice(&self.dst_addr.to_be_bytes());
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() < Self::ENCODED_LEN {
            return Err(CodecError::InsufficientBytes {
                needed: Self::ENCODED_LEN,
                available: bytes.len(),
            });
        }
        if bytes[0] != Self::VERSION_IHL {
            return Err(CodecError::UnsupportedIpv4(bytes[0]));
        }
        Ok(Ipv4Header {
            tos: bytes[1],
            total_length: u16::from_be_bytes([bytes[2], bytes[3]]),
            identification: u16::from_be_bytes([bytes[4], bytes[5]]),
            flags_fragment: u16::from_be_bytes([bytes[6], bytes[7]]),
            ttl: bytes[8],
            protocol: bytes[9],
            checksum: u16::from_be_bytes([bytes[10], bytes[11]]),
            src_addr: u32::from_be_bytes([bytes[12], bytes[13], bytes[14], bytes[15]]),
            dst_addr: u32::from_be_bytes([bytes[16], bytes[17], bytes[18], bytes[19]]),
        })
    }
}

/// Simplified UDP header, fixed 8 bytes. `length` covers header plus payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UdpHeader {
    pub src_port: u16,
    pub dst_port: u16,
    pub length: u16,
    pub checksum: u16,
}

impl UdpHeader {
    pub const ENCODED_LEN: usize = 8;

    pub fn new(src_port: u16, dst_port: u16, length: u16) -> Self {
        UdpHeader {
            src_port,
            dst_port,
            length,
            checksum: 0,
        }
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.src_port.to_be_bytes());
        out.extend_from_slice(&self.dst_port.to_be_bytes());
        out.extend_from_slice(&self.length.to_be_bytes());
        out.extend_from_slice(&self.checksum.to_be_bytes());
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() < Self::ENCODED_LEN {
            return Err(CodecError::InsufficientBytes {
                needed: Self::ENCODED_LEN,
                available: bytes.len(),
            });
        }
        Ok(UdpHeader {
            src_port: u16::from_be_bytes([bytes[0], bytes[1]]),
            dst_port: u16::from_be_bytes([bytes[2], bytes[3]]),
            length: u16::from_be_bytes([bytes[4], bytes[5]]),
            checksum: u16::from_be_bytes([bytes[6], bytes[7]]),
        })
    }
}

/// Simplified TCP header, fixed 20 bytes and no options.
///
/// Sequence/ack/offset/flags/window are carried as 12 opaque bytes; the
/// pipeline moves them but never interprets them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TcpHeader {
    pub src_port: u16,
    pub dst_port: u16,
    pub fixed: [u8; 12],
    pub checksum: u16,
    pub urgent_ptr: u16,
}

impl TcpHeader {
    pub const ENCODED_LEN: usize = 20;

    pub fn new(src_port: u16, dst_port: u16) -> Self {
        // Data offset 5 (20-byte header), ACK flag set, zero window.
        let mut fixed = [0u8; 12];
        fixed[8] = 0x50;
        fixed[9] = 0x10;
        TcpHeader {
            src_port,
            dst_port,
            fixed,
            checksum: 0,
            urgent_ptr: 0,
        }
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.src_port.to_be_bytes());
        out.extend_from_slice(&self.dst_port.to_be_bytes());
        out.extend_from_slice(&self.fixed);
        out.extend_from_slice(&self.checksum.to_be_bytes());
        out.extend_from_slice(&self.urgent_ptr.to_be_bytes());
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() < Self::ENCODED_LEN {
            return Err(CodecError::InsufficientBytes {
                needed: Self::ENCODED_LEN,
                available: bytes.len(),
            });
        }
        let mut fixed = [0u8; 12];
        fixed.copy_from_slice(&bytes[4..16]);
        Ok(TcpHeader {
            src_port: u16::from_be_bytes([bytes[0], bytes[1]]),
            dst_port: u16::from_be_bytes([bytes[2], bytes[3]]),
            fixed,
            checksum: u16::from_be_bytes([bytes[16], bytes[17]]),
            urgent_ptr: u16::from_be_bytes([bytes[18], bytes[19]]),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransportKind {
    Udp,
    Tcp,
}

impl TransportKind {
    pub const fn protocol_id(self) -> u8 {
        match self {
            TransportKind::Udp => PROTO_UDP,
            TransportKind::Tcp => PROTO_TCP,
        }
    }
}

/// Either transport header model, dispatched on the IP protocol id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransportHeader {
    Udp(UdpHeader),
    Tcp(TcpHeader),
}

impl TransportHeader {
    pub fn kind(&self) -> TransportKind {
        match self {
            TransportHeader::Udp(_) => TransportKind::Udp,
            TransportHeader::Tcp(_) => TransportKind::Tcp,
        }
    }

    pub fn protocol_id(&self) -> u8 {
        self.kind().protocol_id()
    }

    pub fn encoded_len(&self) -> usize {
        match self {
            TransportHeader::Udp(_) => UdpHeader::ENCODED_LEN,
            TransportHeader::Tcp(_) => TcpHeader::ENCODED_LEN,
        }
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        match self {
            TransportHeader::Udp(h) => h.encode(out),
            TransportHeader::Tcp(h) => h.encode(out),
        }
    }

    /// Decodes the transport header selected by the IP `protocol` field.
    pub fn decode(bytes: &[u8], protocol: u8) -> Result<Self, CodecError> {
        match protocol {
            PROTO_UDP => UdpHeader::decode(bytes).map(TransportHeader::Udp),
            PROTO_TCP => TcpHeader::decode(bytes).map(TransportHeader::Tcp),
            other => Err(CodecError::UnsupportedProtocol(other)),
        }
    }
}
