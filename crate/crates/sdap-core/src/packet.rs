//! Layered packet representation.
//!
//! A [`Packet`] is an ordered stack of typed header chunks (front = outermost)
//! over a payload, plus out-of-band metadata tags. Tags annotate the packet
//! for other layers but never appear in the serialized byte stream, and
//! neither do the simulator bookkeeping fields (`created_at`, `flow_id`,
//! `seq`).

use std::collections::VecDeque;

use thiserror::Error;

use crate::codec::{CodecError, Ipv4Header, Qfi, SdapHeader, TransportHeader};
use crate::time::SimTime;

/// One header in the chunk stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeaderChunk {
    Ipv4(Ipv4Header),
    Transport(TransportHeader),
    Sdap(SdapHeader),
}

impl HeaderChunk {
    pub fn encoded_len(&self) -> usize {
        match self {
            HeaderChunk::Ipv4(_) => Ipv4Header::ENCODED_LEN,
            HeaderChunk::Transport(t) => t.encoded_len(),
            HeaderChunk::Sdap(_) => SdapHeader::ENCODED_LEN,
        }
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        match self {
            HeaderChunk::Ipv4(h) => h.encode(out),
            HeaderChunk::Transport(h) => h.encode(out),
            HeaderChunk::Sdap(h) => h.encode(out),
        }
    }
}

/// Per-packet annotation carrying the requested QFI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QosFlowTag {
    pub qfi: Qfi,
}

/// Tag kinds; a packet holds at most one tag per kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagKind {
    QosFlow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    QosFlow(QosFlowTag),
}

impl Tag {
    pub fn kind(&self) -> TagKind {
        match self {
            Tag::QosFlow(_) => TagKind::QosFlow,
        }
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("packet has no header chunks")]
pub struct EmptyPacket;

/// A packet moving through the simulated stack.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    chunks: VecDeque<HeaderChunk>,
    payload: Vec<u8>,
    tags: Vec<Tag>,
    /// Creation instant stamped by the traffic source.
    pub created_at: SimTime,
    /// Simulator-assigned application flow index.
    pub flow_id: u32,
    /// Per-flow emission sequence number.
    pub seq: u64,
}

impl Packet {
    pub fn new(payload: Vec<u8>) -> Self {
        Packet {
            chunks: VecDeque::new(),
            payload,
            tags: Vec::new(),
            created_at: SimTime::ZERO,
            flow_id: 0,
            seq: 0,
        }
    }

    /// Inserts `chunk` as the new outermost header.
    pub fn push_front(&mut self, chunk: HeaderChunk) {
        self.chunks.push_front(chunk);
    }

    /// Removes and returns the outermost header.
    pub fn pop_front(&mut self) -> Result<HeaderChunk, EmptyPacket> {
        self.chunks.pop_front().ok_or(EmptyPacket)
    }

    pub fn peek_front(&self) -> Option<&HeaderChunk> {
        self.chunks.front()
    }

    pub fn chunks(&self) -> impl Iterator<Item = &HeaderChunk> {
        self.chunks.iter()
    }

    pub fn chunk_count(&self) -> usize {
        self.chunks.len()
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// Stores `tag`, replacing any existing tag of the same kind.
    pub fn set_tag(&mut self, tag: Tag) {
        match self.tags.iter_mut().find(|t| t.kind() == tag.kind()) {
            Some(slot) => *slot = tag,
            None => self.tags.push(tag),
        }
    }

    pub fn tag(&self, kind: TagKind) -> Option<&Tag> {
        self.tags.iter().find(|t| t.kind() == kind)
    }

    pub fn qos_flow_tag(&self) -> Option<QosFlowTag> {
        self.tag(TagKind::QosFlow).map(|Tag::QosFlow(t)| *t)
    }

    /// Sum of chunk encoded sizes plus payload length.
    pub fn serialized_len(&self) -> usize {
        self.chunks.iter().map(HeaderChunk::encoded_len).sum::<usize>() + self.payload.len()
    }

    /// Serializes chunks front to back, then the payload. Tags and simulator
    /// metadata are not part of the byte stream.
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        for chunk in &self.chunks {
            chunk.encode(&mut out);
        }
        out.extend_from_slice(&self.payload);
        out
    }

    /// Parses a pipeline-shaped byte stream: IPv4, then the transport header
    /// selected by the IP protocol field, then (when `with_sdap`) one SDAP
    /// header, then payload. The inverse of [`Packet::serialize`] for
    /// pipeline-legal stacks; metadata and tags start out empty.
    pub fn parse(bytes: &[u8], with_sdap: bool) -> Result<Packet, CodecError> {
        let ip = Ipv4Header::decode(bytes)?;
        let mut offset = Ipv4Header::ENCODED_LEN;

        let transport = TransportHeader::decode(&bytes[offset..], ip.protocol)?;
        offset += transport.encoded_len();

        let mut packet = if with_sdap {
            let sdap = SdapHeader::decode(&bytes[offset..])?;
            offset += SdapHeader::ENCODED_LEN;
            let mut p = Packet::new(bytes[offset..].to_vec());
            p.push_front(HeaderChunk::Sdap(sdap));
            p
        } else {
            Packet::new(bytes[offset..].to_vec())
        };
        packet.push_front(HeaderChunk::Transport(transport));
        packet.push_front(HeaderChunk::Ipv4(ip));
        Ok(packet)
    }
}
