//! Transmit- and receive-side SDAP entities.

pub mod rx;
pub mod tx;

pub use rx::{RxRecord, RxSdapEntity};
pub use tx::{TxRecord, TxSdapEntity};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdapError {
    #[error("malformed chunk stack: {0}")]
    MalformedStack(&'static str),
    #[error("unsupported transport protocol id {0} (expected 6 or 17)")]
    UnsupportedProtocol(u8),
    #[error("length field underflow: {0}")]
    LengthUnderflow(&'static str),
    #[error("length field overflow: {0}")]
    LengthOverflow(&'static str),
}
