//! QFI-to-DRB mapping table.
//!
//! The mapping is configured as a string of `qfi:drb` pairs separated by
//! semicolons, e.g. `"1:0;5:1;9:2;63:3"`, under the scenario key
//! `qfiToDrbMapping`. Parsing happens once at initialization; the table is
//! immutable afterwards. Lookup is total: a QFI without an entry resolves to
//! the default DRB 0.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::codec::Qfi;

/// Identifier of a logical Data Radio Bearer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DrbId(pub u32);

impl DrbId {
    pub const fn value(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for DrbId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MappingErrorReason {
    #[error("expected <qfi>:<drb>")]
    MissingColon,
    #[error("token {0:?} is not an integer")]
    NonInteger(String),
    #[error("QFI {0} is outside 0..=63")]
    QfiOutOfRange(i64),
    #[error("DRB id {0} is negative")]
    NegativeDrb(i64),
    #[error("DRB id {0} does not fit in 32 bits")]
    DrbTooLarge(i64),
    #[error("duplicate QFI key {0}")]
    DuplicateQfi(u8),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed qfiToDrbMapping at pair {index} ({pair:?}): {reason}")]
pub struct MalformedMapping {
    /// Zero-based index of the offending `qfi:drb` pair.
    pub index: usize,
    /// The offending pair as written.
    pub pair: String,
    pub reason: MappingErrorReason,
}

/// Immutable map from QFI to logical DRB, with default DRB 0 for unmapped QFIs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QfiDrbTable {
    entries: BTreeMap<Qfi, DrbId>,
}

impl QfiDrbTable {
    pub const DEFAULT_DRB: DrbId = DrbId(0);

    pub fn empty() -> Self {
        QfiDrbTable::default()
    }

    /// Parses a `qfi:drb;qfi:drb;...` configuration string. Whitespace around
    /// tokens is ignored and empty pairs are skipped, so trailing semicolons
    /// are harmless. An empty string yields an empty table.
    pub fn parse(config: &str) -> Result<Self, MalformedMapping> {
        let mut entries = BTreeMap::new();
        for (index, raw_pair) in config.split(';').enumerate() {
            let pair = raw_pair.trim();
            if pair.is_empty() {
                continue;
            }
            let err = |reason| MalformedMapping {
                index,
                pair: pair.to_string(),
                reason,
            };

            let (qfi_token, drb_token) = pair
                .split_once(':')
                .ok_or_else(|| err(MappingErrorReason::MissingColon))?;

            let qfi_value = parse_int(qfi_token).map_err(&err)?;
            if !(0..=i64::from(Qfi::MAX_VALUE)).contains(&qfi_value) {
                return Err(err(MappingErrorReason::QfiOutOfRange(qfi_value)));
            }
            let qfi = Qfi::new(qfi_value as u8).expect("range checked above");

            let drb_value = parse_int(drb_token).map_err(&err)?;
            if drb_value < 0 {
                return Err(err(MappingErrorReason::NegativeDrb(drb_value)));
            }
            if drb_value > i64::from(u32::MAX) {
                return Err(err(MappingErrorReason::DrbTooLarge(drb_value)));
            }

            if entries.insert(qfi, DrbId(drb_value as u32)).is_some() {
                return Err(err(MappingErrorReason::DuplicateQfi(qfi.value())));
            }
        }
        Ok(QfiDrbTable { entries })
    }

    /// Total over all QFIs: unmapped QFIs resolve to [`Self::DEFAULT_DRB`].
    pub fn lookup(&self, qfi: Qfi) -> DrbId {
        self.entries.get(&qfi).copied().unwrap_or(Self::DEFAULT_DRB)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Qfi, DrbId)> + '_ {
        self.entries.iter().map(|(q, d)| (*q, *d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical rendering: pairs sorted by QFI, `;`-separated, no spaces.
    /// `parse(render(t)) == t` for every table.
    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(qfi, drb)| format!("{qfi}:{drb}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn parse_int(token: &str) -> Result<i64, MappingErrorReason> {
    token
        .trim()
        .parse::<i64>()
        .map_err(|_| MappingErrorReason::NonInteger(token.trim().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qfi(v: u8) -> Qfi {
        Qfi::new(v).unwrap()
    }

    #[test]
    fn parses_reference_mapping() {
        let table = QfiDrbTable::parse("1:0;5:1;9:2;63:3").unwrap();
        assert_eq!(table.len(), 4);
        assert_eq!(table.lookup(qfi(1)), DrbId(0));
        assert_eq!(table.lookup(qfi(5)), DrbId(1));
        assert_eq!(table.lookup(qfi(9)), DrbId(2));
        assert_eq!(table.lookup(qfi(63)), DrbId(3));
    }

    #[test]
    fn empty_string_yields_empty_table() {
        let table = QfiDrbTable::parse("").unwrap();
        assert!(table.is_empty());
        assert_eq!(table.lookup(qfi(0)), DrbId(0));
    }

    #[test]
    fn whitespace_and_trailing_separator_tolerated() {
        let table = QfiDrbTable::parse(" 1 : 0 ;  5:1 ; ").unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.lookup(qfi(5)), DrbId(1));
    }

    #[test]
    fn duplicate_qfi_is_a_hard_error() {
        let err = QfiDrbTable::parse("5:1;5:2").unwrap_err();
        assert_eq!(err.index, 1);
        assert_eq!(err.reason, MappingErrorReason::DuplicateQfi(5));
    }

    #[test]
    fn rejects_bad_tokens() {
        assert_eq!(
            QfiDrbTable::parse("a:1").unwrap_err().reason,
            MappingErrorReason::NonInteger("a".to_string())
        );
        assert_eq!(
            QfiDrbTable::parse("64:1").unwrap_err().reason,
            MappingErrorReason::QfiOutOfRange(64)
        );
        assert_eq!(
            QfiDrbTable::parse("-1:0").unwrap_err().reason,
            MappingErrorReason::QfiOutOfRange(-1)
        );
        assert_eq!(
            QfiDrbTable::parse("1:-2").unwrap_err().reason,
            MappingErrorReason::NegativeDrb(-2)
        );
        assert_eq!(
            QfiDrbTable::parse("12").unwrap_err().reason,
            MappingErrorReason::MissingColon
        );
    }

    #[test]
    fn unmapped_qfi_falls_back_to_default_drb() {
        let table = QfiDrbTable::parse("1:0;5:1;9:2;63:3").unwrap();
        assert_eq!(table.lookup(qfi(7)), QfiDrbTable::DEFAULT_DRB);
    }

    #[test]
    fn render_parse_roundtrip() {
        let table = QfiDrbTable::parse(" 9:2;1:0 ; 5:1;63:3").unwrap();
        assert_eq!(table.render(), "1:0;5:1;9:2;63:3");
        assert_eq!(QfiDrbTable::parse(&table.render()).unwrap(), table);
    }

    #[test]
    fn same_string_gives_identical_lookups_everywhere() {
        // TX and RX entities parse the same configuration string; their
        // lookups must agree for every QFI in range.
        let config = "1:0;5:1;9:2;63:3";
        let tx = QfiDrbTable::parse(config).unwrap();
        let rx = QfiDrbTable::parse(config).unwrap();
        for value in 0..=Qfi::MAX_VALUE {
            assert_eq!(tx.lookup(qfi(value)), rx.lookup(qfi(value)));
        }
    }
}
