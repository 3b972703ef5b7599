//! Functional validation checkpoints.
//!
//! During a run the simulator cross-checks every packet against independent
//! expectations (configured tag values, a separately parsed mapping table,
//! the pre-TX byte image, the deterministic payload pattern) and tallies any
//! disagreement here. The checklist condenses those tallies into seven
//! pass/fail checkpoints covering the full TX-to-RX path.

use std::fmt;

/// Raw cross-check tallies collected while a scenario runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidationCounters {
    pub sdap_enabled: bool,
    pub sent: u64,
    pub delivered: u64,
    pub lost: u64,
    /// Packets processed by the TX entity.
    pub tx_processed: u64,
    /// Packets that carried a QosFlowTag at TX time.
    pub tx_tagged: u64,
    /// TX records whose QFI disagreed with the tag the source attached.
    pub tx_tag_qfi_mismatches: u64,
    /// Post-TX packets whose chunk stack, SDAP fields, or length fields were
    /// not exactly one SDAP byte away from the original.
    pub tx_header_insertion_errors: u64,
    /// TX records whose DRB disagreed with an independently parsed table.
    pub tx_mapping_errors: u64,
    /// Packets processed by the RX entity.
    pub rx_processed: u64,
    /// Post-RX packets that did not restore the pre-TX bytes exactly.
    pub rx_removal_errors: u64,
    /// RX records whose QFI disagreed with the QFI the flow sent.
    pub rx_qfi_mismatches: u64,
    /// RX records whose DRB mapping disagreed with the DRB the packet
    /// actually traveled on.
    pub drb_mismatches: u64,
    /// Delivered payloads that did not match the deterministic fill.
    pub integrity_failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped(String),
}

impl CheckStatus {
    pub fn passed(&self) -> bool {
        matches!(self, CheckStatus::Passed)
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Passed => write!(f, "Passed"),
            CheckStatus::Failed => write!(f, "Failed"),
            CheckStatus::Skipped(reason) => write!(f, "Skipped ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecklistRow {
    pub name: &'static str,
    pub status: CheckStatus,
}

pub const CHECKPOINT_NAMES: [&str; 7] = [
    "QFI extraction from QosTagReq tag",
    "SDAP header insertion (QFI, D/C, RQI fields)",
    "QFI-to-DRB logical mapping",
    "SDAP header removal",
    "QFI extraction from SDAP header",
    "DRB mapping verification",
    "End-to-end packet integrity",
];

/// Condenses the counters into the seven-checkpoint checklist.
///
/// Without traffic there is nothing to verify, so every row is skipped (and
/// a skipped checklist does not count as passing). Likewise when SDAP is
/// disabled: the checkpoints describe SDAP behavior.
pub fn checklist(counters: &ValidationCounters) -> Vec<ChecklistRow> {
    let skip_all = |reason: &str| {
        CHECKPOINT_NAMES
            .iter()
            .map(|name| ChecklistRow {
                name,
                status: CheckStatus::Skipped(reason.to_string()),
            })
            .collect()
    };
    if counters.sent == 0 {
        return skip_all("no traffic");
    }
    if !counters.sdap_enabled {
        return skip_all("SDAP disabled");
    }

    let c = counters;
    let results = [
        c.tx_tagged > 0 && c.tx_tag_qfi_mismatches == 0,
        c.tx_processed > 0 && c.tx_header_insertion_errors == 0,
        c.tx_processed > 0 && c.tx_mapping_errors == 0,
        c.rx_processed > 0 && c.rx_removal_errors == 0,
        c.rx_processed > 0 && c.rx_qfi_mismatches == 0,
        c.rx_processed > 0 && c.drb_mismatches == 0,
        c.lost == 0 && c.integrity_failures == 0 && c.delivered == c.sent && c.delivered > 0,
    ];

    CHECKPOINT_NAMES
        .iter()
        .zip(results)
        .map(|(name, ok)| ChecklistRow {
            name,
            status: if ok {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            },
        })
        .collect()
}

pub fn all_passed(rows: &[ChecklistRow]) -> bool {
    !rows.is_empty() && rows.iter().all(|row| row.status.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean_counters() -> ValidationCounters {
        ValidationCounters {
            sdap_enabled: true,
            sent: 100,
            delivered: 100,
            lost: 0,
            tx_processed: 100,
            tx_tagged: 100,
            rx_processed: 100,
            ..Default::default()
        }
    }

    #[test]
    fn clean_run_passes_everything() {
        let rows = checklist(&clean_counters());
        assert_eq!(rows.len(), 7);
        assert!(all_passed(&rows));
    }

    #[test]
    fn drb_mismatch_fails_only_the_verification_row() {
        let mut counters = clean_counters();
        counters.drb_mismatches = 3;
        let rows = checklist(&counters);
        assert!(!all_passed(&rows));
        for row in &rows {
            if row.name == "DRB mapping verification" {
                assert_eq!(row.status, CheckStatus::Failed);
            } else {
                assert_eq!(row.status, CheckStatus::Passed, "{}", row.name);
            }
        }
    }

    #[test]
    fn loss_fails_integrity_row() {
        let mut counters = clean_counters();
        counters.delivered = 99;
        counters.lost = 1;
        let rows = checklist(&counters);
        assert_eq!(rows[6].status, CheckStatus::Failed);
    }

    #[test]
    fn no_traffic_skips_all_rows() {
        let counters = ValidationCounters {
            sdap_enabled: true,
            ..Default::default()
        };
        let rows = checklist(&counters);
        assert!(rows
            .iter()
            .all(|r| r.status == CheckStatus::Skipped("no traffic".to_string())));
        assert!(!all_passed(&rows));
    }

    #[test]
    fn sdap_disabled_skips_all_rows() {
        let counters = ValidationCounters {
            sdap_enabled: false,
            sent: 10,
            ..Default::default()
        };
        let rows = checklist(&counters);
        assert!(rows
            .iter()
            .all(|r| matches!(r.status, CheckStatus::Skipped(_))));
        assert!(!all_passed(&rows));
    }
}
