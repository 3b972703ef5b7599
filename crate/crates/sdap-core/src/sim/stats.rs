//! Per-flow latency statistics and the stats CSV format.

/// Mean and sample standard deviation over latency samples.
///
/// With fewer than two samples the standard deviation is reported as zero,
/// and with no samples the mean is zero as well; `samples` carries the count
/// so degenerate values are distinguishable from real ones.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LatencySummary {
    pub mean_secs: f64,
    pub std_secs: f64,
    pub samples: u64,
}

pub fn latency_summary(samples_nanos: &[u64]) -> LatencySummary {
    let n = samples_nanos.len();
    if n == 0 {
        return LatencySummary::default();
    }
    // Work in nanoseconds: sample values and their exact sum survive the trip
    // through f64, so identical samples yield a standard deviation of exactly
    // zero instead of accumulated rounding noise.
    let sum: u128 = samples_nanos.iter().map(|&ns| u128::from(ns)).sum();
    let mean_nanos = sum as f64 / n as f64;
    let std_nanos = if n >= 2 {
        let var = samples_nanos
            .iter()
            .map(|&ns| {
                let d = ns as f64 - mean_nanos;
                d * d
            })
            .sum::<f64>()
            / (n - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };
    LatencySummary {
        mean_secs: mean_nanos / 1e9,
        std_secs: std_nanos / 1e9,
        samples: n as u64,
    }
}

/// Final per-flow accounting for one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowStats {
    pub flow_id: u32,
    pub qfi: u8,
    /// The DRB the flow's packets traveled on (0 when SDAP is disabled).
    pub drb: u32,
    pub sent: u64,
    pub received: u64,
    pub lost: u64,
    pub mean_latency_secs: f64,
    pub std_latency_secs: f64,
    /// Latency sample count behind the mean/std; 0 or 1 flags degenerate
    /// statistics reported as zero.
    pub latency_samples: u64,
    pub drb_mismatches: u64,
    pub integrity_failures: u64,
}

pub const CSV_HEADER: &str = "flow_id,qfi,drb,sent,received,lost,mean_latency_ms,std_latency_ms,drb_mismatches,integrity_failures";

impl FlowStats {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{:.6},{},{}",
            self.flow_id,
            self.qfi,
            self.drb,
            self.sent,
            self.received,
            self.lost,
            self.mean_latency_secs * 1e3,
            self.std_latency_secs * 1e3,
            self.drb_mismatches,
            self.integrity_failures
        )
    }
}

/// Renders the stats CSV, one row per flow, sorted by flow id.
pub fn render_csv(stats: &[FlowStats]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in stats {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
    out
}
