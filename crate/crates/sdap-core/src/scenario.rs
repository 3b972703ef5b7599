//! Scenario configuration: typed experiment description plus the INI-style
//! file format that describes it.
//!
//! A scenario file has a `[general]` section (duration, seed, SDAP switch,
//! `qfiToDrbMapping` string), a `[link]` section for the bottleneck, one
//! `[flow.N]` section per traffic source, and an optional free-form
//! `[radio]` section that is echoed into reports but has no behavioral
//! effect. Comments are full lines starting with `#`; inline comments are
//! not supported because mapping strings legitimately contain `;`.

use std::path::Path;

use thiserror::Error;

use crate::codec::{Qfi, TransportKind};
use crate::mapping::{MalformedMapping, QfiDrbTable};
use crate::time::SimTime;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read scenario file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("key {key}: {message}")]
    InvalidValue { key: String, message: String },
    #[error("missing required key {0}")]
    MissingKey(String),
    #[error("unknown key {0}")]
    UnknownKey(String),
    #[error("duplicate key {0}")]
    DuplicateKey(String),
    #[error("key {key}: {source}")]
    Mapping {
        key: String,
        #[source]
        source: MalformedMapping,
    },
    #[error("{0}")]
    Invariant(String),
}

/// One constant-bit-rate traffic source.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub flow_id: u32,
    pub qfi: Qfi,
    /// Packets per second.
    pub packet_rate: f64,
    /// Application payload bytes per packet.
    pub payload_size: usize,
    pub src_port: u16,
    pub dst_port: u16,
    pub transport: TransportKind,
    pub start_time: SimTime,
    pub stop_time: SimTime,
    /// Maximum per-packet emission jitter in nanoseconds (uniform, seeded).
    pub jitter_nanos: u64,
}

impl FlowConfig {
    /// Nominal inter-packet gap in nanoseconds.
    pub fn period_nanos(&self) -> u64 {
        (1e9 / self.packet_rate).round() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    /// One FIFO queue shared by every packet.
    SharedFifo,
    /// One FIFO queue per DRB, served round-robin one packet per turn.
    PerDrbRoundRobin,
}

impl Scheduler {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheduler::SharedFifo => "sharedFifo",
            Scheduler::PerDrbRoundRobin => "perDrbRoundRobin",
        }
    }
}

/// The bottleneck link standing in for everything below SDAP.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    /// Drain rate in bytes per second.
    pub service_rate: u64,
    pub scheduler: Scheduler,
    pub propagation_delay_nanos: u64,
    /// Per-queue capacity in packets; 0 means unbounded.
    pub per_queue_capacity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub duration_nanos: u64,
    pub seed: u64,
    pub sdap_enabled: bool,
    /// The `qfiToDrbMapping` string shared by both SDAP entities.
    pub qfi_to_drb_mapping: String,
    /// Optional receive-side override, used to exercise mapping-mismatch
    /// detection; `None` means the RX entity uses the shared string.
    pub qfi_to_drb_mapping_rx: Option<String>,
    pub flows: Vec<FlowConfig>,
    pub link: LinkConfig,
    /// Free-form `[radio]` keys recorded for provenance only.
    pub radio_notes: Vec<(String, String)>,
}

impl ScenarioConfig {
    pub fn from_ini_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_ini_str(&text)
    }

    pub fn from_ini_str(text: &str) -> Result<Self, ConfigError> {
        let raw = RawIni::parse(text)?;
        let config = Self::from_raw(raw)?;
        config.validate()?;
        Ok(config)
    }

    pub fn tx_table(&self) -> Result<QfiDrbTable, ConfigError> {
        QfiDrbTable::parse(&self.qfi_to_drb_mapping).map_err(|source| ConfigError::Mapping {
            key: "general.qfiToDrbMapping".to_string(),
            source,
        })
    }

    pub fn rx_table(&self) -> Result<QfiDrbTable, ConfigError> {
        match &self.qfi_to_drb_mapping_rx {
            Some(raw) => QfiDrbTable::parse(raw).map_err(|source| ConfigError::Mapping {
                key: "general.qfiToDrbMappingRx".to_string(),
                source,
            }),
            None => self.tx_table(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.duration_nanos == 0 {
            return Err(ConfigError::Invariant(
                "general.duration must be positive".to_string(),
            ));
        }
        self.tx_table()?;
        self.rx_table()?;
        if self.link.service_rate == 0 {
            return Err(ConfigError::Invariant(
                "link.serviceRate must be positive".to_string(),
            ));
        }

        let mut seen_ids = std::collections::BTreeSet::new();
        for flow in &self.flows {
            let prefix = format!("flow.{}", flow.flow_id);
            if !seen_ids.insert(flow.flow_id) {
                return Err(ConfigError::Invariant(format!(
                    "{prefix}: duplicate flow id"
                )));
            }
            if !flow.packet_rate.is_finite() || flow.packet_rate <= 0.0 {
                return Err(ConfigError::Invariant(format!(
                    "{prefix}.packetRate must be a positive number"
                )));
            }
            if flow.period_nanos() == 0 {
                return Err(ConfigError::Invariant(format!(
                    "{prefix}.packetRate exceeds one packet per nanosecond"
                )));
            }
            if flow.payload_size == 0 || flow.payload_size > 65_000 {
                return Err(ConfigError::Invariant(format!(
                    "{prefix}.payloadSize must be in 1..=65000"
                )));
            }
            if flow.stop_time <= flow.start_time {
                return Err(ConfigError::Invariant(format!(
                    "{prefix}.stopTime must be after startTime"
                )));
            }
        }
        Ok(())
    }

    /// Canonical text rendering: what was actually in effect for a run.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("[general]\n");
        out.push_str(&format!(
            "duration = {}\n",
            SimTime::from_nanos(self.duration_nanos)
        ));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("sdapEnabled = {}\n", self.sdap_enabled));
        out.push_str(&format!("qfiToDrbMapping = {}\n", self.qfi_to_drb_mapping));
        if let Some(rx) = &self.qfi_to_drb_mapping_rx {
            out.push_str(&format!("qfiToDrbMappingRx = {rx}\n"));
        }
        out.push_str("\n[link]\n");
        out.push_str(&format!("serviceRate = {}\n", self.link.service_rate));
        out.push_str(&format!("scheduler = {}\n", self.link.scheduler.as_str()));
        out.push_str(&format!(
            "propagationDelay = {}\n",
            SimTime::from_nanos(self.link.propagation_delay_nanos)
        ));
        out.push_str(&format!(
            "perQueueCapacity = {}\n",
            self.link.per_queue_capacity
        ));
        for flow in &self.flows {
            out.push_str(&format!("\n[flow.{}]\n", flow.flow_id));
            out.push_str(&format!("qfi = {}\n", flow.qfi));
            out.push_str(&format!("packetRate = {}\n", flow.packet_rate));
            out.push_str(&format!("payloadSize = {}\n", flow.payload_size));
            out.push_str(&format!("srcPort = {}\n", flow.src_port));
            out.push_str(&format!("dstPort = {}\n", flow.dst_port));
            out.push_str(&format!(
                "transport = {}\n",
                match flow.transport {
                    TransportKind::Udp => "udp",
                    TransportKind::Tcp => "tcp",
                }
            ));
            out.push_str(&format!("startTime = {}\n", flow.start_time));
            out.push_str(&format!("stopTime = {}\n", flow.stop_time));
            out.push_str(&format!(
                "jitter = {}\n",
                SimTime::from_nanos(flow.jitter_nanos)
            ));
        }
        if !self.radio_notes.is_empty() {
            out.push_str("\n[radio]\n");
            for (key, value) in &self.radio_notes {
                out.push_str(&format!("{key} = {value}\n"));
            }
        }
        out
    }

    fn from_raw(raw: RawIni) -> Result<Self, ConfigError> {
        let mut general = Section::named("general");
        let mut link = Section::named("link");
        let mut flows_raw: Vec<(u32, Section)> = Vec::new();
        let mut radio_notes = Vec::new();

        for (name, entries) in raw.sections {
            if name == "general" {
                general.fill(entries)?;
            } else if name == "link" {
                link.fill(entries)?;
            } else if name == "radio" {
                for (key, value, _) in entries {
                    radio_notes.push((key, value));
                }
            } else if let Some(id_text) = name.strip_prefix("flow.") {
                let flow_id: u32 =
                    id_text
                        .parse()
                        .map_err(|_| ConfigError::InvalidValue {
                            key: format!("[{name}]"),
                            message: "flow section must be named [flow.<integer>]".to_string(),
                        })?;
                if flows_raw.iter().any(|(id, _)| *id == flow_id) {
                    return Err(ConfigError::DuplicateKey(format!("[flow.{flow_id}]")));
                }
                let mut section = Section {
                    name: format!("flow.{flow_id}"),
                    entries: Vec::new(),
                };
                section.fill(entries)?;
                flows_raw.push((flow_id, section));
            } else {
                return Err(ConfigError::UnknownKey(format!("[{name}]")));
            }
        }

        let duration_nanos = general.required("duration", parse_secs_nanos)?;
        let seed = general.optional("seed", 0u64, parse_u64)?;
        let sdap_enabled = general.optional("sdapEnabled", true, parse_bool)?;
        let qfi_to_drb_mapping =
            general.optional("qfiToDrbMapping", String::new(), parse_string)?;
        let qfi_to_drb_mapping_rx = general.maybe("qfiToDrbMappingRx", parse_string)?;
        general.reject_unknown()?;

        let service_rate = link.required("serviceRate", parse_u64)?;
        let scheduler = link.optional(
            "scheduler",
            Scheduler::PerDrbRoundRobin,
            parse_scheduler,
        )?;
        let propagation_delay_nanos = link.optional("propagationDelay", 0u64, parse_secs_nanos)?;
        let per_queue_capacity = link.optional("perQueueCapacity", 0usize, parse_usize)?;
        link.reject_unknown()?;

        let mut flows = Vec::new();
        for (flow_id, mut section) in flows_raw {
            let qfi_value: u8 = section.required("qfi", parse_u8)?;
            let qfi = Qfi::new(qfi_value).map_err(|e| ConfigError::InvalidValue {
                key: format!("flow.{flow_id}.qfi"),
                message: e.to_string(),
            })?;
            let packet_rate = section.required("packetRate", parse_f64)?;
            let payload_size = section.required("payloadSize", parse_usize)?;
            let src_port = section.optional("srcPort", 1000 + flow_id as u16, parse_u16)?;
            let dst_port = section.optional("dstPort", 2000 + flow_id as u16, parse_u16)?;
            let transport = section.optional("transport", TransportKind::Udp, parse_transport)?;
            let start_time =
                SimTime::from_nanos(section.optional("startTime", 0u64, parse_secs_nanos)?);
            let stop_time =
                SimTime::from_nanos(section.optional("stopTime", duration_nanos, parse_secs_nanos)?);
            let jitter_nanos = section.optional("jitter", 0u64, parse_secs_nanos)?;
            section.reject_unknown()?;

            flows.push(FlowConfig {
                flow_id,
                qfi,
                packet_rate,
                payload_size,
                src_port,
                dst_port,
                transport,
                start_time,
                stop_time,
                jitter_nanos,
            });
        }
        flows.sort_by_key(|f| f.flow_id);

        Ok(ScenarioConfig {
            duration_nanos,
            seed,
            sdap_enabled,
            qfi_to_drb_mapping,
            qfi_to_drb_mapping_rx,
            flows,
            link: LinkConfig {
                service_rate,
                scheduler,
                propagation_delay_nanos,
                per_queue_capacity,
            },
            radio_notes,
        })
    }
}

/// `(key, value, line)` entries of one section.
type RawEntries = Vec<(String, String, usize)>;

/// Raw `section -> [(key, value, line)]` view of an INI document.
struct RawIni {
    sections: Vec<(String, RawEntries)>,
}

impl RawIni {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut sections: Vec<(String, RawEntries)> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::Syntax {
                        line: line_no,
                        message: "unterminated section header".to_string(),
                    })?
                    .trim()
                    .to_string();
                if sections.iter().any(|(n, _)| *n == name) {
                    return Err(ConfigError::Syntax {
                        line: line_no,
                        message: format!("section [{name}] declared twice"),
                    });
                }
                sections.push((name, Vec::new()));
            } else if let Some((key, value)) = line.split_once('=') {
                let Some((_, entries)) = sections.last_mut() else {
                    return Err(ConfigError::Syntax {
                        line: line_no,
                        message: "key outside of any [section]".to_string(),
                    });
                };
                entries.push((key.trim().to_string(), value.trim().to_string(), line_no));
            } else {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("expected `key = value`, got {line:?}"),
                });
            }
        }
        Ok(RawIni { sections })
    }
}

/// A typed view over one section's key/value pairs.
struct Section {
    name: String,
    entries: RawEntries,
}

impl Section {
    fn named(name: &str) -> Self {
        Section {
            name: name.to_string(),
            entries: Vec::new(),
        }
    }

    fn fill(&mut self, entries: RawEntries) -> Result<(), ConfigError> {
        for (key, value, line) in entries {
            if self.entries.iter().any(|(k, _, _)| *k == key) {
                return Err(ConfigError::DuplicateKey(format!(
                    "{}.{key} (line {line})",
                    self.name
                )));
            }
            self.entries.push((key, value, line));
        }
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<String> {
        let pos = self.entries.iter().position(|(k, _, _)| k == key)?;
        Some(self.entries.remove(pos).1)
    }

    fn qualified(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn required<T>(
        &mut self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, ConfigError> {
        match self.take(key) {
            Some(value) => parse(&value).map_err(|message| ConfigError::InvalidValue {
                key: self.qualified(key),
                message,
            }),
            None => Err(ConfigError::MissingKey(self.qualified(key))),
        }
    }

    fn optional<T>(
        &mut self,
        key: &str,
        default: T,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, ConfigError> {
        match self.take(key) {
            Some(value) => parse(&value).map_err(|message| ConfigError::InvalidValue {
                key: self.qualified(key),
                message,
            }),
            None => Ok(default),
        }
    }

    fn maybe<T>(
        &mut self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, ConfigError> {
        match self.take(key) {
            Some(value) => parse(&value)
                .map(Some)
                .map_err(|message| ConfigError::InvalidValue {
                    key: self.qualified(key),
                    message,
                }),
            None => Ok(None),
        }
    }

    fn reject_unknown(&self) -> Result<(), ConfigError> {
        match self.entries.first() {
            Some((key, _, line)) => Err(ConfigError::UnknownKey(format!(
                "{}.{key} (line {line})",
                self.name
            ))),
            None => Ok(()),
        }
    }
}

fn parse_string(value: &str) -> Result<String, String> {
    Ok(value.to_string())
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true or false, got {other:?}")),
    }
}

fn parse_u64(value: &str) -> Result<u64, String> {
    value
        .parse::<u64>()
        .map_err(|_| format!("expected a non-negative integer, got {value:?}"))
}

fn parse_u16(value: &str) -> Result<u16, String> {
    value
        .parse::<u16>()
        .map_err(|_| format!("expected an integer in 0..=65535, got {value:?}"))
}

fn parse_u8(value: &str) -> Result<u8, String> {
    value
        .parse::<u8>()
        .map_err(|_| format!("expected a small non-negative integer, got {value:?}"))
}

fn parse_usize(value: &str) -> Result<usize, String> {
    value
        .parse::<usize>()
        .map_err(|_| format!("expected a non-negative integer, got {value:?}"))
}

fn parse_f64(value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|_| format!("expected a number, got {value:?}"))
}

/// Decimal seconds to integer nanoseconds.
fn parse_secs_nanos(value: &str) -> Result<u64, String> {
    let secs = parse_f64(value)?;
    if !secs.is_finite() || secs < 0.0 {
        return Err(format!("expected a non-negative duration in seconds, got {value:?}"));
    }
    if secs > 1e9 {
        return Err("duration too large (max 1e9 seconds)".to_string());
    }
    Ok((secs * 1e9).round() as u64)
}

fn parse_transport(value: &str) -> Result<TransportKind, String> {
    match value {
        "udp" => Ok(TransportKind::Udp),
        "tcp" => Ok(TransportKind::Tcp),
        other => Err(format!("expected udp or tcp, got {other:?}")),
    }
}

fn parse_scheduler(value: &str) -> Result<Scheduler, String> {
    match value {
        "sharedFifo" => Ok(Scheduler::SharedFifo),
        "perDrbRoundRobin" => Ok(Scheduler::PerDrbRoundRobin),
        other => Err(format!(
            "expected sharedFifo or perDrbRoundRobin, got {other:?}"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[general]
duration = 20
seed = 1
sdapEnabled = true
qfiToDrbMapping = 1:0;5:1;9:2;63:3

[link]
serviceRate = 1000000
scheduler = perDrbRoundRobin
propagationDelay = 0.005

[flow.0]
qfi = 1
packetRate = 50
payloadSize = 160
";

    #[test]
    fn parses_minimal_scenario() {
        let config = ScenarioConfig::from_ini_str(MINIMAL).unwrap();
        assert_eq!(config.duration_nanos, 20_000_000_000);
        assert_eq!(config.seed, 1);
        assert!(config.sdap_enabled);
        assert_eq!(config.qfi_to_drb_mapping, "1:0;5:1;9:2;63:3");
        assert_eq!(config.link.service_rate, 1_000_000);
        assert_eq!(config.link.propagation_delay_nanos, 5_000_000);
        assert_eq!(config.flows.len(), 1);

        let flow = &config.flows[0];
        assert_eq!(flow.qfi.value(), 1);
        assert_eq!(flow.period_nanos(), 20_000_000);
        assert_eq!(flow.src_port, 1000);
        assert_eq!(flow.dst_port, 2000);
        assert_eq!(flow.transport, TransportKind::Udp);
        assert_eq!(flow.start_time, SimTime::ZERO);
        // stopTime defaults to the scenario duration.
        assert_eq!(flow.stop_time, SimTime::from_nanos(20_000_000_000));
    }

    #[test]
    fn mapping_string_keeps_semicolons() {
        let config = ScenarioConfig::from_ini_str(MINIMAL).unwrap();
        let table = config.tx_table().unwrap();
        assert_eq!(table.len(), 4);
    }

    #[test]
    fn rx_override_defaults_to_shared_string() {
        let config = ScenarioConfig::from_ini_str(MINIMAL).unwrap();
        assert_eq!(config.rx_table().unwrap(), config.tx_table().unwrap());

        let with_override = MINIMAL.replace(
            "qfiToDrbMapping = 1:0;5:1;9:2;63:3",
            "qfiToDrbMapping = 1:0;5:1;9:2;63:3\nqfiToDrbMappingRx = 1:0",
        );
        let config = ScenarioConfig::from_ini_str(&with_override).unwrap();
        assert_ne!(config.rx_table().unwrap(), config.tx_table().unwrap());
    }

    #[test]
    fn unknown_key_is_rejected_with_its_name() {
        let bad = MINIMAL.replace("seed = 1", "seed = 1\nbogusKnob = 3");
        let err = ScenarioConfig::from_ini_str(&bad).unwrap_err();
        assert!(err.to_string().contains("general.bogusKnob"), "{err}");
    }

    #[test]
    fn missing_required_key_is_named() {
        let bad = MINIMAL.replace("payloadSize = 160\n", "");
        let err = ScenarioConfig::from_ini_str(&bad).unwrap_err();
        assert!(err.to_string().contains("flow.0.payloadSize"), "{err}");
    }

    #[test]
    fn duplicate_mapping_key_is_reported() {
        let bad = MINIMAL.replace("1:0;5:1;9:2;63:3", "5:1;5:2");
        let err = ScenarioConfig::from_ini_str(&bad).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("qfiToDrbMapping"), "{text}");
    }

    #[test]
    fn invariants_are_enforced() {
        let zero_rate = MINIMAL.replace("packetRate = 50", "packetRate = 0");
        assert!(ScenarioConfig::from_ini_str(&zero_rate).is_err());

        let zero_duration = MINIMAL.replace("duration = 20", "duration = 0");
        assert!(ScenarioConfig::from_ini_str(&zero_duration).is_err());

        let bad_window = MINIMAL.replace(
            "payloadSize = 160",
            "payloadSize = 160\nstartTime = 5\nstopTime = 5",
        );
        assert!(ScenarioConfig::from_ini_str(&bad_window).is_err());
    }

    #[test]
    fn radio_section_is_recorded_but_inert() {
        let with_radio = format!("{MINIMAL}\n[radio]\nresourceBlocks = 50\ntxPowerGnb = 40dBm\n");
        let config = ScenarioConfig::from_ini_str(&with_radio).unwrap();
        assert_eq!(config.radio_notes.len(), 2);
        assert_eq!(config.radio_notes[0].0, "resourceBlocks");
    }

    #[test]
    fn render_reparses_to_same_config() {
        let config = ScenarioConfig::from_ini_str(MINIMAL).unwrap();
        let echoed = ScenarioConfig::from_ini_str(&config.render()).unwrap();
        assert_eq!(echoed, config);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = ScenarioConfig::from_ini_str("[general\nduration = 1").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }), "{err}");

        let err = ScenarioConfig::from_ini_str("duration = 1").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }), "{err}");
    }
}
