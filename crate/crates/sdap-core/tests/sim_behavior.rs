//! End-to-end behavior of the scenario simulator.

use sdap_core::scenario::{FlowConfig, LinkConfig, ScenarioConfig, Scheduler};
use sdap_core::sim::{run_scenario, CheckStatus};
use sdap_core::{Qfi, SimTime, TransportKind};

fn flow(flow_id: u32, qfi: u8, rate: f64, payload: usize, stop_secs: f64) -> FlowConfig {
    FlowConfig {
        flow_id,
        qfi: Qfi::new(qfi).unwrap(),
        packet_rate: rate,
        payload_size: payload,
        src_port: 1000 + flow_id as u16,
        dst_port: 2000 + flow_id as u16,
        transport: TransportKind::Udp,
        start_time: SimTime::ZERO,
        stop_time: SimTime::from_nanos((stop_secs * 1e9) as u64),
        jitter_nanos: 0,
    }
}

fn config(flows: Vec<FlowConfig>, duration_secs: f64, service_rate: u64) -> ScenarioConfig {
    ScenarioConfig {
        duration_nanos: (duration_secs * 1e9) as u64,
        seed: 1,
        sdap_enabled: true,
        qfi_to_drb_mapping: "1:0;5:1;9:2;63:3".to_string(),
        qfi_to_drb_mapping_rx: None,
        flows,
        link: LinkConfig {
            service_rate,
            scheduler: Scheduler::PerDrbRoundRobin,
            propagation_delay_nanos: 5_000_000,
            per_queue_capacity: 0,
        },
        radio_notes: Vec::new(),
    }
}

/// Extracts `(flow, seq, drb)` triples from `TX`/`RX` timestamp lines,
/// in log order.
fn log_order(log: &str, marker: &str) -> Vec<(u32, u64, u32)> {
    log.lines()
        .filter(|l| l.starts_with("t=") && l.contains(marker))
        .map(|l| {
            let mut flow = None;
            let mut seq = None;
            let mut drb = None;
            for token in l.split_whitespace() {
                if let Some((key, value)) = token.split_once('=') {
                    match key {
                        "flow" => flow = value.parse().ok(),
                        "seq" => seq = value.parse().ok(),
                        "drb" => drb = value.parse().ok(),
                        _ => {}
                    }
                }
            }
            (flow.unwrap(), seq.unwrap(), drb.unwrap())
        })
        .collect()
}

#[test]
fn single_flow_on_idle_link_matches_closed_form() {
    // One 10 pps flow far below capacity: every packet sees an idle server,
    // so latency is exactly transmission time plus propagation delay.
    let cfg = config(vec![flow(0, 5, 10.0, 100, 1.0)], 1.0, 100_000);
    let report = run_scenario(&cfg).unwrap();

    let stats = &report.flows[0];
    assert_eq!(stats.sent, 10);
    assert_eq!(stats.received, 10);
    assert_eq!(stats.lost, 0);

    // 129 wire bytes (20 IP + 8 UDP + 1 SDAP + 100 payload) at 100 kB/s.
    let service_nanos = 129u64 * 1_000_000_000 / 100_000;
    let expected_secs = (service_nanos + 5_000_000) as f64 / 1e9;
    assert_eq!(stats.mean_latency_secs, expected_secs);
    assert_eq!(stats.std_latency_secs, 0.0);
    assert_eq!(stats.latency_samples, 10);
}

#[test]
fn reference_four_flow_scenario_is_clean() {
    let flows = vec![
        flow(0, 1, 50.0, 160, 20.0),
        flow(1, 5, 50.0, 160, 20.0),
        flow(2, 9, 50.0, 160, 20.0),
        flow(3, 63, 50.0, 160, 20.0),
    ];
    let cfg = config(flows, 20.0, 1_000_000);
    let report = run_scenario(&cfg).unwrap();

    let expected_drb = [0u32, 1, 2, 3];
    for (stats, drb) in report.flows.iter().zip(expected_drb) {
        assert_eq!(stats.sent, 1000, "flow {}", stats.flow_id);
        assert_eq!(stats.received, 1000, "flow {}", stats.flow_id);
        assert_eq!(stats.lost, 0);
        assert_eq!(stats.drb, drb);
        assert_eq!(stats.drb_mismatches, 0);
        assert_eq!(stats.integrity_failures, 0);
    }
    assert!(report.warnings.is_empty());

    let rows = report.checklist();
    assert_eq!(rows.len(), 7);
    assert!(
        rows.iter().all(|r| r.status == CheckStatus::Passed),
        "{rows:?}"
    );
}

#[test]
fn identical_configs_produce_identical_reports() {
    let flows = vec![flow(0, 1, 50.0, 160, 2.0), flow(1, 5, 50.0, 160, 2.0)];
    let cfg = config(flows, 2.0, 50_000);
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.event_log.as_bytes(), b.event_log.as_bytes());
    assert_eq!(a.stats_csv(), b.stats_csv());
}

#[test]
fn disabling_sdap_bypasses_entities_and_shares_one_queue() {
    let flows = vec![
        flow(0, 1, 50.0, 160, 2.0),
        flow(1, 5, 50.0, 160, 2.0),
        flow(2, 9, 50.0, 160, 2.0),
        flow(3, 63, 50.0, 160, 2.0),
    ];
    let mut cfg = config(flows, 2.0, 1_000_000);
    let with_sdap = run_scenario(&cfg).unwrap();

    cfg.sdap_enabled = false;
    let without = run_scenario(&cfg).unwrap();

    for (w, wo) in with_sdap.flows.iter().zip(&without.flows) {
        assert_eq!(w.sent, wo.sent);
        assert_eq!(wo.drb, 0, "all packets share the default queue");
        assert_eq!(wo.lost, 0);
        assert_eq!(wo.integrity_failures, 0);
    }
    assert!(!without.event_log.contains("[TX]"));
    assert!(!without.event_log.contains("[RX]"));
    assert!(with_sdap.event_log.contains("[TX] Inserted SDAP header with QFI = 1;"));

    // The checklist is about SDAP behavior; without it, nothing to verify.
    assert!(without
        .checklist()
        .iter()
        .all(|r| matches!(r.status, CheckStatus::Skipped(_))));
}

#[test]
fn delivery_order_is_fifo_within_each_queue() {
    // Two flows mapped to the same DRB behind a slow link, so the queue
    // actually builds up.
    let mut cfg = config(
        vec![flow(0, 1, 100.0, 200, 1.0), flow(1, 2, 100.0, 200, 1.0)],
        1.0,
        60_000,
    );
    cfg.qfi_to_drb_mapping = "1:0;2:0".to_string();
    let report = run_scenario(&cfg).unwrap();

    let tx = log_order(&report.event_log, " TX ");
    let rx = log_order(&report.event_log, " RX ");
    assert!(!tx.is_empty());
    assert_eq!(tx.len(), rx.len());

    // Both flows map to DRB 0, so the whole delivery sequence must equal the
    // enqueue sequence.
    assert!(tx.iter().all(|(_, _, d)| *d == 0));
    assert_eq!(tx, rx, "FIFO violated on DRB 0");
}

#[test]
fn per_flow_order_is_preserved_under_round_robin() {
    let flows = vec![
        flow(0, 1, 200.0, 300, 1.0),
        flow(1, 5, 200.0, 300, 1.0),
        flow(2, 9, 200.0, 300, 1.0),
    ];
    let cfg = config(flows, 1.0, 150_000);
    let report = run_scenario(&cfg).unwrap();

    let rx = log_order(&report.event_log, " RX ");
    for id in 0..3u32 {
        let seqs: Vec<u64> = rx
            .iter()
            .filter(|(f, _, _)| *f == id)
            .map(|(_, s, _)| *s)
            .collect();
        assert_eq!(seqs.len(), 200);
        assert!(seqs.windows(2).all(|w| w[0] < w[1]), "flow {id} reordered");
    }
}

#[test]
fn overload_is_warned_but_drains_without_loss() {
    // 100 pps x 1029 wire bytes ~= 103 kB/s offered against 50 kB/s service.
    let cfg = config(vec![flow(0, 1, 100.0, 1000, 0.2)], 0.2, 50_000);
    let report = run_scenario(&cfg).unwrap();

    assert_eq!(report.warnings.len(), 1);
    assert!(report.warnings[0].contains("exceeds link service rate"), "{:?}", report.warnings);
    assert!(report.event_log.contains("# warning:"));

    let stats = &report.flows[0];
    assert_eq!(stats.sent, 20);
    assert_eq!(stats.received, 20, "unbounded queue drains completely");
    assert_eq!(stats.lost, 0);
}

#[test]
fn bounded_queue_drops_are_accounted() {
    let mut cfg = config(vec![flow(0, 1, 1000.0, 1000, 0.1)], 0.1, 100_000);
    cfg.link.per_queue_capacity = 1;
    let report = run_scenario(&cfg).unwrap();

    let stats = &report.flows[0];
    assert_eq!(stats.sent, 100);
    assert!(stats.lost > 0);
    assert_eq!(stats.received + stats.lost, stats.sent);
    assert!(report.event_log.contains(" DROP "));

    let rows = report.checklist();
    assert_eq!(rows[6].status, CheckStatus::Failed, "integrity row sees loss");
}

#[test]
fn asymmetric_rx_mapping_is_detected_not_dropped() {
    let mut cfg = config(vec![flow(0, 1, 50.0, 160, 1.0)], 1.0, 1_000_000);
    cfg.qfi_to_drb_mapping = "1:3".to_string();
    cfg.qfi_to_drb_mapping_rx = Some("1:2".to_string());
    let report = run_scenario(&cfg).unwrap();

    let stats = &report.flows[0];
    assert_eq!(stats.received, stats.sent, "mismatches are counted, not dropped");
    assert_eq!(stats.drb_mismatches, stats.sent);

    let rows = report.checklist();
    for row in &rows {
        if row.name == "DRB mapping verification" {
            assert_eq!(row.status, CheckStatus::Failed);
        } else {
            assert_eq!(row.status, CheckStatus::Passed, "{}", row.name);
        }
    }
}

#[test]
fn no_flows_means_no_traffic_checklist() {
    let cfg = config(Vec::new(), 1.0, 1_000_000);
    let report = run_scenario(&cfg).unwrap();
    assert!(report.flows.is_empty());
    assert!(report
        .checklist()
        .iter()
        .all(|r| r.status == CheckStatus::Skipped("no traffic".to_string())));
}

#[test]
fn tcp_flows_run_clean_end_to_end() {
    let mut tcp_flow = flow(0, 9, 50.0, 400, 1.0);
    tcp_flow.transport = TransportKind::Tcp;
    let cfg = config(vec![tcp_flow], 1.0, 1_000_000);
    let report = run_scenario(&cfg).unwrap();

    let stats = &report.flows[0];
    assert_eq!(stats.sent, 50);
    assert_eq!(stats.received, 50);
    assert_eq!(stats.integrity_failures, 0);
    assert_eq!(stats.drb, 2);
    assert!(sdap_core::sim::all_passed(&report.checklist()));
}
