//! End-to-end ranking through the live judge against a local server that
//! plays a deterministic "model": it always prefers the feature that comes
//! first in a fixed interestingness order.

use eureka::judge::{FeatureRef, LiveJudge, LiveJudgeConfig};
use eureka::ranking::{borda_count, stability_experiment, RankMethod, RankTask};
use std::io::{Read, Write};
use std::net::TcpListener;
use std::time::Duration;

const ORDER: [&str; 5] = ["HumidityRatio", "Humidity", "Temperature", "Light", "CO2"];

fn preference_rank(name: &str) -> usize {
    ORDER
        .iter()
        .position(|n| *n == name)
        .expect("known feature")
}

/// Serves chat completions forever: extracts the A/B feature names from the
/// user message and votes for the one ranked higher in ORDER.
fn spawn_preference_server() -> String {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind");
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { return };
            let mut buf = Vec::new();
            let mut chunk = [0u8; 8192];
            let body = loop {
                match stream.read(&mut chunk) {
                    Ok(0) => break None,
                    Ok(n) => {
                        buf.extend_from_slice(&chunk[..n]);
                        let text = String::from_utf8_lossy(&buf);
                        if let Some(split) = text.find("\r\n\r\n") {
                            let need = text
                                .lines()
                                .find_map(|l| {
                                    l.to_ascii_lowercase()
                                        .strip_prefix("content-length:")
                                        .map(|v| v.trim().parse::<usize>().unwrap_or(0))
                                })
                                .unwrap_or(0);
                            if buf.len() >= split + 4 + need {
                                break Some(text[split + 4..].to_string());
                            }
                        }
                    }
                    Err(_) => break None,
                }
            };
            let Some(body) = body else { continue };
            let parsed: serde_json::Value = serde_json::from_str(&body).unwrap_or_default();
            let user = parsed["messages"][1]["content"].as_str().unwrap_or("");

            let side = |prefix: &str| -> Option<usize> {
                let line = user.lines().find(|l| l.starts_with(prefix))?;
                let rest = &line[prefix.len()..];
                ORDER
                    .iter()
                    .filter(|n| rest.starts_with(*n))
                    .max_by_key(|n| n.len())
                    .map(|n| preference_rank(n))
            };
            let verdict = match (side("A: "), side("B: ")) {
                (Some(a), Some(b)) if a < b => "A",
                (Some(_), Some(_)) => "B",
                _ => "cannot tell",
            };
            let reply = serde_json::json!({
                "choices": [{ "message": { "role": "assistant", "content": verdict } }]
            })
            .to_string();
            let response = format!(
                "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{reply}",
                reply.len()
            );
            let _ = stream.write_all(response.as_bytes());
        }
    });
    format!("http://{addr}/v1/chat/completions")
}

fn features() -> Vec<FeatureRef> {
    // Deliberately not in preference order.
    ["Temperature", "Humidity", "Light", "CO2", "HumidityRatio"]
        .iter()
        .map(|n| FeatureRef::named(*n))
        .collect()
}

#[test]
fn borda_over_live_judge_recovers_the_preference_order() {
    let endpoint = spawn_preference_server();
    let judge = LiveJudge::new(LiveJudgeConfig {
        endpoint,
        model: "gpt-5-nano".into(),
        api_key: "k".into(),
        max_attempts: 3,
        initial_backoff: Duration::from_millis(1),
        request_timeout: Duration::from_secs(5),
    })
    .unwrap();
    let task = RankTask::new("Predict whether an office room is occupied", "Occupancy");

    let outcome = borda_count(&features(), &judge, &task, 64, 0).unwrap();
    let order = outcome.estimate.ranking().order;
    assert_eq!(order, ORDER.map(String::from).to_vec());
    let bottom: Vec<&str> = order[3..].iter().map(String::as_str).collect();
    assert!(bottom.contains(&"CO2") && bottom.contains(&"Light"));
    assert_eq!(judge.query_count(), 64);

    // A deterministic judge with enough comparisons per run ranks stably:
    // every per-item win rate separates cleanly from its neighbors.
    let stability = stability_experiment(
        &features(),
        &judge,
        &task,
        RankMethod::Pairwise { n_comparisons: 512 },
        5,
        0,
    )
    .unwrap();
    assert_eq!(stability.kendall.mean, 1.0);
    assert!(stability.kendall.mean >= 0.6);
}
