//! LLM judge over a chat-completion HTTP endpoint.

use super::{
    ComparisonQuery, ComparisonResult, DirectRankQuery, FeatureRef, Judge, JudgeError, Source,
    Winner,
};
use serde_json::json;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Version tag of the prompt wording below; part of every cache key so a
/// prompt change invalidates cached verdicts.
pub const PROMPT_TEMPLATE_VERSION: &str = "v1";

#[derive(Debug, Clone)]
pub struct LiveJudgeConfig {
    /// Full URL of the chat-completions endpoint.
    pub endpoint: String,
    pub model: String,
    /// Bearer token sent in the Authorization header.
    pub api_key: String,
    /// Attempts per request for both transport failures and unparseable
    /// replies.
    pub max_attempts: u32,
    /// First retry delay; doubles on each subsequent attempt.
    pub initial_backoff: Duration,
    pub request_timeout: Duration,
}

impl Default for LiveJudgeConfig {
    fn default() -> Self {
        Self {
            endpoint: String::new(),
            model: "gpt-5-nano".into(),
            api_key: String::new(),
            max_attempts: 3,
            initial_backoff: Duration::from_secs(1),
            request_timeout: Duration::from_secs(60),
        }
    }
}

/// Judge backed by an HTTP chat endpoint. Thread-safe; the underlying client
/// pools connections, so concurrent comparisons share it.
pub struct LiveJudge {
    config: LiveJudgeConfig,
    client: reqwest::blocking::Client,
    queries: AtomicU64,
}

impl LiveJudge {
    pub fn new(config: LiveJudgeConfig) -> Result<Self, JudgeError> {
        if config.endpoint.is_empty() {
            return Err(JudgeError::InvalidQuery(
                "live judge endpoint is empty".into(),
            ));
        }
        let client = reqwest::blocking::Client::builder()
            .timeout(config.request_timeout)
            .build()
            .map_err(|e| JudgeError::Transport {
                attempts: 0,
                message: e.to_string(),
            })?;
        Ok(Self {
            config,
            client,
            queries: AtomicU64::new(0),
        })
    }

    pub fn model(&self) -> &str {
        &self.config.model
    }

    /// Number of HTTP requests issued so far.
    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    fn post_chat(&self, messages: &[serde_json::Value]) -> Result<(String, u64), JudgeError> {
        let mut last_error = String::new();
        for attempt in 0..self.config.max_attempts {
            if attempt > 0 {
                std::thread::sleep(self.config.initial_backoff * 2u32.pow(attempt - 1));
            }
            self.queries.fetch_add(1, Ordering::Relaxed);
            let started = Instant::now();
            let response = self
                .client
                .post(&self.config.endpoint)
                .bearer_auth(&self.config.api_key)
                .json(&json!({ "model": self.config.model, "messages": messages }))
                .send();
            let latency = started.elapsed().as_millis() as u64;
            match response {
                Ok(resp) if resp.status().is_success() => {
                    let body: serde_json::Value =
                        resp.json().map_err(|e| JudgeError::Transport {
                            attempts: attempt + 1,
                            message: format!("invalid JSON body: {e}"),
                        })?;
                    let content = body
                        .pointer("/choices/0/message/content")
                        .and_then(|v| v.as_str())
                        .ok_or_else(|| JudgeError::Transport {
                            attempts: attempt + 1,
                            message: format!("missing choices[0].message.content in {body}"),
                        })?;
                    return Ok((content.to_owned(), latency));
                }
                Ok(resp) => {
                    let status = resp.status();
                    let body = resp.text().unwrap_or_default();
                    last_error = format!("HTTP {status}: {body}");
                }
                Err(e) => last_error = e.to_string(),
            }
        }
        Err(JudgeError::Transport {
            attempts: self.config.max_attempts,
            message: last_error,
        })
    }

    fn comparison_messages(query: &ComparisonQuery, retry_hint: bool) -> Vec<serde_json::Value> {
        let system = format!(
            "You judge how interesting candidate prediction rules are. \
             The task: {}. The label to predict: {}.",
            query.task_description, query.label_name
        );
        let mut user = format!(
            "If one could predict {} only from {} and only from {}, \
             which prediction rule would be more interesting? \
             Answer with exactly A or B.\nA: {}\nB: {}",
            query.label_name,
            describe(&query.feature_a),
            describe(&query.feature_b),
            describe(&query.feature_a),
            describe(&query.feature_b),
        );
        if retry_hint {
            user.push_str("\nReply with the single letter A or B and nothing else.");
        }
        vec![
            json!({ "role": "system", "content": system }),
            json!({ "role": "user", "content": user }),
        ]
    }

    fn ranking_messages(query: &DirectRankQuery, retry_hint: bool) -> Vec<serde_json::Value> {
        let system = format!(
            "You judge how interesting candidate prediction rules are. \
             The task: {}. The label to predict: {}.",
            query.task_description, query.label_name
        );
        let listing = query
            .features
            .iter()
            .map(|f| format!("- {}", describe(f)))
            .collect::<Vec<_>>()
            .join("\n");
        let mut user = format!(
            "Rank the following features by how interesting a prediction rule \
             for {} based on each single feature would be, most interesting \
             first. Output one line per feature containing exactly the \
             feature name.\n{listing}",
            query.label_name
        );
        if retry_hint {
            user.push_str("\nList every feature name exactly once, one per line, no extra text.");
        }
        vec![
            json!({ "role": "system", "content": system }),
            json!({ "role": "user", "content": user }),
        ]
    }
}

fn describe(feature: &FeatureRef) -> String {
    match &feature.description {
        Some(d) => format!("{} ({})", feature.name, d),
        None => feature.name.clone(),
    }
}

/// First standalone `A` or `B` token (case-insensitive) in the reply.
pub(super) fn parse_winner(reply: &str) -> Option<Winner> {
    reply
        .split(|c: char| !c.is_ascii_alphanumeric())
        .find_map(|token| match token {
            "A" | "a" => Some(Winner::A),
            "B" | "b" => Some(Winner::B),
            _ => None,
        })
}

/// Extracts a permutation of `names` from free-form text by first-occurrence
/// position (case-insensitive; longer names matched first so a name embedded
/// in another does not double-count).
pub(super) fn parse_permutation(reply: &str, names: &[String]) -> Result<Vec<String>, String> {
    let mut haystack: Vec<u8> = reply.to_lowercase().into_bytes();
    let mut by_length: Vec<&String> = names.iter().collect();
    by_length.sort_by_key(|n| std::cmp::Reverse(n.len()));

    let mut found: Vec<(usize, &String)> = Vec::with_capacity(names.len());
    for name in by_length {
        let needle = name.to_lowercase();
        let needle = needle.as_bytes();
        let mut positions = Vec::new();
        let mut start = 0;
        while start + needle.len() <= haystack.len() {
            if &haystack[start..start + needle.len()] == needle {
                positions.push(start);
                start += needle.len();
            } else {
                start += 1;
            }
        }
        match positions.len() {
            0 => return Err(format!("feature {name:?} missing from reply")),
            1 => {
                let pos = positions[0];
                haystack[pos..pos + needle.len()].fill(0);
                found.push((pos, name));
            }
            k => return Err(format!("feature {name:?} appears {k} times")),
        }
    }
    found.sort_by_key(|(pos, _)| *pos);
    Ok(found.into_iter().map(|(_, n)| n.clone()).collect())
}

impl Judge for LiveJudge {
    fn compare(&self, query: &ComparisonQuery, _draw: u64) -> Result<ComparisonResult, JudgeError> {
        query.validate()?;
        let mut last_reply = String::new();
        for attempt in 0..self.config.max_attempts {
            let messages = Self::comparison_messages(query, attempt > 0);
            let (reply, latency_ms) = self.post_chat(&messages)?;
            if let Some(winner) = parse_winner(&reply) {
                return Ok(ComparisonResult {
                    winner,
                    raw_response: reply,
                    source: Source::Live,
                    latency_ms,
                });
            }
            last_reply = reply;
        }
        Err(JudgeError::UnparseableReply {
            attempts: self.config.max_attempts,
            raw: last_reply,
        })
    }

    fn direct_rank(&self, query: &DirectRankQuery, _draw: u64) -> Result<Vec<String>, JudgeError> {
        query.validate()?;
        let names: Vec<String> = query.features.iter().map(|f| f.name.clone()).collect();
        let mut last = (String::new(), String::new());
        for attempt in 0..self.config.max_attempts {
            let messages = Self::ranking_messages(query, attempt > 0);
            let (reply, _) = self.post_chat(&messages)?;
            match parse_permutation(&reply, &names) {
                Ok(order) => return Ok(order),
                Err(detail) => last = (detail, reply),
            }
        }
        Err(JudgeError::IncompleteRanking {
            detail: last.0,
            raw: last.1,
        })
    }
}
