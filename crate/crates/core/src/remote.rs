//! HTTP-backed classifier adapter.
//!
//! Posts the full analysis as JSON and expects
//! `{"pattern": string, "confidence": number, "reasoning": string}` back.
//! Timeouts, transport errors, non-2xx responses, and unparseable bodies
//! all degrade to "no classification" — the pipeline then keeps the level.

use crate::analysis::PrimaryAnalysis;
use crate::stage3::{ClassifierAdapter, Pattern, PatternClassification};
use serde::Deserialize;
use std::time::Duration;
use ureq::Agent;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(3);

pub struct RemoteClassifier {
    endpoint: String,
    agent: Agent,
}

#[derive(Deserialize)]
struct RemoteResponse {
    pattern: String,
    confidence: f64,
    #[serde(default)]
    reasoning: String,
}

impl RemoteClassifier {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Self {
        let agent: Agent = Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        RemoteClassifier {
            endpoint: endpoint.into(),
            agent,
        }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }
}

impl ClassifierAdapter for RemoteClassifier {
    fn classify(&self, analysis: &PrimaryAnalysis) -> Option<PatternClassification> {
        let mut response = self
            .agent
            .post(&self.endpoint)
            .send_json(analysis)
            .ok()
            .filter(|r| r.status().is_success())?;
        let body: RemoteResponse = response.body_mut().read_json().ok()?;
        let pattern = Pattern::parse(&body.pattern)?;
        Some(PatternClassification::new(
            pattern,
            body.confidence,
            body.reasoning,
        ))
    }
}
