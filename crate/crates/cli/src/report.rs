//! The envelope every invocation prints: command echo, a digest of the
//! analysed net, the verdict payload, and timing.

use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use resound_core::io::{emit_net, ParsedNet};

/// Size and content fingerprint of a net. The hash covers the canonical
/// emission, so formatting differences between equal inputs do not change it.
pub struct NetSummary {
    pub places: usize,
    pub transitions: usize,
    pub sha256: String,
}

impl NetSummary {
    pub fn of(parsed: &ParsedNet) -> NetSummary {
        let canonical = emit_net(parsed);
        let digest = Sha256::digest(canonical.as_bytes());
        let net = parsed.net();
        NetSummary {
            places: net.place_count(),
            transitions: net.transition_count(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "places": self.places,
            "transitions": self.transitions,
            "sha256": self.sha256,
        })
    }
}

pub struct Report {
    pub command: String,
    pub net: Option<NetSummary>,
    pub verdict: Value,
    /// Human rendering; text mode prints exactly this.
    pub text: String,
    pub elapsed: Duration,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "net": self.net.as_ref().map(NetSummary::to_json),
            "verdict": self.verdict,
            "elapsed_ms": self.elapsed.as_millis() as u64,
        })
    }
}
