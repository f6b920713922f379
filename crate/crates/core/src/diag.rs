//! Diagnostics go to stderr only; stdout is reserved for results.
//! `FX_LOG=debug` (or `trace`) turns on the chatty lines.

use std::sync::OnceLock;

fn debug_enabled() -> bool {
    static ENABLED: OnceLock<bool> = OnceLock::new();
    *ENABLED.get_or_init(|| {
        matches!(
            std::env::var("FX_LOG").ok().as_deref(),
            Some("debug") | Some("trace")
        )
    })
}

pub fn warn(message: impl AsRef<str>) {
    eprintln!("warning: {}", message.as_ref());
}

pub fn debug(message: impl AsRef<str>) {
    if debug_enabled() {
        eprintln!("debug: {}", message.as_ref());
    }
}
