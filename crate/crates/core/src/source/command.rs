//! Subprocess sources: the command's stdout is what gets triplified.
//!
//! Commands are tokenized with a shell-like rule — whitespace splits,
//! double quotes group — and spawned directly, not through a shell.
//! Users who need shell features can invoke one explicitly.

use std::process::{Command, Stdio};

use crate::error::FxError;

/// Splits a command line into tokens: whitespace separates, `"..."`
/// groups (quotes removed, adjacent pieces concatenate).
pub fn tokenize(command: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    let mut had_any = false;
    for c in command.chars() {
        match c {
            '"' => {
                in_quotes = !in_quotes;
                had_any = true;
            }
            c if c.is_whitespace() && !in_quotes => {
                if had_any {
                    tokens.push(std::mem::take(&mut current));
                    had_any = false;
                }
            }
            c => {
                current.push(c);
                had_any = true;
            }
        }
    }
    if had_any {
        tokens.push(current);
    }
    tokens
}

#[derive(Debug)]
pub struct CommandOutput {
    pub stdout: Vec<u8>,
    pub status: i32,
}

/// Runs a command with stdin closed, capturing stdout. Stderr is passed
/// through to diagnostics on failure.
pub fn run_command(command: &str) -> Result<CommandOutput, FxError> {
    let tokens = tokenize(command);
    if tokens.is_empty() {
        return Err(FxError::InvalidConfig("empty command".into()));
    }
    let output = Command::new(&tokens[0])
        .args(&tokens[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .output()
        .map_err(|source| FxError::CommandSpawn {
            command: command.to_owned(),
            source,
        })?;
    let status = output.status.code().unwrap_or(-1);
    if !output.status.success() {
        return Err(FxError::CommandFailed {
            command: command.to_owned(),
            status,
            stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
        });
    }
    Ok(CommandOutput {
        stdout: output.stdout,
        status,
    })
}
