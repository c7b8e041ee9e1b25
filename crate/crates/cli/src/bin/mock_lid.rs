//! A scriptable stand-in for an external LID backend, for tests and demos.
//!
//! By default it greets, then labels the words of each request by cycling
//! through `--pattern`. The other flags make it misbehave in specific ways.

use std::io::{self, BufRead, Write};

use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "csfront-mock-lid")]
struct Opts {
    /// Labels assigned to successive words, cycling (comma or space separated)
    #[arg(long, default_value = "ID")]
    pattern: String,
    /// Reply with this exact line to every request
    #[arg(long)]
    respond: Option<String>,
    /// Reply with one label fewer than requested
    #[arg(long)]
    short: bool,
    /// Replace the first label of every reply with this string
    #[arg(long, value_name = "LABEL")]
    bad_label: Option<String>,
    /// Exit without greeting
    #[arg(long)]
    no_handshake: bool,
    /// Greet with this line instead of the protocol greeting
    #[arg(long)]
    handshake: Option<String>,
    /// Exit after answering this many requests
    #[arg(long, value_name = "N")]
    exit_after: Option<usize>,
}

fn main() -> io::Result<()> {
    let opts = Opts::parse();
    if opts.no_handshake {
        return Ok(());
    }
    let pattern: Vec<&str> = opts
        .pattern
        .split([',', ' '])
        .filter(|s| !s.is_empty())
        .collect();
    let pattern = if pattern.is_empty() { vec!["ID"] } else { pattern };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let greeting = opts.handshake.as_deref().unwrap_or("LIDPROTO 1");
    writeln!(out, "{greeting}")?;
    out.flush()?;

    let mut answered = 0;
    for line in io::stdin().lock().lines() {
        if opts.exit_after.is_some_and(|n| answered >= n) {
            break;
        }
        let line = line?;
        let reply = match &opts.respond {
            Some(fixed) => fixed.clone(),
            None => {
                let words = line.split(' ').filter(|w| !w.is_empty()).count();
                let mut labels: Vec<String> = (0..words)
                    .map(|i| pattern[i % pattern.len()].to_string())
                    .collect();
                if opts.short {
                    labels.pop();
                }
                if let (Some(bad), Some(first)) = (&opts.bad_label, labels.first_mut()) {
                    *first = bad.clone();
                }
                labels.join(" ")
            }
        };
        writeln!(out, "{reply}")?;
        out.flush()?;
        answered += 1;
    }
    Ok(())
}
