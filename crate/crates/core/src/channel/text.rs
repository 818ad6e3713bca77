//! Plain-text channel files.
//!
//! ```text
//! # optional comments
//! channel <num_rx> <num_tx>
//! <rx> <tx> <magnitude> <phase_radians>
//! ```
//!
//! Link indices are one-based. Every `(rx, tx)` pair must appear exactly once.

use std::fmt::Write as _;

use super::ComplexChannelMatrix;
use crate::error::{Error, Result};

pub fn parse_channel(text: &str) -> Result<ComplexChannelMatrix> {
    let mut shape: Option<(usize, usize)> = None;
    let mut cells: Vec<Option<(f64, f64)>> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let err = |message: String| Error::Parse { line, message };
        match shape {
            None => {
                if fields.len() != 3 || fields[0] != "channel" {
                    return Err(err("expected header `channel <num_rx> <num_tx>`".into()));
                }
                let rx: usize = fields[1].parse().map_err(|_| err(format!("bad receiver count `{}`", fields[1])))?;
                let tx: usize = fields[2].parse().map_err(|_| err(format!("bad transmitter count `{}`", fields[2])))?;
                if rx == 0 || tx == 0 {
                    return Err(err("channel dimensions must be positive".into()));
                }
                shape = Some((rx, tx));
                cells = vec![None; rx * tx];
            }
            Some((num_rx, num_tx)) => {
                if fields.len() != 4 {
                    return Err(err(format!("expected `rx tx magnitude phase`, got {} fields", fields.len())));
                }
                let r: usize = fields[0].parse().map_err(|_| err(format!("bad receiver index `{}`", fields[0])))?;
                let t: usize = fields[1].parse().map_err(|_| err(format!("bad transmitter index `{}`", fields[1])))?;
                if r == 0 || r > num_rx || t == 0 || t > num_tx {
                    return Err(err(format!("link ({r}, {t}) outside {num_rx}x{num_tx}")));
                }
                let mag: f64 = fields[2].parse().map_err(|_| err(format!("bad magnitude `{}`", fields[2])))?;
                let phase: f64 = fields[3].parse().map_err(|_| err(format!("bad phase `{}`", fields[3])))?;
                let slot = &mut cells[(r - 1) * num_tx + (t - 1)];
                if slot.is_some() {
                    return Err(err(format!("link ({r}, {t}) listed twice")));
                }
                *slot = Some((mag, phase));
            }
        }
    }

    let (num_rx, num_tx) = shape.ok_or(Error::Parse { line: 0, message: "missing `channel` header".into() })?;
    let polar = cells
        .iter()
        .enumerate()
        .map(|(k, c)| {
            c.ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("link ({}, {}) missing", k / num_tx + 1, k % num_tx + 1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexChannelMatrix::from_polar(num_rx, num_tx, &polar)
}

/// Renders a channel in the text format. Values use Rust's shortest round-trip formatting,
/// so `parse_channel(&format_channel(c)) == c`.
pub fn format_channel(channel: &ComplexChannelMatrix) -> String {
    let mut out = format!("channel {} {}\n", channel.num_rx(), channel.num_tx());
    for r in 0..channel.num_rx() {
        for t in 0..channel.num_tx() {
            let e = channel.entry(r, t);
            let _ = writeln!(out, "{} {} {:?} {:?}", r + 1, t + 1, e.magnitude, e.phase);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_channel;
    use proptest::prelude::*;

    #[test]
    fn parses_commented_file() {
        let text = "# two by one\nchannel 2 1\n1 1 1.0 0.0\n2 1 0.5 3.14 # trailing\n";
        let ch = parse_channel(text).unwrap();
        assert_eq!((ch.num_rx(), ch.num_tx()), (2, 1));
        assert_eq!(ch.magnitude(1, 0), 0.5);
    }

    #[test]
    fn reports_errors_with_lines() {
        assert!(matches!(parse_channel("1 1 1 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_channel("channel 1 1\n1 2 1 0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_channel("channel 1 1\n1 1 1 0\n1 1 1 0"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_channel("channel 1 2\n1 1 1 0"), Err(Error::Parse { line: 0, .. })));
        assert!(parse_channel("channel 1 1\n1 1 -1 0").is_err());
        assert!(parse_channel("").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(seed in any::<u64>(), rx in 1usize..4, tx in 1usize..5) {
            let ch = sample_channel(seed, rx, tx).unwrap();
            prop_assert_eq!(parse_channel(&format_channel(&ch)).unwrap(), ch);
        }
    }
}
