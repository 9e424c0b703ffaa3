//! Text serialization and deterministic generation of paired datasets.
//!
//! File format: a header line `n d_real d_feat`, then `n` whitespace-
//! separated rows of `d_real` location coordinates followed by `d_feat`
//! rating coordinates. Blank lines and lines starting with `#` are ignored.
//! Writing uses 17 significant digits, so write-then-parse reproduces every
//! value bit-for-bit.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Dataset;

/// Parses the text format; errors name the 1-based line they occurred on.
pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });
    let mut line_count = 0usize;
    for _ in text.lines() {
        line_count += 1;
    }

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input, expected a header line `n d_real d_feat`".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("header must be `n d_real d_feat`, found {} fields", fields.len()),
        });
    }
    let parse_count = |s: &str, what: &str| -> Result<usize> {
        usize::from_str(s).map_err(|_| Error::Parse {
            line: header_line,
            msg: format!("{what} is not a non-negative integer: {s:?}"),
        })
    };
    let n = parse_count(fields[0], "point count")?;
    let d_real = parse_count(fields[1], "location dimension")?;
    let d_feat = parse_count(fields[2], "rating dimension")?;
    if n == 0 {
        return Err(Error::Parse {
            line: header_line,
            msg: "point count must be at least 1".into(),
        });
    }

    let mut reals = Vec::with_capacity(n);
    let mut feats = Vec::with_capacity(n);
    for row in 0..n {
        let (line, content) = lines.next().ok_or(Error::Parse {
            line: line_count + 1,
            msg: format!("header declares {n} rows, the file ends after row {row}"),
        })?;
        let mut values = Vec::with_capacity(d_real + d_feat);
        for tok in content.split_whitespace() {
            let v = f64::from_str(tok).map_err(|_| Error::Parse {
                line,
                msg: format!("not a number: {tok:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("non-finite value: {tok:?}"),
                });
            }
            values.push(v);
        }
        if values.len() != d_real + d_feat {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "expected {} values ({d_real} location + {d_feat} rating), found {}",
                    d_real + d_feat,
                    values.len()
                ),
            });
        }
        feats.push(values.split_off(d_real));
        reals.push(values);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            msg: format!("unexpected data after the {n} declared rows"),
        });
    }
    Dataset::from_rows(&reals, &feats).map_err(|e| Error::Parse {
        line: header_line,
        msg: format!("inconsistent dataset: {e}"),
    })
}

/// Serializes a dataset in the text format with round-trip-exact floats.
pub fn write_dataset(ds: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", ds.len(), ds.d_real(), ds.d_feat());
    for i in 0..ds.len() {
        let mut first = true;
        for &c in ds.real(i).coords().iter().chain(ds.feat(i).coords()) {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{c:.16e}");
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Input shapes the generator can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Independent uniform coordinates in [0, 1).
    Uniform,
    /// Ratings derived from locations plus bounded noise.
    Correlated,
    /// Ratings constructed so that no point dominates another.
    AntiChain,
    /// Locations on an integer grid and ratings on a small integer lattice,
    /// forcing many exact distance and rating ties.
    Grid,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "correlated" => Ok(Self::Correlated),
            "anti-chain" | "antichain" => Ok(Self::AntiChain),
            "grid" => Ok(Self::Grid),
            other => Err(Error::InvalidParameter(format!(
                "unknown distribution {other:?} (expected uniform, correlated, anti-chain, or grid)"
            ))),
        }
    }
}

/// Deterministically generates a dataset: fixed arguments always produce the
/// identical point set.
pub fn gen_dataset(
    n: usize,
    d_real: usize,
    d_feat: usize,
    seed: u64,
    dist: Distribution,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidParameter("point count must be at least 1".into()));
    }
    if d_real == 0 || d_real > crate::geometry::MAX_REAL_DIM {
        return Err(Error::UnsupportedRealDimension(d_real));
    }
    if d_feat == 0 {
        return Err(Error::UnsupportedFeatureDimension(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reals = Vec::with_capacity(n);
    let mut feats = Vec::with_capacity(n);
    for i in 0..n {
        let p: Vec<f64> = match dist {
            Distribution::Grid => {
                let side = (n as f64).sqrt().ceil() as usize;
                match d_real {
                    1 => vec![(i % side) as f64],
                    _ => vec![(i % side) as f64, (i / side) as f64],
                }
            }
            _ => (0..d_real).map(|_| rng.random::<f64>()).collect(),
        };
        let q: Vec<f64> = match dist {
            Distribution::Uniform => (0..d_feat).map(|_| rng.random::<f64>()).collect(),
            Distribution::Correlated => (0..d_feat)
                .map(|k| p[k % d_real] + 0.3 * (rng.random::<f64>() - 0.5))
                .collect(),
            Distribution::AntiChain => {
                // Strictly increasing first coordinate, strictly decreasing
                // second: no pair can be strictly greater in both. Extra
                // coordinates are free.
                let t = i as f64 + 0.5 * rng.random::<f64>();
                let mut q = vec![t, n as f64 - t];
                q.extend((2..d_feat).map(|_| rng.random::<f64>()));
                if d_feat == 1 {
                    // A single all-equal coordinate admits no strict
                    // dominance at all.
                    q = vec![0.0];
                }
                q
            }
            Distribution::Grid => (0..d_feat)
                .map(|_| (rng.random::<f64>() * 8.0).floor())
                .collect(),
        };
        reals.push(p);
        feats.push(q);
    }
    Dataset::from_rows(&reals, &feats)
}
