//! Parameter grids: `a,b,c` lists or `start:stop:count` ranges.

use phillips_core::{Error, Result};

/// Parses one axis. `start:stop:count` is inclusive of both ends; a count of
/// zero gives an empty axis and a count of one gives `start`.
pub fn parse_axis(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::GridSpec("empty axis".into()));
    }
    let number = |s: &str| -> Result<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::GridSpec(format!("not a number: {s:?}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::GridSpec(format!("not finite: {s:?}")))
        }
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(Error::GridSpec(format!("expected start:stop:count, got {spec:?}")));
        };
        let (start, stop) = (number(start)?, number(stop)?);
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::GridSpec(format!("bad count in {spec:?}")))?;
        return Ok(match count {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n)
                .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                .collect(),
        });
    }
    spec.split(',').map(number).collect()
}

/// Cartesian product in row-major order (last axis fastest).
pub fn product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}
