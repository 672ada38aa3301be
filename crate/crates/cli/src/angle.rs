//! Angles on the command line: radians (`0.314`) or multiples of pi (`0.1pi`).
//! Lists are comma separated; `start:stop:step` expands to an inclusive range.

use std::f64::consts::PI;

use anyhow::{bail, Context, Result};

pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.strip_suffix("pi") {
        Some("") => PI,
        Some(m) => m.trim().parse::<f64>().with_context(|| format!("bad angle '{s}'"))? * PI,
        None => s.parse::<f64>().with_context(|| format!("bad angle '{s}'"))?,
    };
    if !v.is_finite() {
        bail!("bad angle '{s}'");
    }
    Ok(v)
}

pub fn parse_angles(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [a] => out.push(parse_angle(a)?),
            [a, b, step] => {
                let (a, b, step) = (parse_angle(a)?, parse_angle(b)?, parse_angle(step)?);
                if step <= 0.0 || b < a {
                    bail!("bad range '{item}'");
                }
                // Rounded count so 0.04pi:0.16pi:0.01pi gives 13 points.
                let k = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=k).map(|i| a + step * i as f64));
            }
            _ => bail!("bad angle list item '{item}'"),
        }
    }
    if out.is_empty() {
        bail!("empty angle list");
    }
    Ok(out)
}

pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let v: Vec<usize> = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad size '{x}'")))
        .collect::<Result<_>>()?;
    if v.is_empty() {
        bail!("empty size list");
    }
    Ok(v)
}
