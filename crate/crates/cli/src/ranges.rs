//! Parsing of comma lists and `start:stop:step` ranges.

use crate::CliError;

fn bad(what: &str, text: &str, why: &str) -> CliError {
    CliError::Usage(format!("invalid {what} '{text}': {why}"))
}

fn parse_num<T: std::str::FromStr>(what: &str, text: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| bad(what, text, "not a number"))
}

pub fn int_list(what: &str, text: &str) -> Result<Vec<u32>, CliError> {
    let v: Vec<u32> = text
        .split(',')
        .map(|s| parse_num(what, s))
        .collect::<Result<_, _>>()?;
    Ok(v)
}

/// Inclusive integer range `start:stop:step`.
pub fn int_range(what: &str, text: &str) -> Result<Vec<u32>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(bad(what, text, "expected start:stop:step"));
    };
    let (start, stop, step): (u32, u32, u32) = (
        parse_num(what, start)?,
        parse_num(what, stop)?,
        parse_num(what, step)?,
    );
    if step == 0 {
        return Err(bad(what, text, "step must be positive"));
    }
    if stop < start {
        return Err(bad(what, text, "empty range"));
    }
    Ok((start..=stop).step_by(step as usize).collect())
}

fn round_grid(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

pub fn real_list(what: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let x: f64 = parse_num(what, s)?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(bad(what, s, "not finite"))
            }
        })
        .collect()
}

/// Inclusive real range `start:stop:step`, grid points rounded to `1e-12`
/// so that `0.05:0.95:0.05` yields exactly nineteen clean values.
pub fn real_range(what: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(bad(what, text, "expected start:stop:step"));
    };
    let (start, stop, step): (f64, f64, f64) = (
        parse_num(what, start)?,
        parse_num(what, stop)?,
        parse_num(what, step)?,
    );
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(bad(what, text, "not finite"));
    }
    if step <= 0.0 {
        return Err(bad(what, text, "step must be positive"));
    }
    if stop < start {
        return Err(bad(what, text, "empty range"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    if count > 10_000_000 {
        return Err(bad(what, text, "too many points"));
    }
    Ok((0..count).map(|i| round_grid(start + i as f64 * step)).collect())
}

/// Resolves a `--x` list / `--x-range` pair where exactly one may be given.
pub fn pick<T>(
    what: &str,
    list: Option<&str>,
    range: Option<&str>,
    parse_list: impl Fn(&str, &str) -> Result<Vec<T>, CliError>,
    parse_range: impl Fn(&str, &str) -> Result<Vec<T>, CliError>,
) -> Result<Option<Vec<T>>, CliError> {
    match (list, range) {
        (Some(_), Some(_)) => Err(CliError::Usage(format!(
            "give either a {what} list or a {what} range, not both"
        ))),
        (Some(l), None) => parse_list(what, l).map(Some),
        (None, Some(r)) => parse_range(what, r).map(Some),
        (None, None) => Ok(None),
    }
}
