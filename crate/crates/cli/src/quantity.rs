//! Parsing of flag values that carry units.
//!
//! Durations and frequencies must carry a suffix; a bare number is rejected
//! because the model spans picoseconds to milliseconds. The one exception is a
//! literal zero.

fn split_suffix(s: &str) -> (&str, &str) {
    let s = s.trim();
    let idx = s
        .char_indices()
        .find(|(_, c)| c.is_alphabetic() || *c == 'µ')
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    (s[..idx].trim(), s[idx..].trim())
}

fn parse_number(num: &str, original: &str) -> Result<f64, String> {
    let x: f64 = num
        .parse()
        .map_err(|_| format!("'{original}' is not a number with a unit"))?;
    if !x.is_finite() {
        return Err(format!("'{original}' is not finite"));
    }
    Ok(x)
}

/// Duration in seconds from e.g. `100us`, `25 µs`, `1.5ms`, `10ns`, `2s`.
pub fn parse_duration(s: &str) -> Result<f64, String> {
    let (num, unit) = split_suffix(s);
    let x = parse_number(num, s)?;
    // divide by an exact power of ten so `100us` equals the literal 100e-6
    let per_second = match unit {
        "" if x == 0.0 => 1.0,
        "" => return Err(format!("'{s}' needs a unit: ps, ns, us, ms or s")),
        "ps" => 1e12,
        "ns" => 1e9,
        "us" | "µs" => 1e6,
        "ms" => 1e3,
        "s" => 1.0,
        other => {
            return Err(format!(
                "unknown duration unit '{other}' (use ps, ns, us, ms, s)"
            ))
        }
    };
    if x < 0.0 {
        return Err(format!("duration '{s}' must be >= 0"));
    }
    Ok(x / per_second)
}

/// Frequency in Hz from e.g. `10GHz`, `500 MHz`, `1kHz`.
pub fn parse_frequency(s: &str) -> Result<f64, String> {
    let (num, unit) = split_suffix(s);
    let x = parse_number(num, s)?;
    let scale = match unit.to_ascii_lowercase().as_str() {
        "" => return Err(format!("'{s}' needs a unit: Hz, kHz, MHz or GHz")),
        "hz" => 1.0,
        "khz" => 1e3,
        "mhz" => 1e6,
        "ghz" => 1e9,
        "thz" => 1e12,
        other => {
            return Err(format!(
                "unknown frequency unit '{other}' (use Hz, kHz, MHz, GHz)"
            ))
        }
    };
    if !(x > 0.0) {
        return Err(format!("frequency '{s}' must be > 0"));
    }
    Ok(x * scale)
}

/// Human-readable number with `sig` significant digits.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-3..6).contains(&mag) {
        let decimals = (sig as i32 - 1 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.prec$e}", prec = sig - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn durations() {
        assert_eq!(parse_duration("100us").unwrap(), 100e-6);
        assert_eq!(parse_duration("25 µs").unwrap(), 25e-6);
        assert_eq!(parse_duration("1.5ms").unwrap(), 1.5e-3);
        assert_eq!(parse_duration("4ps").unwrap(), 4e-12);
        assert_eq!(parse_duration("0").unwrap(), 0.0);
        assert!(parse_duration("100").is_err());
        assert!(parse_duration("3 hours").is_err());
        assert!(parse_duration("-1us").is_err());
        assert!(parse_duration("us").is_err());
    }

    #[test]
    fn frequencies() {
        assert_eq!(parse_frequency("10GHz").unwrap(), 1e10);
        assert_eq!(parse_frequency("500 MHz").unwrap(), 5e8);
        assert_eq!(parse_frequency("2khz").unwrap(), 2e3);
        assert!(parse_frequency("10").is_err());
        assert!(parse_frequency("0GHz").is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(59.479400086720376, 6), "59.4794");
        assert_eq!(fmt_sig(0.15625, 6), "0.15625");
        assert_eq!(fmt_sig(12.8, 6), "12.8");
        assert_eq!(fmt_sig(-7.35e-3, 4), "-0.00735");
        assert_eq!(fmt_sig(2.336128517e7, 6), "2.33613e7");
        assert_eq!(fmt_sig(0.0, 6), "0");
    }
}
