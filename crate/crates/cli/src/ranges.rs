use anyhow::{bail, Context, Result};

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.trim().parse().with_context(|| format!("invalid {what} '{s}'"))
}

/// `N`, `a:b` (inclusive), `a:b:step`, or comma-separated items of those.
pub fn lengths(spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [n] => out.push(num(n, "length")?),
            [a, b] | [a, b, _] => {
                let (a, b): (usize, usize) = (num(a, "length")?, num(b, "length")?);
                let step: usize = if parts.len() == 3 { num(parts[2], "step")? } else { 1 };
                if step == 0 || a > b {
                    bail!("empty length range '{item}'");
                }
                out.extend((a..=b).step_by(step));
            }
            _ => bail!("invalid length range '{item}'"),
        }
    }
    if out.is_empty() {
        bail!("no lengths given");
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `a:b` (half-open) or a count `c` meaning `0:c`.
pub fn half_open(spec: &str, what: &str) -> Result<(u64, u64)> {
    let (a, b) = match spec.split_once(':') {
        Some((a, b)) => (num(a, what)?, num(b, what)?),
        None => (0, num(spec, what)?),
    };
    if a >= b {
        bail!("empty {what} range '{spec}'");
    }
    Ok((a, b))
}

/// Inclusive `a:b`.
pub fn inclusive(spec: &str) -> Result<(usize, usize)> {
    let Some((a, b)) = spec.split_once(':') else { bail!("expected a:b, got '{spec}'") };
    let (a, b) = (num(a, "bound")?, num(b, "bound")?);
    if a > b {
        bail!("empty range '{spec}'");
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(lengths("12").unwrap(), vec![12]);
        assert_eq!(lengths("5:8").unwrap(), vec![5, 6, 7, 8]);
        assert_eq!(lengths("10:16:2").unwrap(), vec![10, 12, 14, 16]);
        assert_eq!(lengths("9,5:6,9").unwrap(), vec![5, 6, 9]);
        assert!(lengths("8:5").is_err());
        assert!(lengths("x").is_err());
        assert_eq!(half_open("3:7", "seed").unwrap(), (3, 7));
        assert_eq!(half_open("4", "seed").unwrap(), (0, 4));
        assert!(half_open("2:2", "seed").is_err());
        assert_eq!(inclusive("27:37").unwrap(), (27, 37));
        assert!(inclusive("27").is_err());
    }
}
