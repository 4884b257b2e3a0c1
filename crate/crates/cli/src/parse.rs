//! Command-line value syntax: complex numbers, state vectors, ranges.

use qbrach_core::linalg::state;
use qbrach_core::{ComplexScalar, StateVector};

/// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`. Exponents such as `1e-3+2e-1i`
/// are accepted.
pub fn complex_literal(text: &str) -> Result<ComplexScalar, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return real(&s).map(|re| ComplexScalar::new(re, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, imaginary(&body[k..])?),
        None => (0.0, imaginary(body)?),
    };
    Ok(ComplexScalar::new(re, im))
}

fn real(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("not a finite number: {s:?}"))
}

fn imaginary(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s),
    }
}

/// A complex scalar given either as `a+bi` or as a `re,im` pair.
pub fn complex_scalar(text: &str) -> Result<ComplexScalar, String> {
    match text.split_once(',') {
        Some((re, im)) => Ok(ComplexScalar::new(real(re.trim())?, real(im.trim())?)),
        None => complex_literal(text),
    }
}

/// Two comma-separated complex components, e.g. `1,0` or `0.6,0.8i`.
pub fn state_vector(text: &str) -> Result<StateVector, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected two components, got {}", parts.len()));
    }
    Ok(state(complex_literal(parts[0])?, complex_literal(parts[1])?))
}

/// A list of reals taken as a single argument value.
#[derive(Debug, Clone, PartialEq)]
pub struct Values(pub Vec<f64>);

/// `start:stop:step`, inclusive of `stop` up to rounding.
pub fn grid_arg(text: &str) -> Result<Values, String> {
    grid(text).map(Values)
}

pub fn values_arg(text: &str) -> Result<Values, String> {
    values(text).map(Values)
}

pub fn grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected start:stop:step, got {text:?}"));
    }
    let (start, stop, step) = (real(parts[0])?, real(parts[1])?, real(parts[2])?);
    if step <= 0.0 {
        return Err("grid step must be positive".into());
    }
    if stop < start {
        return Err("grid stop lies before start".into());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > 10_000_000 {
        return Err(format!("grid has {n} points"));
    }
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

/// Either a grid or a comma-separated list of reals.
pub fn values(text: &str) -> Result<Vec<f64>, String> {
    if text.contains(':') {
        grid(text)
    } else {
        text.split(',').map(|s| real(s.trim())).collect()
    }
}

pub fn four_reals(text: &str) -> Result<[f64; 4], String> {
    let v = values(text)?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected four values, got {}", v.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(complex_literal("1").unwrap(), cx(1.0, 0.0));
        assert_eq!(complex_literal("-2.5").unwrap(), cx(-2.5, 0.0));
        assert_eq!(complex_literal("i").unwrap(), cx(0.0, 1.0));
        assert_eq!(complex_literal("-i").unwrap(), cx(0.0, -1.0));
        assert_eq!(complex_literal("3i").unwrap(), cx(0.0, 3.0));
        assert_eq!(complex_literal("1+2i").unwrap(), cx(1.0, 2.0));
        assert_eq!(complex_literal("1-i").unwrap(), cx(1.0, -1.0));
        assert_eq!(complex_literal("-1e-3+2e-1i").unwrap(), cx(-1e-3, 0.2));
        assert_eq!(complex_literal("2e+1-1E-2i").unwrap(), cx(20.0, -0.01));
        assert_eq!(complex_scalar("0.3,-0.4").unwrap(), cx(0.3, -0.4));
        for bad in ["", "x", "1+", "1+2", "nan", "1+2k"] {
            assert!(complex_literal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn vectors_and_grids() {
        let v = state_vector("1, 0.5i").unwrap();
        assert_eq!(v[0], cx(1.0, 0.0));
        assert_eq!(v[1], cx(0.0, 0.5));
        assert!(state_vector("1").is_err());
        assert_eq!(grid("0:1.5:0.1").unwrap().len(), 16);
        assert_eq!(grid("0:1:0.3").unwrap().len(), 4);
        assert!(grid("0:1:0").is_err());
        assert_eq!(values("2,10,100").unwrap(), vec![2.0, 10.0, 100.0]);
        assert_eq!(four_reals("1,2,3,4").unwrap(), [1.0, 2.0, 3.0, 4.0]);
    }
}
