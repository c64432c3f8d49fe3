//! Parser for complex literals such as `1.5-0.5j`, `2`, `-j` or `3e-2+1i`.

use num_complex::Complex64 as C64;

fn number(s: &str, whole: &str) -> Result<f64, String> {
    let v = match s {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => s
            .parse::<f64>()
            .map_err(|_| format!("invalid complex number \"{whole}\" (expected RE+IMj)"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("complex number \"{whole}\" is not finite"))
    }
}

pub fn parse_complex(input: &str) -> Result<C64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = s.strip_suffix(['j', 'i']) else {
        return Ok(C64::new(number(&s, input)?, 0.0));
    };
    // split at the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = &body[..k];
            if re.is_empty() || re == "+" || re == "-" {
                return Err(format!(
                    "invalid complex number \"{input}\" (expected RE+IMj)"
                ));
            }
            Ok(C64::new(number(re, input)?, number(&body[k..], input)?))
        }
        None => Ok(C64::new(0.0, number(body, input)?)),
    }
}
