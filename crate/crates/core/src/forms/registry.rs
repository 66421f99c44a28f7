//! Built-in function registry addressable by name and parameters, plus the
//! text spec parser the CLI uses.
//!
//! Spec grammar:
//!   exp
//!   sin
//!   poly:EXPR                      e.g.  poly:z^3-2z
//!   one_over_z_minus:X,Y           1 / (z - (X + iY))
//!   rational:NUM/DEN[@X,Y;X,Y...]  NUM a polynomial; DEN either a product of
//!                                  linear factors (z, z^2, (z-1), (z+0.5)^2,
//!                                  z(z-1), ...) whose roots become the
//!                                  declared singularities, or any polynomial
//!                                  with the poles listed after '@'.
//!
//! Root finding is out of scope: a denominator that is not syntactically
//! factored must carry explicit poles.

use super::HoloFn;
use crate::error::{Error, Result};
use crate::geom::{Complex, Point2};

pub fn named_exp() -> HoloFn {
    HoloFn::new("exp", vec![], |z: Complex| z.exp())
}

pub fn named_sin() -> HoloFn {
    HoloFn::new("sin", vec![], |z: Complex| z.sin())
}

/// Polynomial with real coefficients, ascending order.
pub fn poly_real(coeffs: &[f64]) -> HoloFn {
    let c: Vec<f64> = coeffs.to_vec();
    HoloFn::new(format!("poly:{c:?}"), vec![], move |z: Complex| {
        horner(&c, z)
    })
}

pub fn one_over_z_minus(pole: Point2) -> HoloFn {
    let p: Complex = pole.into();
    HoloFn::new(
        format!("one_over_z_minus:{},{}", pole.x, pole.y),
        vec![pole],
        move |z: Complex| (z - p).recip(),
    )
}

/// Rational function `num(z) / prod (z - root_k)^(m_k)` with the roots as the
/// declared singularities. Evaluating factor-wise keeps accuracy near roots.
pub fn rational_factored(
    label: impl Into<String>,
    num: Vec<f64>,
    factors: Vec<(Point2, u32)>,
) -> HoloFn {
    let sings: Vec<Point2> = factors.iter().map(|&(r, _)| r).collect();
    let roots: Vec<(Complex, u32)> = factors
        .iter()
        .map(|&(r, m)| (Complex::from(r), m))
        .collect();
    HoloFn::new(label, sings, move |z: Complex| {
        let mut den = Complex::ONE;
        for &(root, mult) in &roots {
            let d = z - root;
            for _ in 0..mult {
                den = den * d;
            }
        }
        horner(&num, z) / den
    })
}

/// Rational function given by numerator/denominator coefficient lists with the
/// poles supplied by the caller.
pub fn rational_poly(
    label: impl Into<String>,
    num: Vec<f64>,
    den: Vec<f64>,
    poles: Vec<Point2>,
) -> HoloFn {
    HoloFn::new(label, poles, move |z: Complex| {
        horner(&num, z) / horner(&den, z)
    })
}

fn horner(coeffs: &[f64], z: Complex) -> Complex {
    let mut acc = Complex::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * z + Complex::new(c, 0.0);
    }
    acc
}

/// The fixed form dictionary used by the verification test suites: entire
/// functions plus one pole placed by the caller.
pub fn verification_forms(pole: Point2) -> Vec<HoloFn> {
    vec![
        named_exp(),
        named_sin(),
        poly_real(&[0.0, -2.0, 0.0, 1.0]),
        one_over_z_minus(pole),
    ]
}

/// Parse a CLI function spec into a registry function.
pub fn parse_function_spec(spec: &str) -> Result<HoloFn> {
    let spec = spec.trim();
    let bad = |reason: &str| Error::BadFunctionSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    match spec {
        "exp" => return Ok(named_exp()),
        "sin" => return Ok(named_sin()),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("poly:") {
        let coeffs = parse_poly(rest).map_err(|e| bad(&e))?;
        let mut f = poly_real(&coeffs);
        f.label = spec.to_string();
        return Ok(f);
    }
    if let Some(rest) = spec.strip_prefix("one_over_z_minus:") {
        let pole = parse_point(rest).map_err(|e| bad(&e))?;
        return Ok(one_over_z_minus(pole));
    }
    if let Some(rest) = spec.strip_prefix("rational:") {
        let (body, poles_txt) = match rest.split_once('@') {
            Some((b, p)) => (b, Some(p)),
            None => (rest, None),
        };
        let (num_txt, den_txt) = body
            .split_once('/')
            .ok_or_else(|| bad("rational spec needs NUM/DEN"))?;
        let num = parse_poly(num_txt).map_err(|e| bad(&e))?;
        if let Some(poles_txt) = poles_txt {
            let den = parse_poly(den_txt).map_err(|e| bad(&e))?;
            let poles = poles_txt
                .split(';')
                .map(parse_point)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| bad(&e))?;
            return Ok(rational_poly(spec, num, den, poles));
        }
        if let Some(factors) = parse_factors(den_txt) {
            return Ok(rational_factored(spec, num, factors));
        }
        Err(bad(
            "denominator is not a product of linear factors; supply poles after '@'",
        ))
    } else {
        Err(bad("unknown function name"))
    }
}

fn parse_point(txt: &str) -> std::result::Result<Point2, String> {
    let (x, y) = txt
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y, got '{txt}'"))?;
    let px: f64 = x.trim().parse().map_err(|_| format!("bad number '{x}'"))?;
    let py: f64 = y.trim().parse().map_err(|_| format!("bad number '{y}'"))?;
    Ok(Point2::new(px, py))
}

/// Parse a polynomial expression in `z` with real coefficients into an
/// ascending coefficient list.
fn parse_poly(expr: &str) -> std::result::Result<Vec<f64>, String> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    // Split into signed terms; '+'/'-' after 'e'/'E' belongs to an exponent.
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            let prev = s.as_bytes()[i - 1] as char;
            if prev != 'e' && prev != 'E' {
                terms.push(std::mem::take(&mut cur));
                cur.push(ch);
                continue;
            }
        }
        cur.push(ch);
    }
    terms.push(cur);

    let mut coeffs: Vec<f64> = Vec::new();
    for term in terms.iter().filter(|t| !t.is_empty() && *t != "+") {
        let (coef, power) = parse_term(term)?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0.0);
        }
        coeffs[power] += coef;
    }
    if coeffs.is_empty() {
        return Err("no terms".into());
    }
    Ok(coeffs)
}

fn parse_term(term: &str) -> std::result::Result<(f64, usize), String> {
    match term.find('z') {
        None => {
            let c: f64 = term
                .parse()
                .map_err(|_| format!("bad constant term '{term}'"))?;
            Ok((c, 0))
        }
        Some(zpos) => {
            let coef_txt = term[..zpos].trim_end_matches('*');
            let coef: f64 = match coef_txt {
                "" | "+" => 1.0,
                "-" => -1.0,
                other => other
                    .parse()
                    .map_err(|_| format!("bad coefficient '{other}'"))?,
            };
            let rest = &term[zpos + 1..];
            let power = if rest.is_empty() {
                1
            } else if let Some(exp) = rest.strip_prefix('^') {
                exp.parse::<usize>()
                    .map_err(|_| format!("bad exponent '{exp}'"))?
            } else {
                return Err(format!("unexpected '{rest}' after z"));
            };
            Ok((coef, power))
        }
    }
}

/// Parse a denominator written as a product of linear factors. Returns `None`
/// when the text is not in factored form.
fn parse_factors(expr: &str) -> Option<Vec<(Point2, u32)>> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let bytes = s.as_bytes();
    let mut factors: Vec<(Point2, u32)> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] as char {
            '*' => i += 1,
            'z' => {
                i += 1;
                let mult = parse_exponent(&s, &mut i)?;
                factors.push((Point2::new(0.0, 0.0), mult));
            }
            '(' => {
                let close = s[i..].find(')').map(|k| i + k)?;
                let inner = &s[i + 1..close];
                let root = parse_linear_root(inner)?;
                i = close + 1;
                let mult = parse_exponent(&s, &mut i)?;
                factors.push((root, mult));
            }
            _ => return None,
        }
    }
    if factors.is_empty() {
        None
    } else {
        Some(factors)
    }
}

fn parse_exponent(s: &str, i: &mut usize) -> Option<u32> {
    if s.as_bytes().get(*i) == Some(&b'^') {
        let rest = &s[*i + 1..];
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return None;
        }
        *i += 1 + digits.len();
        digits.parse().ok()
    } else {
        Some(1)
    }
}

/// Root of a factor text like "z", "z-1", "z+0.5".
fn parse_linear_root(inner: &str) -> Option<Point2> {
    let rest = inner.strip_prefix('z')?;
    if rest.is_empty() {
        return Some(Point2::new(0.0, 0.0));
    }
    let (sign, num) = match rest.as_bytes()[0] as char {
        '-' => (1.0, &rest[1..]),
        '+' => (-1.0, &rest[1..]),
        _ => return None,
    };
    let c: f64 = num.parse().ok()?;
    Some(Point2::new(sign * c, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_expression() {
        let f = parse_function_spec("poly:z^3-2z").unwrap();
        let v = f.eval(Complex::new(2.0, 0.0));
        assert!((v.re - 4.0).abs() < 1e-14);
        let g = parse_function_spec("poly:3z^2+0.5").unwrap();
        let w = g.eval(Complex::new(1.0, 0.0));
        assert!((w.re - 3.5).abs() < 1e-14);
    }

    #[test]
    fn rational_one_over_z() {
        let f = parse_function_spec("rational:1/z").unwrap();
        assert_eq!(f.singularities().len(), 1);
        let v = f.eval(Complex::new(0.0, 2.0));
        assert!((v.im + 0.5).abs() < 1e-14);
    }

    #[test]
    fn rational_partial_fraction_pair() {
        let f = parse_function_spec("rational:1/z(z-1)").unwrap();
        assert_eq!(f.singularities().len(), 2);
        let z = Complex::new(0.5, 0.5);
        let direct = (z * (z - Complex::ONE)).recip();
        assert!((f.eval(z) - direct).abs() < 1e-14);
    }

    #[test]
    fn rational_with_explicit_poles() {
        let f = parse_function_spec("rational:1/z^2+1@0,1;0,-1").unwrap();
        assert_eq!(f.singularities().len(), 2);
        let v = f.eval(Complex::new(1.0, 0.0));
        assert!((v.re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn unfactored_denominator_without_poles_is_rejected() {
        assert!(parse_function_spec("rational:1/z^2+1").is_err());
    }

    #[test]
    fn factored_powers() {
        let f = parse_function_spec("rational:1/(z-1)^2").unwrap();
        let v = f.eval(Complex::new(3.0, 0.0));
        assert!((v.re - 0.25).abs() < 1e-14);
    }

    #[test]
    fn one_over_z_minus_spec() {
        let f = parse_function_spec("one_over_z_minus:0.5,0.25").unwrap();
        assert_eq!(f.singularities()[0], Point2::new(0.5, 0.25));
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!(parse_function_spec("tan").is_err());
    }
}
