//! Ring text format:
//!
//! ```text
//! p 32003
//! vars x y z
//! gen 3*x^2*y - z^3
//! ```
//! Lines starting with `#` are comments.

use super::poly::{HomogPoly, Monomial};
use super::RingError;
use crate::exactla::Fp;

#[derive(Clone, Debug)]
pub struct RingText {
    pub p: u64,
    pub vars: Vec<String>,
    pub gens: Vec<HomogPoly>,
}

fn perr(line: usize, msg: impl Into<String>) -> RingError {
    RingError::Parse { line, msg: msg.into() }
}

pub fn parse_ring(text: &str) -> Result<RingText, RingError> {
    let mut p: Option<(u64, Fp)> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (kw, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match kw {
            "p" => {
                if p.is_some() {
                    return Err(perr(ln, "duplicate `p` line"));
                }
                let v: u64 = rest.parse().map_err(|_| perr(ln, format!("bad prime `{rest}`")))?;
                let f = Fp::new(v).map_err(|e| perr(ln, e.to_string()))?;
                p = Some((v, f));
            }
            "vars" => {
                if p.is_none() {
                    return Err(perr(ln, "`vars` before `p`"));
                }
                if vars.is_some() {
                    return Err(perr(ln, "duplicate `vars` line"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(perr(ln, "no variables"));
                }
                for (k, n) in names.iter().enumerate() {
                    let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return Err(perr(ln, format!("bad variable name `{n}`")));
                    }
                    if names[..k].contains(n) {
                        return Err(perr(ln, format!("duplicate variable `{n}`")));
                    }
                }
                vars = Some(names);
            }
            "gen" => {
                let (Some((_, f)), Some(v)) = (p.as_ref(), vars.as_ref()) else {
                    return Err(perr(ln, "`gen` before `p` and `vars`"));
                };
                gens.push(parse_poly(rest, v, f).map_err(|m| match m {
                    RingError::Parse { msg, .. } => perr(ln, msg),
                    other => other,
                })?);
            }
            _ => return Err(perr(ln, format!("unknown directive `{kw}`"))),
        }
    }
    let (p, _) = p.ok_or_else(|| perr(0, "missing `p` line"))?;
    let vars = vars.ok_or_else(|| perr(0, "missing `vars` line"))?;
    Ok(RingText { p, vars, gens })
}

/// Parse `term(+term|-term)*`; a leading sign is accepted.
pub fn parse_poly(s: &str, vars: &[String], f: &Fp) -> Result<HomogPoly, RingError> {
    let e = vars.len();
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(perr(0, "empty polynomial"));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in s.chars().enumerate() {
        if ch == '+' || ch == '-' {
            if i == 0 {
                neg = ch == '-';
                continue;
            }
            if cur.is_empty() {
                return Err(perr(0, "empty term"));
            }
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(perr(0, "empty term"));
    }
    terms.push((neg, cur));

    let mut parsed = Vec::new();
    for (neg, t) in terms {
        let mut coeff: u32 = 1;
        let mut expo = vec![0u16; e];
        let mut seen_var = false;
        for (k, fac) in t.split('*').enumerate() {
            if fac.is_empty() {
                return Err(perr(0, format!("empty factor in `{t}`")));
            }
            if fac.chars().all(|c| c.is_ascii_digit()) {
                if k != 0 {
                    return Err(perr(0, format!("coefficient must lead the term `{t}`")));
                }
                coeff = reduce_decimal(fac, f);
                continue;
            }
            let (name, ex) = match fac.split_once('^') {
                Some((n, x)) => {
                    let x: u16 = x.parse().map_err(|_| perr(0, format!("bad exponent in `{fac}`")))?;
                    (n, x)
                }
                None => (fac, 1),
            };
            let v = vars
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| perr(0, format!("unknown variable `{name}`")))?;
            expo[v] += ex;
            seen_var = true;
        }
        if !seen_var {
            return Err(perr(0, format!("term `{t}` has no variable")));
        }
        let c = if neg { f.neg(coeff) } else { coeff };
        parsed.push((Monomial(expo), c));
    }
    let deg = parsed[0].0.degree();
    if parsed.iter().any(|(m, _)| m.degree() != deg) {
        return Err(RingError::Inhomogeneous);
    }
    let mut poly = HomogPoly::zero(e, deg);
    for (m, c) in parsed {
        poly.add_term(m, c, f);
    }
    Ok(poly)
}

fn reduce_decimal(s: &str, f: &Fp) -> u32 {
    s.bytes().fold(0u32, |acc, b| f.add(f.mul(acc, 10), (b - b'0') as u32))
}

/// Ring file text; `header` lines are emitted as comments.
pub fn emit_ring(p: u64, vars: &[String], gens: &[HomogPoly], header: &[String]) -> String {
    let f = Fp::new(p).expect("prime");
    let mut out = String::new();
    for h in header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    out.push_str(&format!("p {p}\nvars {}\n", vars.join(" ")));
    for g in gens {
        out.push_str(&format!("gen {}\n", g.display(vars, &f)));
    }
    out
}
