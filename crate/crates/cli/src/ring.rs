use artinian::exactla::Fp;
use artinian::generator::{sample_level, truncation_ideal, GenError, LevelSpec};
use artinian::gradedring::parse::{emit_ring, parse_ring};
use artinian::gradedring::{num_monomials, GradedQuotient, HomogPoly};

use crate::{RunConfig, UsageError};

fn sample(cfg: &RunConfig) -> Result<(Vec<HomogPoly>, Vec<String>), UsageError> {
    let (e, s, c) = (cfg.e.unwrap(), cfg.s.unwrap(), cfg.c.unwrap());
    let n = if e >= 1 && s >= 1 { num_monomials(e, s) } else { 0 };
    if e >= 2 && s >= 1 && (c == 0 || c > n) {
        return Err(UsageError(format!("invalid level spec: need 1 <= c <= {n}, got c = {c}")));
    }
    if c == n && e >= 2 && s >= 1 {
        // V = 0: the whole of Q_s survives
        return Ok((truncation_ideal(e, s), vec![format!("truncation n^{} (c equals the number of degree-{s} monomials)", s + 1)]));
    }
    let spec = LevelSpec::new(cfg.prime, e, s, c, cfg.seed).map_err(|err| match err {
        GenError::Precondition(m) => UsageError(format!("invalid level spec: {m}")),
        other => UsageError(other.to_string()),
    })?;
    let smp = sample_level(&spec).map_err(|e| UsageError(e.to_string()))?;
    Ok((smp.gens, vec![format!("sampling attempts {}", smp.attempts)]))
}

fn build(cfg: &RunConfig, p: u64, vars: Option<Vec<String>>, e: usize, gens: &[HomogPoly]) -> Result<GradedQuotient, UsageError> {
    let f = Fp::new(p)?;
    let r = match vars {
        Some(v) => GradedQuotient::build_named(f, v, gens, cfg.cap),
        None => GradedQuotient::build(f, e, gens, cfg.cap),
    };
    r.map_err(UsageError::from)
}

/// The ring file written by `gen`, with a provenance header.
pub fn generate_text(cfg: &RunConfig) -> Result<String, UsageError> {
    let (gens, notes) = sample(cfg)?;
    let r = build(cfg, cfg.prime, None, cfg.e.unwrap(), &gens)?;
    let mut header = vec![
        format!("artinian gen --prime {} --e {} --s {} --c {} --seed {}", cfg.prime, cfg.e.unwrap(), cfg.s.unwrap(), cfg.c.unwrap(), cfg.seed),
        "generic level algebra with socle c*z^s".to_string(),
    ];
    header.extend(notes);
    header.push(format!("hilbert {:?}", r.hilbert()));
    Ok(emit_ring(cfg.prime, r.vars(), r.min_gens(), &header))
}

/// Reads --in or samples from --e/--s/--c; the config's prime follows the ring.
pub fn load(mut cfg: RunConfig) -> Result<(GradedQuotient, RunConfig), UsageError> {
    match cfg.input.clone() {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| UsageError(format!("{path}: {e}")))?;
            let rt = parse_ring(&text).map_err(|e| UsageError(format!("{path}: {e}")))?;
            if cfg.prime_given && rt.p != cfg.prime {
                return Err(UsageError(format!("--prime {} disagrees with the ring file's p {}", cfg.prime, rt.p)));
            }
            cfg.prime = rt.p;
            let e = rt.vars.len();
            let r = build(&cfg, rt.p, Some(rt.vars), e, &rt.gens)?;
            Ok((r, cfg))
        }
        None => {
            let (gens, _) = sample(&cfg)?;
            let r = build(&cfg, cfg.prime, None, cfg.e.unwrap(), &gens)?;
            Ok((r, cfg))
        }
    }
}
