//! Check drivers shared by the CLI commands and the acceptance corpus.

use crate::builtin::builtin_fan;
use crate::fandoc::parse_fan;
use crate::report::{ReportError, RunReport};
use anyhow::{bail, Context, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;
use twistoric::charsys::{Character, QmodZ};
use twistoric::fan::Fan;
use twistoric::icengine::Perversity;
use twistoric::toruscoh::{torus_cohomology_closed_form, torus_cohomology_koszul_oracle};

/// Loads a fan from `builtin:<name>` or a document file path.
pub fn load_fan(spec: &str) -> Result<(Arc<Fan>, String, Vec<String>)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let fan = builtin_fan(name)?;
        return Ok((Arc::new(fan), spec.to_string(), Vec::new()));
    }
    let text = std::fs::read_to_string(Path::new(spec))
        .with_context(|| format!("cannot read fan file `{spec}`"))?;
    let parsed = parse_fan(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok((Arc::new(parsed.fan), spec.to_string(), parsed.warnings))
}

/// Runs the full vanishing check and assembles the report with timing.
pub fn run_check(
    fan: &Arc<Fan>,
    source: &str,
    chi: &Character,
    perversity: &Perversity,
    explicit_dual: Option<Perversity>,
) -> Result<RunReport, ReportError> {
    let start = Instant::now();
    let mut report = RunReport::build(fan, source, chi, perversity, explicit_dual)?;
    report.timing_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Deterministic random character with each value's denominator dividing
/// `order_cap` (so the character order divides `order_cap`).
pub fn random_character(rng: &mut ChaCha8Rng, rank: usize, order_cap: u64) -> Character {
    let divisors: Vec<u64> = (1..=order_cap)
        .filter(|d| order_cap.is_multiple_of(*d))
        .collect();
    let values = (0..rank)
        .map(|_| {
            let d = divisors[rng.gen_range(0..divisors.len())];
            let n = rng.gen_range(0..d);
            QmodZ::from_pair(n as i64, d as i64)
        })
        .collect();
    Character::new(values)
}

/// Like `random_character` but never trivial (for positive rank).
pub fn random_twisted_character(rng: &mut ChaCha8Rng, rank: usize, order_cap: u64) -> Character {
    assert!(rank > 0, "no twisted characters on a rank-zero torus");
    loop {
        let c = random_character(rng, rank, order_cap);
        if !c.is_trivial() {
            return c;
        }
    }
}

/// Random strict Goresky-MacPherson perversity: `p(1) = p(2) = 0`, then
/// unit steps chosen by the rng.
pub fn random_strict_gm_perversity(rng: &mut ChaCha8Rng, max_codim: u32) -> Perversity {
    let mut pairs = Vec::new();
    let mut value = 0i64;
    for c in 1..=max_codim {
        if c > 2 {
            value += rng.gen_range(0..=1);
        }
        pairs.push((c, value));
    }
    Perversity::from_values(pairs)
}

#[derive(Debug)]
pub struct OracleSummary {
    pub total: usize,
    pub agreed: usize,
    pub mismatches: Vec<String>,
}

impl OracleSummary {
    pub fn all_agree(&self) -> bool {
        self.agreed == self.total
    }
}

/// Compares the torus-cohomology closed form against the Koszul oracle on
/// a deterministic pseudo-random sample. The sample is drawn sequentially
/// from the seed; the independent comparisons run across workers and
/// mismatches are reported in sample order.
pub fn run_oracle_crosscheck(
    max_rank: usize,
    max_order: u64,
    samples: usize,
    seed: u64,
) -> OracleSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<Character> = (0..samples)
        .map(|_| {
            let rank = rng.gen_range(0..=max_rank);
            random_character(&mut rng, rank, max_order)
        })
        .collect();
    let mut mismatches: Vec<(usize, String)> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, chi)| {
            let closed = torus_cohomology_closed_form(chi);
            let oracle = torus_cohomology_koszul_oracle(chi);
            if closed == oracle {
                None
            } else {
                Some((
                    i,
                    format!(
                        "rank {} character {chi}: closed form {closed} vs oracle {oracle}",
                        chi.ambient_rank()
                    ),
                ))
            }
        })
        .collect();
    mismatches.sort_by_key(|(i, _)| *i);
    let mismatches: Vec<String> = mismatches.into_iter().map(|(_, m)| m).collect();
    OracleSummary {
        total: samples,
        agreed: samples - mismatches.len(),
        mismatches,
    }
}

/// Sanity wrapper used by the CLI for unknown-source errors.
pub fn ensure_character_rank(chi: &Character, fan: &Fan) -> Result<()> {
    if chi.ambient_rank() != fan.ambient_rank() {
        bail!(
            "character has rank {}, fan has rank {}",
            chi.ambient_rank(),
            fan.ambient_rank()
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_crosscheck_agrees() {
        let summary = run_oracle_crosscheck(3, 6, 40, 7);
        assert!(summary.all_agree(), "{:?}", summary.mismatches);
    }

    #[test]
    fn random_characters_are_seed_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            assert_eq!(
                random_character(&mut a, 3, 12),
                random_character(&mut b, 3, 12)
            );
        }
    }

    #[test]
    fn strict_gm_perversities_are_strict_gm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = random_strict_gm_perversity(&mut rng, 4);
            assert!(p.is_strict_gm(4), "{p}");
            // the dual is strict again, so the involution is well defined
            let q = p.dual(4).unwrap();
            assert!(q.is_strict_gm(4), "{q}");
            assert_eq!(q.dual(4).unwrap(), p);
        }
    }

    #[test]
    fn load_builtin() {
        let (fan, label, warnings) = load_fan("builtin:affine:2").unwrap();
        assert_eq!(fan.ambient_rank(), 2);
        assert_eq!(label, "builtin:affine:2");
        assert!(warnings.is_empty());
        assert!(load_fan("builtin:bogus").is_err());
    }
}
