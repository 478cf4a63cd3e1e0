//! The split model of constructible complexes on a fan: the intersection
//! complex recursion for arbitrary perversities, exact one-step pushforward
//! stalks from the open torus, sound character propagation across orbits,
//! and the per-orbit vanishing certificate.
//!
//! An entry records, for one cone, a degree window, the multiset of
//! monodromy characters that can appear among composition factors of the
//! cohomology sheaves there, and per-degree rank bounds. Entries produced
//! by the one-step rule from the open torus are exact; everything produced
//! from deeper strata is a sound over-approximation (true composition
//! factors form a sub-multiset and respect the window's lower bound).

use crate::charsys::{CharError, Character, LocalSystemClass};
use crate::fan::{Fan, FanError, Violation};
use crate::lattice::{LatticeError, Sublattice};
use crate::toruscoh::binomial;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Sentinel for an unbounded upper degree.
pub const UNBOUNDED_DEGREE: i64 = i64::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("character has rank {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("complex already has entries on cones of dimension >= {level}")]
    SupportTooDeep { level: usize },
    #[error("perversity value missing for codimension {0}")]
    PerversityUndefined(u32),
    #[error("dual perversity undefined: perversity is not strict Goresky-MacPherson; supply one explicitly")]
    DualPerversityUndefined,
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Integer-valued perversity function on stratum codimensions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perversity {
    values: BTreeMap<u32, i64>,
}

impl Perversity {
    pub fn from_values(pairs: impl IntoIterator<Item = (u32, i64)>) -> Self {
        Perversity {
            values: pairs.into_iter().collect(),
        }
    }

    /// `p(c) = 0` for every codimension.
    pub fn zero(max_codim: u32) -> Self {
        Self::from_values((1..=max_codim).map(|c| (c, 0)))
    }

    /// `p(1) = 0`, `p(c) = c - 2` for `c >= 2`.
    pub fn top(max_codim: u32) -> Self {
        Self::from_values((1..=max_codim).map(|c| (c, if c == 1 { 0 } else { c as i64 - 2 })))
    }

    /// `p(1) = 0`, `p(c) = floor((c - 2) / 2)` for `c >= 2`.
    pub fn middle(max_codim: u32) -> Self {
        Self::from_values((1..=max_codim).map(|c| {
            (
                c,
                if c == 1 {
                    0
                } else {
                    (c as i64 - 2).div_euclid(2)
                },
            )
        }))
    }

    pub fn preset(name: &str, max_codim: u32) -> Option<Self> {
        match name {
            "zero" => Some(Self::zero(max_codim)),
            "top" => Some(Self::top(max_codim)),
            "middle" => Some(Self::middle(max_codim)),
            _ => None,
        }
    }

    pub fn value(&self, codim: u32) -> Option<i64> {
        self.values.get(&codim).copied()
    }

    pub fn values(&self) -> &BTreeMap<u32, i64> {
        &self.values
    }

    pub fn max_codim(&self) -> u32 {
        self.values.keys().max().copied().unwrap_or(0)
    }

    /// Strict Goresky-MacPherson conditions on codimensions `1..=max_codim`:
    /// defined everywhere, `p(1) = 0`, nondecreasing with steps at most one.
    pub fn is_strict_gm(&self, max_codim: u32) -> bool {
        if max_codim == 0 {
            return true;
        }
        if self.value(1) != Some(0) {
            return false;
        }
        for c in 1..max_codim {
            let (Some(a), Some(b)) = (self.value(c), self.value(c + 1)) else {
                return false;
            };
            if b < a || b > a + 1 {
                return false;
            }
        }
        true
    }

    /// The dual perversity `q(c) = c - 2 - p(c)` for `c >= 2`, with the
    /// codimension-one convention `q(1) = 0`. Only formed in strict
    /// Goresky-MacPherson mode, where the duality formula is standard.
    pub fn dual(&self, max_codim: u32) -> Result<Perversity, EngineError> {
        if !self.is_strict_gm(max_codim) {
            return Err(EngineError::DualPerversityUndefined);
        }
        Ok(Self::from_values((1..=max_codim).map(|c| {
            let v = if c == 1 {
                0
            } else {
                c as i64 - 2 - self.value(c).expect("checked strict gm")
            };
            (c, v)
        })))
    }
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(c, v)| format!("p({c})={v}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// One cone's worth of constructible data: a degree window, the character
/// multiset of possible composition factors on the orbit, per-degree rank
/// bounds, and whether the data is exact or an over-approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexEntry {
    pub cone: usize,
    pub degree_low: i64,
    pub degree_high: i64,
    pub factors: LocalSystemClass,
    pub rank_bounds: BTreeMap<i64, u64>,
    pub exact: bool,
}

impl ComplexEntry {
    pub fn window(&self) -> (i64, i64) {
        (self.degree_low, self.degree_high)
    }

    fn char_key(&self) -> Vec<Character> {
        self.factors.characters().cloned().collect()
    }
}

/// A constructible complex in the split model: per-cone entries over a
/// shared fan. Pure value; every operation returns a new complex.
#[derive(Debug, Clone)]
pub struct FanComplex {
    fan: Arc<Fan>,
    entries: Vec<ComplexEntry>,
}

impl FanComplex {
    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn entries(&self) -> &[ComplexEntry] {
        &self.entries
    }

    pub fn entries_on(&self, cone: usize) -> Vec<&ComplexEntry> {
        self.entries.iter().filter(|e| e.cone == cone).collect()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.entries.iter().map(|e| e.cone).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn sorted(mut self) -> Self {
        self.entries.sort_by(|a, b| {
            (a.cone, a.char_key(), a.degree_low, a.degree_high).cmp(&(
                b.cone,
                b.char_key(),
                b.degree_low,
                b.degree_high,
            ))
        });
        self
    }

    /// Degree shift `[m]`: windows and rank bounds move by `-m`, factors
    /// and twistedness untouched.
    pub fn shift(&self, m: i64) -> FanComplex {
        let entries = self
            .entries
            .iter()
            .map(|e| ComplexEntry {
                cone: e.cone,
                degree_low: e.degree_low - m,
                degree_high: if e.degree_high == UNBOUNDED_DEGREE {
                    UNBOUNDED_DEGREE
                } else {
                    e.degree_high - m
                },
                factors: e.factors.clone(),
                rank_bounds: e.rank_bounds.iter().map(|(d, r)| (d - m, *r)).collect(),
                exact: e.exact,
            })
            .collect();
        FanComplex {
            fan: self.fan.clone(),
            entries,
        }
    }

    /// Truncation `tau_{<= cutoff}`: entries whose whole window lies above
    /// the cutoff are removed (their contributions only occur at degrees
    /// >= degree_low), the rest are clipped. Never introduces characters.
    pub fn truncate(&self, cutoff: i64) -> FanComplex {
        let entries = self
            .entries
            .iter()
            .filter(|e| e.degree_low <= cutoff)
            .map(|e| ComplexEntry {
                cone: e.cone,
                degree_low: e.degree_low,
                degree_high: e.degree_high.min(cutoff),
                factors: e.factors.clone(),
                rank_bounds: e
                    .rank_bounds
                    .iter()
                    .filter(|(d, _)| **d <= cutoff)
                    .map(|(d, r)| (*d, *r))
                    .collect(),
                exact: e.exact,
            })
            .collect();
        FanComplex {
            fan: self.fan.clone(),
            entries,
        }
    }

    /// One step of the derived pushforward onto the cones of dimension `k`.
    ///
    /// For each entry on a face `sigma` of a dimension-`k` cone `tau`, each
    /// character is restricted to the image of the `tau`-stabilizer lattice
    /// in the `sigma`-orbit quotient: a nontrivial restriction contributes
    /// nothing (its twisted torus cohomology vanishes), a trivial one
    /// descends to the `tau`-orbit quotient with the degree window widened
    /// by `dim tau - dim sigma` and binomially convolved rank bounds. The
    /// result is exact precisely for the single contribution sourced at the
    /// exact open-torus entry; everything else is an over-approximation.
    /// Existing entries are retained unchanged.
    pub fn pushforward_step(&self, k: usize) -> Result<FanComplex, EngineError> {
        let fan = &self.fan;
        for e in &self.entries {
            if fan.cone(e.cone)?.dim() >= k {
                return Err(EngineError::SupportTooDeep { level: k });
            }
        }

        struct Contribution {
            low: i64,
            high: i64,
            bounds: BTreeMap<i64, u64>,
            factors: Vec<(Character, u64)>,
            from_exact_torus: bool,
        }

        let mut grouped: BTreeMap<(usize, Vec<Character>), Vec<Contribution>> = BTreeMap::new();

        for tau in fan.cones_of_dim(k) {
            let tau_od = fan.orbit_data(tau.id())?;
            for entry in &self.entries {
                if !fan.is_face(entry.cone, tau.id()) {
                    continue;
                }
                let sigma = fan.cone(entry.cone)?;
                let sigma_od = fan.orbit_data(sigma.id())?;
                let delta = tau.dim() - sigma.dim();

                // image of the tau-stabilizer lattice in the sigma quotient
                let image_gens = tau_od
                    .stab_lattice
                    .basis()
                    .iter()
                    .map(|b| sigma_od.quotient.project(b))
                    .collect::<Result<Vec<_>, _>>()?;
                let image = Sublattice::from_generators(sigma_od.quotient.rank(), image_gens)?;
                debug_assert_eq!(image.rank(), delta, "image lattice rank");

                let mut surviving: Vec<(Character, u64)> = Vec::new();
                for (mu, mult) in entry.factors.factors() {
                    if !mu.restrict(&image)?.is_trivial() {
                        continue; // vanishing branch
                    }
                    // canonical coordinates on the tau quotient: evaluate on
                    // the tau complement basis through the sigma quotient
                    let values = tau_od
                        .quotient
                        .complement_basis()
                        .iter()
                        .map(|w| {
                            let c = sigma_od.quotient.project(w)?;
                            Ok(mu.evaluate(&c)?)
                        })
                        .collect::<Result<Vec<_>, EngineError>>()?;
                    let descended = Character::new(values);
                    let scale = 1u64 << delta;
                    surviving.push((descended, mult * scale));
                }
                if surviving.is_empty() {
                    continue;
                }

                let mut bounds: BTreeMap<i64, u64> = BTreeMap::new();
                for (d, r) in &entry.rank_bounds {
                    for j in 0..=delta as u64 {
                        *bounds.entry(d + j as i64).or_insert(0) += r * binomial(delta as u64, j);
                    }
                }
                let high = if entry.degree_high == UNBOUNDED_DEGREE {
                    UNBOUNDED_DEGREE
                } else {
                    entry.degree_high + delta as i64
                };
                let mut key: Vec<Character> = surviving.iter().map(|(c, _)| c.clone()).collect();
                key.sort();
                key.dedup();
                grouped
                    .entry((tau.id(), key))
                    .or_default()
                    .push(Contribution {
                        low: entry.degree_low,
                        high,
                        bounds,
                        factors: surviving,
                        from_exact_torus: sigma.is_zero() && entry.exact,
                    });
            }
        }

        let mut entries = self.entries.clone();
        for ((tau_id, _key), mut contribs) in grouped {
            let tau_od = fan.orbit_data(tau_id)?;
            contribs.sort_by_key(|c| (c.low, c.high));
            // merge contributions with overlapping windows
            let mut merged: Vec<Contribution> = Vec::new();
            let mut exact_flags: Vec<bool> = Vec::new();
            for c in contribs {
                match merged.last_mut() {
                    Some(prev) if c.low <= prev.high => {
                        prev.high = prev.high.max(c.high);
                        for (d, r) in c.bounds {
                            *prev.bounds.entry(d).or_insert(0) += r;
                        }
                        prev.factors.extend(c.factors);
                        *exact_flags.last_mut().unwrap() = false;
                    }
                    _ => {
                        exact_flags.push(c.from_exact_torus);
                        merged.push(c);
                    }
                }
            }
            for (c, exact) in merged.into_iter().zip(exact_flags) {
                entries.push(ComplexEntry {
                    cone: tau_id,
                    degree_low: c.low,
                    degree_high: c.high,
                    factors: LocalSystemClass::new(tau_od.quotient.clone(), c.factors)?,
                    rank_bounds: c.bounds,
                    exact,
                });
            }
        }

        Ok(FanComplex {
            fan: self.fan.clone(),
            entries,
        }
        .sorted())
    }
}

/// The shifted local system `L[n]` on the open orbit: a single exact entry
/// on the zero cone at degree `-n`.
pub fn initial_complex(fan: Arc<Fan>, chi: &Character) -> Result<FanComplex, EngineError> {
    let n = fan.ambient_rank();
    if chi.ambient_rank() != n {
        return Err(EngineError::DimensionMismatch {
            expected: n,
            got: chi.ambient_rank(),
        });
    }
    let zero = fan
        .zero_cone_id()
        .ok_or(FanError::Invalid(vec![Violation::MissingZeroCone]))?;
    let od = fan.orbit_data(zero)?;
    let factor = chi.descend(&od.quotient)?;
    let degree = -(n as i64);
    let entry = ComplexEntry {
        cone: zero,
        degree_low: degree,
        degree_high: degree,
        factors: LocalSystemClass::singleton(od.quotient.clone(), factor, 1)?,
        rank_bounds: BTreeMap::from([(degree, 1)]),
        exact: true,
    };
    Ok(FanComplex {
        fan,
        entries: vec![entry],
    })
}

/// Deligne's recursion: for each codimension `k = 1..=n`, push the complex
/// forward onto the codimension-`k` cones and truncate at `p(k) - n`. The
/// codimension-one step is a convention (toric varieties are smooth there);
/// override it via the perversity value at 1.
pub fn deligne_ic(
    fan: Arc<Fan>,
    chi: &Character,
    perversity: &Perversity,
) -> Result<FanComplex, EngineError> {
    let n = fan.ambient_rank();
    let mut complex = initial_complex(fan.clone(), chi)?;
    for k in 1..=n {
        let has_cones = !fan.cones_of_dim(k).is_empty();
        match perversity.value(k as u32) {
            Some(pk) => {
                if has_cones {
                    complex = complex.pushforward_step(k)?;
                }
                complex = complex.truncate(pk - n as i64);
            }
            None if has_cones => {
                return Err(EngineError::PerversityUndefined(k as u32));
            }
            None => {}
        }
    }
    Ok(complex)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Vanishes,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Vanishes => write!(f, "vanishes"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Why one orbit's contribution to the orbit-filtration spectral sequence
/// vanishes, or the witness that blocks the certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitStatus {
    /// No entry survived propagation: the stalk contribution is zero.
    StalkEmpty,
    /// A nontrivial character: twisted torus cohomology vanishes.
    Twisted {
        character: Character,
        window: (i64, i64),
    },
    /// A trivial character was reached; vanishing cannot be certified.
    TrivialWitness {
        character: Character,
        window: (i64, i64),
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitLogLine {
    pub cone: usize,
    pub status: OrbitStatus,
}

/// Per-orbit twistedness log for one constructed complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLog {
    pub character: Character,
    pub perversity: Perversity,
    pub lines: Vec<OrbitLogLine>,
    pub twisted: bool,
}

/// Scans every entry of the complex and records, per cone and per
/// propagated character, whether it is twisted or a trivial witness. Cones
/// without entries are logged as empty stalks. The fragment is twisted
/// exactly when no trivial character appears.
pub fn twistedness_certificate(complex: &FanComplex) -> (Vec<OrbitLogLine>, bool) {
    let fan = complex.fan();
    let mut lines = Vec::new();
    let mut twisted = true;
    for cone in fan.cones() {
        let entries = complex.entries_on(cone.id());
        if entries.is_empty() {
            lines.push(OrbitLogLine {
                cone: cone.id(),
                status: OrbitStatus::StalkEmpty,
            });
            continue;
        }
        for entry in entries {
            for chi in entry.factors.characters() {
                let status = if chi.is_trivial() {
                    twisted = false;
                    OrbitStatus::TrivialWitness {
                        character: chi.clone(),
                        window: entry.window(),
                    }
                } else {
                    OrbitStatus::Twisted {
                        character: chi.clone(),
                        window: entry.window(),
                    }
                };
                lines.push(OrbitLogLine {
                    cone: cone.id(),
                    status,
                });
            }
        }
    }
    (lines, twisted)
}

/// The vanishing certificate: twistedness logs for the complex built with
/// `(p, chi)` and for its Verdier-dual side `(dual p, dual chi)`. Vanishing
/// is certified only when both runs are twisted; an inconclusive verdict
/// never asserts nonvanishing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingCertificate {
    pub verdict: Verdict,
    pub primal: RunLog,
    pub dual: RunLog,
}

impl VanishingCertificate {
    fn assemble(primal: RunLog, dual: RunLog) -> Self {
        let verdict = if primal.twisted && dual.twisted {
            Verdict::Vanishes
        } else {
            Verdict::Inconclusive
        };
        VanishingCertificate {
            verdict,
            primal,
            dual,
        }
    }

    pub fn witnesses(&self) -> Vec<&OrbitLogLine> {
        self.primal
            .lines
            .iter()
            .chain(self.dual.lines.iter())
            .filter(|l| matches!(l.status, OrbitStatus::TrivialWitness { .. }))
            .collect()
    }
}

/// Runs the full check: builds the complex for `(chi, p)` and for
/// `(dual chi, dual p)` and certifies per-orbit twistedness of both. The
/// dual perversity is auto-formed in strict Goresky-MacPherson mode, or
/// must be supplied explicitly.
pub fn vanishing_verdict(
    fan: Arc<Fan>,
    chi: &Character,
    perversity: &Perversity,
    explicit_dual: Option<Perversity>,
) -> Result<VanishingCertificate, EngineError> {
    let n = fan.ambient_rank() as u32;
    let dual_perversity = match explicit_dual {
        Some(q) => q,
        None => perversity.dual(n)?,
    };
    let primal_complex = deligne_ic(fan.clone(), chi, perversity)?;
    let (primal_lines, primal_twisted) = twistedness_certificate(&primal_complex);
    let dual_chi = chi.dual();
    let dual_complex = deligne_ic(fan, &dual_chi, &dual_perversity)?;
    let (dual_lines, dual_twisted) = twistedness_certificate(&dual_complex);
    Ok(VanishingCertificate::assemble(
        RunLog {
            character: chi.clone(),
            perversity: perversity.clone(),
            lines: primal_lines,
            twisted: primal_twisted,
        },
        RunLog {
            character: dual_chi,
            perversity: dual_perversity,
            lines: dual_lines,
            twisted: dual_twisted,
        },
    ))
}
