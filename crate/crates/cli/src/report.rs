//! Run reports: the orbit table, the intersection-complex entry table, and
//! the vanishing certificate, emitted both as human-readable text and as a
//! machine-readable document (same grammar as fan files) that parses back
//! losslessly and can be replayed against the fan.

use crate::document::{int_value, str_value, Document, ParseError, Value};
use crate::perversity::parse_explicit_perversity;
use num_bigint::BigInt;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;
use twistoric::charsys::Character;
use twistoric::fan::Fan;
use twistoric::icengine::{
    deligne_ic, vanishing_verdict, EngineError, OrbitStatus, Perversity, RunLog,
    VanishingCertificate, Verdict,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("report schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Fan(#[from] twistoric::fan::FanError),
    #[error(transparent)]
    Char(#[from] twistoric::charsys::CharError),
}

fn schema(msg: impl Into<String>) -> ReportError {
    ReportError::Schema(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRow {
    pub cone: usize,
    pub dim: usize,
    pub orbit_dim: usize,
    pub stab_basis: Vec<Vec<BigInt>>,
    pub restriction: Character,
    pub descended: Option<Character>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryRow {
    pub cone: usize,
    pub degree_low: i64,
    pub degree_high: i64,
    pub exact: bool,
    pub factors: Vec<(Character, u64)>,
    pub bounds: Vec<(i64, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogKind {
    Empty,
    Twisted,
    Witness,
}

impl LogKind {
    fn as_str(self) -> &'static str {
        match self {
            LogKind::Empty => "empty",
            LogKind::Twisted => "twisted",
            LogKind::Witness => "witness",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "empty" => Some(LogKind::Empty),
            "twisted" => Some(LogKind::Twisted),
            "witness" => Some(LogKind::Witness),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogLineData {
    pub cone: usize,
    pub kind: LogKind,
    pub character: Option<Character>,
    pub window: Option<(i64, i64)>,
}

impl LogLineData {
    fn from_status(cone: usize, status: &OrbitStatus) -> Self {
        match status {
            OrbitStatus::StalkEmpty => LogLineData {
                cone,
                kind: LogKind::Empty,
                character: None,
                window: None,
            },
            OrbitStatus::Twisted { character, window } => LogLineData {
                cone,
                kind: LogKind::Twisted,
                character: Some(character.clone()),
                window: Some(*window),
            },
            OrbitStatus::TrivialWitness { character, window } => LogLineData {
                cone,
                kind: LogKind::Witness,
                character: Some(character.clone()),
                window: Some(*window),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLogData {
    pub character: Character,
    pub perversity: Perversity,
    pub twisted: bool,
    pub lines: Vec<LogLineData>,
}

impl RunLogData {
    fn from_run_log(log: &RunLog) -> Self {
        RunLogData {
            character: log.character.clone(),
            perversity: log.perversity.clone(),
            twisted: log.twisted,
            lines: log
                .lines
                .iter()
                .map(|l| LogLineData::from_status(l.cone, &l.status))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateData {
    pub verdict: Verdict,
    pub primal: RunLogData,
    pub dual: RunLogData,
}

impl CertificateData {
    pub fn from_certificate(cert: &VanishingCertificate) -> Self {
        CertificateData {
            verdict: cert.verdict,
            primal: RunLogData::from_run_log(&cert.primal),
            dual: RunLogData::from_run_log(&cert.dual),
        }
    }
}

/// Everything one check produces. The machine serialization is
/// deterministic and excludes timing, so identical inputs give
/// byte-identical reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub source: String,
    pub rank: usize,
    pub cones: Vec<Vec<Vec<BigInt>>>,
    pub orbit_rows: Vec<OrbitRow>,
    pub entries: Vec<EntryRow>,
    pub certificate: CertificateData,
    pub timing_ms: Option<u64>,
}

fn char_to_string(c: &Character) -> String {
    if c.ambient_rank() == 0 {
        String::new()
    } else {
        c.to_string()
    }
}

fn vector_value(v: &[BigInt]) -> Value {
    Value::List(v.iter().map(|x| Value::Int(x.clone())).collect())
}

fn matrix_value(rows: &[Vec<BigInt>]) -> Value {
    Value::List(rows.iter().map(|r| vector_value(r)).collect())
}

fn parse_vector(v: &Value) -> Result<Vec<BigInt>, ReportError> {
    v.as_list()
        .ok_or_else(|| schema("expected a vector"))?
        .iter()
        .map(|x| {
            x.as_int()
                .cloned()
                .ok_or_else(|| schema("expected integer"))
        })
        .collect()
}

fn parse_matrix(v: &Value) -> Result<Vec<Vec<BigInt>>, ReportError> {
    v.as_list()
        .ok_or_else(|| schema("expected a list of vectors"))?
        .iter()
        .map(parse_vector)
        .collect()
}

impl RunReport {
    pub fn build(
        fan: &Arc<Fan>,
        source: &str,
        chi: &Character,
        perversity: &Perversity,
        explicit_dual: Option<Perversity>,
    ) -> Result<RunReport, ReportError> {
        let cert = vanishing_verdict(fan.clone(), chi, perversity, explicit_dual)?;
        let complex = deligne_ic(fan.clone(), chi, perversity)?;

        let mut orbit_rows = Vec::new();
        for cone in fan.cones() {
            let od = fan.orbit_data(cone.id())?;
            let restriction = chi.restrict(&od.stab_lattice)?;
            let descended = if restriction.is_trivial() {
                Some(chi.descend(&od.quotient)?)
            } else {
                None
            };
            orbit_rows.push(OrbitRow {
                cone: cone.id(),
                dim: cone.dim(),
                orbit_dim: od.orbit_dim,
                stab_basis: od.stab_lattice.basis().to_vec(),
                restriction,
                descended,
            });
        }

        let entries = complex
            .entries()
            .iter()
            .map(|e| EntryRow {
                cone: e.cone,
                degree_low: e.degree_low,
                degree_high: e.degree_high,
                exact: e.exact,
                factors: e
                    .factors
                    .factors()
                    .iter()
                    .map(|(c, m)| (c.clone(), *m))
                    .collect(),
                bounds: e.rank_bounds.iter().map(|(d, r)| (*d, *r)).collect(),
            })
            .collect();

        Ok(RunReport {
            source: source.to_string(),
            rank: fan.ambient_rank(),
            cones: fan
                .cones()
                .iter()
                .map(|c| c.generators().to_vec())
                .collect(),
            orbit_rows,
            entries,
            certificate: CertificateData::from_certificate(&cert),
            timing_ms: None,
        })
    }

    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        r.timing_ms = None;
        r
    }

    pub fn to_document(&self) -> Document {
        let mut doc = Document::default();
        doc.push("report", None, str_value("twistoric.report/1"));
        doc.push("source", None, str_value(&self.source));
        doc.push("rank", None, int_value(self.rank as i64));
        for (id, gens) in self.cones.iter().enumerate() {
            doc.push("cone", Some(&id.to_string()), matrix_value(gens));
        }
        for row in &self.orbit_rows {
            let descended = match &row.descended {
                Some(c) => Value::List(vec![str_value(char_to_string(c))]),
                None => Value::List(vec![]),
            };
            doc.push(
                "orbit",
                Some(&row.cone.to_string()),
                Value::List(vec![
                    int_value(row.dim as i64),
                    int_value(row.orbit_dim as i64),
                    matrix_value(&row.stab_basis),
                    str_value(char_to_string(&row.restriction)),
                    descended,
                ]),
            );
        }
        for e in &self.entries {
            let factors = Value::List(
                e.factors
                    .iter()
                    .map(|(c, m)| {
                        Value::List(vec![
                            str_value(char_to_string(c)),
                            Value::Int(BigInt::from(*m)),
                        ])
                    })
                    .collect(),
            );
            let bounds = Value::List(
                e.bounds
                    .iter()
                    .map(|(d, r)| Value::List(vec![int_value(*d), Value::Int(BigInt::from(*r))]))
                    .collect(),
            );
            doc.push(
                "entry",
                None,
                Value::List(vec![
                    int_value(e.cone as i64),
                    int_value(e.degree_low),
                    int_value(e.degree_high),
                    int_value(if e.exact { 1 } else { 0 }),
                    factors,
                    bounds,
                ]),
            );
        }
        doc.push(
            "verdict",
            None,
            str_value(self.certificate.verdict.to_string()),
        );
        for (label, run) in [
            ("primal", &self.certificate.primal),
            ("dual", &self.certificate.dual),
        ] {
            doc.push(
                "run",
                Some(label),
                Value::List(vec![
                    str_value(char_to_string(&run.character)),
                    str_value(run.perversity.to_string()),
                    int_value(if run.twisted { 1 } else { 0 }),
                ]),
            );
            for line in &run.lines {
                let mut items = vec![int_value(line.cone as i64), str_value(line.kind.as_str())];
                if let (Some(c), Some((lo, hi))) = (&line.character, &line.window) {
                    items.push(str_value(char_to_string(c)));
                    items.push(int_value(*lo));
                    items.push(int_value(*hi));
                }
                doc.push("log", Some(label), Value::List(items));
            }
        }
        doc
    }

    pub fn to_machine_text(&self) -> String {
        self.to_document().to_text()
    }

    pub fn from_machine_text(text: &str) -> Result<RunReport, ReportError> {
        Self::from_document(&Document::parse(text)?)
    }

    pub fn from_document(doc: &Document) -> Result<RunReport, ReportError> {
        let version = doc
            .first("report")
            .and_then(|e| e.value.as_str())
            .ok_or_else(|| schema("missing `report` version entry"))?;
        if version != "twistoric.report/1" {
            return Err(schema(format!("unsupported report version `{version}`")));
        }
        let source = doc
            .first("source")
            .and_then(|e| e.value.as_str())
            .ok_or_else(|| schema("missing `source`"))?
            .to_string();
        let rank = doc
            .first("rank")
            .and_then(|e| e.value.as_usize())
            .ok_or_else(|| schema("missing `rank`"))?;

        let mut cones = Vec::new();
        for e in doc.all("cone") {
            cones.push(parse_matrix(&e.value)?);
        }

        let mut orbit_rows = Vec::new();
        for e in doc.all("orbit") {
            let cone: usize = e
                .name
                .as_deref()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| schema("orbit rows need a cone-id name"))?;
            let items = e.value.as_list().ok_or_else(|| schema("orbit row"))?;
            if items.len() != 5 {
                return Err(schema("orbit row must have 5 fields"));
            }
            let dim = items[0].as_usize().ok_or_else(|| schema("orbit dim"))?;
            let orbit_dim = items[1]
                .as_usize()
                .ok_or_else(|| schema("orbit orbit_dim"))?;
            let stab_basis = parse_matrix(&items[2])?;
            let restriction =
                Character::parse(items[3].as_str().ok_or_else(|| schema("restriction"))?)?;
            let desc_list = items[4].as_list().ok_or_else(|| schema("descended"))?;
            let descended = match desc_list.len() {
                0 => None,
                1 => Some(Character::parse(
                    desc_list[0].as_str().ok_or_else(|| schema("descended"))?,
                )?),
                _ => return Err(schema("descended must be [] or one character")),
            };
            orbit_rows.push(OrbitRow {
                cone,
                dim,
                orbit_dim,
                stab_basis,
                restriction,
                descended,
            });
        }

        let mut entries = Vec::new();
        for e in doc.all("entry") {
            let items = e.value.as_list().ok_or_else(|| schema("entry row"))?;
            if items.len() != 6 {
                return Err(schema("entry row must have 6 fields"));
            }
            let cone = items[0].as_usize().ok_or_else(|| schema("entry cone"))?;
            let degree_low = items[1].as_i64().ok_or_else(|| schema("entry low"))?;
            let degree_high = items[2].as_i64().ok_or_else(|| schema("entry high"))?;
            let exact = items[3].as_i64().ok_or_else(|| schema("entry exact"))? != 0;
            let factors = items[4]
                .as_list()
                .ok_or_else(|| schema("entry factors"))?
                .iter()
                .map(|f| {
                    let pair = f.as_list().ok_or_else(|| schema("factor pair"))?;
                    if pair.len() != 2 {
                        return Err(schema("factor pair must be [char, mult]"));
                    }
                    let c = Character::parse(pair[0].as_str().ok_or_else(|| schema("factor"))?)?;
                    let m = pair[1]
                        .as_int()
                        .and_then(|i| u64::try_from(i.clone()).ok())
                        .ok_or_else(|| schema("factor multiplicity"))?;
                    Ok((c, m))
                })
                .collect::<Result<Vec<_>, ReportError>>()?;
            let bounds = items[5]
                .as_list()
                .ok_or_else(|| schema("entry bounds"))?
                .iter()
                .map(|b| {
                    let pair = b.as_list().ok_or_else(|| schema("bound pair"))?;
                    if pair.len() != 2 {
                        return Err(schema("bound pair must be [degree, rank]"));
                    }
                    let d = pair[0].as_i64().ok_or_else(|| schema("bound degree"))?;
                    let r = pair[1]
                        .as_int()
                        .and_then(|i| u64::try_from(i.clone()).ok())
                        .ok_or_else(|| schema("bound rank"))?;
                    Ok((d, r))
                })
                .collect::<Result<Vec<_>, ReportError>>()?;
            entries.push(EntryRow {
                cone,
                degree_low,
                degree_high,
                exact,
                factors,
                bounds,
            });
        }

        let verdict = match doc
            .first("verdict")
            .and_then(|e| e.value.as_str())
            .ok_or_else(|| schema("missing `verdict`"))?
        {
            "vanishes" => Verdict::Vanishes,
            "inconclusive" => Verdict::Inconclusive,
            other => return Err(schema(format!("unknown verdict `{other}`"))),
        };

        let mut runs = Vec::new();
        for label in ["primal", "dual"] {
            let run_entry = doc
                .entries
                .iter()
                .find(|e| e.key == "run" && e.name.as_deref() == Some(label))
                .ok_or_else(|| schema(format!("missing `run \"{label}\"`")))?;
            let items = run_entry.value.as_list().ok_or_else(|| schema("run"))?;
            if items.len() != 3 {
                return Err(schema("run must have 3 fields"));
            }
            let character =
                Character::parse(items[0].as_str().ok_or_else(|| schema("run character"))?)?;
            let perversity = parse_explicit_perversity(
                items[1].as_str().ok_or_else(|| schema("run perversity"))?,
            )
            .map_err(ReportError::Schema)?;
            let twisted = items[2].as_i64().ok_or_else(|| schema("run twisted"))? != 0;
            let mut lines = Vec::new();
            for e in doc
                .entries
                .iter()
                .filter(|e| e.key == "log" && e.name.as_deref() == Some(label))
            {
                let items = e.value.as_list().ok_or_else(|| schema("log line"))?;
                if items.len() != 2 && items.len() != 5 {
                    return Err(schema("log line must have 2 or 5 fields"));
                }
                let cone = items[0].as_usize().ok_or_else(|| schema("log cone"))?;
                let kind = LogKind::parse(items[1].as_str().ok_or_else(|| schema("log kind"))?)
                    .ok_or_else(|| schema("unknown log kind"))?;
                let (character, window) = if items.len() == 5 {
                    let c = Character::parse(
                        items[2].as_str().ok_or_else(|| schema("log character"))?,
                    )?;
                    let lo = items[3].as_i64().ok_or_else(|| schema("log window"))?;
                    let hi = items[4].as_i64().ok_or_else(|| schema("log window"))?;
                    (Some(c), Some((lo, hi)))
                } else {
                    (None, None)
                };
                lines.push(LogLineData {
                    cone,
                    kind,
                    character,
                    window,
                });
            }
            runs.push(RunLogData {
                character,
                perversity,
                twisted,
                lines,
            });
        }
        let dual = runs.pop().expect("two runs");
        let primal = runs.pop().expect("two runs");

        Ok(RunReport {
            source,
            rank,
            cones,
            orbit_rows,
            entries,
            certificate: CertificateData {
                verdict,
                primal,
                dual,
            },
            timing_ms: None,
        })
    }

    /// Re-runs the whole check from the report's embedded fan, character
    /// and perversities, and compares the reproduced certificate (and
    /// verdict) against the recorded one.
    pub fn replay(&self) -> Result<bool, ReportError> {
        let fan = Arc::new(Fan::new(self.rank, self.cones.clone())?);
        let cert = vanishing_verdict(
            fan,
            &self.certificate.primal.character,
            &self.certificate.primal.perversity,
            Some(self.certificate.dual.perversity.clone()),
        )?;
        let reproduced = CertificateData::from_certificate(&cert);
        Ok(reproduced == self.certificate)
    }

    /// Human-readable tables.
    pub fn human_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "fan: {} (rank {}, {} cones)",
            self.source,
            self.rank,
            self.cones.len()
        );
        let _ = writeln!(
            out,
            "character: {}",
            char_display(&self.certificate.primal.character)
        );
        let _ = writeln!(
            out,
            "perversity: {}   dual: {}",
            self.certificate.primal.perversity, self.certificate.dual.perversity
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "orbits:");
        let _ = writeln!(
            out,
            "  {:<4} {:<4} {:<9} {:<24} {:<14} descended",
            "cone", "dim", "orbit_dim", "stabilizer basis", "restriction"
        );
        for r in &self.orbit_rows {
            let stab = if r.stab_basis.is_empty() {
                "-".to_string()
            } else {
                r.stab_basis
                    .iter()
                    .map(|v| {
                        format!(
                            "({})",
                            v.iter()
                                .map(|x| x.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let desc = match &r.descended {
                Some(c) => char_display(c),
                None => "nontrivial restriction".to_string(),
            };
            let _ = writeln!(
                out,
                "  {:<4} {:<4} {:<9} {:<24} {:<14} {}",
                r.cone,
                r.dim,
                r.orbit_dim,
                stab,
                char_display(&r.restriction),
                desc
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "intersection complex entries:");
        if self.entries.is_empty() {
            let _ = writeln!(out, "  (none)");
        } else {
            let _ = writeln!(
                out,
                "  {:<4} {:<12} {:<5} {:<20} characters",
                "cone", "window", "exact", "rank bounds"
            );
            for e in &self.entries {
                let window = format!("[{},{}]", e.degree_low, e.degree_high);
                let bounds = e
                    .bounds
                    .iter()
                    .map(|(d, r)| format!("{d}:{r}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                let chars = e
                    .factors
                    .iter()
                    .map(|(c, m)| format!("{} (x{m})", char_display(c)))
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(
                    out,
                    "  {:<4} {:<12} {:<5} {:<20} {}",
                    e.cone,
                    window,
                    if e.exact { "yes" } else { "no" },
                    bounds,
                    chars
                );
            }
        }
        for (label, run) in [
            ("primal", &self.certificate.primal),
            ("dual", &self.certificate.dual),
        ] {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "certificate ({label}: character {}, perversity {}): {}",
                char_display(&run.character),
                run.perversity,
                if run.twisted {
                    "twisted"
                } else {
                    "NOT twisted"
                }
            );
            for line in &run.lines {
                match line.kind {
                    LogKind::Empty => {
                        let _ = writeln!(
                            out,
                            "  cone {:<3} stalk empty: contribution vanishes",
                            line.cone
                        );
                    }
                    LogKind::Twisted => {
                        let (lo, hi) = line.window.unwrap_or((0, 0));
                        let _ = writeln!(
                            out,
                            "  cone {:<3} nontrivial character {} on window [{lo},{hi}]: twisted torus cohomology vanishes",
                            line.cone,
                            char_display(line.character.as_ref().unwrap()),
                        );
                    }
                    LogKind::Witness => {
                        let (lo, hi) = line.window.unwrap_or((0, 0));
                        let _ = writeln!(
                            out,
                            "  cone {:<3} TRIVIAL character reached on window [{lo},{hi}]: vanishing not certified",
                            line.cone,
                        );
                    }
                }
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "verdict: {}", self.certificate.verdict);
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "timing: {ms} ms");
        }
        out
    }
}

fn char_display(c: &Character) -> String {
    c.to_string()
}
