use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use twistoric::charsys::Character;
use twistoric::icengine::{initial_complex, Verdict};
use twistoric::toruscoh::torus_cohomology_koszul_oracle;
use twistoric_cli::corpus;
use twistoric_cli::perversity::parse_perversity;
use twistoric_cli::run::{ensure_character_rank, load_fan, run_check, run_oracle_crosscheck};

/// Exact vanishing checks for twisted intersection cohomology of toric
/// varieties, computed directly on the fan.
#[derive(Parser)]
#[command(name = "twistoric", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the vanishing check and emit a certificate report.
    /// Exit status: 0 = vanishes, 2 = inconclusive, 1 = error.
    Check {
        /// Fan source: `builtin:<name>` or a fan file path
        #[arg(long)]
        fan: String,
        /// Monodromy character, e.g. "1/2,1/3,0"
        #[arg(long)]
        character: String,
        /// Perversity: `middle`, `zero`, `top`, or `p(1)=0,p(2)=1,...`
        #[arg(long, default_value = "middle")]
        perversity: String,
        /// Explicit dual perversity (required for non-strict-GM perversities)
        #[arg(long)]
        dual_perversity: Option<String>,
        /// Reject perversities outside the strict Goresky-MacPherson class
        #[arg(long)]
        strict_gm: bool,
        /// Write the machine-readable report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print one cone's pushforward stalk next to the independent oracle
    Stalk {
        #[arg(long)]
        fan: String,
        /// Cone id (see `orbits`)
        #[arg(long)]
        cone: usize,
        #[arg(long)]
        character: String,
    },
    /// Print the orbit table for a fan
    Orbits {
        #[arg(long)]
        fan: String,
        /// Character whose restrictions to show (defaults to trivial)
        #[arg(long)]
        character: Option<String>,
    },
    /// Cross-check the torus-cohomology closed form against the Koszul oracle
    Oracle {
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
        #[arg(long, default_value_t = 12)]
        max_order: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the acceptance corpus and print one line per criterion
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    // die quietly when a pager or `head` closes our stdout
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Check {
            fan,
            character,
            perversity,
            dual_perversity,
            strict_gm,
            report,
        } => {
            let (fan, source, warnings) = load_fan(&fan)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let chi = Character::parse(&character)?;
            ensure_character_rank(&chi, &fan)?;
            let n = fan.ambient_rank() as u32;
            let p = parse_perversity(&perversity, n).map_err(|e| anyhow::anyhow!(e))?;
            if strict_gm && !p.is_strict_gm(n) {
                bail!("--strict-gm: perversity `{p}` violates the strict Goresky-MacPherson conditions");
            }
            let dual = dual_perversity
                .map(|t| parse_perversity(&t, n).map_err(|e| anyhow::anyhow!(e)))
                .transpose()?;
            let run_report = run_check(&fan, &source, &chi, &p, dual)?;
            print!("{}", run_report.human_text());
            if let Some(path) = report {
                std::fs::write(&path, run_report.to_machine_text())?;
                eprintln!("report written to {}", path.display());
            }
            Ok(match run_report.certificate.verdict {
                Verdict::Vanishes => ExitCode::from(0),
                Verdict::Inconclusive => ExitCode::from(2),
            })
        }
        Command::Stalk {
            fan,
            cone,
            character,
        } => {
            let (fan, _, warnings) = load_fan(&fan)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let chi = Character::parse(&character)?;
            ensure_character_rank(&chi, &fan)?;
            let tau = fan.cone(cone)?;
            let od = fan.orbit_data(cone)?;
            let restriction = chi.restrict(&od.stab_lattice)?;
            let oracle = torus_cohomology_koszul_oracle(&restriction);
            println!("cone {}: {} (dim {})", cone, tau.describe(), tau.dim());
            println!("restriction to the stabilizer lattice: {restriction}");
            println!(
                "oracle H^*(torus of rank {}, restriction): {}",
                tau.dim(),
                oracle
            );
            let base = initial_complex(fan.clone(), &chi)?;
            let stepped = if tau.dim() == 0 {
                base
            } else {
                base.pushforward_step(tau.dim())?
            };
            let entries = stepped.entries_on(cone);
            if entries.is_empty() {
                println!("stalk: zero (twisted restriction kills the pushforward)");
            } else {
                for e in entries {
                    let bounds: Vec<String> = e
                        .rank_bounds
                        .iter()
                        .map(|(d, r)| format!("{d}:{r}"))
                        .collect();
                    let chars: Vec<String> = e
                        .factors
                        .factors()
                        .iter()
                        .map(|(c, m)| format!("{c} (x{m})"))
                        .collect();
                    println!(
                        "stalk entry: window [{},{}], ranks {{{}}}, characters {}, exact: {}",
                        e.degree_low,
                        e.degree_high,
                        bounds.join(", "),
                        chars.join(", "),
                        if e.exact { "yes" } else { "no" }
                    );
                }
            }
            Ok(ExitCode::from(0))
        }
        Command::Orbits { fan, character } => {
            let (fan, source, warnings) = load_fan(&fan)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let chi = match character {
                Some(t) => Character::parse(&t)?,
                None => Character::trivial(fan.ambient_rank()),
            };
            ensure_character_rank(&chi, &fan)?;
            println!(
                "fan: {source} (rank {}, {} cones)",
                fan.ambient_rank(),
                fan.cones().len()
            );
            println!(
                "{:<4} {:<4} {:<9} {:<28} {:<14} descended",
                "cone", "dim", "orbit_dim", "generators", "restriction"
            );
            for cone in fan.cones() {
                let od = fan.orbit_data(cone.id())?;
                let restriction = chi.restrict(&od.stab_lattice)?;
                let descended = if restriction.is_trivial() {
                    chi.descend(&od.quotient)?.to_string()
                } else {
                    "nontrivial restriction".to_string()
                };
                println!(
                    "{:<4} {:<4} {:<9} {:<28} {:<14} {}",
                    cone.id(),
                    cone.dim(),
                    od.orbit_dim,
                    cone.describe(),
                    restriction.to_string(),
                    descended
                );
            }
            Ok(ExitCode::from(0))
        }
        Command::Oracle {
            max_rank,
            max_order,
            samples,
            seed,
        } => {
            let summary = run_oracle_crosscheck(max_rank, max_order, samples, seed);
            println!(
                "{}/{} samples agree (max rank {max_rank}, max order {max_order}, seed {seed})",
                summary.agreed, summary.total
            );
            for m in &summary.mismatches {
                println!("MISMATCH: {m}");
            }
            Ok(if summary.all_agree() {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            })
        }
        Command::Corpus { seed } => {
            let results = corpus::run_all(seed);
            let mut all_pass = true;
            for r in &results {
                println!("{}", r.line());
                all_pass &= r.pass;
            }
            Ok(if all_pass {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            })
        }
    }
}
