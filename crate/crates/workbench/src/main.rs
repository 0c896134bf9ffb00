//! coarsebench: classify subsets, analyze maps, build hyperspaces, run
//! excision profiles, and verify the toolkit against brute force.
//!
//! Exit codes: 0 success; 1 domain error or failed verification; 2 bad
//! input or usage; 3 a capacity refusal (the request is well formed but
//! past the tool's desk-scale bounds).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use coarse_core::error::CoarseError;
use coarse_core::hyper::{FamilySelector, Hyperspace};
use coarse_core::relation::PointSet;
use coarse_core::size::{classify, oracle_classify};

use coarse_workbench::io::{
    self, ClassifyOut, HyperOut, MapDoc, SpaceDoc, SubsetDoc, WindowDoc,
};
use coarse_workbench::verify;

#[derive(Parser)]
#[command(
    name = "coarsebench",
    version,
    about = "Desk-scale computations on finite coarse spaces and metric windows"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a subset of a finite coarse space.
    Classify {
        /// Space document (JSON).
        #[arg(long)]
        space: PathBuf,
        /// Subset document (JSON array or {"members": [...]}).
        #[arg(long)]
        subset: PathBuf,
        /// Also run the definitional oracle and report agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Analyze a map between two finite coarse spaces.
    MapCheck {
        /// Source space document.
        #[arg(long = "space-x")]
        space_x: PathBuf,
        /// Target space document.
        #[arg(long = "space-y")]
        space_y: PathBuf,
        /// Map document (JSON array or {"table": [...]}).
        #[arg(long)]
        map: PathBuf,
    },
    /// Build a hyperspace over a finite coarse space.
    Hyper {
        /// Base space document.
        #[arg(long)]
        space: PathBuf,
        /// Member family: all, flat, large, or meshy-nonempty.
        #[arg(long, default_value = "all")]
        selector: String,
    },
    /// Excision profile of a subset of a window.
    ThinProfile {
        /// Window document.
        #[arg(long)]
        window: PathBuf,
        /// Subset document; the whole window when omitted.
        #[arg(long)]
        subset: Option<PathBuf>,
        /// Report satellite agreement instead of thinness.
        #[arg(long)]
        satellite: bool,
    },
    /// Run the brute-force verification inventory.
    Verify {
        /// Seed for the randomized cases.
        #[arg(long, default_value_t = 0xC0A53)]
        seed: u64,
        /// Largest random ground size (clamped to 1..=8).
        #[arg(long, default_value_t = 8)]
        max_ground: usize,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes a line to stdout, treating a closed pipe as a normal end of the
/// conversation rather than an error.
fn print_out(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => other?,
    }
    Ok(())
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: String) -> anyhow::Result<()> {
    match format {
        Format::Json => print_out(&io::to_pretty_json(value)?),
        Format::Text => print_out(&text),
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Classify {
            space,
            subset,
            oracle,
        } => {
            let space_doc: SpaceDoc = read_json(&space)?;
            let c = space_doc.build()?;
            let subset_doc: SubsetDoc = read_json(&subset)?;
            let a = subset_doc.build(c.ground())?;
            let report = classify(&c, &a)?;
            let oracle_agrees = if oracle {
                Some(oracle_classify(&c, &a)? == report)
            } else {
                None
            };
            let out: ClassifyOut = io::classify_out(&c, &a, &report, oracle_agrees);
            let text = out.render_text();
            emit(cli.format, &out, text)?;
            Ok(0)
        }
        Cmd::MapCheck {
            space_x,
            space_y,
            map,
        } => {
            let cx = read_json::<SpaceDoc>(&space_x)?.build()?;
            let cy = read_json::<SpaceDoc>(&space_y)?.build()?;
            let f = read_json::<MapDoc>(&map)?.build(cx.ground(), cy.ground())?;
            let report = coarse_core::maps::classify_map(&f, &cx, &cy)?;
            let out = io::map_out(&report);
            let text = out.render_text();
            emit(cli.format, &out, text)?;
            Ok(0)
        }
        Cmd::Hyper { space, selector } => {
            let c = read_json::<SpaceDoc>(&space)?.build()?;
            let sel = match selector.as_str() {
                "all" => FamilySelector::All,
                "flat" => FamilySelector::Flat,
                "large" => FamilySelector::Large,
                "meshy-nonempty" => FamilySelector::MeshyNonempty,
                other => anyhow::bail!(
                    "unknown selector {other:?} (expected all, flat, large, or meshy-nonempty)"
                ),
            };
            let is_flat = matches!(sel, FamilySelector::Flat);
            let h = Hyperspace::build(&c, sel)?;
            let out = HyperOut {
                family_size: h.family().len(),
                hyper_class_count: h.space().components().len(),
                connected: h.space().is_connected(),
                iota_embedding: h.iota_is_embedding().ok(),
                bounded_members_track_base_classes: if is_flat {
                    Some(h.bounded_members_track_base_classes()?)
                } else {
                    None
                },
            };
            let text = out.render_text();
            emit(cli.format, &out, text)?;
            Ok(0)
        }
        Cmd::ThinProfile {
            window,
            subset,
            satellite,
        } => {
            let w = read_json::<WindowDoc>(&window)?.build()?;
            let a = match subset {
                Some(path) => read_json::<SubsetDoc>(&path)?.build(w.ground())?,
                None => PointSet::full(w.ground()),
            };
            let (profile, kind) = if satellite {
                (w.satellite_profile(&a)?, "satellite agreement")
            } else {
                (w.thin_profile(&a)?, "thinness")
            };
            let out = io::profile_out(&w, &profile, kind);
            let text = out.render_text();
            emit(cli.format, &out, text)?;
            Ok(0)
        }
        Cmd::Verify { seed, max_ground } => {
            let results = verify::run_all(seed, max_ground);
            let all_passed = results.iter().all(|r| r.passed());
            match cli.format {
                Format::Json => print_out(&io::to_pretty_json(&results)?)?,
                Format::Text => {
                    let mut lines = Vec::with_capacity(results.len());
                    for r in &results {
                        let status = if r.passed() { "pass" } else { "FAIL" };
                        lines.push(format!(
                            "{status} {} ({} instances, {} failures)",
                            r.id, r.instances, r.failures
                        ));
                        if let Some(detail) = &r.first_failure {
                            lines.push(format!("     first failure: {detail}"));
                        }
                    }
                    print_out(&lines.join("\n"))?;
                }
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let mut code = 1u8;
            for cause in err.chain() {
                if let Some(ce) = cause.downcast_ref::<CoarseError>() {
                    if matches!(ce, CoarseError::CapacityExceeded { .. }) {
                        code = 3;
                        break;
                    }
                } else if cause.downcast_ref::<std::io::Error>().is_some()
                    || cause.downcast_ref::<serde_json::Error>().is_some()
                {
                    code = 2;
                    break;
                }
            }
            ExitCode::from(code)
        }
    }
}
