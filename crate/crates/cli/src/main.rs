use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use posetcoh::builders::{self, ApexMode, BruhatPoset, LinkDiagram, SimplicialComplexInput};
use posetcoh::cellular::{self, cell_signs, is_cellular};
use posetcoh::{singular, Poset, PosetJson, Presheaf, PresheafJson};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "posetcoh",
    version,
    about = "Singular and cellular cohomology of finite posets"
)]
struct Cli {
    /// Suppress progress notes on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an example poset (and presheaf).
    Build {
        #[command(subcommand)]
        family: Family,
        /// Where to write the poset JSON.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        /// Where to write the presheaf JSON (constant Z unless the family
        /// carries its own coefficients).
        #[arg(long, global = true)]
        presheaf_out: Option<PathBuf>,
    },
    /// Report gradedness, the diamond property and cellularity.
    Check { poset: PathBuf },
    /// Cohomology by one of the two routes.
    Cohomology {
        #[arg(long)]
        poset: PathBuf,
        /// Presheaf JSON; constant Z when omitted.
        #[arg(long)]
        presheaf: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Route::Singular)]
        method: Route,
    },
    /// Compare singular and cellular cohomology degree by degree.
    Compare {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        presheaf: Option<PathBuf>,
    },
    /// Incidence signs [x,y] of a cell poset.
    Signs {
        #[arg(long)]
        poset: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Family {
    Boolean {
        n: usize,
        /// Drop the maximum.
        #[arg(long)]
        remove_top: bool,
    },
    Partition {
        n: usize,
        #[arg(long)]
        remove_top: bool,
    },
    Bruhat {
        n: usize,
    },
    Tree {
        depth: usize,
        branching: usize,
    },
    Circle,
    Square,
    Rp2,
    Suspension {
        n: usize,
    },
    /// Face poset of a simplicial complex given as `{"facets": [...]}`.
    Cw {
        file: PathBuf,
        #[arg(long)]
        adjoin_minimum: bool,
    },
    /// Suspension poset with the Khovanov presheaf of a PD code.
    Khovanov {
        file: PathBuf,
        /// Put a copy of the resolution space on both maxima.
        #[arg(long)]
        doubled_apex: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Route {
    Singular,
    Cellular,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Lib(#[from] posetcoh::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_precondition() => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn load_poset(path: &Path) -> Result<Poset> {
    let js: PosetJson = read_json(path)?;
    Ok(Poset::from_json(&js)?)
}

fn load_presheaf(p: &Poset, path: Option<&Path>) -> Result<Presheaf> {
    match path {
        Some(path) => {
            let js: PresheafJson = read_json(path)?;
            Ok(Presheaf::from_json(p, &js)?)
        }
        None => Ok(Presheaf::constant(p, 1)),
    }
}

struct Notes {
    quiet: bool,
}

impl Notes {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn build(family: &Family) -> Result<(Poset, Option<Presheaf>)> {
    let trim = |p: Poset, remove: bool| -> Result<Poset> {
        Ok(if remove { builders::remove_top(&p)? } else { p })
    };
    Ok(match family {
        Family::Boolean { n, remove_top } => {
            (trim(builders::boolean_lattice(*n)?, *remove_top)?, None)
        }
        Family::Partition { n, remove_top } => {
            (trim(builders::partition_lattice(*n)?, *remove_top)?, None)
        }
        Family::Bruhat { n } => (BruhatPoset::new(*n)?.poset, None),
        Family::Tree { depth, branching } => (builders::tree_poset(*depth, *branching)?, None),
        Family::Circle => (builders::circle_poset(), None),
        Family::Square => (builders::square_poset(), None),
        Family::Rp2 => (builders::rp2_poset(), None),
        Family::Suspension { n } => (builders::suspension_simplex_poset(*n)?, None),
        Family::Cw {
            file,
            adjoin_minimum,
        } => {
            let k: SimplicialComplexInput = read_json(file)?;
            (builders::face_poset(&k, *adjoin_minimum)?, None)
        }
        Family::Khovanov { file, doubled_apex } => {
            let d = LinkDiagram::parse(&read_text(file)?)?;
            let mode = if *doubled_apex {
                ApexMode::Doubled
            } else {
                ApexMode::Single
            };
            let (p, f) = builders::khovanov(&d, mode)?;
            (p, Some(f))
        }
    })
}

#[derive(Serialize)]
struct CheckReport {
    elements: usize,
    graded: bool,
    diamond: bool,
    /// `null` when the poset is not graded.
    cellular: Option<bool>,
    witness: Option<cellular::Witness>,
}

#[derive(Serialize)]
struct SignsReport {
    signs: Vec<cellular::SignEntry>,
    diamonds: usize,
    violations: usize,
}

fn run(cli: &Cli) -> Result<()> {
    let notes = Notes { quiet: cli.quiet };
    match &cli.command {
        Command::Build {
            family,
            out,
            presheaf_out,
        } => {
            let (p, f) = build(family)?;
            notes.say(format!("built poset with {} elements", p.len()));
            match out {
                Some(path) => write_json(path, &p.to_json())?,
                None => print_json(&p.to_json())?,
            }
            if let Some(path) = presheaf_out {
                let f = f.unwrap_or_else(|| Presheaf::constant(&p, 1));
                write_json(path, &f.to_json())?;
            }
        }
        Command::Check { poset } => {
            let p = load_poset(poset)?;
            let graded = p.is_graded();
            let verdict = if graded { Some(is_cellular(&p)?) } else { None };
            print_json(&CheckReport {
                elements: p.len(),
                graded,
                diamond: graded && p.has_diamond_property(),
                cellular: verdict.as_ref().map(|v| v.cellular),
                witness: verdict.and_then(|v| v.witness),
            })?;
        }
        Command::Cohomology {
            poset,
            presheaf,
            method,
        } => {
            let p = load_poset(poset)?;
            let f = load_presheaf(&p, presheaf.as_deref())?;
            let name = match method {
                Route::Singular => "singular",
                Route::Cellular => "cellular",
            };
            notes.say(format!(
                "computing {name} cohomology on {} elements",
                p.len()
            ));
            let report = match method {
                Route::Singular => singular::cohomology(&p, &f)?,
                Route::Cellular => cellular::hc(&p, &f)?,
            };
            print_json(&report)?;
        }
        Command::Compare { poset, presheaf } => {
            let p = load_poset(poset)?;
            let f = load_presheaf(&p, presheaf.as_deref())?;
            notes.say(format!("comparing both routes on {} elements", p.len()));
            print_json(&cellular::compare(&p, &f)?)?;
        }
        Command::Signs { poset } => {
            let p = load_poset(poset)?;
            let table = cell_signs(&p, None)?;
            let check = table.check_diamonds();
            print_json(&SignsReport {
                signs: table.entries(),
                diamonds: check.diamonds,
                violations: check.violations,
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
