use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cuspforge::algebra::{chain_complex_of, homology, Coeff};
use cuspforge::characteristic::spin_report;
use cuspforge::complex::CubicalComplex;
use cuspforge::error::{Error, Result};
use cuspforge::filling::{dehn_fill, subdivide_cross_facets, DiagonalChoice, FilledPolytope, FillingChoice};
use cuspforge::io::{read_binary, read_document, read_face_lattice, write_binary, write_document, Document};
use cuspforge::moment_angle::{colour_manifold, cusp_census, cusped_core, real_moment_angle, Colouring, CuspedManifold};
use cuspforge::pipeline::{run_pipeline, PipelineConfig};
use cuspforge::verify::{verify, SUITES};
use cuspforge::zoo::{gosset, ideal_dual, IdealPolytope};

/// Dehn fillings of right-angled polytopes with ideal vertices, real
/// moment-angle complexes and spin certificates.
///
/// Exit codes: 0 success, 2 invalid input, 3 cell budget exceeded
/// (`CUSPFORGE_BUDGET` sets the cap), 4 failed certificate.
#[derive(Parser)]
#[command(name = "cuspforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    Z2,
    Z,
}

#[derive(Subcommand)]
enum Command {
    /// Face lattice of the Gosset polytope G^n, or with --dual the polytope
    /// P^n whose ideal vertices are the cross-polytope facets of G^n.
    Gosset {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dual: bool,
    },
    /// Dehn filling of every ideal vertex along the chosen cube-link axis.
    Fill {
        #[arg(long = "in")]
        input: PathBuf,
        /// `v0:a0,v1:a1,...`, one axis index per ideal vertex in order.
        #[arg(long)]
        choices: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subdivides the cross-polytope facets of a polytope boundary into
    /// simplices around a diagonal.
    Subdivide {
        #[arg(long = "in")]
        input: PathBuf,
        /// `auto` (least diagonal per facet) or `fK:i,...`.
        #[arg(long, default_value = "auto")]
        diagonals: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Real moment-angle complex of a simplicial complex. An output path
    /// ending in `.rzk` selects the binary cell table.
    Rzk {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Colour manifold of a simple polytope, or with --cusped the truncated
    /// core and cusp sections of a polytope with ideal vertices.
    Colour {
        #[arg(long = "in")]
        input: PathBuf,
        /// `distinct` or one bitmask per facet, comma separated.
        #[arg(long, default_value = "distinct")]
        colours: String,
        #[arg(long)]
        cusped: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Betti numbers and torsion of a simplicial or cubical complex.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "z2")]
        coeff: CoeffArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact cusp count of a colour manifold.
    Census {
        /// Face lattice of a polytope with ideal vertices.
        #[arg(long = "in", conflicts_with = "n")]
        input: Option<PathBuf>,
        /// Use P^n built from incidences alone.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "distinct")]
        colours: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cusp labels and Dirac label of a cusped manifold from a filled complex.
    SpinReport {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        filling: PathBuf,
        /// Filled polytope whose recorded filling faces name the tori;
        /// inferred from the complexes when absent.
        #[arg(long)]
        filled: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The full chain from G^n to the spin report, artifacts in --out.
    Pipeline {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        choices: Option<String>,
        #[arg(long)]
        diagonals: Option<String>,
        #[arg(long)]
        colours: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        census_only: bool,
    },
    /// Runs a self-check suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
    },
}

fn emit_document(out: Option<&Path>, doc: &Document) -> Result<()> {
    match out {
        Some(path) => write_document(path, doc),
        None => {
            println!("{}", serde_json::to_string(doc)?);
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "rzk")
}

fn read_cubical(path: &Path) -> Result<CubicalComplex> {
    if is_binary(path) {
        read_binary(path)
    } else {
        read_document(path)?.into_cubical()
    }
}

fn write_cubical(out: Option<&Path>, z: &CubicalComplex) -> Result<()> {
    match out {
        Some(path) if is_binary(path) => write_binary(path, z),
        _ => emit_document(out, &Document::from(z)),
    }
}

fn ideal_polytope(path: &Path) -> Result<IdealPolytope> {
    IdealPolytope::from_lattice(read_face_lattice(path)?)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gosset { n, out, dual } => {
            let g = gosset(n)?.lattice()?;
            if dual {
                let p = ideal_dual(&g)?;
                emit_document(out.as_deref(), &Document::from(p.lattice().expect("built from a lattice")))?;
            } else {
                emit_document(out.as_deref(), &Document::from(&g))?;
            }
        }
        Command::Fill { input, choices, out } => {
            let p = ideal_polytope(&input)?;
            let choice = FillingChoice::parse(&choices, p.ideal_vertices().len())?;
            emit_document(out.as_deref(), &dehn_fill(&p, &choice)?.to_document())?;
        }
        Command::Subdivide { input, diagonals, out } => {
            let g = read_face_lattice(&input)?;
            let d = DiagonalChoice::parse(&diagonals, &g)?;
            emit_document(out.as_deref(), &Document::from(&subdivide_cross_facets(&g, &d)?))?;
        }
        Command::Rzk { input, out } => {
            let k = read_document(&input)?.into_simplicial()?;
            write_cubical(out.as_deref(), &real_moment_angle(&k)?)?;
        }
        Command::Colour {
            input,
            colours,
            cusped,
            out,
        } => {
            if cusped {
                let p = ideal_polytope(&input)?;
                emit_document(out.as_deref(), &cusped_core(&p)?.to_document())?;
            } else {
                let p = read_face_lattice(&input)?;
                let c = Colouring::parse(&colours, p.facet_count())?;
                write_cubical(out.as_deref(), &colour_manifold(&p, &c)?)?;
            }
        }
        Command::Homology { input, coeff, out } => {
            let coeff = match coeff {
                CoeffArg::Z2 => Coeff::Z2,
                CoeffArg::Z => Coeff::Z,
            };
            let cc = if is_binary(&input) {
                chain_complex_of(&read_binary(&input)?, coeff)?
            } else {
                match read_document(&input)? {
                    Document::Cubical(doc) => chain_complex_of(&cuspforge::io::cubical_from_doc(doc)?, coeff)?,
                    other => chain_complex_of(&other.into_simplicial()?, coeff)?,
                }
            };
            let h = homology(&cc)?;
            let mut v = serde_json::to_value(&h)?;
            v["euler"] = json!(h.euler_characteristic());
            emit_json(out.as_deref(), &v)?;
        }
        Command::Census { input, n, colours, out } => {
            let p = match (input, n) {
                (Some(path), _) => ideal_polytope(&path)?,
                (None, Some(n)) => gosset(n)?.ideal_polytope()?,
                (None, None) => return Err(Error::Precondition("give --in or --n".into())),
            };
            let c = Colouring::parse(&colours, p.facet_count())?;
            let census = cusp_census(&p, &c)?;
            println!("total cusps: {}", census.total);
            println!("magnitude: ~{}", census.magnitude());
            if let Some(path) = out {
                emit_json(Some(&path), &census.to_json())?;
            }
        }
        Command::SpinReport {
            manifold,
            filling,
            filled,
            out,
        } => {
            let m = CuspedManifold::from_document(read_document(&manifold)?)?;
            let n = read_cubical(&filling)?;
            let faces = match filled {
                Some(path) => Some(FilledPolytope::from_document(read_document(&path)?)?.filling_faces),
                None => None,
            };
            let report = spin_report(&m, &n, faces.as_deref())?;
            emit_json(out.as_deref(), &report.to_json())?;
        }
        Command::Pipeline {
            n,
            out,
            choices,
            diagonals,
            colours,
            budget,
            census_only,
        } => {
            let mut cfg = PipelineConfig::preset(n);
            cfg.out_dir = out;
            cfg.diagonals = diagonals;
            cfg.colours = colours;
            cfg.budget = budget;
            cfg.census_only |= census_only;
            if let Some(text) = choices {
                let g = gosset(n)?.ideal_polytope()?;
                cfg.filling = Some(FillingChoice::parse(&text, g.ideal_vertices().len())?);
            }
            match run_pipeline(&cfg) {
                Ok(run) => {
                    for s in &run.stages {
                        eprintln!("[ok] {}", s.stage);
                    }
                    let summary = json!({
                        "n": run.n,
                        "census": run.census.to_json(),
                        "report": run.report.as_ref().map(|r| r.to_json()),
                    });
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    println!("{}", e.to_json());
                    return Ok(e.exit_code());
                }
            }
        }
        Command::Verify { suite } => {
            let report = verify(&suite)?;
            for line in report.lines() {
                println!("{line}");
            }
            if !report.passed() {
                return Ok(4);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
