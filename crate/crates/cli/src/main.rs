mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use korbit::Caps;

#[derive(Parser, Debug)]
#[command(name = "korbit", version, about = "Permutation groups through their n-orbit matrices")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Catalog file to load after the builtins; repeatable. Defaults to $KORBIT_CATALOG.
    #[arg(long = "catalog", global = true, value_name = "PATH")]
    pub catalogs: Vec<PathBuf>,

    /// Leave the builtin seed catalog out.
    #[arg(long, global = true)]
    pub no_builtin: bool,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,

    /// Largest group whose element list is materialized.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_elements: Option<u64>,

    /// Largest group whose subgroup lattice is built.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_lattice: Option<u64>,

    /// Node budget for the n-orbit isomorphism search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_nodes: Option<u64>,
}

impl RunConfig {
    pub fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            elements: self.cap_elements.map_or(d.elements, |x| x as usize),
            lattice: self.cap_lattice.map_or(d.lattice, |x| x as usize),
            coset_index: d.coset_index,
            nodes: self.cap_nodes.unwrap_or(d.nodes),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure summary of one group.
    Info { id: String },
    /// Export the n-orbit matrix of a group, or its projection on some columns.
    Norbit {
        id: String,
        /// Comma-separated 0-based columns, e.g. 0,1,3.
        #[arg(long, value_delimiter = ',')]
        project: Option<Vec<usize>>,
    },
    /// Run one claim, or `all`, over the catalog.
    Check { claim: String },
    /// Compare n-orbits of primitive md groups that share degree and order.
    Hunt {
        #[arg(long, default_value_t = 5)]
        degree_max: usize,
        /// Only use catalog groups, without enumerated transitive groups.
        #[arg(long)]
        no_enumerate: bool,
    },
    /// Catalog listing and enumeration.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Loaded specs with their computed orders.
    List,
    /// Transitive groups of a small degree, up to conjugacy.
    Enumerate {
        #[arg(long)]
        degree: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut buffer = Vec::new();
    let code = match commands::run(&cli, &mut buffer) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.config.out {
        Some(path) => std::fs::write(path, &buffer).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(&buffer)
            .map_err(|e| e.to_string()),
    };
    if let Err(message) = written {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
