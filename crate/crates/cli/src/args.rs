use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "wfusion", version, about = "Fusion rings, characters and cohomology of rational W-algebras")]
pub struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Sb,
    Spr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CharFamily {
    Sb,
    Spr,
    #[value(name = "prinW")]
    PrinW,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the integrable weights of sl_r at level n.
    Weights {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Affine fusion rings K(L_n(sl_r)).
    #[command(subcommand)]
    Fusion(FusionCommand),
    /// Subregular W-algebras and principal W-superalgebras.
    #[command(subcommand)]
    Walg(WalgCommand),
    /// Level-rank duality checks.
    #[command(subcommand)]
    Levelrank(LevelrankCommand),
    /// Truncated characters.
    Char(CharArgs),
    /// Relative semi-infinite cohomology of Fock modules.
    Sicoh(SicohArgs),
    /// Run the acceptance suite.
    Verify {
        /// `all` or a comma-separated list of criterion numbers.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Only the instances named in the criteria.
        #[arg(long)]
        quick: bool,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// Lie algebra, written `sl<r>`.
    #[arg(long)]
    pub algebra: String,
    #[arg(long)]
    pub level: i64,
}

#[derive(Debug, Subcommand)]
pub enum FusionCommand {
    /// Print the full fusion table.
    Dump {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Fuse two weights given as JSON Dynkin labels `[a0,...]`.
    Product {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub r: i64,
}

#[derive(Debug, Subcommand)]
pub enum WalgCommand {
    /// Simple modules as canonical labels.
    Irr {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Fusion ring.
    Fusion {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Modular S-matrix (decimal).
    Smatrix {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Label map induced by relative cohomology (sb -> spr or spr -> sb).
    Hrelmap {
        #[command(flatten)]
        model: ModelArgs,
        /// Heisenberg charge parameter, `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Model-level consistency checks.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
pub enum LevelrankCommand {
    Verify {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
    },
}

#[derive(Debug, Args)]
pub struct CharArgs {
    #[arg(long, value_enum)]
    pub family: CharFamily,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub r: i64,
    /// Dynkin labels `[a0,...,a_{r-1}]` of a weight of sl_r at level n.
    #[arg(long)]
    pub lambda: String,
    /// Heisenberg charge (ignored for prinW).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub a: i64,
    /// Terms with conformal weight below this order are exact.
    #[arg(long, default_value_t = 10)]
    pub order: i64,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SicohArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, allow_hyphen_values = true)]
    pub norm: String,
    #[arg(long)]
    pub maxweight: u32,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}
