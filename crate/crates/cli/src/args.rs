use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "symqcs", version, about = "Symmetric sequences, symmetric algebras, their modules and Σ-ideals, computed exactly")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Seed for every randomized choice (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the algebra comes from: a JSON file, a ring spec, or builder flags.
#[derive(Args, Debug, Clone)]
pub struct AlgArgs {
    /// Algebra JSON as written by `build-algebra`.
    #[arg(long, value_name = "PATH")]
    pub algebra: Option<PathBuf>,
    /// `T(d)`, `Lambda(d)`, `QS`, `Q[x,y]`, `Q[x:1,y:2]/(x^3, x*y)`.
    #[arg(long)]
    pub ring: Option<String>,
    /// Tensor algebra on `--dim` letters.
    #[arg(long)]
    pub tensor: bool,
    /// Exterior algebra on `--dim` letters.
    #[arg(long)]
    pub exterior: bool,
    /// Group algebras of the symmetric groups.
    #[arg(long = "sym-group")]
    pub sym_group: bool,
    /// With `--sym-group`: let Σ_n act by conjugation instead of left translation.
    #[arg(long)]
    pub conjugation: bool,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 4)]
    pub cutoff: usize,
    /// `Q`, or `F<p>` for one of the built-in primes.
    #[arg(long, default_value = "Q")]
    pub field: String,
}

/// A module over the algebra.
#[derive(Args, Debug, Clone, Default)]
pub struct ModuleArgs {
    /// Module JSON: `{"underlying","actions"}` or graded `{"levels","mult"}`.
    #[arg(long, value_name = "PATH")]
    pub module: Option<PathBuf>,
    /// The free module F_mE.
    #[arg(long, value_name = "M")]
    pub free: Option<usize>,
    /// A suspension module on a vector space of this dimension.
    #[arg(long, value_name = "DIM")]
    pub suspension: Option<usize>,
    /// Degree of the suspension's bottom piece.
    #[arg(long, default_value_t = 0)]
    pub degree: usize,
    /// E modulo the Σ-ideal generated by these elements.
    #[arg(long, value_name = "ELEMENTS")]
    pub quotient: Option<String>,
    /// E modulo E_{≥n}.
    #[arg(long, value_name = "N")]
    pub tail: Option<usize>,
}

/// Generators of a Σ-ideal, comma separated (`x, y - x` or `[2,1], [1,2]`).
#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long, default_value = "")]
    pub gens: String,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// `monomial` for all variable subsets, or `explicit` with `--prime`.
    #[arg(long, default_value = "monomial")]
    pub family: String,
    /// Generators of one candidate prime; repeatable.
    #[arg(long = "prime", value_name = "ELEMENTS")]
    pub primes: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct IdealListArgs {
    /// Principal ideals, one per comma separated element.
    #[arg(long, default_value = "")]
    pub ideals: String,
    /// A further ideal given by its generators; repeatable.
    #[arg(long = "ideal", value_name = "ELEMENTS")]
    pub extra: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an algebra and print its JSON.
    BuildAlgebra {
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// Build a module and print its JSON.
    BuildModule {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        module: ModuleArgs,
        /// Shift the result down by k levels.
        #[arg(long, default_value_t = 0)]
        shift: usize,
    },
    /// Verify axioms and structural properties.
    #[command(group(ArgGroup::new("what").required(true).args(["axioms", "commutative", "flatness", "hom_shift", "adjunction"])))]
    Check {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        module: ModuleArgs,
        /// Algebra axioms, or module axioms when a module is given.
        #[arg(long)]
        axioms: bool,
        /// The χ-twisted commutativity square.
        #[arg(long)]
        commutative: bool,
        /// With `--commutative`: compare against the untwisted square.
        #[arg(long)]
        naive: bool,
        /// Random monomorphisms smashed with F_mE stay injective.
        #[arg(long)]
        flatness: bool,
        /// [F_mE, M] ≅ M[m] at every level.
        #[arg(long = "hom-shift")]
        hom_shift: bool,
        /// Triangle identity and counit of V ⊣ U.
        #[arg(long)]
        adjunction: bool,
        /// The m in F_mE for `--flatness` and `--hom-shift`.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Σ-ideals.
    Ideal {
        #[command(subcommand)]
        op: IdealOp,
    },
    /// Torsion and closedness of graded modules.
    Torsion {
        #[command(subcommand)]
        op: TorsionOp,
    },
    /// The V ⊣ U adjunction and reconstruction from suspension pieces.
    Reconstruct {
        #[command(subcommand)]
        op: ReconstructOp,
    },
    /// Finite models of the spectral space.
    Proj {
        #[command(subcommand)]
        op: ProjOp,
    },
    /// Run one acceptance suite (1-8) or `all`.
    Suite {
        which: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum IdealOp {
    Closure {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        gens: GenArgs,
    },
    Product {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    Prime {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        gens: GenArgs,
    },
    Radical {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        gens: GenArgs,
    },
    TwoSided {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        gens: GenArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum TorsionOp {
    Test {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        module: ModuleArgs,
    },
    Closed {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReconstructOp {
    UvIdentity {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        module: ModuleArgs,
    },
    Filtration {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        module: ModuleArgs,
        /// Filtration step; defaults to the generation degree N.
        #[arg(long)]
        step: Option<usize>,
    },
    AMapCokernel {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ProjOp {
    Vset {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        gens: GenArgs,
        #[command(flatten)]
        family: FamilyArgs,
    },
    Laws {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        ideals: IdealListArgs,
        #[command(flatten)]
        family: FamilyArgs,
    },
    Spectral {
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        ideals: IdealListArgs,
        #[command(flatten)]
        family: FamilyArgs,
    },
    Sections {
        #[command(flatten)]
        alg: AlgArgs,
        /// Homogeneous elements; one gives a chart, several give the gluing data.
        #[arg(long = "f", value_name = "ELEMENTS")]
        f: String,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    PnEmbedding {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        cutoff: usize,
        #[arg(long, default_value = "Q")]
        field: String,
    },
}
