//! Command-line grammar.

use crate::config::RunConfig;
use crate::report::Format;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "farey-index", version, about = "Exact and asymptotic statistics of Farey fraction indices")]
pub struct Cli {
    /// JSON file supplying default parameters; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report format: csv or json
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write the report here (plus a `.meta.json` sidecar) instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List F_Q ∩ (0, 1] with the index of every fraction
    Farey(FareyArgs),
    /// Exact index moments restricted to a residue class and B-free denominators
    Moments(MomentsArgs),
    /// Compare exact sums with their asymptotic main terms over a Q sweep
    Asympt(AsymptArgs),
    /// Empirical m-correlations of consecutive indices
    Corr(CorrArgs),
    /// The correlation constant A(h) exactly, with an optional Monte-Carlo check
    Constant(ConstantArgs),
    /// Run the exact identity suites
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Farey(_) => "farey",
            Command::Moments(_) => "moments",
            Command::Asympt(_) => "asympt",
            Command::Corr(_) => "corr",
            Command::Constant(_) => "constant",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Args, Debug)]
pub struct FareyArgs {
    /// Farey order Q
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Single Farey order
    #[arg(long)]
    pub q: Option<u64>,
    /// Comma-separated ascending Q values (overrides --q)
    #[arg(long, value_delimiter = ',')]
    pub qs: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    /// B-free restriction: none, kfree:K or primes:P1,P2,...
    #[arg(long)]
    pub bfree: Option<String>,
    /// Modulus k of the residue class
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Residue u, coprime to k
    #[arg(long)]
    pub residue: Option<u64>,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Moment order l
    #[arg(long)]
    pub l: Option<u32>,
    #[command(flatten)]
    pub class: ClassArgs,
    /// closed (per-denominator formulas) or enumeration (stream every fraction)
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Args, Debug)]
pub struct AsymptArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Main-term family, e.g. first-moment, second-moment, higher-moment-l3, deficiency
    #[arg(long)]
    pub theorem: Option<String>,
    #[command(flatten)]
    pub class: ClassArgs,
    /// Target accuracy for the special constants
    #[arg(long)]
    pub precision: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CorrArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Comma-separated shifts h1,...,hm
    #[arg(long, value_delimiter = ',')]
    pub h: Option<Vec<u64>>,
    /// Restrict anchors to (0, t], given as a/b
    #[arg(long)]
    pub t: Option<String>,
}

#[derive(Args, Debug)]
pub struct ConstantArgs {
    /// Comma-separated distinct positive shifts
    #[arg(long, value_delimiter = ',')]
    pub h: Option<Vec<u64>>,
    /// Starting corner cutoff: lemma (2^(h+1)) or remark (4h+2)
    #[arg(long)]
    pub c_policy: Option<String>,
    /// Monte-Carlo samples for the cross-check (omitted: no Monte Carlo)
    #[arg(long)]
    pub samples: Option<u64>,
    /// Monte-Carlo seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// identities, geometry or all
    #[arg(long)]
    pub suite: Option<String>,
    /// Largest Q for the per-Q identities
    #[arg(long)]
    pub qmax: Option<u64>,
}

impl Cli {
    /// Flag values as a config layer.
    pub fn flags(&self) -> RunConfig {
        let mut c = RunConfig { format: self.format, output: self.output.clone(), ..Default::default() };
        let sweep = |c: &mut RunConfig, s: &SweepArgs| {
            c.q = s.q;
            c.qs = s.qs.clone();
        };
        let class = |c: &mut RunConfig, a: &ClassArgs| {
            c.bfree = a.bfree.clone();
            c.modulus = a.modulus;
            c.residue = a.residue;
        };
        match &self.command {
            Command::Farey(a) => c.q = a.q,
            Command::Moments(a) => {
                sweep(&mut c, &a.sweep);
                class(&mut c, &a.class);
                c.l = a.l;
                c.method = a.method.clone();
            }
            Command::Asympt(a) => {
                sweep(&mut c, &a.sweep);
                class(&mut c, &a.class);
                c.theorem = a.theorem.clone();
                c.precision = a.precision;
            }
            Command::Corr(a) => {
                sweep(&mut c, &a.sweep);
                c.h = a.h.clone();
                c.t = a.t.clone();
            }
            Command::Constant(a) => {
                c.h = a.h.clone();
                c.c_policy = a.c_policy.clone();
                c.samples = a.samples;
                c.seed = a.seed;
            }
            Command::Verify(a) => {
                c.suite = a.suite.clone();
                c.qmax = a.qmax;
            }
        }
        c
    }
}
