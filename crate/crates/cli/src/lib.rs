//! Command-line driver for the `kcover` library.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical expectation
//! fails, 2 for usage and size errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use kcover::classify::{classify_report, find_ell, kernel_check, split_check, FullSubgroup};
use kcover::cohom::{full_subgroup_exists_with, h1_dim, h1_dim_dense, GModule, Solver};
use kcover::gamma::{cocycle, GammaGroup};
use kcover::kcomb::{binom_parity, binomial, Perm};
use kcover::specht::{
    alpha_matrix, beta_matrix, lattice_report, standard_submodule, IndexSet, DEFAULT_SIZE_BOUND,
};
use kcover::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_EXPECTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "kcover", version, about = "Finite covers of k-subset actions over GF(2)")]
struct Cli {
    /// Emit JSON instead of the human-readable summary.
    #[arg(long, global = true)]
    json: bool,
    /// Largest C(n, k) any subcommand will materialize.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_BOUND)]
    size_bound: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Shape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SolverArg {
    Propagation,
    Dense,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Propagation => Solver::Propagation,
            SolverArg::Dense => Solver::Dense,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distinct standard submodules and their containment order.
    Lattice(Shape),
    /// Random checks of the cocycle: evenness, cocycle identity, pushforward.
    CocycleCheck {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, env = "RNG_SEED", default_value_t = 0)]
        rng_seed: u64,
    },
    /// Whether some full subgroup has kernel K = sum of im alpha(j, k), j in J.
    FullSubgroup {
        #[command(flatten)]
        shape: Shape,
        /// Comma-separated j's; empty for the zero submodule.
        #[arg(long, allow_hyphen_values = true)]
        kernel: String,
        #[arg(long, value_enum, default_value = "propagation")]
        solver: SolverArg,
    },
    /// Full-subgroup existence for every standard submodule.
    Classify(Shape),
    /// Certified l for the kernel comparison.
    Ell {
        #[arg(long)]
        k: usize,
    },
    /// Whether Γ_k(n) splits over its kernel.
    SplitCheck(Shape),
    /// Compares ker alpha(k, l) with M at size n.
    KernelCheck {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        ell: usize,
    },
    /// dim H¹(Sym(n), GF(2)^([n]^k)/K).
    H1 {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value = "")]
        kernel: String,
        #[arg(long, value_enum, default_value = "propagation")]
        solver: SolverArg,
    },
    /// Quick battery of known answers.
    Selftest {
        #[arg(long, env = "RNG_SEED", default_value_t = 0)]
        rng_seed: u64,
    },
}

/// Validated parameters shared by the subcommands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub k: usize,
    pub ell: Option<usize>,
    pub rng_seed: u64,
    pub trials: usize,
    pub size_bound: usize,
    pub json: bool,
}

impl RunConfig {
    pub fn new(n: usize, k: usize, size_bound: usize) -> Result<Self, Error> {
        let cfg = RunConfig {
            n,
            k,
            ell: None,
            rng_seed: 0,
            trials: 1,
            size_bound,
            json: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.k < 2 || self.k > self.n {
            return Err(Error::Size(format!("need 2 <= k <= n, got k = {}, n = {}", self.k, self.n)));
        }
        if self.trials == 0 {
            return Err(Error::Size("trials must be at least 1".into()));
        }
        let widest = self.ell.map_or(self.k, |l| l.max(self.k));
        for m in [self.k, widest] {
            let count = binomial(self.n as u64, m as u64).unwrap_or(u128::MAX);
            if count > self.size_bound as u128 {
                return Err(Error::SizeBound {
                    what: format!("C({}, {m})", self.n),
                    value: usize::try_from(count).unwrap_or(usize::MAX),
                    bound: self.size_bound,
                });
            }
        }
        Ok(())
    }
}

enum Failure {
    Usage(String),
    Expectation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Expectation(_) | Error::OddCocycleEntry { .. } | Error::InconsistentAction(_) => {
                Failure::Expectation(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code. Reports go to `out`, diagnostics to stderr.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            eprintln!("EXPECTATION FAILED: see report above");
            EXIT_EXPECTATION
        }
        Err(Failure::Expectation(msg)) => {
            eprintln!("EXPECTATION FAILED: {msg}");
            EXIT_EXPECTATION
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn config(cli: &Cli, shape: Shape) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::new(shape.n, shape.k, cli.size_bound)?;
    cfg.json = cli.json;
    Ok(cfg)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<bool, Failure> {
    match &cli.command {
        Command::Lattice(shape) => {
            let cfg = config(cli, *shape)?;
            let report = lattice_report(cfg.k, cfg.n, cfg.size_bound)?;
            if cfg.json {
                emit(out, &report)?;
            } else {
                writeln!(out, "standard submodules of GF(2)^([{}]^{})", cfg.n, cfg.k)?;
                for (i, node) in report.nodes.iter().enumerate() {
                    let aliases: Vec<_> = node.aliases.iter().map(|j| j.indices()).collect();
                    writeln!(out, "  [{i}] dim {:>4}  s2 {:<5}  J {:?}", node.dim, node.s2_factor, aliases)?;
                }
                writeln!(out, "covers: {:?}", report.hasse)?;
            }
            Ok(report.generator_invariant)
        }
        Command::CocycleCheck { shape, trials, rng_seed } => {
            let mut cfg = config(cli, *shape)?;
            cfg.trials = *trials;
            cfg.rng_seed = *rng_seed;
            cfg.validate()?;
            let report = cocycle_check(&cfg)?;
            let pass = report["pass"].as_bool().unwrap_or(false);
            emit(out, &report)?;
            Ok(pass)
        }
        Command::FullSubgroup { shape, kernel, solver } => {
            let cfg = config(cli, *shape)?;
            let js = IndexSet::parse(kernel)?;
            let spec = standard_submodule(js, cfg.k, cfg.n)?;
            let (sat, cert) = full_subgroup_exists_with(&spec, (*solver).into())?;
            let witness: Vec<String> = match &cert {
                kcover::cohom::CoboundaryCertificate::Coboundary { witness_on_generators, .. } => {
                    witness_on_generators.iter().map(|v| v.to_string()).collect()
                }
                _ => Vec::new(),
            };
            let verified = if sat {
                FullSubgroup::from_certificate(&spec, &cert)?.verify()?
            } else {
                true
            };
            emit(
                out,
                &json!({
                    "k": cfg.k,
                    "n": cfg.n,
                    "J": js,
                    "kernelDim": spec.materialized.dim(),
                    "sat": sat,
                    "witnessOnGenerators": witness,
                    "rankGap": cert.rank_gap(),
                    "subgroupVerified": verified,
                }),
            )?;
            Ok(verified)
        }
        Command::Classify(shape) => {
            let cfg = config(cli, *shape)?;
            let report = classify_report(cfg.k, cfg.n, cfg.size_bound)?;
            if cfg.json {
                emit(out, &report)?;
            } else {
                writeln!(out, "classification at k = {}, n = {}", cfg.k, cfg.n)?;
                if let Some(w) = &report.warning {
                    writeln!(out, "WARNING: {w}")?;
                }
                writeln!(out, "  {:>4}  {:<5}  {:<5}  {:<5}  {:>3}  J", "dim", "s2", "sat", "gap", "h1")?;
                for row in &report.rows {
                    let gap = row.rank_gap.map_or("-".to_string(), |g| g.to_string());
                    let aliases: Vec<_> = row.aliases.iter().map(|j| j.indices()).collect();
                    writeln!(
                        out,
                        "  {:>4}  {:<5}  {:<5}  {:<5}  {:>3}  {:?}",
                        row.dim, row.s2_factor, row.exists, gap, row.h1_finite_analogue, aliases
                    )?;
                }
                for v in &report.verdicts {
                    let mark = if v.pass { "PASS" } else { "FAIL" };
                    writeln!(out, "{mark} {}  {}", v.name, v.detail)?;
                }
            }
            Ok(report.all_pass)
        }
        Command::Ell { k } => {
            let cert = find_ell(*k)?;
            if cli.json {
                emit(out, &cert)?;
            } else {
                emit(out, &json!({"k": cert.k, "ell": cert.ell, "certified": cert.certified}))?;
            }
            Ok(cert.certified)
        }
        Command::SplitCheck(shape) => {
            let cfg = config(cli, *shape)?;
            let (split, cert) = split_check(cfg.k, cfg.n)?;
            if cfg.json {
                emit(out, &json!({"k": cfg.k, "n": cfg.n, "split": split, "rankGap": cert.rank_gap()}))?;
            } else {
                emit(out, &json!({"split": split}))?;
            }
            Ok(!split)
        }
        Command::KernelCheck { shape, ell } => {
            let mut cfg = config(cli, *shape)?;
            cfg.ell = Some(*ell);
            cfg.validate()?;
            let report = kernel_check(cfg.k, *ell, cfg.n)?;
            emit(out, &report)?;
            Ok(report.equal)
        }
        Command::H1 { shape, kernel, solver } => {
            let cfg = config(cli, *shape)?;
            let js = IndexSet::parse(kernel)?;
            let spec = standard_submodule(js, cfg.k, cfg.n)?;
            let module = GModule::quotient(cfg.k, cfg.n, &spec.materialized)?;
            let report = match solver {
                SolverArg::Propagation => h1_dim(&module)?,
                SolverArg::Dense => h1_dim_dense(&module)?,
            };
            emit(
                out,
                &json!({"k": cfg.k, "n": cfg.n, "J": js, "moduleDim": module.dim(), "z1": report.z1, "b1": report.b1, "h1": report.h1}),
            )?;
            Ok(true)
        }
        Command::Selftest { rng_seed } => {
            let results = selftest(*rng_seed)?;
            let pass = results.iter().all(|(_, ok)| *ok);
            if cli.json {
                let items: Vec<Value> = results.iter().map(|(name, ok)| json!({"name": name, "pass": ok})).collect();
                emit(out, &json!({"checks": items, "pass": pass}))?;
            } else {
                for (name, ok) in &results {
                    writeln!(out, "{} {name}", if *ok { "PASS" } else { "FAIL" })?;
                }
            }
            Ok(pass)
        }
    }
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Perm::from_images(&images).expect("a shuffle is a permutation")
}

#[derive(Default, Serialize)]
struct Tally {
    checked: usize,
    failures: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.failures += usize::from(!ok);
    }
}

/// Seeded random triples (h, g, f): the cocycle never has an odd entry, it
/// satisfies the 2-cocycle identity, and it is the pushforward of c_2.
fn cocycle_check(cfg: &RunConfig) -> Result<Value, Failure> {
    let gamma = GammaGroup::new(cfg.k, cfg.n)?;
    let alpha2 = alpha_matrix(2, cfg.k, cfg.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut even = Tally::default();
    let mut identity = Tally::default();
    let mut pushforward = Tally::default();
    for _ in 0..cfg.trials {
        let (h, g, f) = (
            random_perm(cfg.n, &mut rng),
            random_perm(cfg.n, &mut rng),
            random_perm(cfg.n, &mut rng),
        );
        let hg = &h * &g;
        let gf = &g * &f;
        let values = [
            gamma.cocycle(&g, &f),
            gamma.cocycle(&h, &gf),
            gamma.cocycle(&h, &g),
            gamma.cocycle(&hg, &f),
        ];
        let ok_even = values.iter().all(|v| v.is_ok());
        even.record(ok_even);
        if !ok_even {
            continue;
        }
        let [c_gf, c_h_gf, c_hg, c_hg_f] = values.map(|v| v.expect("checked above"));
        let lhs = gamma.twist(&h, &c_gf).add(&c_h_gf);
        identity.record(lhs == c_hg.add(&c_hg_f));
        let c2 = cocycle(&h, &g, 2)?;
        pushforward.record(alpha2.mat.mul_vec(&c2)? == c_hg);
    }
    let pass = [&even, &identity, &pushforward].iter().all(|t| t.failures == 0);
    Ok(json!({
        "k": cfg.k,
        "n": cfg.n,
        "trials": cfg.trials,
        "rngSeed": cfg.rng_seed,
        "evenEntries": even,
        "cocycleIdentity": identity,
        "pushforward": pushforward,
        "pass": pass,
    }))
}

fn selftest(seed: u64) -> Result<Vec<(String, bool)>, Failure> {
    let mut results = Vec::new();

    let lucas = (0..=64u64).all(|a| {
        (0..=a).all(|b| binom_parity(a, b as i64) == (binomial(a, b).expect("fits in u128") % 2 == 1))
    });
    results.push(("binomial parity matches exact binomials for a <= 64".to_string(), lucas));

    let mut duality = true;
    for n in 1..=5 {
        for k in 0..=n {
            for j in 0..=k {
                duality &= beta_matrix(k, j, n)? == alpha_matrix(j, k, n)?.mat.transpose();
            }
        }
    }
    results.push(("beta is the transpose of alpha for n <= 5".to_string(), duality));

    for (n, k) in [(4, 2), (5, 3)] {
        let mut cfg = RunConfig::new(n, k, DEFAULT_SIZE_BOUND)?;
        cfg.trials = 100;
        cfg.rng_seed = seed;
        let report = cocycle_check(&cfg)?;
        results.push((format!("cocycle identities at n = {n}, k = {k}"), report["pass"] == true));
    }

    for (n, k) in [(3, 2), (4, 3)] {
        let (split, _) = split_check(k, n)?;
        results.push((format!("Γ_{k}({n}) does not split"), !split));
    }

    for (k, ell) in [(3, 5), (4, 9), (5, 9)] {
        let cert = find_ell(k)?;
        results.push((format!("l({k}) = {ell} certified"), cert.ell == ell && cert.certified));
    }
    let kc = kernel_check(3, 5, 8)?;
    results.push(("ker alpha(3,5) = M at n = 8".to_string(), kc.equal));

    let report = classify_report(3, 5, DEFAULT_SIZE_BOUND)?;
    results.push(("classification at k = 3, n = 5".to_string(), report.all_pass));
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_bad_shapes() {
        assert!(RunConfig::new(5, 1, 512).is_err());
        assert!(RunConfig::new(3, 4, 512).is_err());
        assert!(RunConfig::new(12, 6, 512).is_err());
        assert!(RunConfig::new(6, 3, 512).is_ok());
        let mut cfg = RunConfig::new(6, 3, 512).unwrap();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn ell_bound_is_checked_too() {
        let mut cfg = RunConfig::new(9, 3, 100).unwrap();
        cfg.ell = Some(5);
        assert!(matches!(cfg.validate(), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn cocycle_check_is_deterministic() {
        let mut cfg = RunConfig::new(5, 3, 512).unwrap();
        cfg.trials = 20;
        cfg.rng_seed = 7;
        let a = cocycle_check(&cfg).ok().unwrap();
        let b = cocycle_check(&cfg).ok().unwrap();
        assert_eq!(a, b);
        assert_eq!(a["pass"], true);
        assert_eq!(a["cocycleIdentity"]["checked"], 20);
    }
}
