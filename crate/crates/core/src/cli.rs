//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, parse or I/O error, 2 when a randomized
//! stage fails, 3 when `--verify` finds a mismatch.

use crate::config::{Config, DenseStrategy};
use crate::error::{Error, FailKind, Result};
use crate::metrics;
use crate::oracles::{naive_mul, naive_sumset};
use crate::polycore::{ExponentSet, SparsePoly};
use crate::rng::RandomSource;
use crate::sparsemul::{sparse_mult_ring_with, Ring};
use crate::sumset::sumset_with;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Default failure probability for user commands.
pub const DEFAULT_MU: f64 = 1.0 / (1u64 << 20) as f64;

/// Extra attempts, each with doubled `lambda0`, after a primitive-root failure.
const LAMBDA0_RETRIES: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "spmul", version, about = "Output-sensitive sparse polynomial multiplication")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a random pair of polynomials to <out>.f.sp and <out>.g.sp
    Gen {
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        height: u64,
        #[arg(long, value_enum, default_value_t = Structure::Random)]
        structure: Structure,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Multiply two polynomial files
    Mul {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MU)]
        mu: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sumset of two set files (polynomial files contribute their supports)
    Sumset {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MU)]
        mu: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the randomized algorithms against the naive baselines
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Comma-separated term counts; may be empty
        #[arg(long, default_value = "256,512,1024", value_parser = parse_sizes)]
        sizes: SizeList,
        #[arg(long, default_value_t = 1u64 << 40)]
        degree: u64,
        #[arg(long, default_value_t = 1000)]
        height: u64,
        #[arg(long, default_value_t = DEFAULT_MU)]
        mu: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeList(pub Vec<usize>);

fn parse_sizes(s: &str) -> std::result::Result<SizeList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| format!("bad size {t:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(SizeList)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    /// Uniform exponents; structural sparsity near #F #G
    Random,
    /// Both supports are progressions with one common step
    Progression,
    /// A few runs of consecutive exponents
    Cluster,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ScalingSumset,
    ScalingMul,
    Crossover,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::ScalingSumset => "scaling-sumset",
            Suite::ScalingMul => "scaling-mul",
            Suite::Crossover => "crossover",
        }
    }
}

fn nonzero_coeff(height: u64, rng: &mut RandomSource) -> BigInt {
    let c = BigInt::from(rng.below_u64(height) + 1);
    if rng.below_u64(2) == 0 {
        c
    } else {
        -c
    }
}

fn exponents(structure: Structure, terms: usize, degree: u64, step: u64, rng: &mut RandomSource) -> Vec<u64> {
    match structure {
        Structure::Random => {
            let mut seen = BTreeSet::new();
            while seen.len() < terms {
                seen.insert(rng.below_u64(degree));
            }
            seen.into_iter().collect()
        }
        Structure::Progression => {
            let span = (terms as u64 - 1) * step;
            let start = rng.below_u64(degree - span);
            (0..terms as u64).map(|i| start + i * step).collect()
        }
        Structure::Cluster => {
            let blocks = terms.min(4);
            let mut seen = BTreeSet::new();
            let mut block = 0;
            while seen.len() < terms {
                let size = ((terms - seen.len()) / (blocks - block).max(1)).max(1) as u64;
                let start = rng.below_u64(degree - size + 1);
                for e in start..start + size {
                    if seen.len() < terms {
                        seen.insert(e);
                    }
                }
                block += 1;
            }
            seen.into_iter().collect()
        }
    }
}

/// A pair of univariate polynomials with `terms` terms each, exponents in
/// `[0, degree)` and nonzero coefficients in `[-height, height]`.
pub fn generate(structure: Structure, terms: usize, degree: u64, height: u64, rng: &mut RandomSource) -> Result<(SparsePoly, SparsePoly)> {
    if terms == 0 || degree == 0 || height == 0 {
        return Err(Error::invalid("terms, degree and height must be positive"));
    }
    if terms as u64 > degree {
        return Err(Error::invalid("more terms than exponents below the degree"));
    }
    let step = if terms > 1 { rng.below_u64((degree - 1) / (terms as u64 - 1)) + 1 } else { 1 };
    let poly = |rng: &mut RandomSource| {
        let es = exponents(structure, terms, degree, step, rng);
        SparsePoly::univariate(es.into_iter().map(|e| (nonzero_coeff(height, rng), e)).collect::<Vec<_>>())
    };
    let f = poly(rng);
    let g = poly(rng);
    Ok((f, g))
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn read_set(path: &Path) -> Result<ExponentSet> {
    let text = read(path)?;
    let is_poly = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("sp"));
    if is_poly {
        SparsePoly::parse(&text)?.support()
    } else {
        ExponentSet::parse(&text)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs `op`, doubling `lambda0` after each primitive-root failure.
fn with_retries<T>(mut cfg: Config, mut op: impl FnMut(&Config) -> Result<T>) -> Result<T> {
    let mut attempt = 0;
    loop {
        match op(&cfg) {
            Err(Error::Fail(FailKind::PrimRoots)) if attempt < LAMBDA0_RETRIES => {
                attempt += 1;
                cfg.lambda0 *= 2.0;
            }
            r => return r,
        }
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("--mu must be in (0,1)"))
    }
}

pub fn cmd_gen(terms: usize, degree: u64, height: u64, structure: Structure, seed: u64, out: &Path) -> Result<i32> {
    let mut rng = RandomSource::from_seed(seed);
    let (f, g) = generate(structure, terms, degree, height, &mut rng)?;
    let (pf, pg) = gen_paths(out);
    fs::write(&pf, f.to_text())?;
    fs::write(&pg, g.to_text())?;
    Ok(EXIT_OK)
}

/// The two files written by `gen` for a given `--out`.
pub fn gen_paths(out: &Path) -> (PathBuf, PathBuf) {
    let base = out.as_os_str().to_string_lossy();
    (PathBuf::from(format!("{base}.f.sp")), PathBuf::from(format!("{base}.g.sp")))
}

pub fn cmd_mul(a: &Path, b: &Path, mu: f64, seed: u64, verify: bool, out: Option<&Path>) -> Result<i32> {
    check_mu(mu)?;
    let f = SparsePoly::parse(&read(a)?)?;
    let g = SparsePoly::parse(&read(b)?)?;
    if f.nvars() != g.nvars() {
        return Err(Error::invalid("operands have different variable counts"));
    }
    let mut rng = RandomSource::from_seed(seed);
    let h = with_retries(Config::from_env(), |cfg| sparse_mult_ring_with(&f, &g, &Ring::Integers, mu, cfg, &mut rng))?;
    emit(out, &h.to_text())?;
    if verify {
        let want = naive_mul(&f, &g)?;
        if want != h {
            eprintln!("verification mismatch\ncomputed:\n{}expected:\n{}", h.to_text(), want.to_text());
            return Ok(EXIT_MISMATCH);
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_sumset(a: &Path, b: &Path, mu: f64, seed: u64, verify: bool, out: Option<&Path>) -> Result<i32> {
    check_mu(mu)?;
    let sa = read_set(a)?;
    let sb = read_set(b)?;
    let mut rng = RandomSource::from_seed(seed);
    let s = sumset_with(&sa, &sb, mu, &Config::from_env(), &mut rng)?;
    emit(out, &s.to_text())?;
    if verify {
        let want = naive_sumset(&sa, &sb);
        if want != s {
            eprintln!("verification mismatch\ncomputed:\n{}expected:\n{}", s.to_text(), want.to_text());
            return Ok(EXIT_MISMATCH);
        }
    }
    Ok(EXIT_OK)
}

/// One benchmark measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub suite: &'static str,
    pub r: usize,
    pub d: u64,
    pub c: u64,
    /// Structural sparsity `#(supp F + supp G)`.
    pub t: usize,
    /// Sparsity of the product.
    pub s: usize,
    pub algo: &'static str,
    pub ms: f64,
    pub word_ops: u64,
    pub success: bool,
}

pub const BENCH_HEADER: &str = "suite,R,D,C,T,S,algo,ms,word_ops,success";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3},{},{}",
            self.suite, self.r, self.d, self.c, self.t, self.s, self.algo, self.ms, self.word_ops, self.success
        )
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64, u64) {
    let start = Instant::now();
    let (v, ops) = metrics::measure(f);
    (v, start.elapsed().as_secs_f64() * 1e3, ops)
}

/// Runs one suite instance per size, handing each record to `sink` as soon
/// as it exists.
pub fn run_bench(
    suite: Suite,
    sizes: &[usize],
    degree: u64,
    height: u64,
    mu: f64,
    seed: u64,
    mut sink: impl FnMut(&BenchRecord) -> Result<()>,
) -> Result<()> {
    let mut cfg = Config::from_env();
    cfg.dense = DenseStrategy::Dense;
    let structure = if suite == Suite::Crossover { Structure::Random } else { Structure::Progression };
    for (i, &r) in sizes.iter().enumerate() {
        let mut rng = RandomSource::from_seed(seed.wrapping_add(i as u64));
        let (f, g) = generate(structure, r, degree, height, &mut rng)?;
        let mut rec = BenchRecord { suite: suite.name(), r, d: degree, c: height, t: 0, s: 0, algo: "naive", ms: 0.0, word_ops: 0, success: true };
        if suite == Suite::ScalingSumset {
            let (a, b) = (f.support()?, g.support()?);
            let (want, ms, ops) = timed(|| naive_sumset(&a, &b));
            rec = BenchRecord { c: 1, t: want.len(), s: want.len(), ms, word_ops: ops, ..rec };
            sink(&rec)?;
            let (got, ms, ops) = timed(|| with_retries(cfg.clone(), |c| sumset_with(&a, &b, mu, c, &mut rng)));
            sink(&BenchRecord { algo: "paper", ms, word_ops: ops, success: got.ok().as_ref() == Some(&want), ..rec })?;
        } else {
            let t = naive_sumset(&f.support()?, &g.support()?).len();
            let (want, ms, ops) = timed(|| naive_mul(&f, &g));
            let want = want?;
            rec = BenchRecord { t, s: want.sparsity(), ms, word_ops: ops, ..rec };
            sink(&rec)?;
            let (got, ms, ops) =
                timed(|| with_retries(cfg.clone(), |c| crate::sparsemul::sparse_mult_zz_with(&f, &g, mu, c, &mut rng)));
            sink(&BenchRecord { algo: "paper", ms, word_ops: ops, success: got.ok().as_ref() == Some(&want), ..rec })?;
        }
    }
    Ok(())
}

pub fn cmd_bench(suite: Suite, sizes: &[usize], degree: u64, height: u64, mu: f64, seed: u64, csv: Option<&Path>) -> Result<i32> {
    check_mu(mu)?;
    let mut out: Box<dyn Write> = match csv {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    };
    writeln!(out, "{BENCH_HEADER}")?;
    out.flush()?;
    run_bench(suite, sizes, degree, height, mu, seed, |rec| {
        writeln!(out, "{}", rec.csv_row())?;
        out.flush()?;
        Ok(())
    })?;
    Ok(EXIT_OK)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Gen { terms, degree, height, structure, seed, out } => cmd_gen(*terms, *degree, *height, *structure, *seed, out),
        Command::Mul { a, b, mu, seed, verify, out } => cmd_mul(a, b, *mu, *seed, *verify, out.as_deref()),
        Command::Sumset { a, b, mu, seed, verify, out } => cmd_sumset(a, b, *mu, *seed, *verify, out.as_deref()),
        Command::Bench { suite, sizes, degree, height, mu, seed, csv } => {
            cmd_bench(*suite, &sizes.0, *degree, *height, *mu, *seed, csv.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(e) if e.is_fail() => {
            eprintln!("{e}");
            eprintln!("FAIL (retry with new seed)");
            EXIT_FAIL
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_shapes() {
        let mut rng = RandomSource::from_seed(1);
        let (f, g) = generate(Structure::Progression, 3, 10, 5, &mut rng).unwrap();
        for p in [&f, &g] {
            let e: Vec<i64> = p.exponents().map(|e| e.try_into().unwrap()).collect();
            assert_eq!(e.len(), 3);
            assert_eq!(e[1] - e[0], e[2] - e[1]);
            assert!(e.iter().all(|&x| (0..10).contains(&x)));
            assert!(p.height() <= 5u32.into());
        }
        let (f, _) = generate(Structure::Random, 1, 10, 5, &mut rng).unwrap();
        assert_eq!(f.sparsity(), 1);
        let (f, _) = generate(Structure::Cluster, 50, 1000, 5, &mut rng).unwrap();
        assert_eq!(f.sparsity(), 50);
        assert!(generate(Structure::Random, 11, 10, 5, &mut rng).is_err());
    }

    #[test]
    fn bench_rows() {
        let mut rows = Vec::new();
        run_bench(Suite::Crossover, &[4, 6], 1000, 10, 0.1, 3, |r| {
            rows.push(r.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].algo, "naive");
        assert_eq!(rows[1].algo, "paper");
        assert!(rows.iter().all(|r| r.t >= r.s && r.success));
        assert_eq!(rows[0].csv_row().split(',').count(), BENCH_HEADER.split(',').count());
    }
}
