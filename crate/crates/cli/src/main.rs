//! `hnfkit`: batch front end over the matrix text format.
//!
//! Exit codes: 0 success, 1 algorithm failure or a rejected `verify`,
//! 2 mathematical precondition violated, 3 parse or I/O error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hnfkit::apps::{hnf, lattice_intersection, multivariable_crt, product_hnf, remainder_mod_hermite};
use hnfkit::format::{parse_matrix, write_matrices};
use hnfkit::hermite_basis::relations_hermite_basis;
use hnfkit::howell::howell_form;
use hnfkit::intmat::{check_hermite, hermite_remainder};
use hnfkit::massager::{smith_decomposition, smith_massager, verify_massager, SmithMassager};
use hnfkit::oracle::{naive_hnf, relations_basis_oracle};
use hnfkit::{colmod, matmul, BigInt, DiagonalModulus, Error, HermiteBasis, IntMat, Options, SmithForm};

#[derive(Parser)]
#[command(name = "hnfkit", version, about = "Hermite bases of integer lattices and relations lattices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Input matrix file; repeat when two inputs are needed.
    #[arg(long = "in", global = true)]
    inputs: Vec<PathBuf>,
    /// Modulus matrix file.
    #[arg(long = "mod", global = true)]
    modulus: Option<PathBuf>,
    /// Right-hand side row (crt).
    #[arg(long, global = true)]
    rhs: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized fast paths; deterministic when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Failure probability budget.
    #[arg(long, global = true, default_value_t = 0.5)]
    epsilon: f64,
    /// Use the slow reference implementations.
    #[arg(long, global = true)]
    oracle: bool,
    /// Run the runtime invariant checks.
    #[arg(long = "debug-invariants", global = true)]
    debug_invariants: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hermite basis of a full column rank matrix (--in A).
    Hnf,
    /// Smith massager of a nonsingular matrix (--in M); prints S then F.
    Massager,
    /// Hermite basis of R(M, F): `relbasis M F`, or via --mod/--in.
    Relbasis {
        #[arg(value_name = "MODULUS")]
        mod_file: Option<PathBuf>,
        #[arg(value_name = "F")]
        f_file: Option<PathBuf>,
    },
    /// Howell form over Z/(N) (--in A); prints H then U.
    Howell { n: String },
    /// Remainder of F modulo a Hermite basis (--in F --in T).
    Remainder,
    /// Hermite basis of A B (--in A --in B).
    ProductHnf,
    /// Hermite basis of L(A) ∩ L(B) (--in A --in B).
    Intersect,
    /// x A = h b column-modulo M (--mod M --in A --rhs b); prints h, x_p, Hbar.
    Crt,
    /// Re-check a claimed result; inputs first, then the claim.
    Verify { kind: VerifyKind },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    /// --in A --in H
    Hnf,
    /// --in M --in S --in F
    Massager,
    /// --mod M --in F --in H
    Relbasis,
}

enum Outcome {
    Matrices(Vec<IntMat>),
    Verdict(bool, String),
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

fn read(path: &std::path::Path) -> Result<IntMat, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

impl Common {
    fn inputs(&self, want: usize) -> Result<Vec<IntMat>, Error> {
        if self.inputs.len() != want {
            return Err(Error::Parse(format!(
                "expected {want} --in file(s), got {}",
                self.inputs.len()
            )));
        }
        self.inputs.iter().map(|p| read(p)).collect()
    }

    fn modulus(&self) -> Result<IntMat, Error> {
        let p = self.modulus.as_ref().ok_or_else(|| Error::Parse("--mod is required".into()))?;
        read(p)
    }

    /// Modulus and F, from `--mod M --in F` or `--in M --in F`.
    fn modulus_and_f(&self) -> Result<(IntMat, Vec<IntMat>), Error> {
        match &self.modulus {
            Some(_) => Ok((self.modulus()?, self.inputs.iter().map(|p| read(p)).collect::<Result<_, _>>()?)),
            None => {
                let mut all: Vec<IntMat> = self.inputs.iter().map(|p| read(p)).collect::<Result<_, _>>()?;
                if all.is_empty() {
                    return Err(Error::Parse("a modulus is required".into()));
                }
                let m = all.remove(0);
                Ok((m, all))
            }
        }
    }

    fn options(&self) -> Options {
        Options {
            epsilon: self.epsilon,
            check_invariants: self.debug_invariants,
            seed: self.seed,
        }
    }
}

fn hermite(m: IntMat) -> Result<HermiteBasis, Error> {
    HermiteBasis::new(m)
}

fn intersection_blocks(a: &IntMat, b: &IntMat) -> Result<(IntMat, IntMat), Error> {
    let c = a.cols();
    let blocks = IntMat::blocks(&[vec![Some(a), None], vec![None, Some(b)]])?;
    let ii = IntMat::hstack(&[&IntMat::identity(c), &IntMat::identity(c)])?;
    Ok((blocks, ii))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let c = &cli.common;
    let opts = c.options();
    let one = |m: HermiteBasis| Ok(Outcome::Matrices(vec![m.into_mat()]));
    match &cli.cmd {
        Cmd::Hnf => {
            let [a] = <[IntMat; 1]>::try_from(c.inputs(1)?).unwrap();
            one(if c.oracle { naive_hnf(&a)? } else { hnf(&a, &opts)? })
        }
        Cmd::Massager => {
            let [m] = <[IntMat; 1]>::try_from(c.inputs(1)?).unwrap();
            let mas = if c.oracle {
                let (_, s, v) = smith_decomposition(&m)?;
                let f = colmod(&v, s.modulus())?;
                SmithMassager { s, f }
            } else {
                smith_massager(&m, &opts)?
            };
            Ok(Outcome::Matrices(vec![mas.s.to_matrix(), mas.f]))
        }
        Cmd::Relbasis { mod_file, f_file } => {
            let (m, rest) = match (mod_file, f_file) {
                (Some(mp), Some(fp)) => (read(mp)?, vec![read(fp)?]),
                (Some(_), None) => {
                    return Err(Error::Parse("relbasis takes both a modulus and an F file".into()))
                }
                _ => c.modulus_and_f()?,
            };
            let [f] = <[IntMat; 1]>::try_from(rest)
                .map_err(|_| Error::Parse("relbasis needs exactly one F matrix".into()))?;
            one(if c.oracle {
                relations_basis_oracle(&m, &f)?
            } else {
                relations_hermite_basis(&m, &f, &opts)?
            })
        }
        Cmd::Howell { n } => {
            let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad modulus {n:?}")))?;
            if n <= BigInt::from(0) {
                return Err(Error::Precondition("the modulus N must be positive".into()));
            }
            let [a] = <[IntMat; 1]>::try_from(c.inputs(1)?).unwrap();
            let hw = howell_form(&a, &n)?;
            Ok(Outcome::Matrices(vec![hw.h, hw.u]))
        }
        Cmd::Remainder => {
            let [f, t] = <[IntMat; 2]>::try_from(c.inputs(2)?).unwrap();
            let t = hermite(t)?;
            let r = if c.oracle {
                hermite_remainder(&f, t.mat())?
            } else {
                remainder_mod_hermite(&f, &t, &opts)?
            };
            Ok(Outcome::Matrices(vec![r]))
        }
        Cmd::ProductHnf => {
            let [a, b] = <[IntMat; 2]>::try_from(c.inputs(2)?).unwrap();
            one(if c.oracle {
                naive_hnf(&matmul(&a, &b)?)?
            } else {
                product_hnf(&a, &b, &opts)?
            })
        }
        Cmd::Intersect => {
            let [a, b] = <[IntMat; 2]>::try_from(c.inputs(2)?).unwrap();
            one(if c.oracle {
                let (blocks, ii) = intersection_blocks(&a, &b)?;
                relations_basis_oracle(&blocks, &ii)?
            } else {
                lattice_intersection(&a, &b, &opts)?
            })
        }
        Cmd::Crt => {
            let md = DiagonalModulus::from_matrix(&c.modulus()?)?;
            let [a] = <[IntMat; 1]>::try_from(c.inputs(1)?).unwrap();
            let rhs = c.rhs.as_ref().ok_or_else(|| Error::Parse("--rhs is required".into()))?;
            let b = read(rhs)?;
            if b.rows() != 1 {
                return Err(Error::DimensionMismatch("b must be a single row".into()));
            }
            let r = a.rows();
            let (h, xp, hbar) = if c.oracle {
                let a = colmod(&a, &md)?;
                let b = colmod(&b, &md)?;
                let g = IntMat::vstack(&[&b.neg(), &a])?;
                let full = relations_basis_oracle(&md.to_matrix(), &g)?.into_mat();
                (
                    full.submatrix(0..1, 0..1),
                    full.submatrix(0..1, 1..r + 1),
                    full.submatrix(1..r + 1, 1..r + 1),
                )
            } else {
                let sol = multivariable_crt(&md, &a, b.row(0), &opts)?;
                (
                    IntMat::from_vec(1, 1, vec![sol.h])?,
                    IntMat::from_vec(1, r, sol.x_p)?,
                    sol.hbar.into_mat(),
                )
            };
            Ok(Outcome::Matrices(vec![h, xp, hbar]))
        }
        Cmd::Verify { kind } => verify(*kind, c),
    }
}

fn verify(kind: VerifyKind, c: &Common) -> Result<Outcome, Error> {
    match kind {
        VerifyKind::Hnf => {
            let [a, h] = <[IntMat; 2]>::try_from(c.inputs(2)?).unwrap();
            if let Err(e) = check_hermite(&h) {
                return Ok(Outcome::Verdict(false, e.to_string()));
            }
            let ok = naive_hnf(&a)?.mat() == &h;
            Ok(Outcome::Verdict(ok, "claimed basis differs from the Hermite basis".into()))
        }
        VerifyKind::Massager => {
            let [m, s, f] = <[IntMat; 3]>::try_from(c.inputs(3)?).unwrap();
            let s = match SmithForm::from_matrix(&s) {
                Ok(s) => s,
                Err(e) => return Ok(Outcome::Verdict(false, e.to_string())),
            };
            let ok = verify_massager(&m, &SmithMassager { s, f })?;
            Ok(Outcome::Verdict(ok, "not a Smith massager of the matrix".into()))
        }
        VerifyKind::Relbasis => {
            let m = c.modulus()?;
            let [f, h] = <[IntMat; 2]>::try_from(c.inputs(2)?).unwrap();
            if let Err(e) = check_hermite(&h) {
                return Ok(Outcome::Verdict(false, e.to_string()));
            }
            let ok = relations_basis_oracle(&m, &f)?.mat() == &h;
            Ok(Outcome::Verdict(ok, "claimed basis differs from the relations basis".into()))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 3,
        Error::Fail => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Matrices(ms)) => {
            let refs: Vec<&IntMat> = ms.iter().collect();
            let text = write_matrices(&refs);
            match &cli.common.out {
                Some(p) => {
                    if let Err(e) = fs::write(p, text) {
                        eprintln!("error: {}", io_err(p, e));
                        return ExitCode::from(3);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Verdict(true, _)) => {
            println!("OK");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Verdict(false, why)) => {
            println!("FAIL: {why}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
