//! Subcommand implementations. Each returns a [`Report`]; errors are usage or
//! input problems and map to exit code 2.

use std::fmt::Write as _;

use kmono_core::complex::estimate_constants;
use kmono_core::index::binomial;
use kmono_core::poly::{commutator_constant, monomials_up_to};
use kmono_core::solver;
use kmono_core::symbol::{
    exactness_report, lift_to_top, lifted_symbol_tilde, mat4_conj_transpose, mat4_mul, mat4_scalar,
    preimage_sigma0, preimage_sigma1, preimage_sigma2, random_covector,
    random_rational_covector, sigma_tensor, CovectorM, KernelSampler,
};
use kmono_core::tensor::{nullspace_basis, sym_contract_apply, Slot};
use kmono_core::{CanonicalTensor, Cx, Error, IndexProfile, Mode, MonogenicComplex, Poly6, Rational, Section};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::{
    Command, CovectorArgs, ExactnessArgs, PreimageArgs, RandomFieldArgs, SolveArgs, Suite, SymbolCommand, VerifyArgs,
};
use crate::format::SectionFile;
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] anyhow::Error),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn core_usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

pub type Outcome = Result<Report, CliError>;

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Dims { k } => dims(*k),
        Command::Verify(a) => verify(a),
        Command::Symbol(SymbolCommand::Exactness(a)) => symbol_exactness(a),
        Command::Symbol(SymbolCommand::Preimage(a)) => symbol_preimage(a),
        Command::Solve(a) => solve(a),
        Command::RandomField(a) => random_field(a),
    }
}

/// Collects pass/fail per named property over many trials, keeping the first
/// failing witness.
#[derive(Default)]
struct Tally {
    items: Vec<(String, Option<String>)>,
}

impl Tally {
    fn note(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        let pos = match self.items.iter().position(|(n, _)| n == name) {
            Some(p) => p,
            None => {
                self.items.push((name.to_string(), None));
                self.items.len() - 1
            }
        };
        if !ok && self.items[pos].1.is_none() {
            self.items[pos].1 = Some(witness());
        }
    }

    fn finish(self, report: &mut Report) {
        for (name, failure) in self.items {
            let ok = failure.is_none();
            report.check(name, ok, failure);
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small<R: Rng + ?Sized>(rng: &mut R) -> Cx {
    Cx::int(rng.random_range(-3..=3), rng.random_range(-3..=3))
}

fn random_tensor<R: Rng + ?Sized>(profile: IndexProfile, rng: &mut R) -> CanonicalTensor {
    let mut t = CanonicalTensor::zero(profile);
    for key in profile.keys() {
        t.set(key, small(rng));
    }
    t
}

fn fmt_covector(v: &[Rational; 6]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// The first nonzero term of a section, 1-based, for failure witnesses.
fn first_term(s: &Section) -> String {
    for (key, p) in s.components() {
        if let Some((e, c)) = p.terms().next() {
            let up: Vec<u8> = key.upper().iter().map(|a| a + 1).collect();
            let lo: Vec<u8> = key.lower().iter().map(|b| b + 1).collect();
            return format!("upper {up:?} lower {lo:?} monomial {e:?}: {c}");
        }
    }
    "zero".to_string()
}

fn first_entry(t: &CanonicalTensor) -> String {
    match t.iter().next() {
        Some((key, c)) => {
            let up: Vec<u8> = key.upper().iter().map(|a| a + 1).collect();
            let lo: Vec<u8> = key.lower().iter().map(|b| b + 1).collect();
            format!("upper {up:?} lower {lo:?}: {c}")
        }
        None => "zero".to_string(),
    }
}

fn context(k: usize) -> Result<MonogenicComplex, CliError> {
    if k < 4 {
        return Err(usage(format!("the complex requires k >= 4, got k = {k}")));
    }
    MonogenicComplex::new(k).map_err(core_usage)
}

pub fn dims(k: usize) -> Outcome {
    if k < 1 {
        return Err(usage("k must be at least 1"));
    }
    let mut report = Report::new(format!("dims --k {k}"), None);
    let mut sc = [0usize; 5];
    for (l, slot) in sc.iter_mut().enumerate() {
        let (v, s) = match IndexProfile::level(k, l) {
            Ok(p) => (binomial(k - l + 3, 3) * binomial(4, l), nullspace_basis(p).dim()),
            Err(_) => (0, 0),
        };
        *slot = s;
        report.info(format!("l = {l}"), format!("dim V = {v}, dim scriptV = {s}"));
    }
    report.check("dim scriptV_4 = 0", sc[4] == 0, Some(sc[4].to_string()));
    let euler = sc[0] as i64 - sc[1] as i64 + sc[2] as i64 - sc[3] as i64 + sc[4] as i64;
    if k >= 4 {
        report.check("alternating sum of dim scriptV_l = 0", euler == 0, Some(euler.to_string()));
    } else {
        report.info("alternating sum of dim scriptV_l", euler.to_string());
    }
    Ok(report)
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let mut echo = format!("verify {} --k {} --degree {} --trials {} --seed {}", a.suite.name(), a.k, a.degree, a.trials, a.seed);
    if let Some(l) = a.l {
        let _ = write!(echo, " --l {l}");
    }
    if a.exploratory {
        echo.push_str(" --exploratory");
    }
    let mut report = Report::new(echo, Some(a.seed));
    let cx = context(a.k)?;
    let mut rng = rng_for(a.seed);
    let mut tally = Tally::default();
    match a.suite {
        Suite::Algebra => verify_algebra(&cx, a, &mut rng, &mut tally)?,
        Suite::Complex => verify_complex(&cx, a, &mut rng, &mut tally)?,
        Suite::Adjoint => verify_adjoint(&cx, a, &mut rng, &mut tally)?,
        Suite::Commutator => verify_commutator(&cx, a, &mut tally),
        Suite::Estimate => {
            verify_estimate(&cx, a, &mut rng, &mut tally, &mut report)?;
        }
    }
    tally.finish(&mut report);
    Ok(report)
}

fn levels(l: Option<usize>, allowed: std::ops::RangeInclusive<usize>, what: &str) -> Result<Vec<usize>, CliError> {
    match l {
        Some(l) if allowed.contains(&l) => Ok(vec![l]),
        Some(l) => Err(usage(format!("{what}: level {l} outside {}..={}", allowed.start(), allowed.end()))),
        None => Ok(allowed.collect()),
    }
}

fn verify_algebra(cx: &MonogenicComplex, a: &VerifyArgs, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<(), CliError> {
    let k = a.k as i64;
    for l in levels(a.l, 1..=2, "algebra")? {
        let p = cx.profile(l).map_err(core_usage)?;
        let basis = cx.basis(l).map_err(core_usage)?;
        let factor = if l == 1 { Rational::new(k - 1, k + 2) } else { Rational::new(2 * (k - 2), k) };
        for t in 0..a.trials {
            let xi = random_tensor(p, rng);
            let pxi = xi.project().map_err(core_usage)?;
            let cxi = xi.contract().map_err(core_usage)?;
            tally.note(&format!("P_{l} idempotent"), pxi.project().map_err(core_usage)? == pxi, || format!("trial {t}"));
            tally.note(&format!("P_{l} preserves the contraction"), pxi.contract().map_err(core_usage)? == cxi, || {
                format!("trial {t}")
            });
            let mut worst = None;
            for (b, h) in basis.vectors().iter().enumerate() {
                let ip = pxi.inner(h).map_err(core_usage)?;
                if !ip.is_zero() {
                    worst = Some(format!("trial {t}, basis vector {b}: pairing {ip}"));
                    break;
                }
            }
            tally.note(&format!("P_{l} orthogonal to scriptV_{l}"), worst.is_none(), || worst.clone().unwrap_or_default());
            tally.note(&format!("xi - P_{l} xi contraction-free"), basis.contains(&xi.sub(&pxi)), || format!("trial {t}"));
            let lhs = pxi.norm_sq();
            let rhs = &factor * &cxi.norm_sq();
            tally.note(&format!("|P_{l} xi|^2 = {factor} |C xi|^2"), lhs == rhs, || {
                format!("trial {t}: {lhs} != {rhs}")
            });
        }
    }
    for t in 0..a.trials {
        let v = random_covector(rng);
        let cm = CovectorM::from_ints(v).map_err(core_usage)?;
        let lhs = mat4_mul(cm.m(), &mat4_conj_transpose(cm.m()));
        tally.note("M conj(M)^T = |v|^2 I", lhs == mat4_scalar(&Cx::from(cm.norm_sq())), || {
            format!("trial {t}, v = {v:?}")
        });
    }
    Ok(())
}

fn verify_complex(cx: &MonogenicComplex, a: &VerifyArgs, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<(), CliError> {
    for l in levels(a.l, 0..=2, "complex")? {
        for t in 0..a.trials {
            let f = cx.random_section(l, a.degree, rng).map_err(core_usage)?;
            let df = cx.d(l, &f).map_err(core_usage)?;
            tally.note(&format!("D_{l} f contraction-free"), df.is_contraction_free(), || {
                format!("trial {t}: {}", first_term(&df.contract().unwrap_or(df.clone())))
            });
            let ddf = cx.d(l + 1, &df).map_err(core_usage)?;
            tally.note(&format!("D_{} D_{l} f = 0", l + 1), ddf.is_zero(), || format!("trial {t}: {}", first_term(&ddf)));
        }
    }
    Ok(())
}

fn verify_adjoint(cx: &MonogenicComplex, a: &VerifyArgs, rng: &mut ChaCha8Rng, tally: &mut Tally) -> Result<(), CliError> {
    for l in levels(a.l, 0..=2, "adjoint")? {
        for t in 0..a.trials {
            let u = cx.random_section(l, a.degree, rng).map_err(core_usage)?;
            let f = cx.random_section(l + 1, a.degree, rng).map_err(core_usage)?;
            let lhs = cx.d(l, &u).and_then(|du| du.inner(&f)).map_err(core_usage)?;
            let rhs = cx.theta_restricted(l, &f).and_then(|th| u.inner(&th)).map_err(core_usage)?;
            tally.note(&format!("<D_{l} u, f> = <u, Theta_{l} f>"), lhs == rhs, || format!("trial {t}: {lhs} != {rhs}"));
            let w = cx.random_v_section(l, a.degree, rng).map_err(core_usage)?;
            let lhs = cx.d(l, &w).and_then(|dw| dw.inner(&f)).map_err(core_usage)?;
            let rhs = cx.d_star_full(l, &f).and_then(|ds| w.inner(&ds)).map_err(core_usage)?;
            tally.note(&format!("<D_{l} w, f> = <w, D*_{l} f> on V-valued w"), lhs == rhs, || {
                format!("trial {t}: {lhs} != {rhs}")
            });
        }
    }
    Ok(())
}

fn verify_commutator(cx: &MonogenicComplex, a: &VerifyArgs, tally: &mut Tally) {
    let table = cx.nabla();
    let mons = monomials_up_to(a.degree);
    let name = format!("[nabla^AB, Theta_CD] on 256 index tuples x {} monomials", mons.len());
    for idx in 0..256usize {
        let (p, q, r, s) = ((idx >> 6) & 3, (idx >> 4) & 3, (idx >> 2) & 3, idx & 3);
        let c = Cx::from(commutator_constant(p, q, r, s));
        for e in &mons {
            let m = Poly6::monomial(*e, Cx::ONE);
            let ok = table.commutator(p, q, r, s, &m) == m.scale(&c);
            tally.note(&name, ok, || format!("indices {}{}{}{}, monomial {e:?}", p + 1, q + 1, r + 1, s + 1));
        }
    }
}

fn verify_estimate(
    cx: &MonogenicComplex,
    a: &VerifyArgs,
    rng: &mut ChaCha8Rng,
    tally: &mut Tally,
    report: &mut Report,
) -> Result<(), CliError> {
    let mode = if a.exploratory { Mode::Exploratory } else { Mode::Strict };
    if a.k < 6 && mode == Mode::Strict {
        return Err(usage(format!(
            "the estimate is stated for k >= 6; k = {} needs --exploratory",
            a.k
        )));
    }
    if a.k < 6 {
        report.info("outside hypothesis", format!("k = {} < 6, exploratory run", a.k));
    }
    for l in levels(a.l, 1..=3, "estimate")? {
        let (ca, cd) = estimate_constants(a.k, l).expect("levels 1..=3");
        report.info(format!("l = {l} constants"), format!("{ca} |D*f|^2 + {cd} |Df|^2"));
        let mut slack: Option<Rational> = None;
        for t in 0..a.trials {
            let deg = t % (a.degree + 1);
            let f = cx.random_section(l, deg, rng).map_err(core_usage)?;
            let r = cx.estimate_check(l, &f, mode).map_err(core_usage)?;
            tally.note(&format!("estimate at l = {l}"), r.holds, || format!("trial {t}: |f|^2 = {} > {}", r.lhs, r.rhs));
            if !f.is_zero() {
                let s = &r.rhs - &r.lhs;
                if slack.as_ref().is_none_or(|m| s < *m) {
                    slack = Some(s);
                }
            }
        }
        if let Some(s) = slack {
            report.info(format!("l = {l} smallest slack"), s.to_string());
        }
    }
    Ok(())
}

fn covectors(c: &CovectorArgs) -> Result<Vec<[Rational; 6]>, CliError> {
    match (&c.v, c.samples) {
        (Some(parts), _) => {
            if parts.len() != 6 {
                return Err(usage(format!("--v needs 6 entries, got {}", parts.len())));
            }
            let mut v: [Rational; 6] = Default::default();
            for (slot, s) in v.iter_mut().zip(parts) {
                *slot = s.trim().parse().map_err(|_| usage(format!("bad rational {s:?} in --v")))?;
            }
            if v.iter().all(|x| x.is_zero()) {
                return Err(usage("the covector v must be nonzero"));
            }
            Ok(vec![v])
        }
        (None, Some(0)) => Err(usage("--samples must be positive")),
        (None, Some(n)) => {
            let mut rng = rng_for(c.seed);
            Ok((0..n).map(|_| random_rational_covector(&mut rng)).collect())
        }
        (None, None) => Err(usage("give a covector with --v or a sample count with --samples")),
    }
}

fn covector_echo(c: &CovectorArgs) -> String {
    match &c.v {
        Some(parts) => format!("--v {}", parts.join(",")),
        None => format!("--samples {} --seed {}", c.samples.unwrap_or(0), c.seed),
    }
}

fn seed_of(c: &CovectorArgs) -> Option<u64> {
    if c.v.is_some() {
        None
    } else {
        Some(c.seed)
    }
}

pub fn symbol_exactness(a: &ExactnessArgs) -> Outcome {
    let mut report = Report::new(format!("symbol exactness --k {} {}", a.k, covector_echo(&a.covector)), seed_of(&a.covector));
    let vs = covectors(&a.covector)?;
    let cx = context(a.k)?;
    for (n, v) in vs.iter().enumerate() {
        let cm = CovectorM::new(v.clone()).map_err(core_usage)?;
        let r = exactness_report(&cx, &cm).map_err(core_usage)?;
        let tag = format!("v{n}");
        report.info(
            format!("{tag} = {}", fmt_covector(v)),
            format!("ranks sigma_0..2 = {:?}, dims scriptV_0..4 = {:?}", r.ranks, r.dims),
        );
        let m_ok = mat4_mul(cm.m(), &mat4_conj_transpose(cm.m())) == mat4_scalar(&Cx::from(cm.norm_sq()));
        report.check(format!("{tag}: M conj(M)^T = |v|^2 I"), m_ok, None);
        report.check(format!("{tag}: sigma_(l+1) sigma_l = 0"), r.composition_zero, None);
        report.check(format!("{tag}: sigma_0 injective"), r.injective_0, Some(format!("rank {} of {}", r.ranks[0], r.dims[0])));
        report.check(
            format!("{tag}: ker sigma_1 = im sigma_0"),
            r.exact_1,
            Some(format!("dim ker {} vs rank {}", r.dims[1] - r.ranks[1], r.ranks[0])),
        );
        report.check(
            format!("{tag}: ker sigma_2 = im sigma_1"),
            r.exact_2,
            Some(format!("dim ker {} vs rank {}", r.dims[2] - r.ranks[2], r.ranks[1])),
        );
        report.check(format!("{tag}: sigma_2 surjective"), r.surjective_2, Some(format!("rank {} of {}", r.ranks[2], r.dims[3])));
        report.check(format!("{tag}: alternating dimension sum = 0"), r.euler_zero, None);
    }
    Ok(report)
}

pub fn symbol_preimage(a: &PreimageArgs) -> Outcome {
    let mut report = Report::new(
        format!("symbol preimage --k {} --level {} --count {} {}", a.k, a.level, a.count, covector_echo(&a.covector)),
        Some(a.covector.seed),
    );
    if a.level > 2 {
        return Err(usage(format!("--level must be 0, 1 or 2, got {}", a.level)));
    }
    let vs = covectors(&a.covector)?;
    let cx = context(a.k)?;
    let mut rng = rng_for(a.covector.seed ^ 0x5eed_0000_0000_0001);
    let mut tally = Tally::default();
    let l = a.level;
    for (n, v) in vs.iter().enumerate() {
        let cm = CovectorM::new(v.clone()).map_err(core_usage)?;
        // ξ at level l + 1 in the kernel of the next symbol map
        let sampler = KernelSampler::new(&cx, l + 1, &cm).map_err(core_usage)?;
        for t in 0..a.count {
            let xi = sampler.sample(&mut rng);
            let pre = match l {
                0 => preimage_sigma0(&cx, &cm, &xi),
                1 => preimage_sigma1(&cx, &cm, &xi),
                _ => preimage_sigma2(&cx, &cm, &xi),
            }
            .map_err(core_usage)?;
            let residual = sigma_tensor(&cm, &pre).map_err(core_usage)?.sub(&xi);
            tally.note(&format!("sigma_{l} Xi = xi"), residual.is_zero(), || {
                format!("v = {}, sample {t}: residual {}", fmt_covector(v), first_entry(&residual))
            });
            if l > 0 {
                let c = pre.contract().map_err(core_usage)?;
                tally.note("preimage contraction-free", c.is_zero(), || {
                    format!("v = {}, sample {t}: {}", fmt_covector(v), first_entry(&c))
                });
            }
            if l == 2 {
                let big = lift_to_top(&xi)
                    .and_then(|lift| sym_contract_apply(cm.minv(), &lift, Slot::Last))
                    .map_err(core_usage)?;
                let lhs = big.contract().and_then(|c| sigma_tensor(&cm, &c)).map_err(core_usage)?.scale(&Cx::from(-3));
                let rhs = lifted_symbol_tilde(&cm, &big).and_then(|s| s.contract()).map_err(core_usage)?.scale(&Cx::from(4));
                let diff = lhs.sub(&rhs);
                tally.note("-3 sigma_2 C = 4 C sigma~ on lifted inputs", diff.is_zero(), || {
                    format!("v = {}, sample {t}: {}", fmt_covector(v), first_entry(&diff))
                });
            }
        }
        report.info(format!("v{n}"), fmt_covector(v));
    }
    tally.finish(&mut report);
    Ok(report)
}

pub fn solve(a: &SolveArgs) -> Outcome {
    let mut echo = format!("solve --k {} --level {} --input {} --output {}", a.k, a.level, a.input.display(), a.output.display());
    if a.exploratory {
        echo.push_str(" --exploratory");
    }
    let mut report = Report::new(echo, None);
    if a.level > 2 {
        return Err(usage(format!("--level must be 0, 1 or 2, got {}", a.level)));
    }
    let mode = if a.exploratory { Mode::Exploratory } else { Mode::Strict };
    if a.k < 6 && mode == Mode::Strict {
        return Err(usage(format!(
            "refused: solvability is established for k >= 6 only; k = {} needs --exploratory",
            a.k
        )));
    }
    let cx = context(a.k)?;
    let f = SectionFile::read(&a.input)?;
    let p = f.profile();
    if p.k() != a.k || p.l() != a.level + 1 {
        return Err(usage(format!(
            "input has k = {}, l = {}; solving D_{} needs k = {}, l = {}",
            p.k(),
            p.l(),
            a.level,
            a.k,
            a.level + 1
        )));
    }
    match solver::solve(&cx, a.level, &f, mode) {
        Ok(res) => {
            let du = cx.d(a.level, &res.u).map_err(core_usage)?;
            let residual = du.sub(&f);
            report.check("D u - f = 0", residual.is_zero(), Some(first_term(&residual)));
            report.check("compatibility", true, Some(if res.compatibility_checked {
                format!("D_{} f = 0", a.level + 1)
            } else {
                "vacuous at the top level".to_string()
            }));
            report.info("degree of u", res.u_degree.map_or("none (u = 0)".to_string(), |d| d.to_string()));
            report.info("weighted norm |u|^2", res.norm_sq.to_string());
            report.info("Krylov steps", res.iterations.to_string());
            if res.outside_hypothesis {
                report.info("outside hypothesis", format!("k = {} < 6, exploratory run", a.k));
            }
            SectionFile::write(&res.u, &a.output)?;
            report.info("output", a.output.display().to_string());
            Ok(report)
        }
        Err(Error::Incompatible { residual }) => {
            report.check(format!("compatibility D_{} f = 0", a.level + 1), false, Some(first_term(&residual)));
            Ok(report)
        }
        Err(Error::Unsolvable) => {
            report.check("solvable", false, Some("no polynomial solution found".to_string()));
            Ok(report)
        }
        Err(e) => Err(core_usage(e)),
    }
}

pub fn random_field(a: &RandomFieldArgs) -> Outcome {
    let mut echo = format!(
        "random-field --k {} --level {} --degree {} --seed {} --output {}",
        a.k,
        a.level,
        a.degree,
        a.seed,
        a.output.display()
    );
    if a.apply_d {
        echo.push_str(" --apply-d");
    }
    let mut report = Report::new(echo, Some(a.seed));
    let cx = context(a.k)?;
    if a.level > cx.top_level() || (a.apply_d && a.level > 2) {
        return Err(usage(format!("level {} out of range", a.level)));
    }
    let mut rng = rng_for(a.seed);
    let g = cx.random_section(a.level, a.degree, &mut rng).map_err(core_usage)?;
    let s = if a.apply_d { cx.d(a.level, &g).map_err(core_usage)? } else { g };
    SectionFile::write(&s, &a.output)?;
    let back = SectionFile::read(&a.output)?;
    report.check("re-read file equals section", back == s, None);
    let c = back.contract().map_err(core_usage)?;
    report.check("contraction = 0", c.is_zero(), Some(first_term(&c)));
    let expect = if s.is_zero() {
        None
    } else if a.apply_d {
        a.degree.checked_sub(1)
    } else {
        Some(a.degree)
    };
    report.check("degree", back.degree() == expect, Some(format!("{:?}", back.degree())));
    report.info("terms", back.term_count().to_string());
    report.info("output", a.output.display().to_string());
    Ok(report)
}
