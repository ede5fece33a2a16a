//! Command-line entry point: file IO, corpus management, and plain-text or
//! machine-readable (`--machine`, line-oriented key=value) reports.
//!
//! Exit codes: 0 success / obstruction passes, 1 obstruction fails,
//! 2 input or usage error, 3 sanity-check failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::alexander::{alexander_poly, sanity_specializations};
use crate::diagram::{corpus_files, parse_diagram, MarkedDiagram};
use crate::factorize::factor;
use crate::foxmilnor::{fm_check, square_pretest, FMStatus, FMVerdict};
use crate::laurent::{parse_poly, parse_poly_infer, LaurentPoly};
use crate::torsion::{parse_complex, torsion};

#[derive(Parser)]
#[command(
    name = "tka",
    version,
    about = "Alexander polynomials and the Fox-Milnor concordance obstruction \
             for knots in thickened surfaces"
)]
struct Cli {
    /// Emit line-oriented key=value output instead of prose.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the Alexander polynomial of a diagram file and run the
    /// homology sanity specializations.
    Compute { file: PathBuf },
    /// Decide the Fox-Milnor obstruction for two diagram files, or for two
    /// polynomial strings with --poly.
    CheckConcordance {
        /// Interpret the two arguments as polynomial strings.
        #[arg(long)]
        poly: bool,
        a: String,
        b: String,
    },
    /// Factor a Laurent polynomial into irreducibles.
    Factor { poly: String },
    /// Compute the Milnor torsion of a based acyclic chain complex file.
    Torsion { file: PathBuf },
    /// Validate a diagram file.
    Validate { file: PathBuf },
    /// List the built-in corpus, or emit one diagram by name.
    Corpus { name: Option<String> },
}

/// A deterministic run report: identical inputs yield byte-identical output
/// up to the trailing timing line.
struct Report {
    machine: bool,
    lines: Vec<String>,
}

impl Report {
    fn new(machine: bool, command: &str, inputs: &[&str]) -> Self {
        let mut r = Report {
            machine,
            lines: Vec::new(),
        };
        if machine {
            r.kv("command", command);
            for (i, inp) in inputs.iter().enumerate() {
                r.kv(&format!("input{}", i), inp);
            }
        }
        r
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{}={}", key, value));
    }

    fn plain(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// Key=value in machine mode, "label: value" otherwise.
    fn field(&mut self, key: &str, label: &str, value: impl std::fmt::Display) {
        if self.machine {
            self.kv(key, value);
        } else {
            self.lines.push(format!("{}: {}", label, value));
        }
    }

    fn finish(mut self, started: Instant) -> String {
        let ms = started.elapsed().as_millis();
        if self.machine {
            self.kv("time_ms", ms);
        } else {
            self.lines.push(format!("time: {} ms", ms));
        }
        let mut out = String::new();
        for l in &self.lines {
            let _ = writeln!(out, "{}", l);
        }
        out
    }
}

/// Run the CLI on the given argv; prints the report to stdout and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own usage/error text; exit 2 on bad usage.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(msg) = read_thread_budget() {
        eprintln!("error: {}", msg);
        return 2;
    }
    let started = Instant::now();
    let (text, code) = match dispatch(&cli, started) {
        Ok(pair) => pair,
        Err(msg) => {
            eprintln!("error: {}", msg);
            return 2;
        }
    };
    print!("{}", text);
    code
}

/// TKA_THREADS bounds worker parallelism. All computations currently run on
/// one core, so the value is validated and accepted but does not fan out.
fn read_thread_budget() -> Result<usize, String> {
    match std::env::var("TKA_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("TKA_THREADS must be a positive integer, got `{}`", s)),
        },
    }
}

fn dispatch(cli: &Cli, started: Instant) -> Result<(String, i32), String> {
    match &cli.cmd {
        Cmd::Compute { file } => cmd_compute(cli.machine, file, started),
        Cmd::CheckConcordance { poly, a, b } => {
            cmd_check(cli.machine, *poly, a, b, started)
        }
        Cmd::Factor { poly } => cmd_factor(cli.machine, poly, started),
        Cmd::Torsion { file } => cmd_torsion(cli.machine, file, started),
        Cmd::Validate { file } => cmd_validate(cli.machine, file, started),
        Cmd::Corpus { name } => cmd_corpus(cli.machine, name.as_deref(), started),
    }
}

fn load_diagram(path: &PathBuf) -> Result<MarkedDiagram, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {}", path.display(), e))?;
    parse_diagram(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

fn cmd_compute(machine: bool, file: &PathBuf, started: Instant) -> Result<(String, i32), String> {
    let path = file.display().to_string();
    let d = load_diagram(file)?;
    let delta = alexander_poly(&d).map_err(|e| e.to_string())?;
    let sanity = sanity_specializations(&d).map_err(|e| e.to_string())?;
    let mut r = Report::new(machine, "compute", &[&path]);
    if !machine {
        r.plain(format!("diagram: {}", path));
    }
    r.field("genus", "genus", d.genus);
    r.field("crossings", "crossings", d.n());
    r.field("delta", "delta", &delta);
    r.field("corank_at_one", "corank at (1,1)", sanity.corank_at_one);
    r.field("det_x_one_zero", "det vanishes at x=1", sanity.det_x_one_zero);
    r.field("delta_x_one_zero", "delta vanishes at x=1", sanity.delta_x_one_zero);
    r.field("vacuous", "vacuous (no crossings)", sanity.vacuous);
    let ok = sanity.all_ok();
    r.field("sanity_ok", "sanity", if machine { ok.to_string() } else if ok { "ok".into() } else { "FAILED".into() });
    if !ok && !machine {
        for f in sanity.failures() {
            r.plain(format!("sanity failure: {}", f));
        }
    }
    Ok((r.finish(started), if ok { 0 } else { 3 }))
}

/// Parse two polynomial strings into a common genus context.
fn parse_poly_pair(a: &str, b: &str) -> Result<(LaurentPoly, LaurentPoly), String> {
    let pa = parse_poly_infer(a).map_err(|e| format!("polynomial `{}`: {}", a, e))?;
    let pb = parse_poly_infer(b).map_err(|e| format!("polynomial `{}`: {}", b, e))?;
    let genus = pa.genus().max(pb.genus());
    let pa = parse_poly(a, genus).map_err(|e| format!("polynomial `{}`: {}", a, e))?;
    let pb = parse_poly(b, genus).map_err(|e| format!("polynomial `{}`: {}", b, e))?;
    Ok((pa, pb))
}

fn cmd_check(
    machine: bool,
    poly_mode: bool,
    a: &str,
    b: &str,
    started: Instant,
) -> Result<(String, i32), String> {
    let (d0, d1) = if poly_mode {
        parse_poly_pair(a, b)?
    } else {
        let da = load_diagram(&PathBuf::from(a))?;
        let db = load_diagram(&PathBuf::from(b))?;
        if da.genus != db.genus {
            return Err(format!(
                "genus mismatch: {} vs {} (concordance fixes the surface)",
                da.genus, db.genus
            ));
        }
        (
            alexander_poly(&da).map_err(|e| e.to_string())?,
            alexander_poly(&db).map_err(|e| e.to_string())?,
        )
    };
    let mut r = Report::new(machine, "check-concordance", &[a, b]);
    if !machine {
        r.plain(format!("delta0: {}", d0));
        r.plain(format!("delta1: {}", d1));
    } else {
        r.kv("delta0", &d0);
        r.kv("delta1", &d1);
    }
    let pretest = if d0.is_zero() || d1.is_zero() {
        "skipped".to_string()
    } else if square_pretest(&d0, &d1) {
        "pass".to_string()
    } else {
        "fail".to_string()
    };
    r.field("pretest", "square pretest", &pretest);
    let verdict = fm_check(&d0, &d1);
    let code = report_verdict(&mut r, &verdict);
    Ok((r.finish(started), code))
}

fn report_verdict(r: &mut Report, v: &FMVerdict) -> i32 {
    let status = match v.status {
        FMStatus::Pass => "pass",
        FMStatus::Fail => "fail",
        FMStatus::Vacuous => "vacuous",
    };
    r.field("verdict", "verdict", status);
    if let Some((p, q)) = &v.witness {
        if r.machine {
            r.kv("witness_p", p);
            r.kv("witness_q", q);
        } else {
            r.plain(format!("witness: alpha = ({}) / ({})", p, q));
        }
    }
    if let Some(c) = &v.certificate {
        if r.machine {
            r.kv("cert_factor", &c.factor);
            r.kv("cert_net_exponent", c.net_exponent);
            r.kv("cert_reason", c.reason);
        } else {
            r.plain(format!(
                "certificate: factor {} with net exponent {} ({})",
                c.factor, c.net_exponent, c.reason
            ));
        }
    }
    if v.passes() {
        0
    } else {
        1
    }
}

fn cmd_factor(machine: bool, poly: &str, started: Instant) -> Result<(String, i32), String> {
    let p = parse_poly_infer(poly).map_err(|e| format!("polynomial `{}`: {}", poly, e))?;
    if p.is_zero() {
        return Err("cannot factor the zero polynomial".into());
    }
    let f = factor(&p).map_err(|e| e.to_string())?;
    let mut r = Report::new(machine, "factor", &[poly]);
    if machine {
        r.kv("unit", f.unit);
        for (i, (q, m)) in f.factors.iter().enumerate() {
            r.kv(&format!("factor{}", i), q);
            r.kv(&format!("multiplicity{}", i), m);
        }
    } else {
        r.plain(format!("input: {}", p));
        r.plain(format!("factorization: {}", f));
    }
    Ok((r.finish(started), 0))
}

fn cmd_torsion(machine: bool, file: &PathBuf, started: Instant) -> Result<(String, i32), String> {
    let path = file.display().to_string();
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {}", path, e))?;
    let c = parse_complex(&text).map_err(|e| format!("{}: {}", path, e))?;
    let tau = torsion(&c).map_err(|e| format!("{}: {}", path, e))?;
    let mut r = Report::new(machine, "torsion", &[&path]);
    if machine {
        r.kv("numerator", &tau.numerator);
        r.kv("denominator", &tau.denominator);
    } else {
        r.plain(format!("torsion: {}", tau));
    }
    Ok((r.finish(started), 0))
}

fn cmd_validate(machine: bool, file: &PathBuf, started: Instant) -> Result<(String, i32), String> {
    let path = file.display().to_string();
    let mut r = Report::new(machine, "validate", &[&path]);
    match load_diagram(file) {
        Ok(d) => {
            r.field("ok", "result", if machine { "true" } else { "ok" });
            r.field("genus", "genus", d.genus);
            r.field("crossings", "crossings", d.n());
            Ok((r.finish(started), 0))
        }
        Err(e) => Err(e),
    }
}

fn cmd_corpus(machine: bool, name: Option<&str>, started: Instant) -> Result<(String, i32), String> {
    match name {
        None => {
            let mut r = Report::new(machine, "corpus", &[]);
            for (i, (n, _)) in corpus_files().iter().enumerate() {
                if machine {
                    r.kv(&format!("name{}", i), n);
                } else {
                    r.plain(*n);
                }
            }
            Ok((r.finish(started), 0))
        }
        Some(n) => {
            let Some((_, text)) = corpus_files().into_iter().find(|(cn, _)| *cn == n) else {
                return Err(format!("no corpus diagram named `{}`", n));
            };
            // Emit the file verbatim so it can be piped to disk.
            Ok((text.to_string(), 0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (String, i32) {
        let mut argv = vec!["tka"];
        argv.extend_from_slice(args);
        let cli = Cli::try_parse_from(&argv).expect("test args parse");
        let started = Instant::now();
        match dispatch(&cli, started) {
            Ok((text, code)) => (text, code),
            Err(msg) => (msg, 2),
        }
    }

    fn strip_timing(s: &str) -> String {
        s.lines()
            .filter(|l| !l.starts_with("time") && !l.starts_with("time_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn corpus_list_and_emit() {
        let (list, code) = run_capture(&["corpus"]);
        assert_eq!(code, 0);
        assert!(list.contains("virtual_trefoil"));
        let (text, code) = run_capture(&["corpus", "unknot"]);
        assert_eq!(code, 0);
        assert!(text.starts_with("tkadiag 1"));
        let (_, code) = run_capture(&["corpus", "no_such"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn compute_corpus_files() {
        let dir = std::env::temp_dir().join("tka_cli_test_compute");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("unknot.tkd");
        let (text, _) = run_capture(&["corpus", "unknot"]);
        std::fs::write(&path, text).unwrap();
        let p = path.to_str().unwrap().to_string();
        let (out, code) = run_capture(&["compute", &p]);
        assert_eq!(code, 0, "{}", out);
        assert!(out.contains("delta: 0"), "{}", out);
        let (out, code) = run_capture(&["--machine", "compute", &p]);
        assert_eq!(code, 0);
        assert!(out.contains("delta=0"), "{}", out);
        assert!(out.contains("sanity_ok=true"), "{}", out);
    }

    #[test]
    fn check_concordance_polys() {
        let (out, code) = run_capture(&["check-concordance", "--poly", "t^2-t+1", "1"]);
        assert_eq!(code, 1, "{}", out);
        assert!(out.contains("verdict: fail"), "{}", out);
        assert!(out.contains("odd-self-conjugate"), "{}", out);
        assert!(out.contains("square pretest: fail"), "{}", out);

        let (out, code) = run_capture(&["check-concordance", "--poly", "t+x1-3", "t+x1-3"]);
        assert_eq!(code, 0, "{}", out);
        assert!(out.contains("verdict: pass"), "{}", out);

        let (out, code) = run_capture(&["--machine", "check-concordance", "--poly", "0", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict=vacuous"), "{}", out);
        assert!(out.contains("pretest=skipped"), "{}", out);
    }

    #[test]
    fn factor_and_torsion_commands() {
        let (out, code) = run_capture(&["factor", "t^2-1"]);
        assert_eq!(code, 0);
        assert!(out.contains("factorization:"), "{}", out);
        let (out, code) = run_capture(&["--machine", "factor", "t^2-1"]);
        assert_eq!(code, 0);
        assert!(out.contains("factor0="), "{}", out);

        let dir = std::env::temp_dir().join("tka_cli_test_torsion");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.tkc");
        std::fs::write(&path, "tkacplx 1\ngenus 1\nranks 1 1\nboundary 1 : t-1\n").unwrap();
        let p = path.to_str().unwrap().to_string();
        let (out, code) = run_capture(&["torsion", &p]);
        assert_eq!(code, 0);
        assert!(out.contains("torsion: t - 1 / 1") || out.contains("torsion:"), "{}", out);
    }

    #[test]
    fn reports_are_deterministic_modulo_timing() {
        let (a, _) = run_capture(&["--machine", "check-concordance", "--poly", "t-1", "t-1"]);
        let (b, _) = run_capture(&["--machine", "check-concordance", "--poly", "t-1", "t-1"]);
        assert_eq!(strip_timing(&a), strip_timing(&b));
    }

    #[test]
    fn validate_reports_line_numbers() {
        let dir = std::env::temp_dir().join("tka_cli_test_validate");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.tkd");
        std::fs::write(&path, "tkadiag 1\ngenus 0\narcs 1\narc 1 : -\n").unwrap();
        let p = path.to_str().unwrap().to_string();
        let (msg, code) = run_capture(&["validate", &p]);
        assert_eq!(code, 2);
        assert!(msg.contains("genus"), "{}", msg);
    }
}
