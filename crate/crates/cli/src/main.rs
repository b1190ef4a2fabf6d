use std::fs;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tevtrop::construction::{
    build_solution_full, enumerate_solutions_full, reference_point, verify_solution_at, GenusWord, Solution,
    SolutionIndex,
};
use tevtrop::counting::{expected_degree, lemma_check, path_counts, tevelev_degree_with};
use tevtrop::cover::HurwitzData;
use tevtrop::io;
use tevtrop::multiplicity::{dilation_matrix, local_degree, select_coordinates, MultiplicityCertificate};
use tevtrop::numeric::{determinant, Rational};
use tevtrop::oracle::run_and_compare;
use tevtrop::{BigInt, ExecMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Parser)]
#[command(name = "tevtrop", version, about = "Tropical covers and the tropical Tevelev degree")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Output file, or output directory for `solutions`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Instantiation base B for x_i = B^i, L_j = B^{4g+j} (used by `verify` and `oracle`).
    #[arg(long, global = true)]
    base: Option<BigInt>,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solution table, certificates and the degree.
    Tev {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=8))]
        genus: u32,
    },
    /// One JSON or DOT file per solution.
    Solutions {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=8))]
        genus: u32,
    },
    /// Every invariant suite, itemized.
    Verify {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=8))]
        genus: u32,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Lattice path tallies against the binomial identity.
    Paths {
        #[arg(value_parser = clap::value_parser!(u32).range(2..=24))]
        degree: u32,
    },
    /// The dilation matrix of one solution.
    Matrix {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=8))]
        genus: u32,
        /// Word over U and D; empty (or "e") for genus 1.
        word: String,
        j: usize,
    },
    /// Exhaustive genus-1 search compared with the construction.
    Oracle,
}

struct Ctx {
    format: Format,
    out: Option<PathBuf>,
    base: Option<BigInt>,
    mode: ExecMode,
}

impl Ctx {
    fn base_for(&self, g: usize) -> Result<BigInt> {
        let default = reference_point(g).default_base();
        let b = self.base.clone().unwrap_or(default);
        let floor = BigInt::from((g + 3) * (g + 1));
        if b <= floor {
            bail!("base {b} must exceed (g + 3)(g + 1) = {floor}");
        }
        Ok(b)
    }

    fn emit(&self, s: &str) -> Result<()> {
        match &self.out {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                fs::write(p, s).with_context(|| format!("writing {}", p.display()))
            }
            None => match std::io::stdout().lock().write_all(s.as_bytes()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            },
        }
    }

    fn reject(&self, allowed: &[Format]) -> Result<()> {
        if !allowed.contains(&self.format) {
            bail!("format {:?} is not available for this command", self.format);
        }
        Ok(())
    }
}

fn abs(b: &BigInt) -> BigInt {
    if *b < BigInt::from(0) {
        -b
    } else {
        b.clone()
    }
}

fn certificates_json(rows: &[(SolutionIndex, MultiplicityCertificate)]) -> serde_json::Value {
    rows.iter()
        .map(|(s, c)| json!({ "tag": s.tag(), "word": s.word.to_string(), "j": s.j, "certificate": c }))
        .collect()
}

fn cmd_tev(ctx: &Ctx, g: usize) -> Result<bool> {
    ctx.reject(&[Format::Text, Format::Json, Format::Csv])?;
    let t = Instant::now();
    let (degree, certs) = tevelev_degree_with(g, ctx.mode)?;
    let ok = degree == expected_degree(g) && certs.iter().all(|(_, c)| c.is_unit());
    let s = match ctx.format {
        Format::Csv => io::certificates_csv(&certs),
        Format::Json => {
            let v = json!({
                "genus": g,
                "degree": degree.to_string(),
                "expected": expected_degree(g).to_string(),
                "certificates": certificates_json(&certs),
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        _ => format!(
            "{}\n{}\nTev_{g} = {degree}  ({} solutions, {:.2?})\n",
            io::solution_table_text(g),
            io::certificates_text(&certs),
            certs.len(),
            t.elapsed()
        ),
    };
    ctx.emit(&s)?;
    Ok(ok)
}

fn cmd_solutions(ctx: &Ctx, g: usize) -> Result<bool> {
    ctx.reject(&[Format::Json, Format::Dot, Format::Text])?;
    let dir = ctx.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let sols = enumerate_solutions_full(g, ctx.mode)?;
    let ext = if ctx.format == Format::Dot { "dot" } else { "json" };
    for s in &sols {
        let tag = s.index.tag();
        let body = match ctx.format {
            Format::Dot => io::cover_to_dot(&s.cover, &tag),
            _ => io::to_json(&s.cover)? + "\n",
        };
        let path = dir.join(format!("{tag}.{ext}"));
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("wrote {} files to {}", sols.len(), dir.display());
    Ok(true)
}

type Item = (String, std::result::Result<String, String>);

fn suite<F: FnOnce() -> std::result::Result<String, String>>(items: &mut Vec<Item>, name: &str, f: F) {
    items.push((name.to_string(), f()));
}

fn all_solutions<F>(sols: &[Solution], mut f: F) -> std::result::Result<(), String>
where
    F: FnMut(&Solution) -> std::result::Result<(), String>,
{
    let failures: Vec<String> = sols.iter().filter_map(|s| f(s).err().map(|e| format!("{}: {e}", s.index))).collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

fn cmd_verify(ctx: &Ctx, g: usize, inject_fault: bool) -> Result<bool> {
    ctx.reject(&[Format::Text, Format::Json])?;
    let p = reference_point(g);
    let base = ctx.base_for(g)?;
    let h = HurwitzData::new(g);
    let mut sols = enumerate_solutions_full(g, ctx.mode)?;
    if inject_fault {
        let c = &mut sols[0].cover;
        if let Some(e) = c.edge_map.iter().position(|m| m.expansion == 1) {
            c.edge_map[e].expansion = 2;
        }
        let l1 = c.source.leg_with_mark(1).expect("mark 1");
        c.source.legs[l1].mark = None;
    }
    let n = sols.len();
    let mut items: Vec<Item> = Vec::new();
    suite(&mut items, "solution count", || {
        if n == 1 << g {
            Ok(format!("{n} = 2^{g}"))
        } else {
            Err(format!("{n} solutions"))
        }
    });
    suite(&mut items, "harmonicity", || {
        all_solutions(&sols, |s| s.cover.validate_harmonic().map(|_| ()).map_err(|e| e.to_string())).map(|_| format!("{n} covers"))
    });
    suite(&mut items, "local Riemann-Hurwitz", || {
        all_solutions(&sols, |s| s.cover.validate_local_rh().map_err(|e| e.to_string())).map(|_| format!("{n} covers"))
    });
    suite(&mut items, "Hurwitz data", || {
        all_solutions(&sols, |s| s.cover.validate_all(&h).map_err(|e| e.to_string())).map(|_| format!("{n} covers"))
    });
    suite(&mut items, "condition (*)", || {
        all_solutions(&sols, |s| select_coordinates(&s.cover).map(|_| ()).map_err(|e| e.to_string())).map(|_| format!("{n} covers"))
    });
    suite(&mut items, "stabilization onto the reference point", || {
        all_solutions(&sols, |s| verify_solution_at(&s.cover, &p, &base).map(|_| ()).map_err(|e| e.to_string()))
            .map(|_| format!("base {base}"))
    });
    let certs: Vec<_> = sols.iter().map(|s| local_degree(&s.cover, &p)).collect();
    let two_g = BigInt::from(1) << g;
    suite(&mut items, "block determinants", || {
        all_solutions(&sols, |s| {
            let m = dilation_matrix(&s.cover, &p).map_err(|e| e.to_string())?;
            let tree = determinant(&m.tree_block()).map_err(|e| e.to_string())?;
            let genus = determinant(&m.genus_block()).map_err(|e| e.to_string())?;
            if !m.is_block_diagonal() || abs(&tree) != BigInt::from(1) || abs(&genus) != two_g {
                return Err(format!("blocks {genus} and {tree}"));
            }
            Ok(())
        })
        .map(|_| format!("|det genus| = {two_g}, |det tree| = 1"))
    });
    let ratio = Rational::new(1.into(), two_g.clone());
    suite(&mut items, "automorphism ratio", || {
        let bad: Vec<String> = certs
            .iter()
            .zip(&sols)
            .filter_map(|(c, s)| match c {
                Ok(c) if c.aut_ratio == ratio => None,
                Ok(c) => Some(format!("{}: {}", s.index, c.aut_ratio)),
                Err(e) => Some(format!("{}: {e}", s.index)),
            })
            .collect();
        if bad.is_empty() {
            Ok(format!("1/{two_g}"))
        } else {
            Err(bad.join("; "))
        }
    });
    suite(&mut items, "local degrees", || {
        let bad: Vec<String> = certs
            .iter()
            .zip(&sols)
            .filter_map(|(c, s)| match c {
                Ok(c) if c.is_unit() => None,
                Ok(c) => Some(format!("{}: {}", s.index, c.local_degree)),
                Err(e) => Some(format!("{}: {e}", s.index)),
            })
            .collect();
        if bad.is_empty() {
            Ok(format!("{n} certificates equal to 1"))
        } else {
            Err(bad.join("; "))
        }
    });
    suite(&mut items, "lattice path lemma", || {
        for d in 2..=g + 1 {
            lemma_check(d).map_err(|e| format!("d = {d}: {e}"))?;
        }
        Ok(format!("d <= {}", g + 1))
    });
    if g == 1 {
        suite(&mut items, "oracle", || {
            let run = run_and_compare(&base, ctx.mode).map_err(|e| e.to_string())?;
            match (run.report.distinct_covers, run.report.matches_construction) {
                (2, Some(true)) => Ok(format!("{} topologies, 2 covers, equal to the construction", run.report.topologies)),
                (k, m) => Err(format!("{k} covers, match {m:?}")),
            }
        });
    }
    let ok = items.iter().all(|(_, r)| r.is_ok());
    let s = if ctx.format == Format::Json {
        let v: Vec<_> = items
            .iter()
            .map(|(name, r)| match r {
                Ok(d) => json!({ "check": name, "pass": true, "detail": d }),
                Err(d) => json!({ "check": name, "pass": false, "detail": d }),
            })
            .collect();
        serde_json::to_string_pretty(&json!({ "genus": g, "pass": ok, "checks": v }))? + "\n"
    } else {
        let mut s = String::new();
        for (name, r) in &items {
            match r {
                Ok(d) => s += &format!("PASS  {name}: {d}\n"),
                Err(d) => s += &format!("FAIL  {name}: {d}\n"),
            }
        }
        s + if ok { "all checks passed\n" } else { "verification failed\n" }
    };
    ctx.emit(&s)?;
    Ok(ok)
}

fn cmd_paths(ctx: &Ctx, d: usize) -> Result<bool> {
    ctx.reject(&[Format::Text, Format::Json, Format::Csv])?;
    let t = path_counts(d);
    let report = lemma_check(d);
    let ok = report.is_ok();
    let report = report?;
    let s = match ctx.format {
        Format::Csv => io::path_tally_csv(&t, &report),
        Format::Json => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|r| json!({ "i": r.i, "height": d - 2 * r.i, "count": t.at(d - 2 * r.i), "cumulative": r.cumulative, "binomial": r.binomial }))
                .collect();
            serde_json::to_string_pretty(&json!({ "d": d, "words": t.total(), "rows": rows, "weighted_total": report.table_total }))? + "\n"
        }
        _ => io::path_tally_text(&t, &report),
    };
    ctx.emit(&s)?;
    Ok(ok)
}

fn parse_word(s: &str) -> Result<GenusWord> {
    let s = match s.trim() {
        "e" | "ε" | "-" => "",
        other => other,
    };
    Ok(s.parse()?)
}

fn cmd_matrix(ctx: &Ctx, g: usize, word: &str, j: usize) -> Result<bool> {
    ctx.reject(&[Format::Text, Format::Json, Format::Csv])?;
    let idx = SolutionIndex::new(g, parse_word(word)?, j)?;
    let p = reference_point(g);
    let sol = build_solution_full(&idx, &p)?;
    let m = dilation_matrix(&sol.cover, &p)?;
    let det = determinant(&m.matrix)?;
    let s = match ctx.format {
        Format::Json => {
            let rows: Vec<Vec<String>> = m.matrix.to_rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
            let labels: Vec<String> = m.rows.iter().map(|p| p.to_string()).collect();
            serde_json::to_string_pretty(&json!({
                "solution": idx.tag(),
                "rows": labels,
                "matrix": rows,
                "genus_block": m.genus_block,
                "determinant": det.to_string(),
            }))? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("row");
            for c in 1..=m.size() {
                s += &format!(",y_{c}");
            }
            s.push('\n');
            for (r, label) in m.rows.iter().enumerate() {
                s += &label.to_string();
                for v in m.matrix.row(r) {
                    s += &format!(",{v}");
                }
                s.push('\n');
            }
            s
        }
        _ => format!("{idx}: {0}x{0} dilation matrix\n{m}|det| = {1}\n", m.size(), det.magnitude()),
    };
    ctx.emit(&s)?;
    Ok(true)
}

fn cmd_oracle(ctx: &Ctx) -> Result<bool> {
    ctx.reject(&[Format::Text, Format::Json])?;
    let base = ctx.base_for(1)?;
    let t = Instant::now();
    let run = run_and_compare(&base, ctx.mode)?;
    let r = &run.report;
    let ok = r.distinct_covers == 2 && r.matches_construction == Some(true);
    let s = if ctx.format == Format::Json {
        io::to_json(r)? + "\n"
    } else {
        let mut s = format!(
            "labeled trees {}, topologies {}, lift assignments {} each\n",
            r.labeled_trees, r.topologies, r.lift_assignments
        );
        for (k, v) in &r.totals {
            s += &format!("  {k}: {v}\n");
        }
        s += &format!(
            "positive lifts {}, distinct covers {}, equal to the construction: {}\n({:.2?})\n",
            r.positive_covers,
            r.distinct_covers,
            r.matches_construction == Some(true),
            t.elapsed()
        );
        s
    };
    ctx.emit(&s)?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx {
        format: cli.format,
        out: cli.out,
        base: cli.base,
        mode: if cli.sequential { ExecMode::Sequential } else { ExecMode::default() },
    };
    match cli.command {
        Command::Tev { genus } => cmd_tev(&ctx, genus as usize),
        Command::Solutions { genus } => cmd_solutions(&ctx, genus as usize),
        Command::Verify { genus, inject_fault } => cmd_verify(&ctx, genus as usize, inject_fault),
        Command::Paths { degree } => cmd_paths(&ctx, degree as usize),
        Command::Matrix { genus, word, j } => cmd_matrix(&ctx, genus as usize, &word, j),
        Command::Oracle => cmd_oracle(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
