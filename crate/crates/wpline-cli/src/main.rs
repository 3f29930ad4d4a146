//! `wpline`: batch front end for the wave-function, quantum-curve, correlator and
//! bilinear computations. Exit codes: 0 pass, 1 a check failed, 2 bad invocation.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wpline::{bilinear, gw, int, partitions, wave, wedge, Rational};

const SCHEMA: &str = "wpline/1";

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "wpline", version, about = "Exact wave-function and quantum-curve computations for the orbifold line")]
struct Cli {
    /// Orbifold order r (>= 1).
    #[arg(long, global = true, default_value_t = 1)]
    r: u32,
    /// Highest degree d (powers of q^r).
    #[arg(long, global = true, default_value_t = 3)]
    dmax: usize,
    /// Truncation order in 1/x.
    #[arg(long, global = true, default_value_t = 12)]
    xorder: i32,
    /// Truncation order in 1/y.
    #[arg(long, global = true, default_value_t = 8)]
    yorder: i32,
    /// Truncation order in the correlator variables z_i.
    #[arg(long, global = true, default_value_t = 6)]
    zorder: i32,
    /// Evolution time, an exact rational such as 1 or -3/2.
    #[arg(long, global = true, default_value = "0")]
    t: String,
    /// Genus (gw-table).
    #[arg(long, global = true, default_value_t = 0)]
    g: i32,
    /// Number of insertions (vev, gw-table; default 1) or the symmetric group size (char).
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the payload here (plus a `.meta.json` sidecar) instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form wave function, optionally evolved to time t.
    Wave {
        /// Relative hbar order of the expanded evolution weights.
        #[arg(long, default_value_t = 4)]
        hbar_order: u32,
    },
    /// Quantum-curve checks through --dmax.
    QcCheck {
        /// Replace the hbar/2 constant of the operator (negative control).
        #[arg(long, hide = true)]
        tamper_half: Option<String>,
    },
    /// X_d character sums against the closed form, and the L(x) claims.
    XdCheck,
    /// Connected stationary correlators G_d for d <= dmax.
    Vev {
        /// Also compare with the character-sum route.
        #[arg(long)]
        check: bool,
    },
    /// Stationary invariants <tau_k1 ... tau_kn>_{g,d}.
    GwTable,
    /// A+- = B+- A-- on a window, and closed vs inverted B+-.
    BilinearCheck {
        /// Window size.
        #[arg(long, default_value_t = 8)]
        size: usize,
        /// Include the Bogoliubov coefficients b_{i,j}, i < xorder, j < yorder.
        #[arg(long)]
        emit_b: bool,
    },
    /// Character table of S_n.
    Char,
}

/// Validated shared settings.
struct RunConfig {
    r: u32,
    dmax: usize,
    xorder: i32,
    yorder: i32,
    zorder: i32,
    t: Rational,
    format: Format,
}

enum Failure {
    Usage(String),
}

impl From<wpline::Error> for Failure {
    fn from(e: wpline::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    body: String,
    pass: bool,
}

fn config(cli: &Cli) -> Result<RunConfig, Failure> {
    if cli.r < 1 {
        return Err(Failure::Usage("--r must be at least 1".into()));
    }
    for (name, v) in [("--xorder", cli.xorder), ("--yorder", cli.yorder), ("--zorder", cli.zorder)] {
        if v < 1 {
            return Err(Failure::Usage(format!("{name} must be at least 1, got {v}")));
        }
    }
    let t: Rational = cli.t.parse().map_err(|_| Failure::Usage(format!("--t: not a rational number: {}", cli.t)))?;
    Ok(RunConfig { r: cli.r, dmax: cli.dmax, xorder: cli.xorder, yorder: cli.yorder, zorder: cli.zorder, t, format: cli.format })
}

fn envelope(command: &str, cfg: &RunConfig, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("payload is an object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    obj.insert("r".into(), json!(cfg.r));
    obj.insert("dmax".into(), json!(cfg.dmax));
    body
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn verdict(command: &str, cfg: &RunConfig, checks: Vec<(String, bool)>, extra: Value) -> Output {
    let pass = checks.iter().all(|(_, p)| *p);
    let body = match cfg.format {
        Format::Json => {
            let list: Vec<Value> = checks.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect();
            let mut v = json!({"checks": list, "pass": pass});
            if let (Some(o), Some(e)) = (v.as_object_mut(), extra.as_object()) {
                for (k, x) in e {
                    o.insert(k.clone(), x.clone());
                }
            }
            pretty(&envelope(command, cfg, v))
        }
        Format::Text => {
            let mut s = String::new();
            for (n, p) in &checks {
                s.push_str(&format!("{} {}\n", if *p { "PASS" } else { "FAIL" }, n));
            }
            if let Some(t) = extra.get("text").and_then(|t| t.as_str()) {
                s.push_str(t);
            }
            s.push_str(if pass { "all checks passed\n" } else { "some checks failed\n" });
            s
        }
    };
    Output { body, pass }
}

fn cmd_wave(cfg: &RunConfig, hbar_order: u32) -> Result<Output, Failure> {
    let closed = wave::wave_closed(cfg.r, cfg.dmax);
    let w = if cfg.t == int(0) { closed } else { wave::t_evolve(&closed, &cfg.t, hbar_order)? };
    let body = match cfg.format {
        Format::Json => pretty(&envelope("wave", cfg, w.to_json_value())),
        Format::Text => w.to_string(),
    };
    Ok(Output { body, pass: true })
}

fn cmd_qc(cfg: &RunConfig, tamper: Option<&str>) -> Result<Output, Failure> {
    let half: Rational = match tamper {
        Some(s) => s.parse().map_err(|_| Failure::Usage(format!("--tamper-half: not a rational number: {s}")))?,
        None => wpline::rat(1, 2),
    };
    let mut checks = Vec::new();
    for d in 1..=cfg.dmax {
        let ok = wave::three_term_residual(cfg.r, d, &half).is_zero() && wave::three_term_check(cfg.r, d);
        checks.push((format!("three-term d={d}"), ok));
    }
    let w = wave::wave_closed(cfg.r, cfg.dmax);
    checks.push(("curve annihilates closed form".into(), wave::quantum_curve_apply_with(&w, &half).is_zero()));
    if cfg.t != int(0) {
        let ev = wave::t_evolve(&w, &cfg.t, 4)?;
        checks.push((format!("curve at t={}", cfg.t), wave::quantum_curve_apply_with(&ev, &half).is_zero()));
    }
    if tamper.is_none() {
        for d in 1..=cfg.dmax.min(3) {
            let res = wave::curve_series_residual(cfg.r, d, cfg.xorder)?;
            checks.push((format!("series form d={d} through x^-{}", cfg.xorder - 1), res.is_zero()));
        }
    }
    Ok(verdict("qc-check", cfg, checks, json!({})))
}

fn cmd_xd(cfg: &RunConfig) -> Result<Output, Failure> {
    let mut checks = Vec::new();
    for d in 1..=cfg.dmax {
        checks.push((format!("X_{d} through x^-{}", cfg.xorder), wave::xd_identity_holds(cfg.r, d, cfg.xorder)));
        if cfg.r >= 2 {
            checks.push((format!("L(x) coefficients d={d}"), wave::l_coefficients(cfg.r, d).claims_hold()));
        }
    }
    Ok(verdict("xd-check", cfg, checks, json!({})))
}

fn cmd_vev(cfg: &RunConfig, n: usize, check: bool) -> Result<Output, Failure> {
    if n == 0 || n > 6 {
        return Err(Failure::Usage(format!("--n must be in 1..=6, got {n}")));
    }
    let mut series = Vec::new();
    let mut text = String::new();
    for d in 0..=cfg.dmax {
        let s = gw::stationary_series(cfg.r, d, n, cfg.zorder)?;
        text.push_str(&format!("d={d}: {}\n", s.series));
        series.push(json!({"d": d, "series": s.series.to_json_value()}));
    }
    let mut checks = vec![];
    if check {
        let disc = wedge::normalized_disconnected_family(cfg.r, n, cfg.dmax, cfg.zorder)?;
        let conn = wedge::connected_from_disconnected(&disc)?;
        let rec = wedge::normalized_connected_family_recursion(cfg.r, n, cfg.dmax, cfg.zorder)?;
        let full = (1u32 << n) - 1;
        for d in 0..=cfg.dmax {
            checks.push((format!("recursion = character sum, d={d}"), conn.get(d, full).same_coefficients(rec.get(d, full))));
        }
    }
    let out = match cfg.format {
        Format::Json => {
            let pass = checks.iter().all(|(_, p)| *p);
            let list: Vec<Value> = checks.iter().map(|(c, p)| json!({"name": c, "pass": p})).collect();
            let v = json!({"n": n, "zorder": cfg.zorder, "series": series, "checks": list, "pass": pass});
            Output { body: pretty(&envelope("vev", cfg, v)), pass }
        }
        Format::Text => {
            let mut o = verdict("vev", cfg, checks, json!({ "text": text }));
            if !check {
                o.body = text;
            }
            o
        }
    };
    Ok(out)
}

fn cmd_gw(cfg: &RunConfig, g: i32, n: usize) -> Result<Output, Failure> {
    if n == 0 || n > 4 {
        return Err(Failure::Usage(format!("--n must be in 1..=4, got {n}")));
    }
    if g < 0 {
        return Err(Failure::Usage(format!("--g must be non-negative, got {g}")));
    }
    let rows = gw::gw_table(cfg.r, cfg.dmax, g, n)?;
    let kstr = |k: &[i32]| k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
    let body = match cfg.format {
        Format::Text => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["r", "g", "d", "k", "numerator", "denominator"]).expect("csv");
            for row in &rows {
                w.write_record([
                    row.r.to_string(),
                    row.g.to_string(),
                    row.d.to_string(),
                    kstr(&row.k),
                    row.value.numer().to_string(),
                    row.value.denom().to_string(),
                ])
                .expect("csv");
            }
            String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "g": row.g,
                        "d": row.d,
                        "k": row.k,
                        "numerator": row.value.numer().to_string(),
                        "denominator": row.value.denom().to_string(),
                    })
                })
                .collect();
            pretty(&envelope("gw-table", cfg, json!({"g": g, "n": n, "rows": list})))
        }
    };
    Ok(Output { body, pass: true })
}

fn cmd_bilinear(cfg: &RunConfig, size: usize, emit_b: bool) -> Result<Output, Failure> {
    if size == 0 || size > 16 {
        return Err(Failure::Usage(format!("--size must be in 1..=16, got {size}")));
    }
    let rep = bilinear::bilinear_identity_check(cfg.r, size, cfg.dmax)?;
    let checks = vec![
        (format!("A+- = B+- A-- on {size}x{size} through d={}", cfg.dmax), rep.identity),
        ("closed B+- = inverted B+-".to_string(), rep.routes_agree),
    ];
    let extra = if emit_b {
        let b = bilinear::two_point_closed(cfg.r, cfg.xorder as usize, cfg.yorder as usize, cfg.dmax);
        json!({"bogoliubov": b.to_json_value(), "text": b.to_csv()})
    } else {
        json!({})
    };
    Ok(verdict("bilinear-check", cfg, checks, extra))
}

fn cmd_char(cfg: &RunConfig, n: u32) -> Result<Output, Failure> {
    if n > 14 {
        return Err(Failure::Usage(format!("--n must be at most 14, got {n}")));
    }
    let table = partitions::character_table(n);
    let body = match cfg.format {
        Format::Text => table.to_csv(),
        Format::Json => {
            let parts: Vec<Value> = table.partitions.iter().map(|p| json!(p.parts())).collect();
            let values: Vec<Value> =
                table.values.iter().map(|row| json!(row.iter().map(|v| v.to_string()).collect::<Vec<_>>())).collect();
            let mut v = envelope("char", cfg, json!({"n": n, "partitions": parts, "values": values}));
            v.as_object_mut().unwrap().remove("dmax");
            pretty(&v)
        }
    };
    Ok(Output { body, pass: true })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let cfg = config(cli)?;
    match &cli.cmd {
        Cmd::Wave { hbar_order } => cmd_wave(&cfg, *hbar_order),
        Cmd::QcCheck { tamper_half } => cmd_qc(&cfg, tamper_half.as_deref()),
        Cmd::XdCheck => cmd_xd(&cfg),
        Cmd::Vev { check } => cmd_vev(&cfg, cli.n.unwrap_or(1) as usize, *check),
        Cmd::GwTable => cmd_gw(&cfg, cli.g, cli.n.unwrap_or(1) as usize),
        Cmd::BilinearCheck { size, emit_b } => cmd_bilinear(&cfg, *size, *emit_b),
        Cmd::Char => match cli.n {
            Some(n) => cmd_char(&cfg, n),
            None => Err(Failure::Usage("char needs --n".into())),
        },
    }
}

fn emit(cli: &Cli, out: &Output) -> std::io::Result<()> {
    match &cli.out {
        None => std::io::stdout().write_all(out.body.as_bytes()),
        Some(path) => {
            fs::write(path, &out.body)?;
            let args: Vec<String> = std::env::args().skip(1).collect();
            let meta = json!({
                "schema": SCHEMA,
                "tool": "wpline",
                "version": env!("CARGO_PKG_VERSION"),
                "args": args,
                "parallel": wpline::parallel::is_parallel(),
                "pass": out.pass,
            });
            fs::write(format!("{path}.meta.json"), pretty(&meta))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("wpline: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("wpline: {msg}");
            ExitCode::from(2)
        }
    }
}
