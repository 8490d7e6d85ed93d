//! `adic`: JSON request/response front end for the disc library. A single
//! request is read from stdin (`--batch` switches to one request per
//! line); every response is one JSON object with `ok` and exactly one of
//! `result` or `error`. Exit status: 0 ok, 1 domain error, 2 parse or
//! schema error; batch exits with the worst line.

mod commands;
mod protocol;

use clap::{Parser, ValueEnum};
use commands::Defaults;
use std::io::{BufRead, Read, Write};

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Compact single-line JSON.
    Json,
    /// Indented JSON (single-request mode only).
    Pretty,
}

#[derive(Parser)]
#[command(
    name = "adic",
    version,
    about = "Exact valuations on the adic closed unit disc, spoken in JSON"
)]
struct Args {
    /// Default prime for requests that omit "prime"; the environment
    /// variable ADIC_DEFAULT_PRIME is the fallback below this flag.
    #[arg(long)]
    prime: Option<u64>,

    /// Default seed for sampled checks when the request omits "seed".
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Read one JSON request per line instead of a single request.
    #[arg(long)]
    batch: bool,

    /// Output layout. Batch mode always writes compact lines.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() {
    let args = Args::parse();
    let env_prime = std::env::var("ADIC_DEFAULT_PRIME")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok());
    let defaults = Defaults {
        prime: args.prime.or(env_prime),
        seed: args.seed,
    };

    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();

    let code = if args.batch {
        let mut worst = 0;
        for line in stdin.lock().lines() {
            let line = line.expect("stdin read");
            if line.trim().is_empty() {
                continue;
            }
            let (resp, exit) = commands::run(&line, &defaults);
            writeln!(out, "{resp}").expect("stdout write");
            worst = worst.max(exit);
        }
        worst
    } else {
        let mut input = String::new();
        stdin.lock().read_to_string(&mut input).expect("stdin read");
        let (resp, exit) = commands::run(&input, &defaults);
        match args.format {
            Format::Json => writeln!(out, "{resp}").expect("stdout write"),
            Format::Pretty => {
                let pretty = serde_json::to_string_pretty(&resp).expect("serialize");
                writeln!(out, "{pretty}").expect("stdout write");
            }
        }
        exit
    };
    std::process::exit(code);
}
