//! Experiment runner for the sphere-quantization toolkit. Subcommands take
//! `key=value` arguments (flags override a `config=FILE`); see README for
//! the full key list. Exit codes: 0 success, 2 numerical invariant
//! violation, 3 configuration error.

mod cache;
mod commands;
mod config;
mod output;

use commands::AppError;
use config::RunConfig;

const USAGE: &str = "\
usage: spinlim <subcommand> [key=value ...]

subcommands:
  axioms       quantization-axiom property suite (seeded)
  quantize     emit the matrix of Q(f) at one N        (f=..., N=16)
  spectrum     spectrum-vs-range distance curve        (model=..., N=grid)
  limit        classical-limit convergence study       (model=..., f=..., N=grid)
  dgr          commutator/product defect curves        (N=grid, n-small=32)
  husimi       density grid + cap/forbidden masses     (model=..., N=512)
  ssb          symmetry-breaking report                (model=..., N=grid)
  fit-symbol   measure the 1/N symbol correction       (model=..., N=list)
  repro        run the full acceptance suite

common keys:
  model=cw|lmg|custom   J= B= lambda= gamma= h0= h1=
  N=64,128  or  N=64:4096:2 (geometric)
  f=\"-0.5 z^2 - 0.5 x\"   (repeatable)
  seed=12345  out=dir  cache=on|off  cache-dir=path  workers=8
  cap-radius=0.3  margin=0.2  target=ground|<energy>  format=text|binary|both
  config=FILE           (key=value lines, overridden by explicit flags)
";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match run(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}

fn run(args: &[String]) -> Result<(), AppError> {
    let Some(subcommand) = args.first() else {
        print!("{USAGE}");
        return Err(AppError {
            code: 3,
            message: "missing subcommand".into(),
        });
    };
    if subcommand == "help" || subcommand == "--help" || subcommand == "-h" {
        print!("{USAGE}");
        return Ok(());
    }
    let cfg = RunConfig::from_args(subcommand, &args[1..])?;
    // worker pool size is global; ignore the error if a pool already exists
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global();
    match subcommand.as_str() {
        "axioms" => commands::cmd_axioms(&cfg),
        "quantize" => commands::cmd_quantize(&cfg),
        "spectrum" => commands::cmd_spectrum(&cfg),
        "limit" => commands::cmd_limit(&cfg),
        "dgr" => commands::cmd_dgr(&cfg),
        "husimi" => commands::cmd_husimi(&cfg),
        "ssb" => commands::cmd_ssb(&cfg),
        "fit-symbol" => commands::cmd_fit_symbol(&cfg),
        "repro" => commands::cmd_repro(&cfg),
        other => {
            print!("{USAGE}");
            Err(AppError {
                code: 3,
                message: format!("unknown subcommand '{other}'"),
            })
        }
    }
}
