use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cremona_contact::catalog::parse_catalog;
use cremona_contact::workbench::{run, Command, Options, OutputFormat, Verb, EXIT_INPUT};

/// Exact analysis of birational maps preserving the contact form z0*dz1 + dz2.
///
/// Maps are tuples such as "(z1, z0, -z2 - z0*z1)", plane maps "(z2, (z2+1)/z1)",
/// optionally prefixed with "chart=<tag>". "@name" refers to a catalog entry and
/// "-" (or a missing map argument) reads the text from stdin.
#[derive(Parser, Debug)]
#[command(name = "cremona-contact", version)]
struct Cli {
    /// One of: analyze alpha v klein legendre lift lift-contact finite-order-lift
    /// exactness regular multiplicity iterate degrees cocycle inverse-check catalog selftest
    verb: Verb,

    /// Maps, forms, or numbers, as the verb requires.
    args: Vec<String>,

    /// Number of iterates for `degrees`.
    #[arg(long, default_value_t = 6)]
    window: usize,

    /// Seed for the sampling done on the hyperplane at infinity.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Report layout: human or machine.
    #[arg(long, default_value = "human")]
    format: OutputFormat,

    /// Catalog file to resolve `@name` against instead of the built-in registry.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

fn read_stdin() -> std::io::Result<String> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s)?;
    Ok(s.trim().to_string())
}

fn fail(message: String) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_INPUT as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut args = cli.args;
    if args.is_empty() && cli.verb.arity().0 > 0 {
        args.push("-".into());
    }
    if args.iter().any(|a| a == "-") {
        let input = match read_stdin() {
            Ok(s) => s,
            Err(e) => return fail(format!("reading stdin: {e}")),
        };
        for a in args.iter_mut().filter(|a| *a == "-") {
            *a = input.clone();
        }
    }
    let catalog = match &cli.catalog {
        None => None,
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", path.display())),
            };
            match parse_catalog(&text) {
                Ok(c) => Some(c),
                Err(e) => return fail(format!("{}: {e}", path.display())),
            }
        }
    };
    let cmd = Command {
        verb: cli.verb,
        args,
        options: Options {
            window: cli.window,
            seed: cli.seed,
            format: cli.format,
        },
        catalog,
    };
    let report = run(&cmd);
    print!("{}", report.render(cli.format));
    ExitCode::from(report.exit_code as u8)
}
