use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use shintani_cli::{run, suite, with_threads, Command, Overrides, Report, RunConfig};

#[derive(Parser)]
#[command(name = "shintani", version, about = "Twisting operator, character and flag variety checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// n_F, the Lang solver audit and geometric classes
    Twist(Overrides),
    /// Character table, orbit map and the invariance suite
    Characters(Overrides),
    /// Cycle strata of the Springer fibre over F_{q^m}
    Flags(Overrides),
    /// The full fixed grid
    VerifyAll(Overrides),
}

fn summarize(rep: &Report) {
    println!("{} {} ({:.2}s)", rep.stem(), if rep.pass { "PASS" } else { "FAIL" }, rep.timing.seconds);
    for c in &rep.checks {
        println!("  [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let single = |cmd, o: &Overrides| -> Result<_> {
        let c = RunConfig::resolve(o)?;
        Ok((vec![(cmd, c.clone())], c))
    };
    let (jobs, base) = match &cli.command {
        Cmd::Twist(o) => single(Command::Twist, o)?,
        Cmd::Characters(o) => single(Command::Characters, o)?,
        Cmd::Flags(o) => single(Command::Flags, o)?,
        Cmd::VerifyAll(o) => {
            let base = RunConfig::resolve(o)?;
            (suite(&base), base)
        }
    };
    let mut all = true;
    for (cmd, c) in jobs {
        let rep = with_threads(base.threads, || run(cmd, &c))??;
        for path in rep.write(&base.out)? {
            eprintln!("wrote {}", path.display());
        }
        summarize(&rep);
        all &= rep.pass;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
