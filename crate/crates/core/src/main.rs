mod cli;

use clap::Parser;

fn main() -> anyhow::Result<()> {
    let code = cli::run(cli::Cli::parse())?;
    std::process::exit(code);
}
