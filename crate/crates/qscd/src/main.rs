use clap::Parser;

fn main() {
    let cli = qscd::cli::Cli::parse();
    if let Err(e) = qscd::cli::execute(cli) {
        eprintln!("qscd: {e}");
        std::process::exit(e.exit_code());
    }
}
