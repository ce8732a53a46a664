use clap::Parser;

fn main() {
    let cli = allee_cli::cli::Cli::parse();
    if let Err(err) = allee_cli::cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
