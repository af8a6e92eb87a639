use clap::Parser;

fn main() {
    let cli = logharm::cli::Cli::parse();
    std::process::exit(logharm::cli::run(cli));
}
