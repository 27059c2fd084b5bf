use clap::Parser;

fn main() {
    let cli = berk::cli::Cli::parse();
    std::process::exit(berk::cli::main_with(&cli));
}
