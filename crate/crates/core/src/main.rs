use clap::Parser;

fn main() {
    let cli = leibniz::cli::Cli::parse();
    std::process::exit(leibniz::cli::main_with(cli));
}
