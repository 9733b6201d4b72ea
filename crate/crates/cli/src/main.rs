fn main() {
    std::process::exit(prolim_cli::run_from_args());
}
