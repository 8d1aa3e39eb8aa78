fn main() {
    std::process::exit(simhk::harness::cli::cli_main());
}
