fn main() {
    std::process::exit(grover_sim::cli::run_from_env());
}
