fn main() {
    std::process::exit(roabp_pit::cli::main_from_env());
}
