fn main() {
    std::process::exit(qdomains::cli::main_from_env());
}
