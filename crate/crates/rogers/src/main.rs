fn main() {
    std::process::exit(rogers::cli::run(std::env::args_os()));
}
