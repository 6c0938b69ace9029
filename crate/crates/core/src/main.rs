fn main() {
    std::process::exit(scherk::cli::run(std::env::args_os()));
}
