fn main() {
    std::process::exit(fqtorus::cli::main_with_args(std::env::args_os()));
}
