fn main() {
    std::process::exit(turanlab::cli::main_with_args(std::env::args_os()));
}
