fn main() {
    std::process::exit(ence::cli::main_with_args(std::env::args_os()));
}
