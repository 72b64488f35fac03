fn main() {
    std::process::exit(decaylab::cli::main_with_args(std::env::args_os()));
}
