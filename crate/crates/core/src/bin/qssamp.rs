fn main() {
    std::process::exit(qssamp::cli::main_with_args(std::env::args_os()));
}
