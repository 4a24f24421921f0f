fn main() {
    std::process::exit(fibwqed::cli::main_with_args(std::env::args_os()));
}
