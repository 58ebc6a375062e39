fn main() {
    std::process::exit(invform::cli::main_with_args(std::env::args_os()));
}
