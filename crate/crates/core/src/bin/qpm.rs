fn main() {
    std::process::exit(qpm::cli::main_with_args(std::env::args_os()));
}
