fn main() {
    std::process::exit(polylike::cli::main_with_args(std::env::args_os()));
}
