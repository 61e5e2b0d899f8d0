fn main() {
    std::process::exit(vqeforge::cli::main_with_args(std::env::args_os()));
}
