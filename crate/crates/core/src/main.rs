fn main() {
    std::process::exit(eventmc::cli::main_with_args(std::env::args_os()));
}
