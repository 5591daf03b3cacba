fn main() {
    std::process::exit(cgtheory::cli::main_with(std::env::args_os()));
}
