fn main() {
    std::process::exit(asm_moments::cli::main_impl(std::env::args_os()));
}
