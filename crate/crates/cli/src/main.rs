fn main() {
    std::process::exit(jordan_arcs_cli::main_with(std::env::args_os()));
}
