fn main() {
    std::process::exit(ddsim::cli::main_with(std::env::args_os()));
}
