fn main() {
    std::process::exit(vlwave::cli::run(std::env::args_os()));
}
