fn main() {
    std::process::exit(wta::cli::run(std::env::args_os()));
}
