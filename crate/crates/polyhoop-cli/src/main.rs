fn main() {
    std::process::exit(polyhoop_cli::run(std::env::args_os()));
}
