fn main() {
    std::process::exit(extrifact_cli::run(std::env::args_os()));
}
