fn main() {
    std::process::exit(dioph_cli::run(std::env::args_os()));
}
