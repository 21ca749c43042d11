fn main() {
    std::process::exit(qrotlearn::cli::run(std::env::args_os()));
}
