fn main() {
    std::process::exit(kuznetsov_cli::run(std::env::args_os()));
}
