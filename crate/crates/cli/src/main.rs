fn main() {
    std::process::exit(enf_cli::run(std::env::args_os()));
}
