fn main() {
    std::process::exit(ramsey_core::certs::run_cli(std::env::args_os()));
}
