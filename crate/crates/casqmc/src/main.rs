fn main() {
    std::process::exit(casqmc::cli::run(std::env::args_os()));
}
