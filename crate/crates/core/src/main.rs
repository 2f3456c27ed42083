fn main() {
    std::process::exit(multidil::cli::run(std::env::args_os()));
}
