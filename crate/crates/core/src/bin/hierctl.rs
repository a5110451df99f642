fn main() {
    std::process::exit(hierctl::cli::run(std::env::args_os()));
}
