fn main() {
    std::process::exit(screening::cli::run(std::env::args_os()));
}
