fn main() {
    std::process::exit(lgorb::cli::run(std::env::args_os()));
}
