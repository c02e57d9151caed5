fn main() {
    std::process::exit(subsel_bench::cli::run(std::env::args_os()));
}
