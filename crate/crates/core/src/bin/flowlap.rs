fn main() {
    std::process::exit(flowlap::cli::run(std::env::args_os()));
}
