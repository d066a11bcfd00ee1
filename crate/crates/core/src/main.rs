fn main() {
    std::process::exit(geomatch::cli::run(std::env::args_os()));
}
