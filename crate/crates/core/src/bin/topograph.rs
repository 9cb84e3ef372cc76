fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(topography::cli::run(&argv));
}
