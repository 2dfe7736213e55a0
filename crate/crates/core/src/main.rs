fn main() {
    std::process::exit(polyhedge::cli::run(std::env::args_os()));
}
