fn main() {
    std::process::exit(opgeom_cli::run(std::env::args_os()));
}
