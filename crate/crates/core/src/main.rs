fn main() {
    std::process::exit(lightcone::cli::run(std::env::args_os()));
}
