fn main() {
    std::process::exit(varbound::cli::run(std::env::args_os()));
}
