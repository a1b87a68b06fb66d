fn main() {
    std::process::exit(gaborlab_cli::run(std::env::args_os()));
}
