fn main() {
    std::process::exit(farey_cli::run(std::env::args_os()));
}
