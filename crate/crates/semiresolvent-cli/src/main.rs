fn main() {
    std::process::exit(semiresolvent_cli::run(std::env::args_os()));
}
