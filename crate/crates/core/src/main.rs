fn main() {
    std::process::exit(amalgam_green::cli::run_command(std::env::args_os()));
}
