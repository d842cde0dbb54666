fn main() {
    std::process::exit(toric_dvr::cli::main_with_args(std::env::args_os()));
}
