fn main() {
    std::process::exit(past::cli::dispatch(std::env::args_os()));
}
