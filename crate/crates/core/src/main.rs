fn main() {
    std::process::exit(gdw::cli::dispatch(std::env::args_os()));
}
