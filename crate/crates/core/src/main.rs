fn main() {
    std::process::exit(mertens_spectra::cli::run(std::env::args_os()));
}
