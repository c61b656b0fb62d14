fn main() {
    std::process::exit(spmul::cli::run(std::env::args_os()));
}
