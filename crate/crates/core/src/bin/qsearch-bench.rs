fn main() {
    std::process::exit(qsearch::bench::cli::main(std::env::args_os()));
}
