fn main() {
    let mut stdout = std::io::stdout().lock();
    let code = gsmm_bench::cli::main_with_args(std::env::args_os(), &mut stdout);
    std::process::exit(code);
}
