fn main() {
    let (code, out) = stonekit::cli::run(std::env::args_os());
    if code == stonekit::cli::EXIT_INPUT {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
