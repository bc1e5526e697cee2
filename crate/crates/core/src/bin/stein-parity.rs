use std::io;

fn main() {
    let code = stein_parity::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code.code());
}
