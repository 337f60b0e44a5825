use std::io;

fn main() {
    let cap = std::env::var(gamelab::cli::CAP_ENV).ok();
    let code = gamelab::cli::run(std::env::args_os(), cap.as_deref(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
