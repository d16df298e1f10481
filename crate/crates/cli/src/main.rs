use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    let code = udinc_cli::run_cli(&argv, &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
