use std::io::{ErrorKind, Write};

fn main() {
    let out = rdiv_core::cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(&out.stdout).and_then(|_| stdout.flush()) {
        if e.kind() != ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            std::process::exit(3);
        }
    }
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
