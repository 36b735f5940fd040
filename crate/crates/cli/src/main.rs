use std::io::Write;

fn main() {
    let out = gradet_cli::run(std::env::args_os());
    for line in &out.stderr {
        eprint!("{line}");
        if !line.ends_with('\n') {
            eprintln!();
        }
    }
    if let Some(text) = out.stdout {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{}", text.trim_end());
    }
    std::process::exit(out.code);
}
