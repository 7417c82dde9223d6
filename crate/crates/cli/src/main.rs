use clap::Parser;
use dsrqi::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dsrqi::run(cli) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("dsrqi: warning: {w}");
            }
            for p in &report.written {
                eprintln!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("dsrqi: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
