use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let outcome = kvcert_cli::run(std::env::args_os());
    if outcome.code == kvcert_cli::EXIT_USAGE || outcome.code == kvcert_cli::EXIT_INVARIANT {
        eprintln!("{}", outcome.text);
    } else {
        println!("{}", outcome.text);
    }
    ExitCode::from(outcome.code as u8)
}
