use std::process::ExitCode;

fn main() -> ExitCode {
    opineq::cli::run(std::env::args_os()).into()
}
