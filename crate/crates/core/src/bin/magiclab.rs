use std::process::ExitCode;

fn main() -> ExitCode {
    match magiclab::cli::run(std::env::args_os()) {
        Ok((result, code)) => {
            println!("{}", serde_json::to_string_pretty(&result).expect("result serializes"));
            ExitCode::from(code as u8)
        }
        Err(help) => help.exit(),
    }
}
