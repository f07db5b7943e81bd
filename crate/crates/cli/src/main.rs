use clap::Parser;

use kmm_cli::cli::{run, Cli};
use kmm_cli::exit_codes;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/error text; exit code 1 marks usage
            // errors regardless of the library default
            let _ = e.print();
            std::process::exit(if e.use_stderr() {
                exit_codes::USAGE
            } else {
                exit_codes::SUCCESS
            });
        }
    };
    std::process::exit(run(cli));
}
