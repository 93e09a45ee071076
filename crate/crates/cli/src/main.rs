use clap::Parser;

fn main() {
    qmsgap::init_logging();
    let cli = match qmsgap::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { qmsgap::EXIT_INPUT } else { qmsgap::EXIT_OK });
        }
    };
    let code = qmsgap::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
