fn main() -> std::process::ExitCode {
    geofreq::cli::run()
}
