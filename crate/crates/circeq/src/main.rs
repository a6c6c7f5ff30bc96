fn main() {
    // Die quietly instead of panicking when a downstream consumer closes the
    // pipe early, e.g. `circeq search ... | head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(circeq::cli::run());
}
