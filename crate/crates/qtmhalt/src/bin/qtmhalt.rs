fn main() {
    // behave like other unix filters when the reader closes the pipe early:
    // die on SIGPIPE instead of panicking on a failed println
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(qtmhalt::cli::run());
}
