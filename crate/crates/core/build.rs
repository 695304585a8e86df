use std::path::Path;

// The spectral routines bind dsyevd_/zheevd_ from the system LAPACK.
// OpenBLAS ships both (its LAPACK is built in); plain Debian installs may
// only have the reference pair.
fn main() {
    let dirs = [
        "/usr/lib/x86_64-linux-gnu",
        "/usr/lib/aarch64-linux-gnu",
        "/usr/lib64",
        "/usr/lib",
        "/usr/local/lib",
    ];
    let found = |name: &str| {
        dirs.iter()
            .any(|d| Path::new(&format!("{d}/lib{name}.so")).exists() || Path::new(&format!("{d}/lib{name}.so.0")).exists())
    };
    if found("openblas") {
        println!("cargo:rustc-link-lib=dylib=openblas");
    } else {
        println!("cargo:rustc-link-lib=dylib=lapack");
        println!("cargo:rustc-link-lib=dylib=blas");
    }
}
