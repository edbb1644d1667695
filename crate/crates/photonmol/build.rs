fn main() {
    // BLAS/LAPACK provider for ndarray's `blas` feature and the zgesv/zgeev/zheev
    // bindings in src/linalg.rs. OpenBLAS bundles the full LAPACK.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
