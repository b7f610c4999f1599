#include "pip/blas_env.hpp"
#include "pip/cli.hpp"

int main(int argc, char** argv) {
    pip::ensure_blas_kernel(argv);
    return pip::cli::run(argc, argv);
}
