#include <cstdlib>

int run_cli(int argc, char** argv);

int main(int argc, char** argv) {
    // one BLAS thread per job: sweep parallelism happens at the job level and
    // single-threaded kernels keep repeated runs byte-identical
    setenv("OPENBLAS_NUM_THREADS", "1", 0);
    return run_cli(argc, argv);
}
