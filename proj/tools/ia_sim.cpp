#include <cstdlib>

#include "ia/harness.hpp"

int main(int argc, char** argv) {
  // Trials parallelize at the process level; keep BLAS single-threaded.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  return ia::cli_main(argc, argv);
}
