#include "mw/par.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mw {

int resolve_threads(const RunOptions& opts) {
#ifdef _OPENMP
  if (!opts.parallel) return 1;
  return opts.threads > 0 ? opts.threads : omp_get_max_threads();
#else
  (void)opts;
  return 1;
#endif
}

}  // namespace mw
