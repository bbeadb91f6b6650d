#pragma once

namespace mw {

/// Execution options for kernels with parallel loops. `threads = 0` keeps
/// the OpenMP runtime default; `parallel = false` forces a single thread.
/// All parallel kernels are deterministic: results are bitwise identical
/// for every thread count.
struct RunOptions {
  bool parallel = true;
  int threads = 0;
};

/// Thread count a kernel should use under `opts` (1 when built without
/// OpenMP).
int resolve_threads(const RunOptions& opts);

}  // namespace mw
