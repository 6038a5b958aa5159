#pragma once

namespace sistk::par {

// Caps the number of OpenMP threads used by the batch-evaluation and
// pairwise-distance kernels. 0 restores the runtime default.
void set_max_threads(int n);
int max_threads();

}  // namespace sistk::par
