#pragma once

#include <cstddef>

namespace npci {

// Worker count used by the library's parallel loops. Defaults to the
// NPCI_NUM_THREADS environment variable, then to the OpenMP default.
int num_threads();
void set_num_threads(int n);

}  // namespace npci
