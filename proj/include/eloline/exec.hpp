#pragma once

namespace eloline {

// Execution policy for the data-parallel kernels. Serial and parallel paths
// are bit-identical; the serial path is the reference the tests compare
// against.
enum class Exec { serial, parallel };

int max_threads();

}  // namespace eloline
