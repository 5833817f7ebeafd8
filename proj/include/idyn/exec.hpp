#pragma once

namespace idyn {

// Kernels with data-parallel inner loops come in two flavors: an OpenMP
// version and a serial reference. Results are schedule-independent and the
// test suite asserts the two agree exactly.
enum class Exec { serial, parallel };

}  // namespace idyn
