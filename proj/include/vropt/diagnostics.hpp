#pragma once

#include <iosfwd>

namespace vropt {

// Quick invariant self-checks on built-in synthetic instances: alias-table
// exactness, estimator unbiasedness and variance bound, momentum recursion,
// prox non-expansiveness, solver determinism. Prints one line per check.
// Returns true when everything passes.
bool run_diagnostics(std::ostream& out);

}  // namespace vropt
