#pragma once

#include <functional>
#include <vector>

namespace transmon {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
};

// Downhill simplex with the standard reflection/expansion/contraction
// coefficients. The simplex starts at x0 displaced by steps[i] along each
// axis; iteration stops when the value spread falls below tol or the
// evaluation budget runs out.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const std::vector<double>& steps, double tol,
                             int max_evals);

}  // namespace transmon
