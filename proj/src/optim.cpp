#include "transmon/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace transmon {

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const std::vector<double>& steps,
    double tol, int max_evals) {
  size_t n = x0.size();
  if (n == 0 || steps.size() != n)
    throw std::invalid_argument("nelder_mead needs matching x0 and steps");

  struct Vertex {
    std::vector<double> x;
    double v;
  };
  std::vector<Vertex> s;
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  s.push_back({x0, eval(x0)});
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += steps[i];
    s.push_back({x, eval(x)});
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.v < b.v; };
  std::sort(s.begin(), s.end(), by_value);

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  while (evals < max_evals && s.back().v - s.front().v > tol) {
    std::vector<double> c(n, 0.0);  // centroid of all but the worst
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) c[j] += s[i].x[j];
    }
    for (double& cj : c) cj /= static_cast<double>(n);

    auto blend = [&](double w) {
      std::vector<double> x(n);
      for (size_t j = 0; j < n; ++j) x[j] = c[j] + w * (s.back().x[j] - c[j]);
      return x;
    };

    std::vector<double> xr = blend(-alpha);
    double vr = eval(xr);
    if (vr < s.front().v) {
      std::vector<double> xe = blend(-gamma);
      double ve = eval(xe);
      if (ve < vr) s.back() = {std::move(xe), ve};
      else s.back() = {std::move(xr), vr};
    } else if (vr < s[n - 1].v) {
      s.back() = {std::move(xr), vr};
    } else {
      bool outside = vr < s.back().v;
      std::vector<double> xc = blend(outside ? -rho : rho);
      double vc = eval(xc);
      if (vc < std::min(vr, s.back().v)) {
        s.back() = {std::move(xc), vc};
      } else {
        for (size_t i = 1; i <= n; ++i) {
          for (size_t j = 0; j < n; ++j)
            s[i].x[j] = s[0].x[j] + sigma * (s[i].x[j] - s[0].x[j]);
          s[i].v = eval(s[i].x);
        }
      }
    }
    std::sort(s.begin(), s.end(), by_value);
  }
  return {s.front().x, s.front().v, evals};
}

}  // namespace transmon
