#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "svmch/errors.hpp"
#include "svmch/svm_integrator.hpp"

namespace svmch {

namespace {

constexpr double kSingularSlope = 1e-14;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Roots farther out than this are never admissible steps.
constexpr double kSearchCap = 1e6;

double horner(std::span<const double> c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

// Bisection on a bracket with a sign change, run until the midpoint stops
// moving.
double bisect(std::span<const double> c, double a, double b, double fa) {
  for (int it = 0; it < 2000; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = horner(c, m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  const double fa_abs = std::abs(horner(c, a));
  const double fb_abs = std::abs(horner(c, b));
  return fa_abs <= fb_abs ? a : b;
}

}  // namespace

std::vector<double> real_roots_in(std::span<const double> c, double lo, double hi, double touch_tol) {
  std::size_t deg = c.size();
  while (deg > 0 && c[deg - 1] == 0.0) --deg;
  if (deg <= 1 || !(lo <= hi)) return {};
  c = c.first(deg);
  if (deg == 2) {
    const double r = -c[0] / c[1];
    if (r >= lo && r <= hi) return {r};
    return {};
  }

  // Between consecutive critical points the polynomial is monotone, so each
  // piece holds at most one simple root.
  std::vector<double> dc(deg - 1);
  for (std::size_t i = 1; i < deg; ++i) dc[i - 1] = static_cast<double>(i) * c[i];
  std::vector<double> knots{lo};
  for (double x : real_roots_in(dc, lo, hi)) {
    if (x > knots.back() && x < hi) knots.push_back(x);
  }
  knots.push_back(hi);

  std::vector<double> roots;
  auto add = [&roots](double r) {
    if (roots.empty() || r != roots.back()) roots.push_back(r);
  };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    const double fa = horner(c, a);
    const double fb = horner(c, b);
    if (fa == 0.0) {
      add(a);
      continue;
    }
    const bool interior_knot = i > 0;
    if (interior_knot && std::abs(fa) <= touch_tol) add(a);
    if (fb == 0.0) continue;  // picked up as the next piece's left end
    if ((fa < 0.0) != (fb < 0.0)) add(bisect(c, a, b, fa));
  }
  if (horner(c, hi) == 0.0) add(hi);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

BetaSolution solve_beta(const QuarticPoly& poly, double tol, int max_iters, double beta_limit) {
  if (!(tol > 0.0)) throw ConfigError("solve_beta: tolerance must be positive");
  const double threshold = tol * std::max(1.0, std::abs(poly.c[0]));
  if (std::abs(poly.c[0]) <= threshold) return BetaSolution{0.0, 0};

  if (std::abs(poly.c[1]) < kSingularSlope) {
    std::ostringstream msg;
    msg << "energy constraint has zero slope at beta = 0 (c0 = " << poly.c[0] << ", c1 = " << poly.c[1] << ")";
    throw StepFailure(StepFailureKind::SingularConstraint, msg.str());
  }

  double beta = 0.0;
  int iters = 0;
  bool converged = false;
  for (iters = 1; iters <= max_iters; ++iters) {
    const double d = poly.derivative(beta);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double step = poly(beta) / d;
    beta -= step;
    if (!std::isfinite(beta)) break;
    // A step below rounding of beta means u has hit its noise floor.
    if (std::abs(poly(beta)) <= threshold || std::abs(step) <= 4 * kEps * std::abs(beta)) {
      converged = true;
      break;
    }
  }
  iters = std::min(iters, max_iters);

  // Bracket every real root that could be closer to zero than the Newton
  // iterate (or, without one, anywhere admissible).
  double reach = converged ? std::abs(beta) : std::min(beta_limit, kSearchCap);
  if (!converged && !std::isfinite(reach)) reach = kSearchCap;
  std::vector<double> candidates = real_roots_in(poly.c, -reach, reach, threshold);
  if (converged) candidates.push_back(beta);
  if (candidates.empty()) {
    std::ostringstream msg;
    msg << "Newton did not converge in " << max_iters << " iterations and no root lies within |beta| <= " << reach;
    throw StepFailure(StepFailureKind::RootDiverged, msg.str());
  }
  const double best =
      *std::min_element(candidates.begin(), candidates.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (std::abs(best) > beta_limit) {
    std::ostringstream msg;
    msg << "beta = " << best << " exceeds the admissible bound " << beta_limit;
    throw StepFailure(StepFailureKind::RootDiverged, msg.str());
  }
  return BetaSolution{best, iters};
}

}  // namespace svmch
