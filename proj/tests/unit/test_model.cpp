#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "svmch/errors.hpp"
#include "svmch/model.hpp"

using namespace svmch;

namespace {

constexpr double kPi = std::numbers::pi;

double taylor(double x, double y) { return 0.25 * std::sin(2 * kPi * x) * std::cos(2 * kPi * y); }

// Midpoint-rule quadrature of fn over [0,1)^2 on an m x m grid, independent
// of any transform.
template <typename Fn>
double quadrature(std::size_t m, Fn fn) {
  const double h = 1.0 / static_cast<double>(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) s += fn((i + 0.5) * h, (j + 0.5) * h);
  }
  return s * h * h;
}

RealField smooth_random(const GridPtr& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-0.3, 0.3);
  std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
  struct Term {
    double a, px, py;
    int kx, ky;
  };
  std::vector<Term> terms;
  for (int kx = 0; kx <= 3; ++kx) {
    for (int ky = 0; ky <= 3; ++ky) terms.push_back({amp(rng), phase(rng), phase(rng), kx, ky});
  }
  return RealField::from_function(g, [&](double x, double y) {
    double v = 0.0;
    for (const auto& t : terms) v += t.a * std::cos(2 * kPi * t.kx * x + t.px) * std::cos(2 * kPi * t.ky * y + t.py);
    return v;
  });
}

}  // namespace

TEST(BulkDensity, Examples) {
  EXPECT_DOUBLE_EQ(GradFlowModel::f_bulk(0.0), 0.25);
  EXPECT_DOUBLE_EQ(GradFlowModel::f_bulk(1.0), 0.0);
  EXPECT_DOUBLE_EQ(GradFlowModel::f_bulk(2.0), 2.25);
  EXPECT_DOUBLE_EQ(GradFlowModel::f_prime(0.0), 0.0);
  EXPECT_DOUBLE_EQ(GradFlowModel::f_prime(1.0), 0.0);
  EXPECT_DOUBLE_EQ(GradFlowModel::f_prime(2.0), 6.0);
  EXPECT_DOUBLE_EQ(GradFlowModel::f_second(2.0), 11.0);
}

TEST(ChParams, Validate) {
  EXPECT_THROW((ChParams{0.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((ChParams{0.1, -1.0}.validate()), ConfigError);
  EXPECT_NO_THROW((ChParams{0.1, 1.0}.validate()));
}

TEST(FreeEnergy, ConstantStates) {
  const GradFlowModel m({1e-2, 1e-3}, Grid2D::create(16));
  EXPECT_NEAR(m.free_energy(RealField(m.grid_ptr(), 0.0)), 0.25, 1e-15);
  EXPECT_NEAR(m.free_energy(RealField(m.grid_ptr(), 1.0)), 0.0, 1e-15);
}

TEST(FreeEnergy, TaylorDataClosedForm) {
  // Gradient part: eps^2/2 * 0.0625 * 8 pi^2 * 1/4 = eps^2 * 0.0625 * pi^2.
  // Bulk part with A = 0.25: 1/4 (1 - A^2/2 + A^4 * 9/64).
  const double eps = 1e-2;
  const double a = 0.25;
  const double expected = eps * eps * 0.0625 * kPi * kPi + 0.25 * (1.0 - a * a / 2.0 + std::pow(a, 4) * 9.0 / 64.0);
  const GradFlowModel m({eps, 1e-3}, Grid2D::create(128));
  const RealField phi = RealField::from_function(m.grid_ptr(), taylor);
  EXPECT_NEAR(m.free_energy(phi), expected, 1e-13);
  EXPECT_NEAR(m.free_energy(phi), 0.24238651412907, 1e-13);
}

TEST(FreeEnergy, TaylorDataQuadrature) {
  const double eps = 1e-2;
  const double quad = quadrature(1000, [eps](double x, double y) {
    const double sx = std::sin(2 * kPi * x), cx = std::cos(2 * kPi * x);
    const double sy = std::sin(2 * kPi * y), cy = std::cos(2 * kPi * y);
    const double gx = 0.25 * 2 * kPi * cx * cy;
    const double gy = -0.25 * 2 * kPi * sx * sy;
    return GradFlowModel::f_bulk(0.25 * sx * cy) + 0.5 * eps * eps * (gx * gx + gy * gy);
  });
  const GradFlowModel m({eps, 1e-3}, Grid2D::create(128));
  EXPECT_NEAR(m.free_energy(RealField::from_function(m.grid_ptr(), taylor)), quad, 1e-12);
}

TEST(FreeEnergy, PrecomputedTransformAgrees) {
  const GradFlowModel m({5e-2, 1.0}, Grid2D::create(32));
  const RealField phi = smooth_random(m.grid_ptr(), 3);
  EXPECT_DOUBLE_EQ(m.free_energy(phi), m.free_energy(phi, fft_forward(phi)));
}

TEST(ChemicalPotential, Equilibria) {
  const GradFlowModel m({1e-2, 1.0}, Grid2D::create(16));
  for (double c : {0.0, 1.0}) {
    const RealField mu = m.mu(RealField(m.grid_ptr(), c));
    for (double v : mu.values()) EXPECT_NEAR(v, 0.0, 1e-15);
  }
}

TEST(ChemicalPotential, SineEigenfunction) {
  const double eps = 0.1;
  const GradFlowModel m({eps, 1.0}, Grid2D::create(32));
  const RealField phi = RealField::from_function(m.grid_ptr(), [](double x, double) { return std::sin(2 * kPi * x); });
  const RealField mu = m.mu(phi);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double s = phi[k];
    EXPECT_NEAR(mu[k], eps * eps * 4 * kPi * kPi * s + s * s * s - s, 1e-12);
  }
}

TEST(ChemicalPotential, VariationalDerivative) {
  // (mu(phi), v)_h against a centered difference of F along v.
  const GradFlowModel m({5e-2, 1.0}, Grid2D::create(32));
  const RealField phi = smooth_random(m.grid_ptr(), 11);
  const RealField v = smooth_random(m.grid_ptr(), 12);
  const double d = 1e-5;
  RealField plus = phi, minus = phi;
  plus.axpy(d, v);
  minus.axpy(-d, v);
  const double fd = (m.free_energy(plus) - m.free_energy(minus)) / (2 * d);
  EXPECT_NEAR(inner_product(m.mu(phi), v), fd, 1e-7);
}

TEST(DissipationRate, Examples) {
  const GradFlowModel m({1e-2, 1.0}, Grid2D::create(16));
  EXPECT_NEAR(m.dissipation_rate(RealField(m.grid_ptr(), 3.0)), 0.0, 1e-15);
  const RealField s = RealField::from_function(m.grid_ptr(), [](double x, double) { return std::sin(2 * kPi * x); });
  EXPECT_NEAR(m.dissipation_rate(s), 2 * kPi * kPi, 1e-12);
}

TEST(DissipationRate, TaylorQuadratureOracle) {
  // mu = (8 pi^2 eps^2) phi + phi^3 - phi, so grad mu = (8 pi^2 eps^2 + 3 phi^2 - 1) grad phi
  // and (mu, M mu) = lambda |grad mu|^2 integrated.
  const double eps = 1e-2, lambda = 1e-3;
  const double quad = quadrature(1024, [=](double x, double y) {
    const double sx = std::sin(2 * kPi * x), cx = std::cos(2 * kPi * x);
    const double sy = std::sin(2 * kPi * y), cy = std::cos(2 * kPi * y);
    const double p = 0.25 * sx * cy;
    const double gx = 0.25 * 2 * kPi * cx * cy;
    const double gy = -0.25 * 2 * kPi * sx * sy;
    const double c = 8 * kPi * kPi * eps * eps + 3 * p * p - 1;
    return lambda * c * c * (gx * gx + gy * gy);
  });
  const GradFlowModel m({eps, lambda}, Grid2D::create(128));
  const double d = m.dissipation_rate(m.mu(RealField::from_function(m.grid_ptr(), taylor)));
  EXPECT_GT(d, 0.0);
  EXPECT_NEAR(d, quad, 1e-10 * quad);
}

TEST(Dealiasing, FiltersHighModes) {
  auto g = Grid2D::create(16);
  const GradFlowModel m({1e-2, 1.0}, g, GradFlowModel::Options{true});
  const RealField high = RealField::from_function(g, [](double x, double) { return std::cos(2 * kPi * 7 * x); });
  const RealField low = m.filtered(high);
  for (double v : low.values()) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(CrankNicolson, Symbols) {
  const GradFlowModel m({1e-2, 1.0}, Grid2D::create(8));
  const double tau = 1e-3;
  const auto cn = cn_symbols(m, tau);
  for (std::size_t k = 0; k < m.grid().size(); ++k) {
    const double ml = m.ML_symbol()[k];
    EXPECT_DOUBLE_EQ(cn.implicit_inverse[k], 1.0 / (1.0 + 0.5 * tau * ml));
    EXPECT_DOUBLE_EQ(cn.explicit_part[k], 1.0 - 0.5 * tau * ml);
  }
}
