#include "svmch/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "svmch/errors.hpp"

namespace svmch {

namespace {

// The FFTW planner is not thread-safe; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

fftw_complex* as_fftw(const std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Per-thread intermediate buffer for the complex transform input/output.
ComplexBuffer& scratch(std::size_t size) {
  thread_local ComplexBuffer buf;
  if (buf.size() != size) buf.resize(size);
  return buf;
}

}  // namespace

struct Grid2D::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

GridPtr Grid2D::create(std::size_t n) {
  if (n < 8 || !is_power_of_two(n)) {
    throw ConfigError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  return GridPtr(new Grid2D(n));
}

Grid2D::Grid2D(std::size_t n)
    : n_(n), h_(1.0 / static_cast<double>(n)), plans_(std::make_unique<Plans>()) {
  const int half = static_cast<int>(n / 2);
  const double two_pi = 2.0 * std::numbers::pi;
  kx_.resize(n * n);
  ky_.resize(n * n);
  k2_.resize(n * n);
  mask_.resize(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    const int kx = static_cast<int>(p) < half ? static_cast<int>(p) : static_cast<int>(p) - static_cast<int>(n);
    for (std::size_t q = 0; q < n; ++q) {
      const int ky = static_cast<int>(q) < half ? static_cast<int>(q) : static_cast<int>(q) - static_cast<int>(n);
      const std::size_t idx = index(p, q);
      kx_[idx] = kx;
      ky_[idx] = ky;
      const double ax = two_pi * kx;
      const double ay = two_pi * ky;
      k2_[idx] = ax * ax + ay * ay;
      // 2/3 rule: keep |kx|, |ky| < n/3.
      const bool keep = 3 * std::abs(kx) < static_cast<int>(n) && 3 * std::abs(ky) < static_cast<int>(n);
      mask_[idx] = keep ? 1.0 : 0.0;
    }
  }

  std::lock_guard lock(planner_mutex());
  auto* in = fftw_alloc_complex(n * n);
  auto* out = fftw_alloc_complex(n * n);
  const int ni = static_cast<int>(n);
  // FFTW_ESTIMATE keeps the chosen algorithm, and so the rounding, fixed
  // from run to run. Plans assume the alignment of fftw_malloc, which the
  // 64-byte field buffers satisfy.
  plans_->forward = fftw_plan_dft_2d(ni, ni, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_2d(ni, ni, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
}

Grid2D::~Grid2D() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void Grid2D::forward_raw(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(plans_->forward, as_fftw(in), as_fftw(out));
}

void Grid2D::backward_raw(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(plans_->backward, as_fftw(in), as_fftw(out));
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
  if (a.n() != b.n()) {
    throw ConfigError(std::string(where) + ": grid mismatch (" + std::to_string(a.n()) + " vs " +
                      std::to_string(b.n()) + ")");
  }
}

// RealField ------------------------------------------------------------------

RealField::RealField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RealField::RealField(GridPtr grid, std::span<const double> values)
    : RealField(std::move(grid), RealBuffer(values.begin(), values.end())) {}

RealField::RealField(GridPtr grid, RealBuffer values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw ConfigError("RealField: expected " + std::to_string(grid_->size()) + " values, got " +
                      std::to_string(values_.size()));
  }
}

RealField::RealField(GridPtr grid, double constant)
    : grid_(std::move(grid)), values_(grid_->size(), constant) {}

RealField RealField::uninitialized(GridPtr grid) {
  const std::size_t size = grid->size();
  return RealField(std::move(grid), RealBuffer(size));
}

RealField RealField::from_function(GridPtr grid, const std::function<double(double, double)>& fn) {
  RealField f(grid);
  const std::size_t n = grid->n();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid->coord(i);
    for (std::size_t j = 0; j < n; ++j) {
      f.at(i, j) = fn(x, grid->coord(j));
    }
  }
  return f;
}

bool RealField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RealField& RealField::operator+=(const RealField& o) {
  require_same_grid(*grid_, o.grid(), "RealField::operator+=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

RealField& RealField::operator-=(const RealField& o) {
  require_same_grid(*grid_, o.grid(), "RealField::operator-=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

RealField& RealField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

RealField& RealField::axpy(double s, const RealField& o) {
  require_same_grid(*grid_, o.grid(), "RealField::axpy");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * o.values_[k];
  return *this;
}

// SpectralField --------------------------------------------------------------

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), coeffs_(grid_->size(), std::complex<double>{}) {}

SpectralField SpectralField::uninitialized(GridPtr grid) {
  const std::size_t size = grid->size();
  return SpectralField(std::move(grid), ComplexBuffer(size));
}

SpectralField::SpectralField(GridPtr grid, ComplexBuffer coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->size()) {
    throw ConfigError("SpectralField: expected " + std::to_string(grid_->size()) + " coefficients, got " +
                      std::to_string(coeffs_.size()));
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*grid_, o.grid(), "SpectralField::operator+=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*grid_, o.grid(), "SpectralField::operator-=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

// Transforms -----------------------------------------------------------------

SpectralField fft_forward(const RealField& field) {
  const Grid2D& g = field.grid();
  ComplexBuffer& in = scratch(g.size());
  std::copy(field.values().begin(), field.values().end(), in.begin());
  ComplexBuffer out(g.size());
  g.forward_raw(in.data(), out.data());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : out) c *= scale;
  return SpectralField(field.grid_ptr(), std::move(out));
}

RealField fft_inverse(const SpectralField& field) {
  const Grid2D& g = field.grid();
  ComplexBuffer& out = scratch(g.size());
  g.backward_raw(field.coeffs().data(), out.data());
  RealBuffer values(g.size());
  std::transform(out.begin(), out.end(), values.begin(), [](const std::complex<double>& c) { return c.real(); });
  return RealField(field.grid_ptr(), std::move(values));
}

SpectralField apply_symbol(SpectralField field, std::span<const double> symbol) {
  if (symbol.size() != field.size()) {
    throw ConfigError("apply_symbol: symbol has " + std::to_string(symbol.size()) + " entries, field has " +
                      std::to_string(field.size()));
  }
  auto c = field.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= symbol[k];
  return field;
}

RealField apply_symbol(const RealField& field, std::span<const double> symbol) {
  return fft_inverse(apply_symbol(fft_forward(field), symbol));
}

double inner_product(const RealField& u, const RealField& v) {
  require_same_grid(u.grid(), v.grid(), "inner_product");
  const auto a = u.values();
  const auto b = v.values();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  const double h = u.grid().h();
  return h * h * s;
}

namespace {

// sum_k w_k Re(a_k conj(b_k)), four partial sums so the loop pipelines.
// Sizes are n^2 with n a power of two >= 8, so divisible by 4.
template <typename Weight>
double weighted_real_dot(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                         Weight weight) {
  const double* x = reinterpret_cast<const double*>(a.data());
  const double* y = reinterpret_cast<const double*>(b.data());
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); k += 4) {
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t m = k + j;
      s[j] += weight(m) * (x[2 * m] * y[2 * m] + x[2 * m + 1] * y[2 * m + 1]);
    }
  }
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace

double spectral_inner_product(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid(), "spectral_inner_product");
  return weighted_real_dot(u.coeffs(), v.coeffs(), [](std::size_t) { return 1.0; });
}

double weighted_inner_product(const SpectralField& u, const SpectralField& v, std::span<const double> symbol) {
  require_same_grid(u.grid(), v.grid(), "weighted_inner_product");
  if (symbol.size() != u.size()) throw ConfigError("weighted_inner_product: symbol size mismatch");
  return weighted_real_dot(u.coeffs(), v.coeffs(), [symbol](std::size_t k) { return symbol[k]; });
}

double weighted_norm2(const SpectralField& u, std::span<const double> symbol) {
  if (symbol.size() != u.size()) throw ConfigError("weighted_norm2: symbol size mismatch");
  return weighted_real_dot(u.coeffs(), u.coeffs(), [symbol](std::size_t k) { return symbol[k]; });
}

double mean(const RealField& u) {
  // Neumaier summation; mass drift is judged at the 1e-12 level.
  double s = 0.0, c = 0.0;
  for (double v : u.values()) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return (s + c) / static_cast<double>(u.size());
}

const char* to_string(StepFailureKind kind) {
  switch (kind) {
    case StepFailureKind::SingularConstraint: return "SingularConstraint";
    case StepFailureKind::RootDiverged: return "RootDiverged";
    case StepFailureKind::PicardDiverged: return "PicardDiverged";
    case StepFailureKind::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

}  // namespace svmch
