#pragma once

// Periodic grid on the unit square, FFT-backed transforms and the discrete
// L2 inner product. Fourier coefficients use the 1/n^2 forward
// normalization, so the (0,0) coefficient is the field mean and
//   (u, v)_h = h^2 sum_ij u_ij v_ij = sum_k u_hat_k conj(v_hat_k).

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <utility>
#include <vector>

namespace svmch {

/// 64-byte aligned storage so FFT plans can use SIMD paths on field data.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) { return static_cast<T*>(::operator new(count * sizeof(T), kAlignment)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  // Sized construction leaves elements default-initialized (indeterminate
  // for double and std::complex<double> storage); fill explicitly if needed.
  template <typename U>
  void construct(U*) noexcept {}
  template <typename U, typename... Args>
  void construct(U* p, Args&&... args) {
    ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using RealBuffer = std::vector<double, AlignedAllocator<double>>;
using ComplexBuffer = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

class Grid2D;
using GridPtr = std::shared_ptr<const Grid2D>;

/// Per-mode real multiplier table, indexed like SpectralField::coeffs().
using Symbol = std::vector<double>;

/// n x n periodic grid on [0,1)^2. Immutable after construction; owns the
/// wavenumber tables and FFT plans. Share through GridPtr.
class Grid2D {
 public:
  /// n must be a power of two, >= 8.
  static GridPtr create(std::size_t n);

  ~Grid2D();
  Grid2D(const Grid2D&) = delete;
  Grid2D& operator=(const Grid2D&) = delete;

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ * n_; }
  double h() const noexcept { return h_; }

  /// Node coordinate along either axis: i * h.
  double coord(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * n_ + j; }

  /// Integer wavenumbers in {-n/2, ..., n/2 - 1}, per mode.
  std::span<const int> kx() const noexcept { return kx_; }
  std::span<const int> ky() const noexcept { return ky_; }
  /// |k|^2 = (2 pi kx)^2 + (2 pi ky)^2, per mode.
  const Symbol& k2() const noexcept { return k2_; }
  /// 1 for modes kept by the 2/3 rule, 0 otherwise.
  const Symbol& two_thirds_mask() const noexcept { return mask_; }

  // Raw transforms over n*n contiguous, 64-byte aligned arrays.
  // Unnormalized in both directions; callers go through fft_forward /
  // fft_inverse.
  void forward_raw(const std::complex<double>* in, std::complex<double>* out) const;
  void backward_raw(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  explicit Grid2D(std::size_t n);

  struct Plans;

  std::size_t n_;
  double h_;
  std::vector<int> kx_;
  std::vector<int> ky_;
  Symbol k2_;
  Symbol mask_;
  std::unique_ptr<Plans> plans_;
};

/// Nodal values, row-major; node (i, j) sits at (x, y) = (i h, j h).
class RealField {
 public:
  explicit RealField(GridPtr grid);
  RealField(GridPtr grid, std::span<const double> values);
  RealField(GridPtr grid, RealBuffer values);
  RealField(GridPtr grid, double constant);
  /// Values are left unset; for fields about to be overwritten.
  static RealField uninitialized(GridPtr grid);

  /// Evaluates fn(x, y) at every node.
  static RealField from_function(GridPtr grid, const std::function<double(double, double)>& fn);

  const Grid2D& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& at(std::size_t i, std::size_t j) noexcept { return values_[grid_->index(i, j)]; }
  double at(std::size_t i, std::size_t j) const noexcept { return values_[grid_->index(i, j)]; }

  bool all_finite() const noexcept;

  RealField& operator+=(const RealField& o);
  RealField& operator-=(const RealField& o);
  RealField& operator*=(double s);
  /// this += s * o
  RealField& axpy(double s, const RealField& o);

  friend RealField operator+(RealField a, const RealField& b) { return a += b; }
  friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
  friend RealField operator*(double s, RealField a) { return a *= s; }
  friend RealField operator-(RealField a) { return a *= -1.0; }

 private:
  GridPtr grid_;
  RealBuffer values_;
};

/// Fourier coefficients of a scalar field, same mode layout as Grid2D::k2().
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, ComplexBuffer coeffs);
  /// Coefficients are left unset; for fields about to be overwritten.
  static SpectralField uninitialized(GridPtr grid);

  const Grid2D& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
  std::complex<double>& operator[](std::size_t k) noexcept { return coeffs_[k]; }
  std::complex<double> operator[](std::size_t k) const noexcept { return coeffs_[k]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  GridPtr grid_;
  ComplexBuffer coeffs_;
};

SpectralField fft_forward(const RealField& field);
/// Real part of the inverse transform.
RealField fft_inverse(const SpectralField& field);

/// Mode-wise multiplication by a real symbol table.
SpectralField apply_symbol(SpectralField field, std::span<const double> symbol);

/// Applies a symbol in physical space: inverse(symbol * forward(field)).
RealField apply_symbol(const RealField& field, std::span<const double> symbol);

/// (u, v)_h = h^2 sum_ij u_ij v_ij.
double inner_product(const RealField& u, const RealField& v);
/// sum_k Re(u_k conj(v_k)); equals inner_product of the inverse transforms.
double spectral_inner_product(const SpectralField& u, const SpectralField& v);
/// sum_k symbol_k Re(u_k conj(v_k)).
double weighted_inner_product(const SpectralField& u, const SpectralField& v, std::span<const double> symbol);
/// sum_k symbol_k |u_k|^2.
double weighted_norm2(const SpectralField& u, std::span<const double> symbol);

/// (u, 1)_h.
double mean(const RealField& u);

/// Throws ConfigError unless both arguments live on the same grid size.
void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where);

}  // namespace svmch
