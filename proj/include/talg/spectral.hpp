#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace talg {

using cplx = std::complex<double>;

// Mode sizes (I_1, ..., I_N) of a t-scalar. The empty shape is allowed and
// has K = 1, as does any shape whose dims are all 1.
class TShape {
 public:
  TShape() = default;
  TShape(std::initializer_list<std::size_t> dims);
  explicit TShape(std::vector<std::size_t> dims);

  // n copies of the same mode size, e.g. repeated(3, 4) = (3,3,3,3).
  static TShape repeated(std::size_t dim, std::size_t times);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t order() const noexcept { return dims_.size(); }
  // K, the number of entries and of spectral slices.
  std::size_t size() const noexcept { return size_; }

  // Row-major, last index fastest.
  std::size_t flat_index(std::span<const std::size_t> multi) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;

  TShape concat(const TShape& tail) const;
  std::string to_string() const;

  friend bool operator==(const TShape&, const TShape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t size_ = 1;
};

struct Spectrum {
  TShape shape;
  std::vector<cplx> entries;
};

// W(m1, m2) = exp(-2 pi i m1 m2 / n), 0-based.
Eigen::MatrixXcd fourier_matrix(std::size_t n);

Spectrum dft(const TShape& shape, std::span<const cplx> spatial);
std::vector<cplx> idft(const Spectrum& s);

// Reference transform: one dense Fourier-matrix product per mode. O(K * sum I_n).
Spectrum dft_by_mode_products(const TShape& shape, std::span<const cplx> spatial);

enum class Direction { forward, inverse };

// In-place transform of every t-scalar in an array laid out as
// (i_1, ..., i_N, b) with b in [0, batch) fastest. The inverse includes 1/K.
// Used by t-matrices, where batch = M1 * M2.
void transform_modes(std::span<cplx> data, const TShape& shape, std::size_t batch,
                     Direction dir);

}  // namespace talg
