#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "talg/spectral.hpp"

namespace talg {

struct ToleranceProfile {
  double eq_tol = 1e-10;
  // Relative to the largest spectral magnitude involved, never below cone_floor.
  double cone_tol = 1e-10;
  double cone_floor = 1e-12;
  // Singular-value cutoff factor; unset means machine epsilon * max(M1, M2).
  std::optional<double> rank_tol_factor;

  double cone_threshold(double scale) const;
  double rank_factor(std::size_t rows, std::size_t cols) const;
};

// An element of the t-scalar algebra. Both the spatial entries and the
// spectrum are kept; values are immutable after construction.
namespace detail {
struct TScalarAccess;
}

class TScalar {
 public:
  TScalar() : TScalar(TShape{}) {}
  explicit TScalar(const TShape& shape);  // zero

  static TScalar zero(const TShape& shape) { return TScalar(shape); }
  static TScalar one(const TShape& shape);
  static TScalar from_spatial(const TShape& shape, std::vector<cplx> entries);
  static TScalar from_spectrum(const TShape& shape, std::vector<cplx> spectrum);
  // Constant spectrum c, i.e. c * E_T.
  static TScalar constant(const TShape& shape, cplx c);

  const TShape& shape() const noexcept { return shape_; }
  std::span<const cplx> spatial() const noexcept { return spatial_; }
  std::span<const cplx> spectrum() const noexcept { return spectrum_; }
  cplx spatial(std::size_t flat) const { return spatial_.at(flat); }
  cplx spectrum(std::size_t k) const { return spectrum_.at(k); }
  // The entry at multi-index (0, ..., 0).
  cplx inception() const { return spatial_[0]; }

 private:
  friend struct detail::TScalarAccess;
  TScalar(TShape shape, std::vector<cplx> spatial, std::vector<cplx> spectrum);

  TShape shape_;
  std::vector<cplx> spatial_;
  std::vector<cplx> spectrum_;
};

TScalar operator+(const TScalar& x, const TScalar& y);
TScalar operator-(const TScalar& x, const TScalar& y);
TScalar operator-(const TScalar& x);
TScalar operator*(cplx a, const TScalar& x);
// The algebra product: circular convolution, computed spectrally.
TScalar operator*(const TScalar& x, const TScalar& y);

inline TScalar add(const TScalar& x, const TScalar& y) { return x + y; }
inline TScalar negate(const TScalar& x) { return -x; }
inline TScalar scale(cplx a, const TScalar& x) { return a * x; }
inline TScalar mul(const TScalar& x, const TScalar& y) { return x * y; }

// p = 0 gives E_T.
TScalar pow(const TScalar& x, unsigned p);
TScalar conj(const TScalar& x);
TScalar re(const TScalar& x);
TScalar im(const TScalar& x);

bool is_self_conjugate(const TScalar& x, const ToleranceProfile& tol = {});
// Throws DomainError when x is not self-conjugate.
bool is_nonnegative(const TScalar& x, const ToleranceProfile& tol = {});
// x <= y in the partial order. Throws DomainError unless both are self-conjugate.
bool partial_le(const TScalar& x, const TScalar& y, const ToleranceProfile& tol = {});

TScalar nth_root(const TScalar& x, unsigned p, const ToleranceProfile& tol = {});
TScalar abs_r(const TScalar& x);
// conj(x) * y
TScalar psi(const TScalar& x, const TScalar& y);
// Sum of conj(x_i) y_i over the spatial entries.
cplx inner_canonical(const TScalar& x, const TScalar& y);
double norm_canonical(const TScalar& x);

// |x - y| <= eq_tol * max(|x|, |y|) + abs_floor in the canonical norm.
bool approx_equal(const TScalar& x, const TScalar& y, double rel_tol = 1e-10,
                  double abs_floor = 1e-12);

struct IdempotentSet {
  TShape shape;
  std::vector<TScalar> members;
};

// Q_k for k in [0, K): spectrum is the k-th standard basis vector.
TScalar primitive_idempotent(const TShape& shape, std::size_t k);
IdempotentSet primitive_idempotents(const TShape& shape);
bool is_idempotent(const TScalar& x, const ToleranceProfile& tol = {});

// K * <Q_k, y>, 0-based k.
cplx tau(std::size_t k, const TScalar& y);
std::vector<cplx> series_coords(const TScalar& y);

// Spectral slices whose magnitude is at or below the cone threshold.
std::vector<std::size_t> dead_slices(const TScalar& x, const ToleranceProfile& tol = {});
bool is_invertible(const TScalar& x, const ToleranceProfile& tol = {});
// Throws SingularError listing the dead slices.
TScalar invert(const TScalar& x, const ToleranceProfile& tol = {});
TScalar tscalar_rank(const TScalar& x, const ToleranceProfile& tol = {});

}  // namespace talg
