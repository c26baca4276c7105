#include "talg/tscalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "talg/errors.hpp"

namespace talg {

namespace detail {
// Builds a value from both representations when the caller computed them
// consistently (linear operations), skipping a transform.
struct TScalarAccess {
  static TScalar make(TShape shape, std::vector<cplx> spatial, std::vector<cplx> spectrum) {
    return TScalar(std::move(shape), std::move(spatial), std::move(spectrum));
  }
};
}  // namespace detail

namespace {

using detail::TScalarAccess;

void require_same_shape(const TScalar& x, const TScalar& y) {
  if (!(x.shape() == y.shape()))
    throw ShapeError("t-scalar shapes differ: " + x.shape().to_string() + " vs " +
                     y.shape().to_string());
}

double max_abs(std::span<const cplx> v) {
  double m = 0;
  for (const cplx& c : v) m = std::max(m, std::abs(c));
  return m;
}

std::vector<cplx> copy(std::span<const cplx> v) { return {v.begin(), v.end()}; }

template <class Fn>
TScalar map_spectrum(const TScalar& x, Fn fn) {
  std::vector<cplx> s = copy(x.spectrum());
  for (auto& v : s) v = fn(v);
  return TScalar::from_spectrum(x.shape(), std::move(s));
}

template <class Fn>
TScalar zip_spectrum(const TScalar& x, const TScalar& y, Fn fn) {
  require_same_shape(x, y);
  std::vector<cplx> s = copy(x.spectrum());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = fn(s[k], y.spectrum()[k]);
  return TScalar::from_spectrum(x.shape(), std::move(s));
}

void require_self_conjugate(const TScalar& x, double thr) {
  for (const cplx& v : x.spectrum())
    if (std::abs(v.imag()) > thr)
      throw DomainError("t-scalar is not self-conjugate (spectrum has imaginary part " +
                        std::to_string(v.imag()) + ")");
}

}  // namespace

double ToleranceProfile::cone_threshold(double scale) const {
  return std::max(cone_tol * scale, cone_floor);
}

double ToleranceProfile::rank_factor(std::size_t rows, std::size_t cols) const {
  if (rank_tol_factor) return *rank_tol_factor;
  return std::numeric_limits<double>::epsilon() * double(std::max(rows, cols));
}

TScalar::TScalar(const TShape& shape)
    : shape_(shape), spatial_(shape.size()), spectrum_(shape.size()) {}

TScalar::TScalar(TShape shape, std::vector<cplx> spatial, std::vector<cplx> spectrum)
    : shape_(std::move(shape)), spatial_(std::move(spatial)), spectrum_(std::move(spectrum)) {}

TScalar TScalar::one(const TShape& shape) { return constant(shape, 1.0); }

TScalar TScalar::constant(const TShape& shape, cplx c) {
  std::vector<cplx> x(shape.size());
  x[0] = c;
  return TScalar(shape, std::move(x), std::vector<cplx>(shape.size(), c));
}

TScalar TScalar::from_spatial(const TShape& shape, std::vector<cplx> entries) {
  Spectrum s = dft(shape, entries);
  return TScalar(shape, std::move(entries), std::move(s.entries));
}

TScalar TScalar::from_spectrum(const TShape& shape, std::vector<cplx> spectrum) {
  Spectrum s{shape, std::move(spectrum)};
  std::vector<cplx> x = idft(s);
  return TScalar(shape, std::move(x), std::move(s.entries));
}

TScalar operator+(const TScalar& x, const TScalar& y) {
  require_same_shape(x, y);
  std::vector<cplx> a = copy(x.spatial());
  std::vector<cplx> b = copy(x.spectrum());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] += y.spatial()[i];
    b[i] += y.spectrum()[i];
  }
  return TScalarAccess::make(x.shape(), std::move(a), std::move(b));
}

TScalar operator*(cplx c, const TScalar& x) {
  std::vector<cplx> a = copy(x.spatial());
  std::vector<cplx> b = copy(x.spectrum());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] *= c;
    b[i] *= c;
  }
  return TScalarAccess::make(x.shape(), std::move(a), std::move(b));
}

TScalar operator-(const TScalar& x) { return cplx(-1.0) * x; }

TScalar operator-(const TScalar& x, const TScalar& y) { return x + (-y); }

TScalar operator*(const TScalar& x, const TScalar& y) {
  return zip_spectrum(x, y, [](cplx a, cplx b) { return a * b; });
}

TScalar pow(const TScalar& x, unsigned p) {
  if (p == 0) return TScalar::one(x.shape());
  return map_spectrum(x, [p](cplx v) {
    cplx r = v;
    for (unsigned i = 1; i < p; ++i) r *= v;
    return r;
  });
}

TScalar conj(const TScalar& x) {
  // Spatially this is the index reflection i -> (-i mod I_n) with conjugated
  // entries; spectrally it is plain conjugation.
  const TShape& sh = x.shape();
  std::vector<cplx> a(sh.size());
  for (std::size_t flat = 0; flat < sh.size(); ++flat) {
    std::vector<std::size_t> mi = sh.multi_index(flat);
    for (std::size_t n = 0; n < mi.size(); ++n) mi[n] = (sh.dims()[n] - mi[n]) % sh.dims()[n];
    a[sh.flat_index(mi)] = std::conj(x.spatial()[flat]);
  }
  std::vector<cplx> b = copy(x.spectrum());
  for (auto& v : b) v = std::conj(v);
  return TScalarAccess::make(sh, std::move(a), std::move(b));
}

TScalar re(const TScalar& x) { return 0.5 * (x + conj(x)); }

TScalar im(const TScalar& x) { return cplx(0.0, -0.5) * (x - conj(x)); }

bool is_self_conjugate(const TScalar& x, const ToleranceProfile& tol) {
  const double thr = tol.cone_threshold(max_abs(x.spectrum()));
  return std::all_of(x.spectrum().begin(), x.spectrum().end(),
                     [thr](cplx v) { return std::abs(v.imag()) <= thr; });
}

bool is_nonnegative(const TScalar& x, const ToleranceProfile& tol) {
  const double thr = tol.cone_threshold(max_abs(x.spectrum()));
  require_self_conjugate(x, thr);
  return std::all_of(x.spectrum().begin(), x.spectrum().end(),
                     [thr](cplx v) { return v.real() >= -thr; });
}

bool partial_le(const TScalar& x, const TScalar& y, const ToleranceProfile& tol) {
  require_same_shape(x, y);
  const double thr =
      tol.cone_threshold(std::max(max_abs(x.spectrum()), max_abs(y.spectrum())));
  require_self_conjugate(x, thr);
  require_self_conjugate(y, thr);
  for (std::size_t k = 0; k < x.shape().size(); ++k)
    if (y.spectrum()[k].real() - x.spectrum()[k].real() < -thr) return false;
  return true;
}

TScalar nth_root(const TScalar& x, unsigned p, const ToleranceProfile& tol) {
  if (p == 0) throw DomainError("root degree must be at least 1");
  if (!is_nonnegative(x, tol)) throw DomainError("root of a t-scalar that is not nonnegative");
  const double e = 1.0 / double(p);
  std::vector<cplx> s(x.shape().size());
  for (std::size_t k = 0; k < s.size(); ++k)
    s[k] = std::pow(std::max(x.spectrum()[k].real(), 0.0), e);
  return TScalar::from_spectrum(x.shape(), std::move(s));
}

TScalar abs_r(const TScalar& x) {
  return map_spectrum(x, [](cplx v) { return cplx(std::abs(v), 0.0); });
}

TScalar psi(const TScalar& x, const TScalar& y) {
  return zip_spectrum(x, y, [](cplx a, cplx b) { return std::conj(a) * b; });
}

cplx inner_canonical(const TScalar& x, const TScalar& y) {
  require_same_shape(x, y);
  cplx acc = 0;
  for (std::size_t i = 0; i < x.shape().size(); ++i)
    acc += std::conj(x.spatial()[i]) * y.spatial()[i];
  return acc;
}

double norm_canonical(const TScalar& x) {
  double acc = 0;
  for (const cplx& v : x.spatial()) acc += std::norm(v);
  return std::sqrt(acc);
}

bool approx_equal(const TScalar& x, const TScalar& y, double rel_tol, double abs_floor) {
  if (!(x.shape() == y.shape())) return false;
  const double d = norm_canonical(x - y);
  return d <= rel_tol * std::max(norm_canonical(x), norm_canonical(y)) + abs_floor;
}

TScalar primitive_idempotent(const TShape& shape, std::size_t k) {
  if (k >= shape.size()) throw IndexError("slice index out of range");
  std::vector<cplx> s(shape.size());
  s[k] = 1.0;
  return TScalar::from_spectrum(shape, std::move(s));
}

IdempotentSet primitive_idempotents(const TShape& shape) {
  IdempotentSet set{shape, {}};
  set.members.reserve(shape.size());
  for (std::size_t k = 0; k < shape.size(); ++k) set.members.push_back(primitive_idempotent(shape, k));
  return set;
}

bool is_idempotent(const TScalar& x, const ToleranceProfile& tol) {
  const double thr = tol.cone_threshold(std::max(1.0, max_abs(x.spectrum())));
  return std::all_of(x.spectrum().begin(), x.spectrum().end(), [thr](cplx v) {
    return std::abs(v) <= thr || std::abs(v - 1.0) <= thr;
  });
}

cplx tau(std::size_t k, const TScalar& y) {
  const TShape& sh = y.shape();
  return double(sh.size()) * inner_canonical(primitive_idempotent(sh, k), y);
}

std::vector<cplx> series_coords(const TScalar& y) {
  std::vector<cplx> c(y.shape().size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = tau(k, y);
  return c;
}

std::vector<std::size_t> dead_slices(const TScalar& x, const ToleranceProfile& tol) {
  const double thr = tol.cone_threshold(max_abs(x.spectrum()));
  std::vector<std::size_t> dead;
  for (std::size_t k = 0; k < x.shape().size(); ++k)
    if (std::abs(x.spectrum()[k]) <= thr) dead.push_back(k);
  return dead;
}

bool is_invertible(const TScalar& x, const ToleranceProfile& tol) {
  return dead_slices(x, tol).empty();
}

TScalar invert(const TScalar& x, const ToleranceProfile& tol) {
  std::vector<std::size_t> dead = dead_slices(x, tol);
  if (!dead.empty()) {
    std::ostringstream os;
    os << "t-scalar is not invertible; zero spectral slices:";
    for (std::size_t k : dead) os << ' ' << k;
    throw SingularError(os.str(), std::move(dead));
  }
  return map_spectrum(x, [](cplx v) { return 1.0 / v; });
}

TScalar tscalar_rank(const TScalar& x, const ToleranceProfile& tol) {
  const double thr = tol.cone_threshold(max_abs(x.spectrum()));
  return map_spectrum(x, [thr](cplx v) { return cplx(std::abs(v) > thr ? 1.0 : 0.0, 0.0); });
}

}  // namespace talg
