#include "talg/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "talg/errors.hpp"

namespace talg {

namespace {

// The FFTW planner is not reentrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_length(const TShape& shape, std::size_t n, std::size_t batch = 1) {
  if (n != shape.size() * batch) {
    std::ostringstream os;
    os << "array of length " << n << " does not match shape " << shape.to_string();
    if (batch != 1) os << " x " << batch;
    throw ShapeError(os.str());
  }
}

}  // namespace

TShape::TShape(std::initializer_list<std::size_t> dims) : TShape(std::vector<std::size_t>(dims)) {}

TShape::TShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  for (std::size_t d : dims_) {
    if (d == 0) throw DimensionError("t-scalar mode size must be positive");
    size_ *= d;
  }
}

TShape TShape::repeated(std::size_t dim, std::size_t times) {
  return TShape(std::vector<std::size_t>(times, dim));
}

std::size_t TShape::flat_index(std::span<const std::size_t> multi) const {
  if (multi.size() != dims_.size()) throw ShapeError("multi-index has wrong order");
  std::size_t k = 0;
  for (std::size_t n = 0; n < dims_.size(); ++n) {
    if (multi[n] >= dims_[n]) throw IndexError("multi-index out of range");
    k = k * dims_[n] + multi[n];
  }
  return k;
}

std::vector<std::size_t> TShape::multi_index(std::size_t flat) const {
  if (flat >= size_) throw IndexError("flat index out of range");
  std::vector<std::size_t> multi(dims_.size());
  for (std::size_t n = dims_.size(); n-- > 0;) {
    multi[n] = flat % dims_[n];
    flat /= dims_[n];
  }
  return multi;
}

TShape TShape::concat(const TShape& tail) const {
  std::vector<std::size_t> d = dims_;
  d.insert(d.end(), tail.dims_.begin(), tail.dims_.end());
  return TShape(std::move(d));
}

std::string TShape::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t n = 0; n < dims_.size(); ++n) os << (n ? "," : "") << dims_[n];
  if (dims_.size() == 1) os << ',';
  os << ')';
  return os.str();
}

Eigen::MatrixXcd fourier_matrix(std::size_t n) {
  if (n == 0) throw DimensionError("Fourier matrix size must be positive");
  Eigen::MatrixXcd w(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      // reduce the exponent first so large products keep full accuracy
      const double phase = -2.0 * std::numbers::pi * double((a * b) % n) / double(n);
      w(a, b) = std::polar(1.0, phase);
    }
  return w;
}

void transform_modes(std::span<cplx> data, const TShape& shape, std::size_t batch,
                     Direction dir) {
  check_length(shape, data.size(), batch);
  const std::size_t k = shape.size();
  if (k == 1 || batch == 0) return;

  std::vector<int> n;
  for (std::size_t d : shape.dims())
    if (d > 1) n.push_back(static_cast<int>(d));

  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    // Unit-size modes drop out; the stride over the remaining modes is still
    // `batch` because the layout is row-major.
    plan = fftw_plan_many_dft(static_cast<int>(n.size()), n.data(), static_cast<int>(batch),
                              buf, nullptr, static_cast<int>(batch), 1, buf, nullptr,
                              static_cast<int>(batch), 1, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw NumericError("FFTW could not create a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  if (dir == Direction::inverse) {
    const double scale = 1.0 / double(k);
    for (auto& v : data) v *= scale;
  }
}

Spectrum dft(const TShape& shape, std::span<const cplx> spatial) {
  check_length(shape, spatial.size());
  Spectrum s{shape, std::vector<cplx>(spatial.begin(), spatial.end())};
  transform_modes(s.entries, shape, 1, Direction::forward);
  return s;
}

std::vector<cplx> idft(const Spectrum& s) {
  check_length(s.shape, s.entries.size());
  std::vector<cplx> x = s.entries;
  transform_modes(x, s.shape, 1, Direction::inverse);
  return x;
}

Spectrum dft_by_mode_products(const TShape& shape, std::span<const cplx> spatial) {
  check_length(shape, spatial.size());
  std::vector<cplx> cur(spatial.begin(), spatial.end());
  std::vector<cplx> next(cur.size());
  std::size_t outer = 1;
  for (std::size_t mode = 0; mode < shape.order(); ++mode) {
    const std::size_t in = shape.dims()[mode];
    const std::size_t inner = shape.size() / (outer * in);
    const Eigen::MatrixXcd w = fourier_matrix(in);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t f = 0; f < in; ++f)
        for (std::size_t j = 0; j < inner; ++j) {
          cplx acc = 0;
          for (std::size_t t = 0; t < in; ++t) acc += w(f, t) * cur[(o * in + t) * inner + j];
          next[(o * in + f) * inner + j] = acc;
        }
    cur.swap(next);
    outer *= in;
  }
  return {shape, std::move(cur)};
}

}  // namespace talg
