#include "talg/tmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "talg/errors.hpp"
#include "talg/parallel.hpp"

namespace talg {

namespace {

std::string dims_str(const TMatrix& x) {
  std::ostringstream os;
  os << x.rows() << 'x' << x.cols() << " over " << x.shape().to_string();
  return os.str();
}

void require_same_dims(const TMatrix& x, const TMatrix& y, const char* op) {
  if (!(x.shape() == y.shape()))
    throw ShapeError(std::string(op) + ": t-scalar shapes differ");
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError(std::string(op) + ": " + dims_str(x) + " vs " + dims_str(y));
}

// Applies fn(k) -> matrix over all slices into a fresh rows x cols t-matrix.
template <class Fn>
TMatrix map_slices(const TShape& shape, std::size_t rows, std::size_t cols, Fn fn) {
  TMatrix out(shape, rows, cols);
  parallel_for(shape.size(), [&](std::size_t k) { out.mutable_slice(k) = fn(k); });
  return out;
}

// psi spectrum entry k: sum of conj(x) y over the slice.
cplx slice_inner(const SliceView& a, const SliceView& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

}  // namespace

TMatrix::TMatrix(const TShape& shape, std::size_t rows, std::size_t cols)
    : shape_(shape), rows_(rows), cols_(cols), data_(shape.size() * rows * cols) {}

TMatrix TMatrix::from_spatial(SpatialTMatrix a) {
  if (a.values.size() != a.shape.size() * a.rows * a.cols)
    throw DimensionError("spatial array length does not match shape and matrix size");
  transform_modes(a.values, a.shape, a.rows * a.cols, Direction::forward);
  TMatrix out;
  out.shape_ = a.shape;
  out.rows_ = a.rows;
  out.cols_ = a.cols;
  out.data_ = std::move(a.values);
  return out;
}

SpatialTMatrix TMatrix::to_spatial() const {
  SpatialTMatrix a{shape_, rows_, cols_, data_};
  transform_modes(a.values, a.shape, rows_ * cols_, Direction::inverse);
  return a;
}

TMatrix TMatrix::assemble(const TShape& shape, const std::vector<CMatrix>& slices) {
  if (slices.size() != shape.size())
    throw DimensionError("expected " + std::to_string(shape.size()) + " slices, got " +
                         std::to_string(slices.size()));
  const std::size_t r = slices.empty() ? 0 : slices[0].rows();
  const std::size_t c = slices.empty() ? 0 : slices[0].cols();
  TMatrix out(shape, r, c);
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (std::size_t(slices[k].rows()) != r || std::size_t(slices[k].cols()) != c)
      throw DimensionError("slices differ in size");
    out.mutable_slice(k) = slices[k];
  }
  return out;
}

TMatrix TMatrix::from_entries(std::size_t rows, std::size_t cols,
                              const std::vector<TScalar>& entries) {
  if (entries.size() != rows * cols || entries.empty())
    throw DimensionError("entry count does not match rows * cols");
  const TShape& shape = entries[0].shape();
  TMatrix out(shape, rows, cols);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].shape() == shape)) throw ShapeError("entries have different shapes");
    for (std::size_t k = 0; k < shape.size(); ++k)
      out.data_[k * rows * cols + i] = entries[i].spectrum()[k];
  }
  return out;
}

TMatrix TMatrix::identity(const TShape& shape, std::size_t m) {
  if (m == 0) throw DimensionError("identity size must be positive");
  TMatrix out(shape, m, m);
  for (std::size_t k = 0; k < shape.size(); ++k) out.mutable_slice(k).setIdentity();
  return out;
}

TMatrix TMatrix::diagonal(const std::vector<TScalar>& d) {
  if (d.empty()) throw DimensionError("diagonal needs at least one entry");
  const TShape& shape = d[0].shape();
  const std::size_t m = d.size();
  TMatrix out(shape, m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(d[i].shape() == shape)) throw ShapeError("diagonal entries have different shapes");
    for (std::size_t k = 0; k < shape.size(); ++k) out.mutable_slice(k)(i, i) = d[i].spectrum()[k];
  }
  return out;
}

SliceView TMatrix::slice(std::size_t k) const {
  if (k >= shape_.size()) throw IndexError("slice index out of range");
  return SliceView(data_.data() + k * rows_ * cols_, rows_, cols_);
}

SliceRef TMatrix::mutable_slice(std::size_t k) {
  if (k >= shape_.size()) throw IndexError("slice index out of range");
  return SliceRef(data_.data() + k * rows_ * cols_, rows_, cols_);
}

std::vector<CMatrix> TMatrix::slices() const {
  std::vector<CMatrix> out;
  out.reserve(slice_count());
  for (std::size_t k = 0; k < slice_count(); ++k) out.emplace_back(slice(k));
  return out;
}

TScalar TMatrix::entry(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw IndexError("entry index out of range");
  std::vector<cplx> s(shape_.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = data_[k * rows_ * cols_ + r * cols_ + c];
  return TScalar::from_spectrum(shape_, std::move(s));
}

TMatrix TMatrix::column(std::size_t c) const { return columns(c, 1); }

TMatrix TMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw IndexError("column range out of bounds");
  TMatrix out(shape_, rows_, count);
  for (std::size_t k = 0; k < shape_.size(); ++k)
    out.mutable_slice(k) = slice(k).middleCols(first, count);
  return out;
}

TMatrix operator+(const TMatrix& x, const TMatrix& y) {
  require_same_dims(x, y, "add");
  return map_slices(x.shape(), x.rows(), x.cols(),
                    [&](std::size_t k) { return RowCMatrix(x.slice(k) + y.slice(k)); });
}

TMatrix operator-(const TMatrix& x, const TMatrix& y) {
  require_same_dims(x, y, "subtract");
  return map_slices(x.shape(), x.rows(), x.cols(),
                    [&](std::size_t k) { return RowCMatrix(x.slice(k) - y.slice(k)); });
}

TMatrix tscalar_mul(const TScalar& a, const TMatrix& x) {
  if (!(a.shape() == x.shape())) throw ShapeError("tscalar_mul: shapes differ");
  return map_slices(x.shape(), x.rows(), x.cols(),
                    [&](std::size_t k) { return RowCMatrix(a.spectrum()[k] * x.slice(k)); });
}

TMatrix scalar_mul(cplx a, const TMatrix& x) {
  return map_slices(x.shape(), x.rows(), x.cols(),
                    [&](std::size_t k) { return RowCMatrix(a * x.slice(k)); });
}

TMatrix matmul(const TMatrix& x, const TMatrix& y) {
  if (!(x.shape() == y.shape())) throw ShapeError("matmul: shapes differ");
  if (x.cols() != y.rows())
    throw DimensionError("matmul: " + dims_str(x) + " times " + dims_str(y));
  return map_slices(x.shape(), x.rows(), y.cols(),
                    [&](std::size_t k) { return RowCMatrix(x.slice(k) * y.slice(k)); });
}

TMatrix conj_transpose(const TMatrix& x) {
  return map_slices(x.shape(), x.cols(), x.rows(),
                    [&](std::size_t k) { return RowCMatrix(x.slice(k).adjoint()); });
}

TMatrix ltimes(const CMatrix& y, const TScalar& x) {
  return map_slices(x.shape(), y.rows(), y.cols(),
                    [&](std::size_t k) { return RowCMatrix(y * x.spectrum()[k]); });
}

TScalar trace(const TMatrix& x) {
  if (x.rows() != x.cols()) throw DimensionError("trace of a non-square t-matrix");
  std::vector<cplx> s(x.slice_count());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = x.slice(k).trace();
  return TScalar::from_spectrum(x.shape(), std::move(s));
}

TScalar psi(const TMatrix& x, const TMatrix& y) {
  require_same_dims(x, y, "psi");
  std::vector<cplx> s(x.slice_count());
  parallel_for(s.size(), [&](std::size_t k) { s[k] = slice_inner(x.slice(k), y.slice(k)); });
  return TScalar::from_spectrum(x.shape(), std::move(s));
}

TScalar frob_norm_r(const TMatrix& x) {
  // sqrt of psi(x, x); the spectrum of psi(x, x) is already real and >= 0.
  std::vector<cplx> s(x.slice_count());
  parallel_for(s.size(), [&](std::size_t k) { s[k] = x.slice(k).norm(); });
  return TScalar::from_spectrum(x.shape(), std::move(s));
}

TScalar distance_d(const TMatrix& x, const TMatrix& y) { return frob_norm_r(x - y); }

double frob_norm_canonical(const TMatrix& x) {
  // Parseval: sum of spatial |.|^2 = (1/K) sum over slices.
  double acc = 0;
  for (std::size_t k = 0; k < x.slice_count(); ++k) acc += x.slice(k).squaredNorm();
  return std::sqrt(acc / double(x.slice_count()));
}

bool approx_equal(const TMatrix& x, const TMatrix& y, double rel_tol, double abs_floor) {
  if (!(x.shape() == y.shape()) || x.rows() != y.rows() || x.cols() != y.cols()) return false;
  const double d = frob_norm_canonical(x - y);
  return d <= rel_tol * std::max(frob_norm_canonical(x), frob_norm_canonical(y)) + abs_floor;
}

SliceSvd svd_slice(const Eigen::Ref<const CMatrix>& a) {
  if (!a.allFinite()) throw NumericError("SVD input contains non-finite values");
  if (a.size() == 0) {
    const Eigen::Index m = std::min(a.rows(), a.cols());
    return {CMatrix::Zero(a.rows(), m), Eigen::VectorXd::Zero(m), CMatrix::Zero(a.cols(), m)};
  }
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericError("SVD did not converge");
  // Eigen returns singular values in decreasing order.
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

std::size_t rank_slice(const Eigen::VectorXd& s, double factor) {
  if (s.size() == 0) return 0;
  const double cutoff = std::max(factor * s(0), 1e-14);
  std::size_t r = 0;
  while (r < std::size_t(s.size()) && s(r) > cutoff) ++r;
  return r;
}

CMatrix pinv_slice(const Eigen::Ref<const CMatrix>& a, double factor) {
  SliceSvd d = svd_slice(a);
  const std::size_t r = rank_slice(d.s, factor);
  if (r == 0) return CMatrix::Zero(a.cols(), a.rows());
  const Eigen::VectorXd inv = d.s.head(r).cwiseInverse();
  return d.v.leftCols(r) * inv.asDiagonal() * d.u.leftCols(r).adjoint();
}

TMatrix TsvdFactors::reconstruct() const {
  TMatrix out(u.shape(), u.rows(), v.rows());
  parallel_for(u.slice_count(), [&](std::size_t k) {
    out.mutable_slice(k) = u.slice(k) * sigma[k].cast<cplx>().asDiagonal() * v.slice(k).adjoint();
  });
  return out;
}

TsvdFactors tsvd(const TMatrix& x) {
  const std::size_t m = std::min(x.rows(), x.cols());
  const std::size_t kk = x.slice_count();
  TsvdFactors f{TMatrix(x.shape(), x.rows(), m), {}, TMatrix(x.shape(), x.cols(), m),
                std::vector<Eigen::VectorXd>(kk)};
  parallel_for(kk, [&](std::size_t k) {
    SliceSvd d = svd_slice(CMatrix(x.slice(k)));
    f.u.mutable_slice(k) = d.u;
    f.v.mutable_slice(k) = d.v;
    f.sigma[k] = d.s;
  });
  f.s.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<cplx> s(kk);
    for (std::size_t k = 0; k < kk; ++k) s[k] = f.sigma[k](i);
    f.s.push_back(TScalar::from_spectrum(x.shape(), std::move(s)));
  }
  return f;
}

TMatrix pinv(const TMatrix& x, const ToleranceProfile& tol) {
  const double factor = tol.rank_factor(x.rows(), x.cols());
  return map_slices(x.shape(), x.cols(), x.rows(), [&](std::size_t k) {
    return RowCMatrix(pinv_slice(CMatrix(x.slice(k)), factor));
  });
}

TScalar rank(const TMatrix& x, const ToleranceProfile& tol) {
  const double factor = tol.rank_factor(x.rows(), x.cols());
  std::vector<cplx> s(x.slice_count());
  parallel_for(s.size(), [&](std::size_t k) {
    s[k] = double(rank_slice(svd_slice(CMatrix(x.slice(k))).s, factor));
  });
  return TScalar::from_spectrum(x.shape(), std::move(s));
}

}  // namespace talg
