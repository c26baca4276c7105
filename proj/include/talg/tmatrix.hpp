#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "talg/spectral.hpp"
#include "talg/tscalar.hpp"

namespace talg {

using CMatrix = Eigen::MatrixXcd;
using RowCMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SliceView = Eigen::Map<const RowCMatrix>;
using SliceRef = Eigen::Map<RowCMatrix>;

// A t-matrix in spatial form: values over (i_1, ..., i_N, m1, m2), last index fastest.
struct SpatialTMatrix {
  TShape shape;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> values;
};

// rows x cols array of t-scalars, stored as K spectral slices. Slice k is the
// matrix of k-th spectrum entries; slices are contiguous, each row-major.
class TMatrix {
 public:
  TMatrix() = default;
  TMatrix(const TShape& shape, std::size_t rows, std::size_t cols);  // zero

  // Consumes the array; the transform runs in place.
  static TMatrix from_spatial(SpatialTMatrix a);
  static TMatrix assemble(const TShape& shape, const std::vector<CMatrix>& slices);
  // Row-major list of rows*cols t-scalars.
  static TMatrix from_entries(std::size_t rows, std::size_t cols,
                              const std::vector<TScalar>& entries);
  static TMatrix identity(const TShape& shape, std::size_t m);
  static TMatrix diagonal(const std::vector<TScalar>& d);

  SpatialTMatrix to_spatial() const;

  const TShape& shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t slice_count() const noexcept { return shape_.size(); }

  SliceView slice(std::size_t k) const;
  SliceRef mutable_slice(std::size_t k);
  std::vector<CMatrix> slices() const;

  TScalar entry(std::size_t r, std::size_t c) const;
  TMatrix column(std::size_t c) const;
  TMatrix columns(std::size_t first, std::size_t count) const;

 private:
  TShape shape_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

TMatrix operator+(const TMatrix& x, const TMatrix& y);
TMatrix operator-(const TMatrix& x, const TMatrix& y);
inline TMatrix add(const TMatrix& x, const TMatrix& y) { return x + y; }

TMatrix tscalar_mul(const TScalar& a, const TMatrix& x);
TMatrix scalar_mul(cplx a, const TMatrix& x);
TMatrix matmul(const TMatrix& x, const TMatrix& y);
TMatrix conj_transpose(const TMatrix& x);
// Complex matrix times a t-scalar: entry (i,j) is y(i,j) * x.
TMatrix ltimes(const CMatrix& y, const TScalar& x);
TScalar trace(const TMatrix& x);

// Sum over entries of psi(x_ij, y_ij).
TScalar psi(const TMatrix& x, const TMatrix& y);
TScalar frob_norm_r(const TMatrix& x);
TScalar distance_d(const TMatrix& x, const TMatrix& y);
// Canonical Frobenius norm over all spatial entries (computed from the slices).
double frob_norm_canonical(const TMatrix& x);
bool approx_equal(const TMatrix& x, const TMatrix& y, double rel_tol = 1e-10,
                  double abs_floor = 1e-12);

struct TsvdFactors {
  TMatrix u;                   // M1 x M
  std::vector<TScalar> s;      // M values, descending in every slice
  TMatrix v;                   // M2 x M
  // Per-slice singular values, sigma[k][m]; same data as s in spectral form.
  std::vector<Eigen::VectorXd> sigma;

  TMatrix reconstruct() const;
};

TsvdFactors tsvd(const TMatrix& x);
TMatrix pinv(const TMatrix& x, const ToleranceProfile& tol = {});
TScalar rank(const TMatrix& x, const ToleranceProfile& tol = {});

// Thin SVD of one complex matrix with descending singular values.
struct SliceSvd {
  CMatrix u;
  Eigen::VectorXd s;
  CMatrix v;
};
SliceSvd svd_slice(const Eigen::Ref<const CMatrix>& a);
// Moore-Penrose inverse with cutoff max(factor * sigma_max, 1e-14).
CMatrix pinv_slice(const Eigen::Ref<const CMatrix>& a, double factor);
std::size_t rank_slice(const Eigen::VectorXd& s, double factor);

}  // namespace talg
