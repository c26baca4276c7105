#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "talg/tmatrix.hpp"
#include "talg/tscalar.hpp"

namespace talg {

// Target generalized rank: r * E_T, or sum_k r_k Q_k.
class RankSpec {
 public:
  static RankSpec uniform(std::size_t r);
  static RankSpec per_slice(std::vector<std::size_t> ranks);
  // "7" or "2,1,0".
  static RankSpec parse(const std::string& text);

  bool is_uniform() const noexcept { return uniform_; }
  std::size_t uniform_rank() const;
  const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }

  // Per-slice ranks for K slices; throws if any exceeds max_rank.
  std::vector<std::size_t> resolve(std::size_t k, std::size_t max_rank) const;
  TScalar as_tscalar(const TShape& shape) const;
  // "7" or "2:1:0" (no commas, so it fits in a CSV cell).
  std::string to_string() const;

  friend bool operator<(const RankSpec& a, const RankSpec& b);

 private:
  bool uniform_ = true;
  std::vector<std::size_t> ranks_{0};
};

// delta_m = sum_k [m < r_k] Q_k for m in [0, M).
std::vector<TScalar> delta_from_rank(const RankSpec& h, std::size_t m, const TShape& shape);

TMatrix low_rank_approx(const TMatrix& x, const RankSpec& h);
// Reuses an existing decomposition.
TMatrix low_rank_approx(const TsvdFactors& f, const RankSpec& h);

struct LstsqResult {
  TMatrix beta;
  TMatrix projection;      // W * beta
  TScalar residual_norm;   // r(A - W beta)
  std::optional<TMatrix> projection_tmatrix;
  bool unique = false;     // rank(W) == M * E_T
};

// beta = W^+ A. The D x D projection t-matrix is only built on request.
LstsqResult lstsq(const TMatrix& w, const TMatrix& a, bool with_projection_tmatrix = false,
                  const ToleranceProfile& tol = {});
// W^+ A + (I - W^+ W) xi
TMatrix lstsq_general(const TMatrix& w, const TMatrix& a, const TMatrix& xi,
                      const ToleranceProfile& tol = {});
// W (W^* W)^+ W^*
TMatrix projection_tmatrix(const TMatrix& w, const ToleranceProfile& tol = {});

// target ~ sum_i c_i * basis_i with t-scalar coefficients. Same problem as
// lstsq with W = [vec(basis_0), vec(basis_1), ...], without materializing W.
struct CombinationFit {
  std::vector<TScalar> coefficients;
  TScalar residual_norm;
  double residual_canonical = 0;  // spatial Frobenius norm of the residual
};
CombinationFit fit_combination(const TMatrix& target, const std::vector<const TMatrix*>& basis,
                               const ToleranceProfile& tol = {});

// Same, with complex coefficients shared by every slice.
struct CanonicalFit {
  std::vector<cplx> coefficients;
  double residual_canonical = 0;
};
CanonicalFit fit_combination_canonical(const TMatrix& target,
                                       const std::vector<const TMatrix*>& basis,
                                       const ToleranceProfile& tol = {});

struct TpcaModel {
  TMatrix mean;        // D x 1
  TMatrix components;  // D x Q_m
  std::vector<TScalar> singular_values;
  std::vector<Eigen::VectorXd> sigma;  // per slice, length Q_m
  std::size_t q_m = 0;
  bool full_rank = false;
};

TpcaModel tpca_fit(const std::vector<TMatrix>& samples, const ToleranceProfile& tol = {});
// Samples as the columns of a D x N t-matrix; the input is consumed.
TpcaModel tpca_fit(TMatrix data, const ToleranceProfile& tol = {});
// Coordinates Uhat^* (y - mean); y may hold several columns.
TMatrix tpca_transform(const TpcaModel& model, const TMatrix& y, const RankSpec& h);
// P y + (I - P) mean with P = Uhat Uhat^*.
TMatrix tpca_reconstruct(const TpcaModel& model, const TMatrix& y, const RankSpec& h);
TMatrix tpca_projection(const TpcaModel& model, const RankSpec& h);

// Mean over the K entries of each t-scalar.
CMatrix average_pool(const TMatrix& x);
// Mean over the selected t-scalar modes only; the result lives on the shape of
// the remaining modes.
TMatrix average_pool_modes(const TMatrix& x, const std::vector<bool>& pooled);

inline constexpr double psnr_infinity = std::numeric_limits<double>::infinity();
double psnr(std::span<const double> x, std::span<const double> xhat, double max_value);
double psnr_from_error(double squared_error, double n_entry, double max_value);

using SliceMetric = std::function<double(const SliceView&, const SliceView&)>;
double frobenius_slice_metric(const SliceView& a, const SliceView& b);

struct TnnVerdict {
  std::vector<TScalar> distances;
  std::optional<std::size_t> least_index;
  std::vector<std::size_t> minimal_indices;
  std::size_t chosen_index = 0;
  int chosen_label = 0;
};

TnnVerdict tnn_classify(const std::vector<TMatrix>& train, const std::vector<int>& labels,
                        const TMatrix& query, const SliceMetric& metric = frobenius_slice_metric,
                        const ToleranceProfile& tol = {});
// Poset logic on precomputed distance t-scalars.
TnnVerdict tnn_decide(std::vector<TScalar> distances, const std::vector<int>& labels,
                      const ToleranceProfile& tol = {});

}  // namespace talg
