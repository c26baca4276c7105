#include "talg/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "talg/errors.hpp"
#include "talg/parallel.hpp"

namespace talg {

// ---- RankSpec -------------------------------------------------------------

RankSpec RankSpec::uniform(std::size_t r) {
  RankSpec h;
  h.uniform_ = true;
  h.ranks_ = {r};
  return h;
}

RankSpec RankSpec::per_slice(std::vector<std::size_t> ranks) {
  if (ranks.empty()) throw DimensionError("per-slice rank list is empty");
  RankSpec h;
  h.uniform_ = false;
  h.ranks_ = std::move(ranks);
  return h;
}

RankSpec RankSpec::parse(const std::string& text) {
  std::vector<std::size_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw FormatError("bad rank value '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size() || v < 0) throw FormatError("bad rank value '" + item + "'");
    values.push_back(static_cast<std::size_t>(v));
  }
  if (values.empty()) throw FormatError("empty rank specification");
  const bool tuple = text.find(',') != std::string::npos;
  return tuple ? per_slice(std::move(values)) : uniform(values[0]);
}

std::size_t RankSpec::uniform_rank() const {
  if (!uniform_) throw DomainError("rank specification is per-slice");
  return ranks_[0];
}

std::vector<std::size_t> RankSpec::resolve(std::size_t k, std::size_t max_rank) const {
  std::vector<std::size_t> r = uniform_ ? std::vector<std::size_t>(k, ranks_[0]) : ranks_;
  if (r.size() != k)
    throw DimensionError("per-slice rank list has " + std::to_string(r.size()) +
                         " entries, expected " + std::to_string(k));
  for (std::size_t v : r)
    if (v > max_rank)
      throw RankTooLargeError("rank " + std::to_string(v) + " exceeds " + std::to_string(max_rank));
  return r;
}

TScalar RankSpec::as_tscalar(const TShape& shape) const {
  std::vector<std::size_t> r = resolve(shape.size(), std::numeric_limits<std::size_t>::max());
  std::vector<cplx> s(r.begin(), r.end());
  return TScalar::from_spectrum(shape, std::move(s));
}

std::string RankSpec::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < ranks_.size(); ++i) os << (i ? ":" : "") << ranks_[i];
  return os.str();
}

bool operator<(const RankSpec& a, const RankSpec& b) {
  if (a.uniform_ != b.uniform_) return a.uniform_;
  return a.ranks_ < b.ranks_;
}

std::vector<TScalar> delta_from_rank(const RankSpec& h, std::size_t m, const TShape& shape) {
  const std::vector<std::size_t> r = h.resolve(shape.size(), m);
  std::vector<TScalar> delta;
  delta.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<cplx> s(shape.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = i < r[k] ? 1.0 : 0.0;
    delta.push_back(TScalar::from_spectrum(shape, std::move(s)));
  }
  return delta;
}

// ---- Low-rank approximation -----------------------------------------------

TMatrix low_rank_approx(const TsvdFactors& f, const RankSpec& h) {
  const std::size_t m = f.u.cols();
  const std::vector<std::size_t> r = h.resolve(f.u.slice_count(), m);
  TMatrix out(f.u.shape(), f.u.rows(), f.v.rows());
  // U diag(lambda * delta) V^*; delta keeps the leading r_k values of slice k.
  parallel_for(r.size(), [&](std::size_t k) {
    const std::size_t rk = r[k];
    if (rk == 0) return;
    out.mutable_slice(k) = f.u.slice(k).leftCols(rk) *
                           f.sigma[k].head(rk).cast<cplx>().asDiagonal() *
                           f.v.slice(k).leftCols(rk).adjoint();
  });
  return out;
}

TMatrix low_rank_approx(const TMatrix& x, const RankSpec& h) {
  h.resolve(x.slice_count(), std::min(x.rows(), x.cols()));
  return low_rank_approx(tsvd(x), h);
}

// ---- Least squares --------------------------------------------------------

namespace {

void check_lstsq_dims(const TMatrix& w, const TMatrix& a) {
  if (!(w.shape() == a.shape())) throw ShapeError("lstsq: shapes differ");
  if (w.rows() < w.cols())
    throw DimensionError("lstsq needs at least as many rows as columns");
  if (a.rows() != w.rows()) throw DimensionError("lstsq: right-hand side has wrong length");
}

}  // namespace

LstsqResult lstsq(const TMatrix& w, const TMatrix& a, bool with_projection_tmatrix,
                  const ToleranceProfile& tol) {
  check_lstsq_dims(w, a);
  LstsqResult res;
  res.beta = matmul(pinv(w, tol), a);
  res.projection = matmul(w, res.beta);
  res.residual_norm = frob_norm_r(a - res.projection);
  if (with_projection_tmatrix) res.projection_tmatrix = projection_tmatrix(w, tol);
  const TScalar rk = rank(w, tol);
  res.unique = std::all_of(rk.spectrum().begin(), rk.spectrum().end(),
                           [&](cplx v) { return std::lround(v.real()) == long(w.cols()); });
  return res;
}

TMatrix lstsq_general(const TMatrix& w, const TMatrix& a, const TMatrix& xi,
                      const ToleranceProfile& tol) {
  check_lstsq_dims(w, a);
  if (!(xi.shape() == w.shape()) || xi.rows() != w.cols() || xi.cols() != a.cols())
    throw DimensionError("lstsq_general: free vector has wrong size");
  const TMatrix wp = pinv(w, tol);
  return matmul(wp, a) + xi - matmul(wp, matmul(w, xi));
}

TMatrix projection_tmatrix(const TMatrix& w, const ToleranceProfile& tol) {
  const TMatrix wh = conj_transpose(w);
  return matmul(w, matmul(pinv(matmul(wh, w), tol), wh));
}

CombinationFit fit_combination(const TMatrix& target, const std::vector<const TMatrix*>& basis,
                               const ToleranceProfile& tol) {
  if (basis.empty()) throw DimensionError("combination fit needs at least one basis element");
  for (const TMatrix* b : basis)
    if (!(b->shape() == target.shape()) || b->rows() != target.rows() || b->cols() != target.cols())
      throw DimensionError("basis element does not match the target");
  const std::size_t d = target.rows() * target.cols();
  const std::size_t n = basis.size();
  if (d < n) throw DimensionError("more basis elements than entries");
  const std::size_t kk = target.slice_count();
  const double factor = tol.rank_factor(d, n);

  std::vector<std::vector<cplx>> coef(n, std::vector<cplx>(kk));
  std::vector<cplx> res(kk);
  std::vector<double> res_sq(kk);
  parallel_for(kk, [&](std::size_t k) {
    CMatrix wk(d, n);
    for (std::size_t i = 0; i < n; ++i)
      wk.col(i) = Eigen::Map<const Eigen::VectorXcd>(basis[i]->slice(k).data(), d);
    const Eigen::Map<const Eigen::VectorXcd> ak(target.slice(k).data(), d);
    const Eigen::VectorXcd beta = pinv_slice(wk, factor) * ak;
    const double e2 = (ak - wk * beta).squaredNorm();
    for (std::size_t i = 0; i < n; ++i) coef[i][k] = beta(i);
    res[k] = std::sqrt(e2);
    res_sq[k] = e2;
  });

  CombinationFit fit;
  for (auto& c : coef) fit.coefficients.push_back(TScalar::from_spectrum(target.shape(), std::move(c)));
  fit.residual_norm = TScalar::from_spectrum(target.shape(), std::move(res));
  fit.residual_canonical =
      std::sqrt(std::accumulate(res_sq.begin(), res_sq.end(), 0.0) / double(kk));
  return fit;
}

CanonicalFit fit_combination_canonical(const TMatrix& target,
                                       const std::vector<const TMatrix*>& basis,
                                       const ToleranceProfile& tol) {
  if (basis.empty()) throw DimensionError("combination fit needs at least one basis element");
  for (const TMatrix* b : basis)
    if (!(b->shape() == target.shape()) || b->rows() != target.rows() || b->cols() != target.cols())
      throw DimensionError("basis element does not match the target");
  const std::size_t n = basis.size();
  const std::size_t kk = target.slice_count();
  const std::size_t d = target.rows() * target.cols();

  // Canonical inner products of the spatial arrays, accumulated over slices.
  CMatrix gram = CMatrix::Zero(n, n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  for (std::size_t k = 0; k < kk; ++k) {
    const Eigen::Map<const Eigen::VectorXcd> ak(target.slice(k).data(), d);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Map<const Eigen::VectorXcd> bi(basis[i]->slice(k).data(), d);
      rhs(i) += bi.dot(ak);
      for (std::size_t j = 0; j < n; ++j)
        gram(i, j) += bi.dot(Eigen::Map<const Eigen::VectorXcd>(basis[j]->slice(k).data(), d));
    }
  }
  const Eigen::VectorXcd c = pinv_slice(gram, tol.rank_factor(n, n)) * rhs;

  double err = 0;
  for (std::size_t k = 0; k < kk; ++k) {
    Eigen::VectorXcd e = Eigen::Map<const Eigen::VectorXcd>(target.slice(k).data(), d);
    for (std::size_t i = 0; i < n; ++i)
      e -= c(i) * Eigen::Map<const Eigen::VectorXcd>(basis[i]->slice(k).data(), d);
    err += e.squaredNorm();
  }
  CanonicalFit fit;
  fit.coefficients.assign(c.data(), c.data() + n);
  fit.residual_canonical = std::sqrt(err / double(kk));
  return fit;
}

// ---- TPCA -----------------------------------------------------------------

TpcaModel tpca_fit(const std::vector<TMatrix>& samples, const ToleranceProfile& tol) {
  if (samples.size() < 2) throw InsufficientDataError("TPCA needs at least two samples");
  const TMatrix& first = samples[0];
  TMatrix data(first.shape(), first.rows(), samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const TMatrix& s = samples[j];
    if (!(s.shape() == first.shape()) || s.rows() != first.rows() || s.cols() != 1)
      throw DimensionError("TPCA samples must be t-vectors of equal length and shape");
    for (std::size_t k = 0; k < data.slice_count(); ++k) data.mutable_slice(k).col(j) = s.slice(k);
  }
  return tpca_fit(std::move(data), tol);
}

TpcaModel tpca_fit(TMatrix data, const ToleranceProfile& tol) {
  const std::size_t n = data.cols();
  if (n < 2) throw InsufficientDataError("TPCA needs at least two samples");
  const std::size_t d = data.rows();
  const std::size_t kk = data.slice_count();
  const std::size_t qm = std::min(d, n - 1);
  const double factor = tol.rank_factor(d, n);

  TpcaModel model;
  model.q_m = qm;
  model.mean = TMatrix(data.shape(), d, 1);
  model.components = TMatrix(data.shape(), d, qm);
  model.sigma.assign(kk, Eigen::VectorXd::Zero(qm));
  std::vector<std::size_t> ranks(kk);

  parallel_for(kk, [&](std::size_t k) {
    SliceRef w = data.mutable_slice(k);
    const Eigen::VectorXcd mu = w.rowwise().mean();
    model.mean.mutable_slice(k) = mu;
    w.colwise() -= mu;
    SliceSvd svd = svd_slice(CMatrix(w));
    // Components beyond the numerical rank of the slice stay zero.
    const std::size_t r = std::min(rank_slice(svd.s, factor), qm);
    ranks[k] = r;
    model.components.mutable_slice(k).leftCols(r) = svd.u.leftCols(r);
    model.sigma[k].head(r) = svd.s.head(r);
  });

  model.full_rank = std::all_of(ranks.begin(), ranks.end(), [qm](std::size_t r) { return r == qm; });
  for (std::size_t m = 0; m < qm; ++m) {
    std::vector<cplx> s(kk);
    for (std::size_t k = 0; k < kk; ++k) s[k] = model.sigma[k](m);
    model.singular_values.push_back(TScalar::from_spectrum(data.shape(), std::move(s)));
  }
  return model;
}

namespace {

void check_query(const TpcaModel& model, const TMatrix& y) {
  if (!(y.shape() == model.mean.shape()) || y.rows() != model.mean.rows())
    throw DimensionError("query does not match the TPCA model");
}

}  // namespace

TMatrix tpca_transform(const TpcaModel& model, const TMatrix& y, const RankSpec& h) {
  check_query(model, y);
  const std::vector<std::size_t> r = h.resolve(y.slice_count(), model.q_m);
  TMatrix out(y.shape(), model.q_m, y.cols());
  parallel_for(r.size(), [&](std::size_t k) {
    const std::size_t rk = r[k];
    if (rk == 0) return;
    CMatrix centered = y.slice(k);
    centered.colwise() -= Eigen::VectorXcd(model.mean.slice(k));
    out.mutable_slice(k).topRows(rk) = model.components.slice(k).leftCols(rk).adjoint() * centered;
  });
  return out;
}

TMatrix tpca_reconstruct(const TpcaModel& model, const TMatrix& y, const RankSpec& h) {
  const TMatrix coords = tpca_transform(model, y, h);
  TMatrix out(y.shape(), y.rows(), y.cols());
  parallel_for(y.slice_count(), [&](std::size_t k) {
    SliceRef o = out.mutable_slice(k);
    o = model.components.slice(k) * coords.slice(k);
    o.colwise() += Eigen::VectorXcd(model.mean.slice(k));
  });
  return out;
}

TMatrix tpca_projection(const TpcaModel& model, const RankSpec& h) {
  const std::vector<std::size_t> r = h.resolve(model.mean.slice_count(), model.q_m);
  const std::size_t d = model.mean.rows();
  TMatrix p(model.mean.shape(), d, d);
  parallel_for(r.size(), [&](std::size_t k) {
    const auto u = model.components.slice(k).leftCols(r[k]);
    p.mutable_slice(k) = u * u.adjoint();
  });
  return p;
}

// ---- Pooling and PSNR -----------------------------------------------------

CMatrix average_pool(const TMatrix& x) {
  // The frequency-zero slice is the sum over all spatial entries.
  return CMatrix(x.slice(0)) / double(x.slice_count());
}

TMatrix average_pool_modes(const TMatrix& x, const std::vector<bool>& pooled) {
  const TShape& sh = x.shape();
  if (pooled.size() != sh.order()) throw ShapeError("pooling mask has wrong length");
  std::vector<std::size_t> kept;
  double count = 1;
  for (std::size_t n = 0; n < sh.order(); ++n) {
    if (pooled[n])
      count *= double(sh.dims()[n]);
    else
      kept.push_back(sh.dims()[n]);
  }
  const TShape out_shape(kept);
  TMatrix out(out_shape, x.rows(), x.cols());
  for (std::size_t k = 0; k < sh.size(); ++k) {
    const std::vector<std::size_t> mi = sh.multi_index(k);
    std::vector<std::size_t> rest;
    bool zero_freq = true;
    for (std::size_t n = 0; n < mi.size(); ++n) {
      if (pooled[n])
        zero_freq = zero_freq && mi[n] == 0;
      else
        rest.push_back(mi[n]);
    }
    if (zero_freq) out.mutable_slice(out_shape.flat_index(rest)) = x.slice(k) / count;
  }
  return out;
}

double psnr_from_error(double squared_error, double n_entry, double max_value) {
  if (max_value <= 0) throw DomainError("PSNR peak value must be positive");
  if (!(squared_error > 0)) return psnr_infinity;
  return 10.0 * std::log10(n_entry * max_value * max_value / squared_error);
}

double psnr(std::span<const double> x, std::span<const double> xhat, double max_value) {
  if (x.size() != xhat.size()) throw DimensionError("PSNR inputs differ in size");
  double err = 0;
  for (std::size_t i = 0; i < x.size(); ++i) err += (x[i] - xhat[i]) * (x[i] - xhat[i]);
  return psnr_from_error(err, double(x.size()), max_value);
}

// ---- TNN ------------------------------------------------------------------

double frobenius_slice_metric(const SliceView& a, const SliceView& b) { return (a - b).norm(); }

TnnVerdict tnn_decide(std::vector<TScalar> distances, const std::vector<int>& labels,
                      const ToleranceProfile& tol) {
  const std::size_t j = distances.size();
  if (j == 0) throw InsufficientDataError("TNN needs at least one training sample");
  if (labels.size() != j) throw DimensionError("label count differs from training count");
  TnnVerdict v;
  v.distances = std::move(distances);
  const auto& d = v.distances;

  // le[a][b]: d_a <= d_b
  std::vector<std::vector<char>> le(j, std::vector<char>(j));
  for (std::size_t a = 0; a < j; ++a)
    for (std::size_t b = 0; b < j; ++b) le[a][b] = a == b || partial_le(d[a], d[b], tol);

  std::vector<std::size_t> least;
  for (std::size_t a = 0; a < j; ++a) {
    bool all = true;
    for (std::size_t b = 0; b < j && all; ++b) all = le[a][b];
    if (all) least.push_back(a);
  }
  if (least.size() == 1) {
    v.least_index = least[0];
    v.minimal_indices = least;
    v.chosen_index = least[0];
  } else {
    // a is minimal unless some b is strictly below it.
    for (std::size_t a = 0; a < j; ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < j && !dominated; ++b) dominated = b != a && le[b][a] && !le[a][b];
      if (!dominated) v.minimal_indices.push_back(a);
    }
    auto mean_spectrum = [&](std::size_t a) {
      double s = 0;
      for (const cplx& c : d[a].spectrum()) s += c.real();
      return s / double(d[a].shape().size());
    };
    v.chosen_index = v.minimal_indices[0];
    double best = mean_spectrum(v.chosen_index);
    for (std::size_t a : v.minimal_indices) {
      const double m = mean_spectrum(a);
      if (m < best) {
        best = m;
        v.chosen_index = a;
      }
    }
  }
  v.chosen_label = labels[v.chosen_index];
  return v;
}

TnnVerdict tnn_classify(const std::vector<TMatrix>& train, const std::vector<int>& labels,
                        const TMatrix& query, const SliceMetric& metric,
                        const ToleranceProfile& tol) {
  if (train.empty()) throw InsufficientDataError("TNN needs at least one training sample");
  std::vector<TScalar> dist;
  dist.reserve(train.size());
  for (const TMatrix& y : train) {
    if (!(y.shape() == query.shape()) || y.rows() != query.rows() || y.cols() != query.cols())
      throw DimensionError("training sample does not match the query");
    std::vector<cplx> s(query.slice_count());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = metric(query.slice(k), y.slice(k));
    dist.push_back(TScalar::from_spectrum(query.shape(), std::move(s)));
  }
  return tnn_decide(std::move(dist), labels, tol);
}

}  // namespace talg
