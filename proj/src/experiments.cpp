#include "talg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/SVD>

#include "talg/errors.hpp"
#include "talg/parallel.hpp"

namespace talg {

// ---- ExperimentReport -----------------------------------------------------

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "param";
  for (const auto& m : methods) os << ',' << m;
  os << '\n';
  for (const auto& row : rows) {
    os << row.param;
    for (double v : row.values) os << ',' << format_number(v);
    os << '\n';
  }
  return os.str();
}

double ExperimentReport::value(const std::string& param, const std::string& method) const {
  const auto m = std::find(methods.begin(), methods.end(), method);
  if (m == methods.end()) throw IndexError("report has no column '" + method + "'");
  for (const auto& row : rows)
    if (row.param == param) return row.values[std::size_t(m - methods.begin())];
  throw IndexError("report has no row '" + param + "'");
}

std::vector<double> ExperimentReport::column(const std::string& method) const {
  const auto m = std::find(methods.begin(), methods.end(), method);
  if (m == methods.end()) throw IndexError("report has no column '" + method + "'");
  std::vector<double> out;
  for (const auto& row : rows) out.push_back(row.values[std::size_t(m - methods.begin())]);
  return out;
}

std::string ExperimentReport::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return {};
}

namespace {

// tails[r] = sum of s_i^2 for i >= r, accumulated from the small end.
std::vector<double> tail_energy(const Eigen::VectorXd& s) {
  std::vector<double> t(std::size_t(s.size()) + 1, 0.0);
  for (Eigen::Index i = s.size(); i-- > 0;) t[std::size_t(i)] = t[std::size_t(i) + 1] + s(i) * s(i);
  return t;
}

std::vector<RankSpec> sorted_ranks(std::vector<RankSpec> ranks) {
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end(),
                          [](const RankSpec& a, const RankSpec& b) { return !(a < b) && !(b < a); }),
              ranks.end());
  return ranks;
}

// Inception-slice accumulator for a lifted image t-matrix: the spatial entries
// with window index 0, one H x W plane per channel, as sums of rank-one terms.
class InceptionAccumulator {
 public:
  InceptionAccumulator(const TsvdFactors& f, std::size_t channels)
      : f_(f), channels_(channels), planes_(channels, CMatrix::Zero(f.u.rows(), f.v.rows())) {}

  void reset() {
    for (auto& p : planes_) p.setZero();
  }

  // Adds term i of slice k.
  void add(std::size_t k, std::size_t i) {
    const double kk = double(f_.u.slice_count());
    const CMatrix term = f_.sigma[k](Eigen::Index(i)) * f_.u.slice(k).col(Eigen::Index(i)) *
                         f_.v.slice(k).col(Eigen::Index(i)).adjoint();
    // The channel mode is last, so its frequency is k mod C.
    const std::size_t freq = k % channels_;
    for (std::size_t c = 0; c < channels_; ++c) {
      const double phase = 2.0 * std::numbers::pi * double((freq * c) % channels_) / double(channels_);
      planes_[c] += (std::polar(1.0, phase) / kk) * term;
    }
  }

  double squared_error(const RealArray& image) const {
    const std::size_t h = f_.u.rows(), w = f_.v.rows();
    double e = 0;
    for (std::size_t c = 0; c < channels_; ++c)
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
          e += std::norm(planes_[c](Eigen::Index(y), Eigen::Index(x)) -
                         image.data[(y * w + x) * channels_ + c]);
    return e;
  }

 private:
  const TsvdFactors& f_;
  std::size_t channels_;
  std::vector<CMatrix> planes_;
};

}  // namespace

// ---- run_approx -------------------------------------------------------------

ExperimentReport run_approx(const RealArray& image, const std::vector<RankSpec>& rank_list,
                            const ApproxOptions& opt) {
  if (image.order() != 2 && image.order() != 3) throw ShapeError("image must be H x W or H x W x C");
  if (rank_list.empty()) throw DimensionError("no ranks requested");
  const std::size_t h = image.dims[0], w = image.dims[1];
  const std::size_t channels = image.order() == 3 ? image.dims[2] : 1;
  const std::vector<RankSpec> ranks = sorted_ranks(rank_list);
  const bool all_uniform =
      std::all_of(ranks.begin(), ranks.end(), [](const RankSpec& r) { return r.is_uniform(); });

  LiftConfig cfg;
  cfg.repetitions = opt.lifts;
  const TMatrix x = TMatrix::from_spatial(image_to_tmatrix(image, cfg));
  const std::size_t kk = x.slice_count();
  const std::size_t m = std::min(h, w);
  const TsvdFactors f = tsvd(x);
  std::vector<std::vector<double>> tails(kk);
  for (std::size_t k = 0; k < kk; ++k) tails[k] = tail_energy(f.sigma[k]);

  ExperimentReport rep;
  rep.id = "approx";
  std::vector<double> flat_tails;
  if (all_uniform) {
    rep.methods.push_back("svd");
    // Channel planes side by side: H x (W * C).
    Eigen::MatrixXd flat(h, w * channels);
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t xx = 0; xx < w; ++xx)
        for (std::size_t c = 0; c < channels; ++c)
          flat(Eigen::Index(y), Eigen::Index(c * w + xx)) = image.data[(y * w + xx) * channels + c];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(flat);
    if (svd.info() != Eigen::Success) throw NumericError("SVD of the flattened image failed");
    flat_tails = tail_energy(svd.singularValues());
  }
  rep.methods.push_back("tsvd");
  const bool inception = opt.lifts > 0;
  if (inception) rep.methods.push_back("tsvd_inception");

  const double n_image = double(h * w * channels);
  const double n_whole = double(kk * h * w);
  InceptionAccumulator acc(f, channels);
  std::size_t acc_rank = 0;

  for (const RankSpec& spec : ranks) {
    const std::vector<std::size_t> r = spec.resolve(kk, m);
    ExperimentReport::Row row{spec.to_string(), {}};
    if (all_uniform) {
      const std::size_t ru = spec.uniform_rank();
      if (ru >= flat_tails.size()) throw RankTooLargeError("rank exceeds the flattened image rank");
      row.values.push_back(psnr_from_error(flat_tails[ru], n_image, opt.max_value));
    }
    double err = 0;
    for (std::size_t k = 0; k < kk; ++k) err += tails[k][r[k]];
    row.values.push_back(psnr_from_error(err / double(kk), n_whole, opt.max_value));

    if (inception) {
      if (all_uniform) {
        // Ranks are sorted, so extend the running sum.
        for (; acc_rank < r[0]; ++acc_rank)
          for (std::size_t k = 0; k < kk; ++k) acc.add(k, acc_rank);
      } else {
        acc.reset();
        for (std::size_t k = 0; k < kk; ++k)
          for (std::size_t i = 0; i < r[k]; ++i) acc.add(k, i);
      }
      row.values.push_back(psnr_from_error(acc.squared_error(image), n_image, opt.max_value));
    }
    rep.rows.push_back(std::move(row));
  }

  rep.metadata = {{"shape", x.shape().to_string()},
                  {"K", std::to_string(kk)},
                  {"lifts", std::to_string(opt.lifts)},
                  {"N_entry_tsvd", format_number(n_whole)},
                  {"N_entry_image", format_number(n_image)},
                  {"MAX", format_number(opt.max_value)}};
  return rep;
}

// ---- run_lstsq --------------------------------------------------------------

ExperimentReport run_lstsq(const RealArray& a, const RealArray& b, const RealArray& c,
                           const std::vector<std::size_t>& lift_counts, double max_value,
                           const ToleranceProfile& tol) {
  if (a.dims != b.dims || a.dims != c.dims) throw ShapeError("least-squares images differ in size");
  ExperimentReport rep;
  rep.id = "lstsq";
  rep.methods = {"canonical", "generalized"};
  std::vector<std::size_t> lifts = lift_counts;
  std::sort(lifts.begin(), lifts.end());
  lifts.erase(std::unique(lifts.begin(), lifts.end()), lifts.end());
  std::string coeffs;
  for (std::size_t l : lifts) {
    LiftConfig cfg;
    cfg.repetitions = l;
    const TMatrix ta = TMatrix::from_spatial(image_to_tmatrix(a, cfg));
    const TMatrix tb = TMatrix::from_spatial(image_to_tmatrix(b, cfg));
    const TMatrix tc = TMatrix::from_spatial(image_to_tmatrix(c, cfg));
    const double n_entry = double(ta.slice_count() * ta.rows() * ta.cols());
    const CanonicalFit can = fit_combination_canonical(ta, {&tb, &tc}, tol);
    const CombinationFit gen = fit_combination(ta, {&tb, &tc}, tol);
    const double e_can = can.residual_canonical * can.residual_canonical;
    const double e_gen = gen.residual_canonical * gen.residual_canonical;
    rep.rows.push_back({std::to_string(2 + 2 * l),
                        {psnr_from_error(e_can, n_entry, max_value),
                         psnr_from_error(e_gen, n_entry, max_value)}});
    std::ostringstream os;
    os << "order " << 2 + 2 * l << ": alpha=" << format_number(can.coefficients[0].real())
       << " beta=" << format_number(can.coefficients[1].real());
    if (!coeffs.empty()) coeffs += "; ";
    coeffs += os.str();
  }
  rep.metadata = {{"MAX", format_number(max_value)},
                  {"canonical_coefficients", coeffs},
                  {"image", std::to_string(a.dims[0]) + "x" + std::to_string(a.dims[1])}};
  return rep;
}

// ---- TPCA -------------------------------------------------------------------

const std::vector<TpcaVariant>& tpca_variants() {
  static const std::vector<TpcaVariant> v = {
      {"PCA", Layout::flatten, 0},          {"TPCA", Layout::channel, 0},
      {"TPCA-I", Layout::flatten, 1},       {"TPCA-II", Layout::flatten, 2},
      {"TPCA-III", Layout::flatten, 3},     {"TPCA-1", Layout::channel_into, 1},
      {"TPCA-2", Layout::channel_into, 2},  {"TPCA-3", Layout::channel_into, 3}};
  return v;
}

TpcaVariant tpca_variant(const std::string& name) {
  for (const auto& v : tpca_variants())
    if (v.name == name) return v;
  throw FormatError("unknown TPCA variant '" + name + "'");
}

TMatrix images_to_columns(const std::vector<RealArray>& images, Layout layout, std::size_t lifts) {
  if (images.empty()) throw InsufficientDataError("no images");
  LiftConfig cfg;
  cfg.repetitions = lifts;
  TMatrix out;
  for (std::size_t j = 0; j < images.size(); ++j) {
    const TMatrix v = TMatrix::from_spatial(image_to_tvector(images[j], layout, cfg));
    if (j == 0) out = TMatrix(v.shape(), v.rows(), images.size());
    if (!(v.shape() == out.shape()) || v.rows() != out.rows())
      throw ShapeError("images do not share a size");
    for (std::size_t k = 0; k < v.slice_count(); ++k) out.mutable_slice(k).col(j) = v.slice(k);
  }
  return out;
}

std::vector<std::vector<double>> tpca_error_table(const TpcaModel& model, const TMatrix& queries) {
  if (!(queries.shape() == model.mean.shape()) || queries.rows() != model.mean.rows())
    throw DimensionError("queries do not match the TPCA model");
  const std::size_t kk = queries.slice_count();
  std::vector<std::vector<double>> err(kk, std::vector<double>(model.q_m + 1));
  parallel_for(kk, [&](std::size_t k) {
    CMatrix e = queries.slice(k);
    e.colwise() -= Eigen::VectorXcd(model.mean.slice(k));
    const auto u = model.components.slice(k);
    const CMatrix coords = u.adjoint() * e;
    err[k][0] = e.squaredNorm();
    // Peel off one component at a time: e <- e - u_r c_r.
    for (std::size_t r = 0; r < model.q_m; ++r) {
      e.noalias() -= u.col(Eigen::Index(r)) * coords.row(Eigen::Index(r));
      err[k][r + 1] = e.squaredNorm();
    }
  });
  return err;
}

ExperimentReport run_tpca(const std::vector<RealArray>& train, const std::vector<RealArray>& test,
                          const std::vector<TpcaVariant>& variants,
                          const std::vector<RankSpec>& rank_list, const TpcaOptions& opt) {
  if (test.empty()) throw InsufficientDataError("no query images");
  const std::vector<RankSpec> ranks = sorted_ranks(rank_list);
  ExperimentReport rep;
  rep.id = "tpca";
  for (const auto& v : variants) {
    rep.methods.push_back(v.name);
    if (opt.pool) rep.methods.push_back(v.name + "+pool");
  }
  for (const auto& r : ranks) rep.rows.push_back({r.to_string(), {}});

  for (const auto& v : variants) {
    TpcaModel model = tpca_fit(images_to_columns(train, v.layout, v.lifts), opt.tol);
    std::vector<std::vector<double>> table;
    std::size_t rows = 0;
    {
      const TMatrix queries = images_to_columns(test, v.layout, v.lifts);
      table = tpca_error_table(model, queries);
      rows = queries.rows();
    }
    const TShape shape = model.mean.shape();
    const std::size_t kk = shape.size();
    const std::size_t qm = model.q_m;
    model = TpcaModel{};

    // Pooling averages the window modes; the channel mode (channel-into) stays.
    std::vector<bool> pooled(shape.order(), true);
    if (v.layout != Layout::flatten && !pooled.empty()) pooled.back() = false;
    double kw = 1;
    for (std::size_t n = 0; n < shape.order(); ++n)
      if (pooled[n]) kw *= double(shape.dims()[n]);
    std::vector<std::size_t> kept;  // slices at window frequency 0
    for (std::size_t k = 0; k < kk; ++k) {
      const auto mi = shape.multi_index(k);
      bool zero = true;
      for (std::size_t n = 0; n < mi.size(); ++n) zero = zero && (!pooled[n] || mi[n] == 0);
      if (zero) kept.push_back(k);
    }

    const double n_query = double(test.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      const std::vector<std::size_t> r = ranks[i].resolve(kk, qm);
      double err = 0;
      for (std::size_t k = 0; k < kk; ++k) err += table[k][r[k]];
      rep.rows[i].values.push_back(
          psnr_from_error(err / double(kk), n_query * double(kk * rows), opt.max_value));
      if (opt.pool) {
        double perr = 0;
        for (std::size_t k : kept) perr += table[k][r[k]];
        const double kc = double(kept.size());
        rep.rows[i].values.push_back(
            psnr_from_error(perr / (kc * kw * kw), n_query * kc * double(rows), opt.max_value));
      }
    }
    rep.metadata.push_back({v.name + ".shape", shape.to_string()});
    rep.metadata.push_back({v.name + ".K", std::to_string(kk)});
    rep.metadata.push_back({v.name + ".D", std::to_string(rows)});
    rep.metadata.push_back({v.name + ".N_entry", format_number(n_query * double(kk * rows))});
    if (opt.pool)
      rep.metadata.push_back(
          {v.name + ".N_entry_pooled", format_number(n_query * double(kept.size() * rows))});
  }
  rep.metadata.push_back({"MAX", format_number(opt.max_value)});
  rep.metadata.push_back({"train", std::to_string(train.size())});
  rep.metadata.push_back({"test", std::to_string(test.size())});
  return rep;
}

// ---- TNN --------------------------------------------------------------------

ExperimentReport run_tnn(const std::vector<CifarRecord>& train, const std::vector<CifarRecord>& test,
                         const TpcaVariant& variant) {
  if (train.empty()) throw InsufficientDataError("TNN needs training samples");
  LiftConfig cfg;
  cfg.repetitions = variant.lifts;
  auto vectorize = [&](const CifarRecord& rec) {
    return TMatrix::from_spatial(image_to_tvector(rec.image, variant.layout, cfg));
  };
  std::vector<TMatrix> xs;
  std::vector<int> labels;
  for (const auto& rec : train) {
    xs.push_back(vectorize(rec));
    labels.push_back(rec.label);
  }

  ExperimentReport rep;
  rep.id = "tnn";
  rep.methods = {"label", "predicted", "least", "minimal"};
  std::size_t correct = 0, with_least = 0;
  for (std::size_t q = 0; q < test.size(); ++q) {
    const TnnVerdict v = tnn_classify(xs, labels, vectorize(test[q]));
    correct += v.chosen_label == test[q].label;
    with_least += v.least_index.has_value();
    rep.rows.push_back({std::to_string(q),
                        {double(test[q].label), double(v.chosen_label),
                         v.least_index ? 1.0 : 0.0, double(v.minimal_indices.size())}});
  }
  const double acc = test.empty() ? 0.0 : double(correct) / double(test.size());
  rep.metadata = {{"variant", variant.name},
                  {"shape", xs[0].shape().to_string()},
                  {"accuracy", format_number(acc)},
                  {"least_element_decisions", std::to_string(with_least)},
                  {"minimal_set_decisions", std::to_string(test.size() - with_least)}};
  return rep;
}

}  // namespace talg
