#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "talg/algorithms.hpp"
#include "talg/io.hpp"
#include "talg/lift.hpp"

namespace talg {

struct ExperimentReport {
  struct Row {
    std::string param;
    std::vector<double> values;
  };

  std::string id;
  std::vector<std::string> methods;
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  // Header "param,<method>...", one line per row; infinity prints as "inf".
  std::string to_csv() const;
  double value(const std::string& param, const std::string& method) const;
  std::vector<double> column(const std::string& method) const;
  std::string meta(const std::string& key) const;
};

std::string format_number(double v);

struct ApproxOptions {
  std::size_t lifts = 0;
  double max_value = 255.0;
};

// Columns: svd (flattened H x (W*C) image, only when every rank is uniform),
// tsvd (whole lifted array, N_entry = H*W*C*K_window) and, with lifting,
// tsvd_inception (inception slice against the image, N_entry = H*W*C).
ExperimentReport run_approx(const RealArray& image, const std::vector<RankSpec>& ranks,
                            const ApproxOptions& opt = {});

// A ~ lambda B + xi C. One row per lift count in lift_counts, keyed by the
// t-scalar order 2 + 2 * lifts; columns canonical and generalized.
ExperimentReport run_lstsq(const RealArray& a, const RealArray& b, const RealArray& c,
                           const std::vector<std::size_t>& lift_counts, double max_value = 255.0,
                           const ToleranceProfile& tol = {});

struct TpcaVariant {
  std::string name;
  Layout layout;
  std::size_t lifts;
};
// PCA, TPCA, TPCA-I..III (flatten), TPCA-1..3 (channel-into).
const std::vector<TpcaVariant>& tpca_variants();
TpcaVariant tpca_variant(const std::string& name);

struct TpcaOptions {
  bool pool = false;
  double max_value = 255.0;
  ToleranceProfile tol;
};

// Per-slice squared reconstruction errors err[k][r] summed over the query
// columns, for r = 0..Q_m.
std::vector<std::vector<double>> tpca_error_table(const TpcaModel& model, const TMatrix& queries);

// Stacks the images as columns of a t-matrix in the given layout.
TMatrix images_to_columns(const std::vector<RealArray>& images, Layout layout, std::size_t lifts);

// One column per variant (plus "<name>+pool" with pooling); rows are ranks.
ExperimentReport run_tpca(const std::vector<RealArray>& train, const std::vector<RealArray>& test,
                          const std::vector<TpcaVariant>& variants, const std::vector<RankSpec>& ranks,
                          const TpcaOptions& opt = {});

// Columns: label, predicted, least (1 if a least element existed), minimal
// (size of the minimal set). Accuracy and decision counts go in metadata.
ExperimentReport run_tnn(const std::vector<CifarRecord>& train, const std::vector<CifarRecord>& test,
                         const TpcaVariant& variant);

}  // namespace talg
