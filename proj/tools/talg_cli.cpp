// Command-line driver for the t-algebra experiments.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "talg/algorithms.hpp"
#include "talg/errors.hpp"
#include "talg/experiments.hpp"
#include "talg/io.hpp"
#include "talg/lift.hpp"

namespace fs = std::filesystem;
using namespace talg;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

#ifndef TALG_DATA_DIR
#define TALG_DATA_DIR "data"
#endif

struct Common {
  std::vector<std::string> inputs;
  std::string output_csv;
  std::string output_image;
  std::string output;
  std::vector<std::string> ranks;
  std::string sweep;
  std::optional<std::size_t> lift;
  std::string layout;
  std::vector<std::string> variants;
  bool pool = false;
  unsigned seed = 0;
  std::optional<double> tol;
};

std::string data_path(const std::string& name) { return (fs::path(TALG_DATA_DIR) / name).string(); }

ToleranceProfile tolerance(const Common& c) {
  ToleranceProfile t;
  if (c.tol) {
    if (!(*c.tol > 0)) throw FormatError("--tol must be positive");
    t.rank_tol_factor = *c.tol;
  }
  return t;
}

// --rank values plus an optional --sweep first:last[:step].
std::vector<RankSpec> rank_list(const Common& c, std::size_t default_last) {
  std::vector<RankSpec> out;
  for (const auto& r : c.ranks) out.push_back(RankSpec::parse(r));
  std::string sweep = c.sweep;
  if (out.empty() && sweep.empty()) sweep = "0:" + std::to_string(default_last);
  if (!sweep.empty()) {
    std::vector<std::size_t> v;
    std::stringstream ss(sweep);
    std::string item;
    while (std::getline(ss, item, ':')) {
      try {
        v.push_back(std::stoul(item));
      } catch (const std::exception&) {
        throw FormatError("bad --sweep value '" + sweep + "'");
      }
    }
    if (v.size() < 2 || v.size() > 3 || (v.size() == 3 && v[2] == 0))
      throw FormatError("--sweep expects first:last[:step]");
    const std::size_t step = v.size() == 3 ? v[2] : 1;
    for (std::size_t r = v[0]; r <= v[1]; r += step) out.push_back(RankSpec::uniform(r));
  }
  return out;
}

void emit(const ExperimentReport& rep, const Common& c) {
  for (const auto& [k, v] : rep.metadata) std::cout << "# " << k << ": " << v << '\n';
  if (c.output_csv.empty()) {
    std::cout << rep.to_csv();
  } else {
    write_file(c.output_csv, rep.to_csv());
    std::cout << "# wrote " << c.output_csv << '\n';
  }
}

std::string checksums(const std::vector<std::string>& files) {
  std::string s;
  for (const auto& f : files) s += (s.empty() ? "" : " ") + fs::path(f).filename().string() + "=" + file_checksum(f);
  return s;
}

int cmd_approx(const Common& c) {
  const std::string input = c.inputs.empty() ? data_path("baboon.ppm") : c.inputs[0];
  const RealArray image = read_pnm(input);
  ApproxOptions opt;
  opt.lifts = c.lift.value_or(0);
  const std::vector<RankSpec> ranks = rank_list(c, std::min(image.dims[0], image.dims[1]));
  ExperimentReport rep = run_approx(image, ranks, opt);
  rep.metadata.push_back({"dataset", checksums({input})});
  emit(rep, c);

  if (!c.output_image.empty()) {
    // Reconstruction at the last requested rank; inception slice when lifted.
    LiftConfig cfg;
    cfg.repetitions = opt.lifts;
    const TMatrix x = TMatrix::from_spatial(image_to_tmatrix(image, cfg));
    const TMatrix approx = low_rank_approx(x, ranks.back());
    write_pnm(tmatrix_to_image(approx.to_spatial(), image.dims), c.output_image);
    std::cout << "# wrote " << c.output_image << '\n';
  }
  return 0;
}

int cmd_lstsq(const Common& c) {
  std::vector<std::string> files = c.inputs;
  if (files.empty())
    files = {data_path("faces/s1_1.pgm"), data_path("faces/s1_2.pgm"), data_path("faces/s2_1.pgm")};
  if (files.size() != 3) throw FormatError("lstsq expects three --input images (A, B, C)");
  const RealArray a = read_pnm(files[0]), b = read_pnm(files[1]), cc = read_pnm(files[2]);
  std::vector<std::size_t> lifts;
  for (std::size_t l = 0; l <= c.lift.value_or(4); ++l) lifts.push_back(l);
  ExperimentReport rep = run_lstsq(a, b, cc, lifts, 255.0, tolerance(c));
  rep.metadata.push_back({"dataset", checksums(files)});
  emit(rep, c);
  return 0;
}

std::vector<TpcaVariant> variants_of(const Common& c, const std::string& fallback) {
  std::vector<TpcaVariant> out;
  for (const auto& v : c.variants) out.push_back(tpca_variant(v));
  if (!c.layout.empty()) {
    const Layout layout = parse_layout(c.layout);
    const std::size_t lifts = c.lift.value_or(layout == Layout::channel ? 0 : 1);
    out.push_back({c.layout + "/" + std::to_string(lifts), layout, lifts});
  }
  if (out.empty()) out.push_back(tpca_variant(fallback));
  return out;
}

std::pair<std::vector<std::string>, std::pair<std::vector<CifarRecord>, std::vector<CifarRecord>>>
load_cifar(const Common& c) {
  std::vector<std::string> files = c.inputs;
  if (files.empty()) files = {data_path("cifar10_train36.bin"), data_path("cifar10_test25.bin")};
  if (files.size() != 2) throw FormatError("expected two --input files: training batch, query batch");
  return {files, {read_cifar_batch(files[0]), read_cifar_batch(files[1])}};
}

std::vector<RealArray> images_of(const std::vector<CifarRecord>& recs) {
  std::vector<RealArray> out;
  for (const auto& r : recs) out.push_back(r.image);
  return out;
}

int cmd_tpca(const Common& c) {
  auto [files, data] = load_cifar(c);
  TpcaOptions opt;
  opt.pool = c.pool;
  opt.tol = tolerance(c);
  const std::size_t max_rank = data.first.size() < 2 ? 0 : data.first.size() - 1;
  ExperimentReport rep = run_tpca(images_of(data.first), images_of(data.second), variants_of(c, "TPCA"),
                                  rank_list(c, max_rank), opt);
  rep.metadata.push_back({"dataset", checksums(files)});
  emit(rep, c);
  return 0;
}

int cmd_tnn(const Common& c) {
  auto [files, data] = load_cifar(c);
  const std::vector<TpcaVariant> v = variants_of(c, "TPCA");
  if (v.size() != 1) throw FormatError("tnn takes a single variant");
  ExperimentReport rep = run_tnn(data.first, data.second, v[0]);
  rep.metadata.push_back({"dataset", checksums(files)});
  emit(rep, c);
  return 0;
}

int cmd_lift(const Common& c) {
  if (c.inputs.size() != 1) throw FormatError("lift expects one --input image");
  const RealArray image = read_pnm(c.inputs[0]);
  LiftConfig cfg;
  cfg.repetitions = c.lift.value_or(1);
  SpatialTMatrix tm = image_to_tmatrix(image, cfg);
  std::cout << "shape " << tm.shape.to_string() << " K " << tm.shape.size() << " matrix "
            << tm.rows << "x" << tm.cols << '\n';
  if (!c.output_image.empty()) {
    write_pnm(tmatrix_to_image(tm, image.dims), c.output_image);
    std::cout << "# wrote " << c.output_image << '\n';
  }
  if (!c.output.empty()) {
    write_tmx(tm, c.output);
    std::cout << "# wrote " << c.output << '\n';
  }
  return 0;
}

int cmd_info(const Common& c) {
  if (c.inputs.empty()) throw FormatError("info expects --input");
  for (const auto& f : c.inputs) {
    const std::string bytes = read_file(f);
    std::cout << f << ": ";
    if (bytes.rfind("TMX1", 0) == 0) {
      const SpatialTMatrix a = parse_tmx(bytes);
      std::cout << "TMX1 shape " << a.shape.to_string() << " K " << a.shape.size() << " matrix "
                << a.rows << "x" << a.cols;
    } else if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
      const RealArray img = parse_pnm(bytes);
      std::cout << (bytes[1] == '5' ? "PGM " : "PPM ") << img.dims[0] << "x" << img.dims[1];
      if (img.order() == 3) std::cout << "x3";
    } else {
      const auto recs = parse_cifar_batch(bytes);
      std::cout << "CIFAR batch, " << recs.size() << " records";
    }
    std::cout << ", fnv1a " << file_checksum(f) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"t-algebra experiments: low-rank approximation, least squares, TPCA, TNN"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", c.inputs, "Input file(s)");
    sub->add_option("--output-csv", c.output_csv, "Write the report CSV here");
    sub->add_option("--output-image", c.output_image, "Write a reconstructed image (PNM)");
    sub->add_option("--rank", c.ranks, "Rank: integer, or comma-separated per-slice tuple")
        ->take_all();
    sub->add_option("--lift", c.lift, "Number of neighbourhood liftings");
    sub->add_option("--seed", c.seed, "Seed for randomized checks");
    sub->add_option("--tol", c.tol, "Singular-value cutoff factor");
  };

  auto* approx = app.add_subcommand("approx", "Low-rank approximation: SVD vs TSVD");
  add_common(approx);
  approx->add_option("--sweep", c.sweep, "Uniform rank range first:last[:step]");

  auto* lstsq = app.add_subcommand("lstsq", "Canonical vs generalized least squares on three images");
  add_common(lstsq);

  auto* tpca = app.add_subcommand("tpca", "TPCA reconstruction PSNR on CIFAR-10 batches");
  add_common(tpca);
  tpca->add_option("--sweep", c.sweep, "Uniform rank range first:last[:step]");
  tpca->add_option("--variant", c.variants, "PCA, TPCA, TPCA-I..III, TPCA-1..3")->take_all();
  tpca->add_option("--layout", c.layout, "channel, flatten or channel-into (with --lift)");
  tpca->add_flag("--pool", c.pool, "Also report PSNR after average pooling");

  auto* tnn = app.add_subcommand("tnn", "Nearest-neighbour classification by generalized distance");
  add_common(tnn);
  tnn->add_option("--variant", c.variants, "Vectorization variant (see tpca)");
  tnn->add_option("--layout", c.layout, "channel, flatten or channel-into (with --lift)");

  auto* lift = app.add_subcommand("lift", "Lift an image and write it as a TMX t-matrix");
  add_common(lift);
  lift->add_option("--output", c.output, "TMX output path");

  auto* info = app.add_subcommand("info", "Describe TMX, PNM or CIFAR files");
  add_common(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*approx) return cmd_approx(c);
    if (*lstsq) return cmd_lstsq(c);
    if (*tpca) return cmd_tpca(c);
    if (*tnn) return cmd_tnn(c);
    if (*lift) return cmd_lift(c);
    if (*info) return cmd_info(c);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const SingularError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
