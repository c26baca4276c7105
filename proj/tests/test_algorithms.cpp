#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "talg/algorithms.hpp"
#include "talg/errors.hpp"

using namespace talg;

namespace {

void expect_ts(const TScalar& x, const TScalar& y, double tol = 1e-10) {
  EXPECT_TRUE(approx_equal(x, y, tol)) << "distance " << norm_canonical(x - y);
}

TMatrix tvec(const TShape& s, const std::vector<std::vector<cplx>>& slices) {
  std::vector<CMatrix> m;
  for (const auto& v : slices) m.push_back(Eigen::Map<const Eigen::VectorXcd>(v.data(), Eigen::Index(v.size())));
  return TMatrix::assemble(s, m);
}

TMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return TMatrix::assemble(TShape{1}, {m});
}

TScalar spectrum_scalar(const TShape& s, std::vector<double> v) {
  return TScalar::from_spectrum(s, std::vector<cplx>(v.begin(), v.end()));
}

}  // namespace

// ---- RankSpec and delta ----

TEST(RankSpec, ParseAndResolve) {
  EXPECT_EQ(RankSpec::parse("7").uniform_rank(), 7u);
  const RankSpec p = RankSpec::parse("2,1,0");
  EXPECT_FALSE(p.is_uniform());
  EXPECT_EQ(p.resolve(3, 3), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(RankSpec::uniform(2).resolve(4, 3), (std::vector<std::size_t>(4, 2)));
  EXPECT_THROW(RankSpec::uniform(4).resolve(2, 3), RankTooLargeError);
  EXPECT_THROW(p.resolve(2, 3), DimensionError);
  EXPECT_THROW(RankSpec::parse("a"), FormatError);
  EXPECT_THROW(RankSpec::parse("-1"), FormatError);
}

TEST(Delta, HandExample) {
  const TShape s{3};
  const auto d = delta_from_rank(RankSpec::per_slice({2, 1, 0}), 3, s);
  const TScalar q1 = primitive_idempotent(s, 0), q2 = primitive_idempotent(s, 1);
  expect_ts(d[0], q1 + q2);
  expect_ts(d[1], q1);
  expect_ts(d[2], TScalar::zero(s));
  expect_ts(d[0] + d[1] + d[2], RankSpec::per_slice({2, 1, 0}).as_tscalar(s));
  for (const TScalar& x : delta_from_rank(RankSpec::uniform(3), 3, s)) expect_ts(x, TScalar::one(s));
  for (const TScalar& x : delta_from_rank(RankSpec::uniform(0), 3, s)) expect_ts(x, TScalar::zero(s));
  EXPECT_THROW(delta_from_rank(RankSpec::per_slice({4, 0, 0}), 3, s), RankTooLargeError);
}

// ---- Low-rank approximation ----

TEST(LowRank, CanonicalEckartYoung) {
  const TMatrix a = low_rank_approx(diag2(3, 1), RankSpec::uniform(1));
  EXPECT_TRUE(approx_equal(a, diag2(3, 0), 1e-14));
  EXPECT_NEAR(frob_norm_canonical(diag2(3, 1) - a), 1.0, 1e-14);
}

TEST(LowRank, FullRankIsExact) {
  std::mt19937_64 rng(1);
  const TMatrix x = oracle::random_tmatrix(rng, TShape{2, 2}, 4, 3);
  EXPECT_TRUE(approx_equal(low_rank_approx(x, RankSpec::uniform(3)), x, 1e-8));
}

TEST(LowRank, PerSliceMatchesCanonicalTruncation) {
  std::mt19937_64 rng(2);
  const TShape s{2};
  const TMatrix x = oracle::random_tmatrix(rng, s, 6, 6);
  const std::vector<std::size_t> r{2, 4};
  const TMatrix a = low_rank_approx(x, RankSpec::per_slice(r));
  for (std::size_t k = 0; k < 2; ++k) {
    const Eigen::VectorXd sv = oracle::singular_values_via_eig(x.slice(k));
    const double expected = sv.tail(6 - r[k]).norm();
    EXPECT_NEAR((CMatrix(x.slice(k)) - CMatrix(a.slice(k))).norm(), expected, 1e-10 * sv(0));
    EXPECT_EQ(oracle::rank_lu(a.slice(k)), Eigen::Index(r[k]));
  }
  EXPECT_TRUE(partial_le(rank(a), RankSpec::per_slice(r).as_tscalar(s), {.eq_tol = 1e-10, .cone_tol = 1e-8}));
}

TEST(LowRank, OptimalAgainstRandomCandidates) {
  std::mt19937_64 rng(3);
  const TShape s{2, 2};
  const TMatrix x = oracle::random_tmatrix(rng, s, 4, 4);
  for (const RankSpec& h : {RankSpec::uniform(1), RankSpec::uniform(3), RankSpec::per_slice({0, 1, 2, 3}),
                            RankSpec::per_slice({4, 2, 1, 0})}) {
    const TMatrix a = low_rank_approx(x, h);
    const auto r = h.resolve(4, 4);
    for (int trial = 0; trial < 200; ++trial) {
      for (std::size_t k = 0; k < 4; ++k) {
        const double best = (CMatrix(x.slice(k)) - CMatrix(a.slice(k))).norm();
        CMatrix cand = CMatrix::Zero(4, 4);
        if (r[k] > 0) cand = oracle::random_matrix(rng, 4, r[k]) * oracle::random_matrix(rng, r[k], 4);
        EXPECT_LE(best, (CMatrix(x.slice(k)) - cand).norm() + 1e-12);
      }
    }
  }
}

// ---- Least squares ----

TEST(Lstsq, HandExample) {
  const TShape s{1};
  const TMatrix w = tvec(s, {{1.0, 1.0}});
  const TMatrix a = tvec(s, {{1.0, 3.0}});
  const LstsqResult r = lstsq(w, a);
  EXPECT_NEAR(std::abs(r.beta.slice(0)(0, 0) - 2.0), 0, 1e-14);
  EXPECT_NEAR(r.residual_norm.spatial(0).real(), std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(r.unique);
}

TEST(Lstsq, ExactWhenInColumnModule) {
  std::mt19937_64 rng(4);
  const TShape s{3, 2};
  const TMatrix w = oracle::random_tmatrix(rng, s, 5, 2), beta = oracle::random_tmatrix(rng, s, 2, 1);
  const LstsqResult r = lstsq(w, matmul(w, beta));
  EXPECT_LT(norm_canonical(r.residual_norm), 1e-10);
  EXPECT_TRUE(approx_equal(r.beta, beta, 1e-10));
  EXPECT_THROW(lstsq(oracle::random_tmatrix(rng, s, 2, 3), oracle::random_tmatrix(rng, s, 2, 1)), DimensionError);
}

TEST(Lstsq, ProjectionProperties) {
  std::mt19937_64 rng(5);
  const TShape s{2, 3};
  TMatrix w = oracle::random_tmatrix(rng, s, 6, 3);
  w.mutable_slice(4).col(2) = 2.0 * w.slice(4).col(1);
  const TMatrix a = oracle::random_tmatrix(rng, s, 6, 1);
  const LstsqResult r = lstsq(w, a, true);
  ASSERT_TRUE(r.projection_tmatrix.has_value());
  const TMatrix& p = *r.projection_tmatrix;
  EXPECT_TRUE(approx_equal(matmul(p, p), p, 1e-8));
  EXPECT_TRUE(approx_equal(conj_transpose(p), p, 1e-8));
  expect_ts(rank(p), rank(w), 1e-8);
  EXPECT_TRUE(approx_equal(r.projection, matmul(w, r.beta), 1e-8));
  EXPECT_TRUE(approx_equal(r.projection, matmul(p, a), 1e-8));
  EXPECT_FALSE(r.unique);
  const TMatrix res = a - r.projection;
  for (std::size_t c = 0; c < 3; ++c) EXPECT_LT(norm_canonical(psi(w.column(c), res)), 1e-8);
  expect_ts(r.residual_norm, frob_norm_r(res), 1e-8);
  // agrees with a per-slice QR projection
  for (std::size_t k = 0; k < s.size(); ++k)
    if (k != 4) EXPECT_LT(oracle::rel_err(CMatrix(r.projection.slice(k)), oracle::qr_projection(w.slice(k), a.slice(k))), 1e-10);
}

TEST(Lstsq, RankDeficientMinimumNorm) {
  std::mt19937_64 rng(6);
  const TShape s{2};
  TMatrix w = oracle::random_tmatrix(rng, s, 4, 2);
  w.mutable_slice(1).col(1) = w.slice(1).col(0);
  const TMatrix a = oracle::random_tmatrix(rng, s, 4, 1);
  const LstsqResult r = lstsq(w, a);
  EXPECT_FALSE(r.unique);
  for (std::size_t k = 0; k < 2; ++k)
    EXPECT_LT(oracle::rel_err(CMatrix(r.beta.slice(k)), CMatrix(oracle::pinv_cod(w.slice(k)) * a.slice(k))), 1e-10);
}

TEST(LstsqGeneral, Family) {
  std::mt19937_64 rng(7);
  const TShape s{3};
  TMatrix w = oracle::random_tmatrix(rng, s, 5, 3);
  const TMatrix a = oracle::random_tmatrix(rng, s, 5, 1);
  const LstsqResult base = lstsq(w, a);
  EXPECT_TRUE(approx_equal(lstsq_general(w, a, TMatrix(s, 3, 1)), base.beta, 1e-12));
  const TMatrix xi = oracle::random_tmatrix(rng, s, 3, 1);
  EXPECT_TRUE(approx_equal(lstsq_general(w, a, xi), base.beta, 1e-8));

  w.mutable_slice(2).col(2) = w.slice(2).col(0) - w.slice(2).col(1);
  const LstsqResult def = lstsq(w, a);
  const TMatrix b1 = lstsq_general(w, a, xi), b2 = lstsq_general(w, a, oracle::random_tmatrix(rng, s, 3, 1));
  EXPECT_FALSE(approx_equal(b1, b2, 1e-6));
  expect_ts(frob_norm_r(a - matmul(w, b1)), def.residual_norm, 1e-8);
  expect_ts(frob_norm_r(a - matmul(w, b2)), def.residual_norm, 1e-8);
}

TEST(FitCombination, MatchesExplicitLstsq) {
  std::mt19937_64 rng(8);
  const TShape s{2, 2};
  const TMatrix b0 = oracle::random_tmatrix(rng, s, 3, 4), b1 = oracle::random_tmatrix(rng, s, 3, 4),
                t = oracle::random_tmatrix(rng, s, 3, 4);
  const CombinationFit fit = fit_combination(t, {&b0, &b1});
  TMatrix w(s, 12, 2), a(s, 12, 1);
  for (std::size_t k = 0; k < s.size(); ++k)
    for (std::size_t i = 0; i < 12; ++i) {
      w.mutable_slice(k)(i, 0) = b0.slice(k)(i / 4, i % 4);
      w.mutable_slice(k)(i, 1) = b1.slice(k)(i / 4, i % 4);
      a.mutable_slice(k)(i, 0) = t.slice(k)(i / 4, i % 4);
    }
  const LstsqResult r = lstsq(w, a);
  expect_ts(fit.coefficients[0], r.beta.entry(0, 0), 1e-9);
  expect_ts(fit.coefficients[1], r.beta.entry(1, 0), 1e-9);
  expect_ts(fit.residual_norm, r.residual_norm, 1e-9);
  const TMatrix resid = t - tscalar_mul(fit.coefficients[0], b0) - tscalar_mul(fit.coefficients[1], b1);
  EXPECT_NEAR(fit.residual_canonical, frob_norm_canonical(resid), 1e-9 * frob_norm_canonical(t));
}

TEST(FitCombination, CanonicalMatchesDenseSolve) {
  std::mt19937_64 rng(9);
  const TShape s{3};
  const TMatrix b0 = oracle::random_tmatrix(rng, s, 2, 3), b1 = oracle::random_tmatrix(rng, s, 2, 3),
                t = oracle::random_tmatrix(rng, s, 2, 3);
  const CanonicalFit fit = fit_combination_canonical(t, {&b0, &b1});
  const auto v0 = b0.to_spatial().values, v1 = b1.to_spatial().values, vt = t.to_spatial().values;
  CMatrix m(v0.size(), 2);
  Eigen::VectorXcd y(v0.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    m(i, 0) = v0[i];
    m(i, 1) = v1[i];
    y(i) = vt[i];
  }
  const Eigen::VectorXcd c = m.colPivHouseholderQr().solve(y);
  EXPECT_NEAR(std::abs(fit.coefficients[0] - c(0)), 0, 1e-10);
  EXPECT_NEAR(std::abs(fit.coefficients[1] - c(1)), 0, 1e-10);
  EXPECT_NEAR(fit.residual_canonical, (m * c - y).norm(), 1e-10);
  // the generalized fit is never worse than the canonical one
  EXPECT_LE(fit_combination(t, {&b0, &b1}).residual_canonical, fit.residual_canonical + 1e-12);
}

// ---- TPCA ----

TEST(Tpca, HandExample) {
  const TShape s{1};
  const TpcaModel m = tpca_fit({tvec(s, {{1.0, 0.0}}), tvec(s, {{-1.0, 0.0}})});
  EXPECT_EQ(m.q_m, 1u);
  EXPECT_LT(CMatrix(m.mean.slice(0)).norm(), 1e-15);
  EXPECT_NEAR(std::abs(m.components.slice(0)(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(m.components.slice(0)(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(m.singular_values[0].spatial(0).real(), std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(m.full_rank);
  EXPECT_THROW(tpca_fit({tvec(s, {{1.0, 0.0}})}), InsufficientDataError);
}

TEST(Tpca, EqualSamplesHaveZeroSpectrum) {
  std::mt19937_64 rng(10);
  const TMatrix x = oracle::random_tmatrix(rng, TShape{3}, 4, 1);
  const TpcaModel m = tpca_fit({x, x, x});
  for (const TScalar& l : m.singular_values) expect_ts(l, TScalar::zero(TShape{3}));
  EXPECT_FALSE(m.full_rank);
  EXPECT_TRUE(approx_equal(tpca_reconstruct(m, x, RankSpec::uniform(2)), x, 1e-12));
}

TEST(Tpca, FirstComponentMatchesPowerIteration) {
  std::mt19937_64 rng(11);
  const TShape s{2, 2};
  std::vector<TMatrix> samples;
  for (int i = 0; i < 3; ++i) samples.push_back(oracle::random_tmatrix(rng, s, 4, 1));
  const TpcaModel m = tpca_fit(samples);
  TMatrix centered(s, 4, 3);
  for (std::size_t k = 0; k < s.size(); ++k)
    for (int i = 0; i < 3; ++i) centered.mutable_slice(k).col(i) = samples[i].slice(k) - m.mean.slice(k);
  const TMatrix u = oracle::first_component_power(centered);
  EXPECT_GT(oracle::min_slice_alignment(u, m.components.column(0)), 1 - 1e-8);
  // components are orthonormal and singular values descend
  EXPECT_TRUE(approx_equal(matmul(conj_transpose(m.components), m.components), TMatrix::identity(s, 2), 1e-8));
  EXPECT_TRUE(is_nonnegative(m.singular_values[0] - m.singular_values[1]));
}

TEST(Tpca, ShapeOneMatchesCanonicalPca) {
  std::mt19937_64 rng(12);
  const TShape s{1};
  const CMatrix data = oracle::random_matrix(rng, 5, 8);
  std::vector<TMatrix> samples;
  for (int i = 0; i < 8; ++i) samples.push_back(TMatrix::assemble(s, {CMatrix(data.col(i))}));
  const TpcaModel m = tpca_fit(samples);
  const oracle::Pca ref = oracle::pca_eig(data, 3);
  EXPECT_LT((CMatrix(m.mean.slice(0)) - CMatrix(ref.mean)).norm(), 1e-12);
  const CMatrix y = oracle::random_matrix(rng, 5, 1);
  const TMatrix ty = TMatrix::assemble(s, {y});
  const CMatrix p_ref = ref.components * ref.components.adjoint();
  const CMatrix rec_ref = p_ref * (y - ref.mean) + ref.mean;
  EXPECT_LT(oracle::rel_err(CMatrix(tpca_reconstruct(m, ty, RankSpec::uniform(3)).slice(0)), rec_ref), 1e-10);
  const CMatrix coords = tpca_transform(m, ty, RankSpec::uniform(3)).slice(0);
  const CMatrix coords_ref = ref.components.adjoint() * (y - ref.mean);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(coords(i, 0)), std::abs(coords_ref(i, 0)), 1e-10);
}

TEST(Tpca, TransformAndReconstructExamples) {
  std::mt19937_64 rng(13);
  const TShape s{3};
  std::vector<TMatrix> samples;
  for (int i = 0; i < 4; ++i) samples.push_back(oracle::random_tmatrix(rng, s, 6, 1));
  const TpcaModel m = tpca_fit(samples);
  ASSERT_TRUE(m.full_rank);
  EXPECT_EQ(frob_norm_canonical(tpca_transform(m, samples[1], RankSpec::uniform(0))), 0.0);
  EXPECT_TRUE(approx_equal(tpca_reconstruct(m, samples[1], RankSpec::uniform(0)), m.mean, 1e-14));
  for (const TMatrix& x : samples)
    EXPECT_LT(frob_norm_canonical(tpca_reconstruct(m, x, RankSpec::uniform(3)) - x), 1e-6);
  EXPECT_THROW(tpca_transform(m, samples[0], RankSpec::uniform(4)), RankTooLargeError);
}

TEST(Tpca, ProjectionIsLowRankIdempotentHermitian) {
  std::mt19937_64 rng(14);
  const TShape s{2, 2};
  std::vector<TMatrix> samples;
  for (int i = 0; i < 6; ++i) samples.push_back(oracle::random_tmatrix(rng, s, 5, 1));
  const TpcaModel m = tpca_fit(samples);
  const RankSpec h = RankSpec::per_slice({1, 3, 0, 2});
  const TMatrix p = tpca_projection(m, h);
  EXPECT_TRUE(approx_equal(matmul(p, p), p, 1e-8));
  EXPECT_TRUE(approx_equal(conj_transpose(p), p, 1e-8));
  expect_ts(rank(p), h.as_tscalar(s), 1e-8);
}

TEST(Tpca, ErrorIsMonotoneInRank) {
  std::mt19937_64 rng(15);
  const TShape s{3, 2};
  std::vector<TMatrix> samples;
  for (int i = 0; i < 7; ++i) samples.push_back(oracle::random_tmatrix(rng, s, 5, 1));
  const TpcaModel m = tpca_fit(samples);
  const TMatrix y = oracle::random_tmatrix(rng, s, 5, 1);
  TScalar prev = frob_norm_r(tpca_reconstruct(m, y, RankSpec::uniform(0)) - y);
  for (std::size_t r = 1; r <= m.q_m; ++r) {
    const TScalar cur = frob_norm_r(tpca_reconstruct(m, y, RankSpec::uniform(r)) - y);
    EXPECT_TRUE(partial_le(cur, prev)) << r;
    prev = cur;
  }
}

// ---- Pooling and PSNR ----

TEST(Pool, Examples) {
  const TMatrix x = TMatrix::from_entries(1, 1, {TScalar::from_spatial(TShape{3}, {3.0, 6.0, 9.0})});
  EXPECT_NEAR(std::abs(average_pool(x)(0, 0) - 6.0), 0, 1e-14);
  const TShape s{2, 3};
  EXPECT_NEAR(std::abs(average_pool(TMatrix::identity(s, 1))(0, 0) - 1.0 / 6.0), 0, 1e-15);
  std::mt19937_64 rng(16);
  const CMatrix y = oracle::random_matrix(rng, 2, 3);
  const TScalar t = oracle::random_tscalar(rng, s);
  cplx mean = 0;
  for (const cplx& v : t.spatial()) mean += v;
  mean /= 6.0;
  EXPECT_LT(oracle::rel_err(average_pool(ltimes(y, t)), CMatrix(y * mean)), 1e-12);
  const CMatrix a = oracle::random_matrix(rng, 2, 2);
  EXPECT_LT(oracle::rel_err(average_pool(TMatrix::assemble(TShape{1}, {a})), a), 1e-15);
}

TEST(Pool, SelectedModesAgainstDirectSum) {
  std::mt19937_64 rng(17);
  const TShape s{3, 2, 4};
  const TMatrix x = oracle::random_tmatrix(rng, s, 2, 2);
  const TMatrix p = average_pool_modes(x, {true, false, true});
  ASSERT_EQ(p.shape(), TShape({2}));
  const SpatialTMatrix sx = x.to_spatial(), sp = p.to_spatial();
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t e = 0; e < 4; ++e) {
      cplx acc = 0;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t l = 0; l < 4; ++l) acc += sx.values[s.flat_index(std::vector<std::size_t>{i, j, l}) * 4 + e];
      EXPECT_NEAR(std::abs(sp.values[j * 4 + e] - acc / 12.0), 0, 1e-12);
    }
}

TEST(Psnr, Examples) {
  const std::vector<double> x(10, 255.0), y(10, 254.0);
  EXPECT_NEAR(psnr(x, y, 255), 20 * std::log10(255.0), 1e-12);
  EXPECT_NEAR(psnr(x, y, 255), 48.131, 1e-3);
  EXPECT_EQ(psnr(x, x, 255), psnr_infinity);
  const std::vector<double> x2(20, 255.0), y2(20, 254.0);
  EXPECT_NEAR(psnr(x2, y2, 255), psnr(x, y, 255), 1e-12);
  EXPECT_THROW(psnr(x, x2, 255), DimensionError);
  EXPECT_THROW(psnr(x, y, 0), DomainError);
}

// ---- TNN ----

TEST(Tnn, QueryEqualToSample) {
  std::mt19937_64 rng(18);
  const TShape s{2, 2};
  std::vector<TMatrix> train;
  for (int i = 0; i < 4; ++i) train.push_back(oracle::random_tmatrix(rng, s, 3, 3));
  const TnnVerdict v = tnn_classify(train, {0, 1, 2, 3}, train[2]);
  ASSERT_TRUE(v.least_index.has_value());
  EXPECT_EQ(*v.least_index, 2u);
  EXPECT_EQ(v.chosen_label, 2);
  expect_ts(v.distances[2], TScalar::zero(s));
  EXPECT_THROW(tnn_classify({}, {}, train[0]), InsufficientDataError);
}

TEST(Tnn, ShapeOneIsNearestNeighbour) {
  std::mt19937_64 rng(19);
  const TShape s{1};
  std::vector<TMatrix> train;
  std::vector<int> labels;
  for (int i = 0; i < 8; ++i) {
    train.push_back(oracle::random_tmatrix(rng, s, 2, 2));
    labels.push_back(i);
  }
  const TMatrix q = oracle::random_tmatrix(rng, s, 2, 2);
  std::size_t best = 0;
  for (std::size_t i = 1; i < 8; ++i)
    if ((CMatrix(q.slice(0)) - CMatrix(train[i].slice(0))).norm() <
        (CMatrix(q.slice(0)) - CMatrix(train[best].slice(0))).norm())
      best = i;
  const TnnVerdict v = tnn_classify(train, labels, q);
  EXPECT_EQ(v.chosen_index, best);
  EXPECT_TRUE(v.least_index.has_value());
}

TEST(Tnn, NoLeastElement) {
  const TShape s{2};
  const TMatrix q = TMatrix::assemble(s, {CMatrix::Zero(1, 1), CMatrix::Zero(1, 1)});
  const TMatrix a = TMatrix::assemble(s, {CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 5.0)});
  const TMatrix b = TMatrix::assemble(s, {CMatrix::Constant(1, 1, 4.0), CMatrix::Constant(1, 1, 1.0)});
  const TnnVerdict v = tnn_classify({a, b}, {10, 20}, q);
  EXPECT_FALSE(v.least_index.has_value());
  EXPECT_EQ(v.minimal_indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(v.chosen_index, 1u);  // mean spectrum 2.5 beats 3
  EXPECT_EQ(v.chosen_label, 20);
}

TEST(Tnn, TieBreaksToLowestIndex) {
  const TShape s{2};
  const TnnVerdict v =
      tnn_decide({spectrum_scalar(s, {1, 3}), spectrum_scalar(s, {3, 1}), spectrum_scalar(s, {4, 4})}, {5, 6, 7});
  EXPECT_EQ(v.minimal_indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(v.chosen_index, 0u);
}

TEST(Tnn, PosetLogicAgainstBruteForce) {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> pick(0, 3);
  const TShape s{3};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TScalar> d;
    std::vector<int> labels;
    for (int j = 0; j < 6; ++j) {
      d.push_back(spectrum_scalar(s, {double(pick(rng)), double(pick(rng)), double(pick(rng))}));
      labels.push_back(j);
    }
    const TnnVerdict v = tnn_decide(d, labels);
    auto le = [&](std::size_t a, std::size_t b) {
      for (std::size_t k = 0; k < 3; ++k)
        if (d[a].spectrum(k).real() > d[b].spectrum(k).real() + 1e-12) return false;
      return true;
    };
    std::vector<std::size_t> minimal;
    for (std::size_t a = 0; a < 6; ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < 6; ++b) dominated = dominated || (le(b, a) && !le(a, b));
      if (!dominated) minimal.push_back(a);
    }
    std::vector<std::size_t> least;
    for (std::size_t a = 0; a < 6; ++a) {
      bool all = true;
      for (std::size_t b = 0; b < 6; ++b) all = all && le(a, b);
      if (all) least.push_back(a);
    }
    if (least.size() == 1) {
      ASSERT_TRUE(v.least_index.has_value());
      EXPECT_EQ(*v.least_index, least[0]);
      EXPECT_EQ(v.minimal_indices, least);
    } else {
      EXPECT_FALSE(v.least_index.has_value());
      EXPECT_EQ(v.minimal_indices, minimal);
    }
    EXPECT_NE(std::find(v.minimal_indices.begin(), v.minimal_indices.end(), v.chosen_index), v.minimal_indices.end());
  }
}
