#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "random_gen.hpp"
#include "sispace/errors.hpp"
#include "sispace/generators.hpp"
#include "sispace/spectral.hpp"

using namespace sispace;
using namespace sispace::analysis;
using generators::BSpline;
using generators::PsiParams;
using generators::Sinc;

namespace {

SampledSpectrum build(const generators::GeneratorSpec& spec) {
  return generators::build_spectrum(spec, generators::auto_grid(spec));
}

const SampledSpectrum& hat() {
  static const SampledSpectrum f = build(BSpline{1});
  return f;
}

const SampledSpectrum& psi4() {
  static const SampledSpectrum f = build(PsiParams::make(1, 2, 2, 4));
  return f;
}

}  // namespace

TEST(Periodization, SincIsOneOffTheExcludedPoint) {
  const auto p = periodization(build(Sinc{}));
  EXPECT_EQ(p.excluded_count(), 1u);
  const auto b = riesz_bounds(p);
  EXPECT_EQ(b.m, 1.0);
  EXPECT_EQ(b.M, 1.0);
  EXPECT_TRUE(b.is_riesz);
  EXPECT_EQ(orthonormality_defect(p), 0.0);
}

TEST(Periodization, HatMatchesDirectSeries) {
  const auto p = periodization(hat());
  for (std::size_t r = 0; r < p.values.size(); r += 7) {
    const auto ref = oracle::hat_periodization(p.frequency(r), 2000);
    EXPECT_NEAR(p.values[r], ref.value, 1e-10 + ref.tail_bound) << p.frequency(r);
  }
  EXPECT_NEAR(p.values[p.values.size() / 2], 1.0 / 3.0, 1e-10);
}

TEST(RieszBounds, HatExtremes) {
  const auto b = riesz_bounds(periodization(hat()));
  EXPECT_NEAR(b.m, 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(b.M, 1.0, 1e-10);
  EXPECT_TRUE(b.is_riesz);
}

TEST(RieszBounds, ZeroSpectrumIsNotRiesz) {
  const auto g = make_grid(16, 4);
  const auto b = riesz_bounds(periodization(SampledSpectrum(g, std::vector<Complex>(g.size()), "zero")));
  EXPECT_EQ(b.m, 0.0);
  EXPECT_EQ(b.M, 0.0);
  EXPECT_FALSE(b.is_riesz);
}

TEST(OrthonormalityDefect, HatAndPsi) {
  EXPECT_NEAR(orthonormality_defect(periodization(hat())), 2.0 / 3.0, 1e-10);
  const auto p = periodization(psi4());
  EXPECT_LT(orthonormality_defect(p), 1e-3);
  ASSERT_TRUE(p.excluded_band());
  EXPECT_DOUBLE_EQ(p.excluded_band()->first, 0.5 - std::exp2(-4.0) / 2);
}

TEST(GramCoefficients, SincIsKronecker) {
  const auto a = gram_coefficients(build(Sinc{}), 5);
  ASSERT_EQ(a.size(), 11u);
  for (int k = -5; k <= 5; ++k) {
    EXPECT_NEAR(std::abs(a[static_cast<std::size_t>(k + 5)] - Complex(k == 0 ? 1.0 : 0.0)), 0.0, 1e-12);
  }
}

TEST(GramCoefficients, HatHasThreeTerms) {
  const auto a = gram_coefficients(hat(), 6);
  for (int k = -6; k <= 6; ++k) {
    const double expect = k == 0 ? 2.0 / 3.0 : (std::abs(k) == 1 ? 1.0 / 6.0 : 0.0);
    EXPECT_NEAR(std::abs(a[static_cast<std::size_t>(k + 6)] - Complex(expect)), 0.0, 1e-10) << k;
  }
}

TEST(GramCoefficients, PsiIsNearlyKronecker) {
  const auto a = gram_coefficients(psi4(), 8);
  for (int k = -8; k <= 8; ++k) {
    EXPECT_LT(std::abs(a[static_cast<std::size_t>(k + 8)] - Complex(k == 0 ? 1.0 : 0.0)), 2e-3) << k;
  }
}

TEST(GramCoefficients, RejectsAliasingOrder) {
  const auto g = make_grid(16, 4);
  EXPECT_THROW(gram_coefficients(generators::build_sinc(g), 8), PreconditionError);
}

TEST(TranslationInvariance, SincPasses) {
  const auto t = translation_invariance_defect(build(Sinc{}));
  EXPECT_TRUE(t.passes);
  EXPECT_LT(t.defect, 1e-14);
  EXPECT_FALSE(t.witness);
}

TEST(TranslationInvariance, HatAndPsiFail) {
  const auto th = translation_invariance_defect(hat());
  EXPECT_FALSE(th.passes);
  EXPECT_GT(th.defect, 0.1);
  const double quarter = std::pow(oracle::sinc(0.25), 2) * std::pow(oracle::sinc(-0.75), 2);
  EXPECT_GE(th.defect, quarter);
  const auto tp = translation_invariance_defect(psi4());
  EXPECT_FALSE(tp.passes);
  EXPECT_GT(tp.defect, 0.0);
  ASSERT_TRUE(tp.witness);
}

TEST(InvarianceReport, PsiPassesForItsOwnN) {
  const auto r = n_invariance_report(psi4(), 2);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.violation_fraction, 0.0);
  EXPECT_GT(r.evaluated_points, 0u);
}

TEST(InvarianceReport, HatFailsEveryN) {
  for (int n : {2, 3, 4}) {
    const auto r = n_invariance_report(hat(), n);
    EXPECT_FALSE(r.pass) << n;
    EXPECT_GT(r.violation_fraction, 0.9) << n;
  }
}

TEST(InvarianceReport, SincPassesForThree) { EXPECT_TRUE(n_invariance_report(build(Sinc{}), 3).pass); }

TEST(InvarianceReport, RejectsLargeN) {
  EXPECT_THROW(n_invariance_report(build(Sinc{}), 9), PreconditionError);
  EXPECT_THROW(n_invariance_report(build(Sinc{}), 1), PreconditionError);
}

TEST(DetectInvarianceGroup, Classification) {
  const auto sinc = detect_invariance_group(build(Sinc{}), 8);
  EXPECT_EQ(sinc.kind, InvarianceKind::RealCandidate);
  EXPECT_EQ(sinc.describe(), "R-candidate");

  const auto psi = detect_invariance_group(build(PsiParams::make(1, 2, 4, 3)), 8);
  EXPECT_EQ(psi.kind, InvarianceKind::Fractional);
  EXPECT_EQ(psi.passing_n, (std::vector<int>{2, 4}));
  EXPECT_EQ(psi.maximal_n, 4);
  EXPECT_EQ(psi.describe(), "(1/4)Z");

  const auto spline = detect_invariance_group(build(BSpline{2}), 8);
  EXPECT_EQ(spline.kind, InvarianceKind::Integers);
  EXPECT_EQ(spline.describe(), "Z");
}

TEST(SpectralProperty, PeriodizationEqualsExplicitShiftSum) {
  gen::Source src(101);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = src.grid(12);
    const auto f = src.sparse_spectrum(g, 0.4);
    const auto p = periodization(f);
    const std::int64_t s = g.samples_per_unit();
    for (std::int64_t r = 0; r < s; ++r) {
      double sum = 0.0;
      for (std::size_t pos = 0; pos < g.size(); ++pos) {
        const std::int64_t i = g.index_at(pos);
        if (((i % s) + s) % s == r) sum += std::norm(f.values()[pos]);
      }
      ASSERT_NEAR(p.values[static_cast<std::size_t>(r)], sum, 1e-13 * std::max(1.0, sum));
    }
  }
}

TEST(SpectralProperty, ClassEnergiesPartitionPeriodization) {
  gen::Source src(202);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = src.grid(12);
    if (g.half_range() < 4) continue;
    const auto f = src.sparse_spectrum(g, 0.5);
    const auto p = periodization(f);
    const int n = src.integer(2, g.half_range() / 2);
    for (std::size_t r = 0; r < p.values.size(); ++r) {
      double total = 0.0;
      for (double e : class_energies(f, n, r)) total += e;
      ASSERT_NEAR(total, p.values[r], 1e-12 * std::max(1.0, total));
    }
  }
}

TEST(SpectralProperty, TranslationPassImpliesEveryNPasses) {
  gen::Source src(303);
  int passing = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = src.grid(11);
    if (g.half_range() < 4) continue;
    std::vector<Complex> v(g.size());
    const std::int64_t s = g.samples_per_unit();
    // one active integer shift per residue, chosen at random, with occasional
    // extra actives so that both outcomes occur
    for (std::int64_t r = 0; r < s; ++r) {
      const int k = src.integer(-g.half_range(), g.half_range() - 1);
      v[g.position(r + k * s)] = {src.uniform(0.1, 1.0), 0.0};
      if (src.coin(0.02)) {
        const int k2 = src.integer(-g.half_range(), g.half_range() - 1);
        v[g.position(r + k2 * s)] = {src.uniform(0.1, 1.0), 0.0};
      }
    }
    const SampledSpectrum f(g, std::move(v), "fibre");
    if (!translation_invariance_defect(f).passes) continue;
    ++passing;
    for (int n = 2; n <= g.half_range() / 2; ++n) ASSERT_TRUE(n_invariance_report(f, n).pass) << n;
  }
  EXPECT_GT(passing, 5);
}

TEST(SpectralProperty, ExcludedPointsAreSkipped) {
  const auto p = periodization(psi4());
  const double hw = *p.exclusion_half_width;
  for (std::size_t r = 0; r < p.values.size(); ++r) {
    const bool in_band = std::abs(p.frequency(r) - 0.5) <= hw + 1e-12;
    ASSERT_EQ(static_cast<bool>(p.excluded[r]), in_band) << r;
  }
}
