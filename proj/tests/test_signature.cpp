#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sigclass/path.hpp"
#include "sigclass/rng.hpp"
#include "sigclass/signature.hpp"

using namespace sigclass;

namespace {

PiecewiseLinearPath two_segment_path() {
  // Unit step right then unit step up, in dimension 2.
  return PiecewiseLinearPath({0.0, 1.0, 2.0}, {0.0, 0.0, 1.0, 0.0, 1.0, 1.0}, 2);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("signature");

TEST_CASE("sig_dim closed form") {
  CHECK(sig_dim(3, 4) == 121);
  CHECK(sig_dim(1, 7) == 8);
  CHECK(sig_dim(2, 3) == 15);
  CHECK(sig_dim(2, 0) == 1);
  CHECK(sig_dim(5, 1) == 6);
}

TEST_CASE("sig_dim rejects bad input and reports overflow") {
  CHECK_THROWS_AS(sig_dim(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(sig_dim(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(sig_dim(10, 64), std::overflow_error);
  CHECK_THROWS_AS(sig_dim(2, 200), std::overflow_error);
}

TEST_CASE("segment_signature of a zero displacement is the identity") {
  const auto sig = segment_signature({0.0, 0.0}, 3);
  CHECK(sig.level(0) == std::vector<double>{1.0});
  for (int k = 1; k <= 3; ++k)
    for (double v : sig.level(k)) CHECK(v == 0.0);
}

TEST_CASE("segment_signature of a unit step") {
  const auto sig = segment_signature({1.0, 0.0}, 2);
  CHECK(sig.level(1) == std::vector<double>{1.0, 0.0});
  CHECK(sig.level(2) == std::vector<double>{0.5, 0.0, 0.0, 0.0});
}

TEST_CASE("segment_signature matches quadrature for displacement (1,2)") {
  const auto sig = segment_signature({1.0, 2.0}, 2);
  const std::vector<double> expected_level2{0.5, 1.0, 1.0, 2.0};
  CHECK(max_abs_diff(sig.level(2), expected_level2) < 1e-12);

  PiecewiseLinearPath seg({0.0, 1.0}, {0.0, 0.0, 1.0, 2.0}, 2);
  const auto levels = oracle::iterated_integrals(seg, 2, 4000);
  CHECK(max_abs_diff(sig.level(1), levels[1]) < 1e-8);
  CHECK(max_abs_diff(sig.level(2), levels[2]) < 1e-8);
}

TEST_CASE("segment levels equal tensor powers of the displacement over k!") {
  Rng rng(17);
  for (int d = 1; d <= 3; ++d) {
    std::vector<double> disp(static_cast<std::size_t>(d));
    for (auto& v : disp) v = rng.uniform(-2.0, 2.0);
    const auto sig = segment_signature(disp, 6);
    double factorial = 1.0;
    for (int k = 1; k <= 6; ++k) {
      factorial *= static_cast<double>(k);
      const auto& lv = sig.level(k);
      for (std::size_t idx = 0; idx < lv.size(); ++idx) {
        double prod = 1.0;
        std::size_t rest = idx;
        for (int pos = 0; pos < k; ++pos) {
          prod *= disp[rest % static_cast<std::size_t>(d)];
          rest /= static_cast<std::size_t>(d);
        }
        CHECK(lv[idx] == doctest::Approx(prod / factorial).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("chen identity element leaves a signature unchanged") {
  const auto sig = segment_signature({0.3, -1.2, 0.7}, 4);
  const GradedSignature id(3, 4);
  const auto left = chen_concat(id, sig);
  const auto right = chen_concat(sig, id);
  for (int k = 0; k <= 4; ++k) {
    CHECK(left.level(k) == sig.level(k));    // bitwise
    CHECK(right.level(k) == sig.level(k));
  }
}

TEST_CASE("collinear segments concatenate to one straight segment") {
  const auto a = segment_signature({1.0, 0.0}, 3);
  const auto joined = chen_concat(a, a);
  const auto straight = segment_signature({2.0, 0.0}, 3);
  for (int k = 0; k <= 3; ++k)
    CHECK(max_abs_diff(joined.level(k), straight.level(k)) < 1e-12);
}

TEST_CASE("L-shaped path: second-level entries and signed area") {
  const auto sig = chen_concat(segment_signature({1.0, 0.0}, 2), segment_signature({0.0, 1.0}, 2));
  const double s12 = sig.level(2)[0 * 2 + 1];
  const double s21 = sig.level(2)[1 * 2 + 0];
  CHECK(s12 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s21 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s12 - s21 == doctest::Approx(1.0).epsilon(1e-12));  // signed area of the hook

  // Same numbers from first-principles quadrature of the concatenated path.
  const auto levels = oracle::iterated_integrals(two_segment_path(), 2, 4000);
  CHECK(std::abs(levels[2][1] - 1.0) < 1e-6);
  CHECK(std::abs(levels[2][2] - 0.0) < 1e-6);
}

TEST_CASE("chen rejects mismatched alphabet size or order") {
  const auto a = segment_signature({1.0, 0.0}, 2);
  const auto b = segment_signature({1.0, 0.0, 0.0}, 2);
  const auto c = segment_signature({1.0, 0.0}, 3);
  CHECK_THROWS_AS(chen_concat(a, b), std::invalid_argument);
  CHECK_THROWS_AS(chen_concat(a, c), std::invalid_argument);
}

TEST_CASE("chen product is associative") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<GradedSignature> sigs;
    for (int s = 0; s < 3; ++s) {
      std::vector<double> disp(3);
      for (auto& v : disp) v = rng.uniform(-1.0, 1.0);
      sigs.push_back(segment_signature(disp, 4));
    }
    const auto left = chen_concat(chen_concat(sigs[0], sigs[1]), sigs[2]);
    const auto right = chen_concat(sigs[0], chen_concat(sigs[1], sigs[2]));
    for (int k = 0; k <= 4; ++k) CHECK(max_abs_diff(left.level(k), right.level(k)) < 1e-12);
  }
}

TEST_CASE("path_signature at order 0 is the constant 1") {
  const auto sig = path_signature(two_segment_path(), 0);
  CHECK(sig.flatten() == std::vector<double>{1.0});
}

TEST_CASE("first level equals the net displacement") {
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const auto path = oracle::random_path(rng, 3, 12);
    const auto sig = path_signature(path, 3);
    const std::size_t last = path.num_vertices() - 1;
    for (int c = 0; c < 3; ++c)
      CHECK(sig.level(1)[static_cast<std::size_t>(c)] ==
            doctest::Approx(path.coord(last, c) - path.coord(0, c)).epsilon(1e-12));
  }
}

TEST_CASE("signature agrees with brute-force iterated integrals up to level 3") {
  Rng rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const auto path = oracle::random_path(rng, 2, 5);
    const auto sig = path_signature(path, 3);
    const auto levels = oracle::iterated_integrals(path, 3, 2500);
    for (int k = 1; k <= 3; ++k) CHECK(max_abs_diff(sig.level(k), levels[static_cast<std::size_t>(k)]) < 1e-6);
  }
}

TEST_CASE("splitting a path and concatenating the halves is consistent") {
  Rng rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_int(3));   // 2..4
    const int p = 2 + static_cast<int>(rng.uniform_int(4));   // 2..5
    const std::size_t m = 4 + rng.uniform_int(17);            // 4..20 vertices
    const auto path = oracle::random_path(rng, d, m);
    const std::size_t cut = 1 + rng.uniform_int(m - 2);

    const auto full = path_signature(path, p);

    GradedSignature head = segment_signature(path.displacement(0), p);
    for (std::size_t i = 1; i < cut; ++i) head.concat_inplace(segment_signature(path.displacement(i), p));
    GradedSignature tail = segment_signature(path.displacement(cut), p);
    for (std::size_t i = cut + 1; i + 1 < m; ++i) tail.concat_inplace(segment_signature(path.displacement(i), p));
    const auto glued = chen_concat(head, tail);

    for (int k = 0; k <= p; ++k) CHECK(max_abs_diff(full.level(k), glued.level(k)) < 1e-9);
  }
}

TEST_CASE("inserting a collinear vertex does not change the signature") {
  Rng rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const auto path = oracle::random_path(rng, 3, 8);
    // Insert the midpoint of segment 2 as an explicit vertex.
    std::vector<double> times = path.times();
    std::vector<double> coords = path.coords();
    const double tmid = 0.5 * (path.time(2) + path.time(3));
    std::vector<double> vmid(3);
    for (int c = 0; c < 3; ++c) vmid[static_cast<std::size_t>(c)] = 0.5 * (path.coord(2, c) + path.coord(3, c));
    times.insert(times.begin() + 3, tmid);
    coords.insert(coords.begin() + 9, vmid.begin(), vmid.end());
    const PiecewiseLinearPath refined(std::move(times), std::move(coords), 3);

    const auto a = path_signature(path, 4);
    const auto b = path_signature(refined, 4);
    for (int k = 0; k <= 4; ++k) CHECK(max_abs_diff(a.level(k), b.level(k)) < 1e-12);
  }
}

TEST_CASE("signature ignores the parametrization of the trace") {
  // Same vertices under two different timestamp sequences.
  PiecewiseLinearPath p1({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 0.5, 2.0, 0.0, 1.0, 3.0, 0.0}, 2);
  PiecewiseLinearPath p2({0.0, 0.1, 0.2, 5.0}, {0.0, 1.0, 0.5, 2.0, 0.0, 1.0, 3.0, 0.0}, 2);
  const auto a = path_signature(p1, 4);
  const auto b = path_signature(p2, 4);
  for (int k = 0; k <= 4; ++k)
    for (std::size_t i = 0; i < a.level(k).size(); ++i) CHECK(a.level(k)[i] == b.level(k)[i]);
}

TEST_CASE("flattened length equals sig_dim across alphabets and orders") {
  Rng rng(5);
  for (int d = 1; d <= 8; ++d) {
    for (int p = 0; p <= 6; ++p) {
      std::size_t n = 0;
      try {
        n = sig_dim(d, p);
      } catch (const std::overflow_error&) {
        continue;
      }
      if (n > kDefaultFeatureBudget) continue;
      const auto path = oracle::random_path(rng, d, 4);
      const auto sig = path_signature(path, p);
      CHECK(sig.flatten().size() == n);
      CHECK(sig.flat_size() == n);
    }
  }
}

TEST_CASE("path_signature refuses combinations beyond the feature budget") {
  Rng rng(2);
  const auto path = oracle::random_path(rng, 8, 4);
  CHECK_THROWS_AS(path_signature(path, 6), std::invalid_argument);     // 8^6 block alone is 262144
  CHECK_NOTHROW(path_signature(path, 6, 300000));                      // explicit override
}

TEST_CASE("norm bound: signature norm never exceeds exp of total variation") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(3));
    const auto base = oracle::random_path(rng, d, 10);
    const auto aug = time_augment(base);
    const auto sig = signature(aug, 5);
    const double tv_aug = total_variation(aug.path());
    const double tv_base = total_variation(base);
    const double span = base.domain_end() - base.domain_start();
    CHECK(sig.euclidean_norm() <= std::exp(tv_aug) * (1.0 + 1e-12));
    CHECK(sig.euclidean_norm() <= std::exp(tv_base + span) * (1.0 + 1e-12));
  }
}

TEST_CASE("word_at enumerates letters lexicographically") {
  CHECK(word_at(2, 2, 0) == std::vector<int>{1, 1});
  CHECK(word_at(2, 2, 1) == std::vector<int>{1, 2});
  CHECK(word_at(2, 2, 2) == std::vector<int>{2, 1});
  CHECK(word_at(3, 3, 26) == std::vector<int>{3, 3, 3});
  CHECK(word_at(3, 0, 0).empty());
}

TEST_SUITE_END();
