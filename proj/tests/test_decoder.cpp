#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hyperdoa/decoder.hpp"
#include "hyperdoa/error.hpp"

using namespace hyperdoa;
using namespace hyperdoa::decoder;

namespace {

PseudoSpectrum flat(const AngularGrid& g = {}, double v = 0.0) {
  return {std::vector<double>(g.size(), v), g};
}

void set(PseudoSpectrum& s, double theta, double v) { s.scores[s.grid.nearest_index(theta)] = v; }

}  // namespace

TEST_CASE("single spike") {
  auto s = flat();
  set(s, 10.0, 1.0);
  const auto est = decode(s, {1, 6.0});
  REQUIRE(est.angles_deg.size() == 1);
  CHECK(est.angles_deg[0] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("second pick skips the suppressed neighbour") {
  auto s = flat();
  set(s, 10.0, 1.0);
  set(s, 14.0, 0.9);
  set(s, 40.0, 0.3);
  const auto est = decode(s, {2, 6.0});
  CHECK(est.angles_deg[0] == doctest::Approx(10.0));
  CHECK(est.angles_deg[1] == doctest::Approx(40.0));

  // Without a third spike the next best survivor is the lowest surviving angle.
  auto t = flat();
  set(t, 10.0, 1.0);
  set(t, 14.0, 0.9);
  const auto e2 = decode(t, {2, 6.0});
  CHECK(e2.angles_deg[1] == doctest::Approx(-90.0));
}

TEST_CASE("uniform spectrum picks from the left edge") {
  const auto est = decode(flat({}, 1.0), {2, 6.0});
  CHECK(est.angles_deg[0] == -90.0);
  CHECK(est.angles_deg[1] == doctest::Approx(-83.9).epsilon(1e-12));
}

TEST_CASE("suppression window is inclusive") {
  auto s = flat();
  set(s, 0.0, 1.0);
  set(s, 6.0, 0.9);
  set(s, 6.1, 0.8);
  set(s, -6.0, 0.85);
  const auto est = decode(s, {2, 6.0});
  CHECK(est.angles_deg[1] == doctest::Approx(6.1));
}

TEST_CASE("random spectra: separation, ordering, locality") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> ud;
  const AngularGrid g{};
  for (int trial = 0; trial < 300; ++trial) {
    auto s = flat(g);
    for (auto& v : s.scores) v = ud(gen);
    const std::size_t m = 1 + trial % 5;
    const auto est = decode(s, {m, 6.0});
    REQUIRE(est.angles_deg.size() == m);
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) CHECK(est.scores[i] <= est.scores[i - 1]);
      for (std::size_t j = i + 1; j < m; ++j) CHECK(std::abs(est.angles_deg[i] - est.angles_deg[j]) > 6.0);
    }
    CHECK(est.scores[0] == *std::max_element(s.scores.begin(), s.scores.end()));
    // Lowering a point far from all picks does not change the result.
    auto far = s;
    std::size_t k = 0;
    for (; k < g.size(); ++k) {
      bool clear = true;
      for (double a : est.angles_deg) clear = clear && std::abs(g.angle(k) - a) > 6.0 + 1e-9;
      if (clear) break;
    }
    if (k < g.size()) {
      far.scores[k] -= 1.0;
      CHECK(decode(far, {m, 6.0}).angles_deg == est.angles_deg);
    }
  }
}

TEST_CASE("ties resolve to the lowest angle") {
  auto s = flat();
  set(s, 30.0, 2.0);
  set(s, -50.0, 2.0);
  CHECK(decode(s, {1, 6.0}).angles_deg[0] == doctest::Approx(-50.0));
}

TEST_CASE("infeasible decoding reports how many peaks were found") {
  const AngularGrid g{-10.0, 10.0, 1.0};
  CHECK(decode(flat(g, 1.0), {3, 9.0}).angles_deg == std::vector<double>{-10.0, 0.0, 10.0});
  try {
    (void)decode(flat(g, 1.0), {3, 10.0});
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.found() == 2);
    CHECK(e.requested() == 3);
  }
}

TEST_CASE("decoder input validation") {
  CHECK_THROWS_AS((void)decode(flat(), {0, 6.0}), ConfigError);
  CHECK_THROWS_AS((void)decode(flat(), {1, 0.0}), ConfigError);
  PseudoSpectrum bad{std::vector<double>(10), AngularGrid{}};
  CHECK_THROWS_AS((void)decode(bad, {1, 6.0}), ShapeError);
  auto nan = flat();
  nan.scores[3] = std::nan("");
  CHECK_THROWS_AS((void)decode(nan, {1, 6.0}), DegenerateInputError);
}
