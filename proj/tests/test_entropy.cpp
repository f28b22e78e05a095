#include <doctest.h>

#include <cmath>
#include <numeric>

#include "motzkin/entropy.hpp"
#include "motzkin/hamiltonian.hpp"
#include "oracles.hpp"

using namespace motzkin;

TEST_CASE("half weights by hand") {
  for (double t : {0.5, 1.0, 2.0}) {
    const auto one = half_weights({1, 3, t});
    CHECK(std::exp(one.log_d[0]) == doctest::Approx(1.0));
    CHECK(std::exp(one.log_d[1]) == doctest::Approx(t));

    const auto two = half_weights({2, 1, t});
    CHECK(std::exp(two.log_d[0]) == doctest::Approx(1 + t * t));
    CHECK(std::exp(two.log_d[1]) == doctest::Approx(t + t * t * t));
    CHECK(std::exp(two.log_d[2]) == doctest::Approx(std::pow(t, 4)));

    CHECK(std::exp(half_weights({2, 2, t}).log_d[0]) == doctest::Approx(1 + 2 * t * t));
  }
}

TEST_CASE("right halves weigh the same as left halves") {
  for (int s = 1; s <= 3; ++s) {
    for (int n : {1, 2, 5, 30}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const auto l = half_weights({n, s, t});
        const auto r = right_half_weights({n, s, t});
        for (std::size_t m = 0; m < l.log_d.size(); ++m) {
          CHECK(r.log_d[m] == doctest::Approx(l.log_d[m]).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("gluing identity: the Schmidt norm is Z") {
  for (int s = 1; s <= 3; ++s) {
    for (int n = 1; n <= 4; ++n) {
      for (double t : {0.5, 1.0, 2.0}) {
        const ModelParams p{n, s, t};
        const auto spec = schmidt_entropy(p);
        CHECK(spec.log_norm == doctest::Approx(ground_state(p, enumerate(p)).log_z).epsilon(1e-13));
        CHECK(spec.total_weight() == doctest::Approx(1.0).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("entropy matches the brute-force reduced density matrix") {
  for (int s = 1; s <= 3; ++s) {
    for (int n = 1; n <= 3; ++n) {
      for (double t : {0.5, 1.0, 2.0}) {
        const ModelParams p{n, s, t};
        const auto ens = enumerate(p);
        const auto gs = ground_state(p, ens);
        CHECK(std::abs(schmidt_entropy(p).entropy_bits - oracle::half_chain_entropy(ens, gs.amplitudes)) < 1e-9);
      }
    }
  }
}

TEST_CASE("entropy is unchanged by recoloring the ground state") {
  const ModelParams p{3, 3, 1.5};
  const auto ens = enumerate(p);
  const auto gs = ground_state(p, ens);
  Eigen::VectorXd flipped(gs.amplitudes.size());
  for (std::size_t i = 0; i < ens.size(); ++i) {
    flipped[static_cast<Eigen::Index>(*ens.find(color_flip(ens[i], 3)))] = gs.amplitudes[static_cast<Eigen::Index>(i)];
  }
  CHECK(oracle::half_chain_entropy(ens, flipped) ==
        doctest::Approx(oracle::half_chain_entropy(ens, gs.amplitudes)).epsilon(1e-12));
}

TEST_CASE("entropy special values") {
  CHECK(std::abs(schmidt_entropy(ModelParams{1, 2, 1.0}).entropy_bits - std::log2(3.0)) < 1e-12);
  CHECK(std::abs(schmidt_entropy(ModelParams{1, 1, 1.0}).entropy_bits - 1.0) < 1e-12);
  CHECK(schmidt_entropy(ModelParams{1, 2, 1e4}).entropy_bits == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("weights stay finite at large n") {
  const auto w = half_weights({500, 3, 3.0});
  for (double v : w.log_d) CHECK(std::isfinite(v));
  const auto spec = schmidt_entropy(w);
  CHECK(std::isfinite(spec.entropy_bits));
  CHECK(spec.total_weight() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("midpoint height") {
  for (double t : {0.5, 2.0}) {
    const auto st = midpoint_height_stats(ModelParams{1, 1, t});
    CHECK(st.distribution[0] == doctest::Approx(1 / (1 + t * t)));
    CHECK(st.distribution[1] == doctest::Approx(t * t / (1 + t * t)));
  }
  CHECK(midpoint_height_stats(ModelParams{200, 2, 2.0}).mean / 200 > 0.9);

  // sqrt(n) growth at t = 1, s = 1
  std::vector<double> x, y;
  for (int n = 50; n <= 400; n += 50) {
    x.push_back(std::log(n));
    y.push_back(std::log(midpoint_height_stats(ModelParams{n, 1, 1.0}).mean));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  CHECK(std::abs(sxy / sxx - 0.5) < 0.1);
}

TEST_CASE("entropy scan groups series and judges regimes") {
  std::vector<ModelParams> grid;
  for (int n = 20; n <= 200; n += 20) grid.push_back({n, 2, 2.0});
  for (int n = 25; n <= 400; n += 25) grid.push_back({n, 2, 1.0});
  for (int n = 10; n <= 100; n += 10) grid.push_back({n, 2, 0.5});
  for (int n = 10; n <= 40; n += 10) grid.push_back({n, 1, 2.0});
  const auto scan = entropy_scan(grid);
  CHECK(scan.rows.size() == grid.size());
  REQUIRE(scan.fits.size() == 4);
  for (const auto& fit : scan.fits) {
    CAPTURE(fit.s);
    CAPTURE(fit.t);
    if (fit.s == 1) {
      CHECK_FALSE(fit.judged);
      CHECK(fit.passed);
      continue;
    }
    CHECK(fit.judged);
    CHECK(fit.passed);
  }
  CHECK(sqrt_coefficient_reference(2) ==
        doctest::Approx(2.0 * std::sqrt(2.0 * (std::sqrt(2.0) / (2 * std::sqrt(2.0) + 1)) / M_PI)));
  CHECK(to_string(regime_of(1.0)) == "sqrt");
}
