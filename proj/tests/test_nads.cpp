#include <cmath>
#include <random>

#include "doctest.h"
#include "nadsthermo/catalog.hpp"
#include "nadsthermo/nads.hpp"
#include "oracles.hpp"

using namespace nadsthermo;

namespace {
std::shared_ptr<const SampledSpace> circle(std::size_t n) { return std::make_shared<const SampledSpace>(SampledSpace::circle(n)); }
}  // namespace

TEST_CASE("composition orbits") {
  const auto c8 = circle(8);
  const auto id = make_system("identity", c8);
  CHECK(composition_orbit(id, 3, 5).entries == std::vector<PointId>(6, 3));
  const auto dbl = make_system("doubling", c8);
  CHECK(composition_orbit(dbl, 1, 2).entries == std::vector<PointId>{1, 2, 4});
  const auto per = make_system("periodic:[doubling,identity]", c8);
  CHECK(per.period() == 2u);
  CHECK(composition_orbit(per, 1, 4).entries == std::vector<PointId>{1, 2, 2, 4, 4});
  CHECK_THROWS(composition_orbit(dbl, 8, 2));
}

TEST_CASE("orbit bundle matches repeated application") {
  const auto sp = circle(101);
  const auto seq = make_system("periodic:[doubling,rotation:0.3,tripling]", sp);
  const auto bundle = seq.orbits(12);
  for (PointId x : {0u, 5u, 50u, 100u}) {
    const auto ref = oracle::orbit([&](int n, int p) { return static_cast<int>(seq.apply(n, p)); }, x, 12);
    for (int i = 0; i <= 12; ++i) CHECK(bundle->at(i, x) == static_cast<PointId>(ref[i]));
  }
  // period consistency F_{i+p} = (f_p o ... o f_1) applied after F_i
  for (std::size_t n = 1; n <= 9; ++n) CHECK(seq.step_map(n) == seq.step_map(n + 3));
}

TEST_CASE("bowen metric") {
  const auto c16 = circle(16);
  const auto dbl = make_system("doubling", c16);
  CHECK(bowen_metric(dbl, 0, 1, 3) == 0.25);
  CHECK(bowen_metric(dbl, 5, 5, 7) == 0.0);
  const auto id = make_system("identity", c16);
  for (std::size_t n : {1u, 4u, 9u}) CHECK(bowen_metric(id, 2, 7, n) == c16->distance(2, 7));
  CHECK(bowen_metric(dbl, 3, 9, 1) == c16->distance(3, 9));
}

TEST_CASE("bowen metric is a pseudometric and nondecreasing in n") {
  const auto sp = circle(257);
  const auto seq = make_system("periodic:[doubling,rotation:0.1]", sp);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto a = static_cast<PointId>(rng() % 257), b = static_cast<PointId>(rng() % 257),
               c = static_cast<PointId>(rng() % 257);
    for (std::size_t n : {1u, 3u, 6u}) {
      CHECK(bowen_metric(seq, a, b, n) == bowen_metric(seq, b, a, n));
      CHECK(bowen_metric(seq, a, c, n) <= bowen_metric(seq, a, b, n) + bowen_metric(seq, b, c, n) + 1e-15);
      CHECK(bowen_metric(seq, a, b, n) <= bowen_metric(seq, a, b, n + 1));
    }
  }
}

TEST_CASE("birkhoff and misiurewicz sums") {
  const auto c8 = circle(8);
  const auto dbl = make_system("doubling", c8);
  const auto t = coord_potential(*c8);
  CHECK(birkhoff_sum(dbl, t, 1, 3) == 0.875);
  CHECK(misiurewicz_sum(dbl, t, 1, 3) == 0.75);
  CHECK(birkhoff_sum(dbl, zero_potential(*c8), 3, 4) == 0.0);
  CHECK(birkhoff_sum(dbl, constant_potential(*c8, 1.5), 3, 4) == 6.0);
  CHECK(misiurewicz_sum(dbl, constant_potential(*c8, 1.5), 3, 4) == 6.0);
  const auto id = make_system("identity", c8);
  CHECK(misiurewicz_sum(id, t, 3, 4) == 4 * t(3));

  const auto sp = circle(61);
  const auto seq = make_system("periodic:[tripling,rotation:0.2]", sp);
  const auto phi = lipschitz_random_potential(*sp, 9, 3.0);
  for (PointId x = 0; x < 61; x += 7) {
    for (std::size_t n : {1u, 2u, 5u, 8u}) {
      const auto orb = composition_orbit(seq, x, n).entries;
      const double b = birkhoff_sum(seq, phi, x, n), m = misiurewicz_sum(seq, phi, x, n);
      CHECK(b - m == doctest::Approx(phi(x) - phi(orb[n])).epsilon(1e-12));
      CHECK(std::abs(b - m) <= 2 * phi.sup_norm());
      double ref = 0.0;
      for (std::size_t i = 0; i < n; ++i) ref += phi(orb[i]);
      CHECK(b == ref);
    }
  }
  const auto bundle = seq.orbits(8);
  const auto sums = orbit_sums(*bundle, phi, 0, 7);
  for (PointId x = 0; x < 61; ++x) CHECK(sums[x] == birkhoff_sum(seq, phi, x, 8));
  const auto msums = orbit_sums(*bundle, phi, 1, 8);
  for (PointId x = 0; x < 61; ++x) CHECK(msums[x] == misiurewicz_sum(seq, phi, x, 8));
}

TEST_CASE("catalog maps") {
  const auto c9 = circle(9);
  CHECK(make_step_map("doubling", *c9) == StepMap{0, 2, 4, 6, 8, 1, 3, 5, 7});
  CHECK(make_step_map("tripling", *c9) == StepMap{0, 3, 6, 0, 3, 6, 0, 3, 6});
  CHECK(make_step_map("rotation:0.25", *circle(8)) == StepMap{2, 3, 4, 5, 6, 7, 0, 1});
  const auto iv = SampledSpace::interval(5);
  CHECK(make_step_map("tent", iv) == StepMap{0, 2, 4, 2, 0});
  CHECK(make_step_map("logistic:4", iv) == StepMap{0, 3, 4, 3, 0});
  CHECK_THROWS(make_step_map("logistic:5", iv));
  CHECK_THROWS(make_step_map("doubling", iv));
  CHECK_THROWS(make_step_map("warp", *c9));
  const auto sym = SampledSpace::symbolic({2, 3});
  const auto sh = make_step_map("shift:2", sym);
  for (PointId p = 0; p < 8; ++p) {
    const auto w = oracle::shift(oracle::word(static_cast<int>(p), 2, 3));
    CHECK(sh[p] == static_cast<PointId>(w[0] * 4 + w[1] * 2 + w[2]));
  }
  CHECK_THROWS(make_step_map("shift:3", sym));
  CHECK(split_periodic_entries("northsouth:0.1,0.6,doubling") == std::vector<std::string>{"northsouth:0.1,0.6", "doubling"});
  CHECK_THROWS(make_system("periodic:[periodic:[doubling]]", c9));
}

TEST_CASE("north-south maps fix only source and sink") {
  const auto sp = circle(1000);
  const auto f = make_step_map("northsouth:0.1,0.6", *sp);
  std::vector<PointId> fixed;
  for (PointId p = 0; p < 1000; ++p)
    if (f[p] == p) fixed.push_back(p);
  CHECK(fixed == std::vector<PointId>{100, 600});
  // orbits drift toward the sink
  PointId x = 300;
  for (int i = 0; i < 400; ++i) x = f[x];
  CHECK(x == 600);
}

TEST_CASE("custom system file") {
  const std::string path = "custom_system_test.json";
  {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    std::fputs(R"({"label":"swap","points":["a","b","c"],"metric":[[0,1,1],[1,0,1],[1,1,0]],"maps":[[1,0,2],[0,0,2]]})",
               fp);
    std::fclose(fp);
  }
  const auto seq = load_custom_system(path);
  CHECK(seq.label() == "swap");
  CHECK(seq.period() == 2u);
  CHECK(composition_orbit(seq, 0, 3).entries == std::vector<PointId>{0, 1, 0, 1});
  std::remove(path.c_str());
}
