#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nadsthermo/catalog.hpp"
#include "nadsthermo/duality.hpp"

using namespace nadsthermo;

namespace {

std::shared_ptr<const SampledSpace> share(SampledSpace s) { return std::make_shared<const SampledSpace>(std::move(s)); }

std::vector<std::size_t> range(std::size_t a, std::size_t b) {
  std::vector<std::size_t> out;
  for (std::size_t n = a; n <= b; ++n) out.push_back(n);
  return out;
}

// Table with hand-set values, for the pure lookups.
GammaTable hand_table(const SampledSpace& space, std::vector<std::pair<Potential, double>> rows) {
  PotentialDictionary d = PotentialDictionary::zero_only(space);
  GammaTable g{d, {}, {}};
  g.values.push_back(rows.front().second);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    g.dictionary.add({EntryKind::base, rows[i].first, rows[i].first.label, 1.0, 0});
    g.values.push_back(rows[i].second);
  }
  return g;
}

}  // namespace

TEST_CASE("dictionary closure") {
  const auto seq = make_system("periodic:[doubling,doubling,tripling]", share(SampledSpace::circle(35)));
  const auto& sp = seq.space();
  ClosureParams params;
  params.steps = 3;
  params.max_scaling = 4;
  const auto d = PotentialDictionary::closure(seq, {coord_potential(sp), cosine_potential(sp, 1)}, params);
  CHECK(scaling_factors(4) == std::vector<double>{1, -1, 2, -2, 4, -4});
  // zero + 2 bases + 2 constants + 2*5 scalings + 2 distinct maps * 2 bases * 6 + 1 midpoint
  CHECK(d.size() == 1 + 2 + 2 + 10 + 24 + 1);
  CHECK(d.find("zero"));
  CHECK(d.find("const:1"));
  CHECK(d.find("-4*(coord)"));
  CHECK(d.find("cb(coord,1)"));
  CHECK(d.find("2*(cb(cos:1,3))"));
  CHECK_FALSE(d.find("cb(coord,2)"));
  CHECK(d.find("mix(coord,cos:1,0.5)"));
  CHECK(d.at("-2*(cb(cos:1,3))").factor == -2.0);
  CHECK(d.at("-2*(cb(cos:1,3))").step == 3);
  CHECK(d.bases().size() == 2);
  PotentialDictionary copy = d;
  CHECK_THROWS(copy.add({EntryKind::base, coord_potential(sp), "coord", 1.0, 0}));
  CHECK_THROWS(copy.add({EntryKind::base, coord_potential(SampledSpace::circle(5)), "x", 1.0, 0}));
}

TEST_CASE("entropy map from a hand table") {
  const auto sp = SampledSpace::circle(4);
  const auto t = coord_potential(sp);
  const auto g = hand_table(sp, {{zero_potential(sp), 0.7}, {t, 1.0}});
  const auto mu = Measure::dirac(4, 2);  // t = 0.5
  const auto h = entropy_dict(g, mu);
  CHECK(h.value == 0.5);
  CHECK(h.argmin == "coord");
  const auto only_zero = hand_table(sp, {{zero_potential(sp), 0.7}});
  CHECK(entropy_dict(only_zero, Measure::uniform(4)).value == 0.7);

  const auto vc = variational_check(g, {Measure::dirac(4, 0), mu}, "coord");
  CHECK(vc.weak_duality);
  CHECK(vc.argmax == 1);
  CHECK(vc.gap == 0.0);
  CHECK_THROWS(variational_check(g, {mu}, "nope"));
  CHECK_THROWS(variational_check(g, {}, "coord"));
}

TEST_CASE("star entropy envelope") {
  const Measure a({1.0, 0.0}, "a"), b({0.5, 0.5}, "b");
  CHECK(total_variation(a, b) == 0.5);
  const std::vector<Measure> c = {a, b};
  const std::vector<double> h = {0.0, std::numbers::ln2};
  CHECK(*star_entropy_dict({a}, {0.3}, a, 0.01) == 0.3);
  CHECK(*star_entropy_dict(c, h, a, 0.6) == std::numbers::ln2);
  CHECK(*star_entropy_dict(c, h, a, 0.4) == 0.0);
  CHECK_FALSE(star_entropy_dict({b}, {1.0}, a, 0.4).has_value());
  CHECK_THROWS(star_entropy_dict(c, h, Measure::uniform(3), 0.4));
  CHECK_THROWS(star_entropy_dict(c, h, a, 0.0));
}

TEST_CASE("identity: everything invariant, entropies vanish") {
  const auto seq = make_system("identity", share(SampledSpace::circle(33)));
  const auto& sp = seq.space();
  const auto dict = PotentialDictionary::closure(seq, {coord_potential(sp), sine_potential(sp, 1)}, {1, 8.0});
  const auto g = build_gamma_table(seq, dict, range(2, 6), {0.25, 0.125}, PressureMode::top);
  CHECK(g.value("zero") == 0.0);
  const std::vector<Measure> cands = {Measure::uniform(33), Measure::dirac(33, 5), Measure::dirac(33, 20)};
  const auto vc = variational_check(g, cands, "zero");
  CHECK(vc.gap == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& mu : cands) {
    CHECK(entropy_dict(g, mu).value <= 1e-12);
    CHECK(entropy_dict(g, mu).value >= -1e-9);
    CHECK_FALSE(non_invariance_witness(g, mu, 1, 8).has_value());
  }
  const auto inv = find_common_invariant(seq, 1);
  REQUIRE(inv.feasible);
  const auto report = duality_report(seq, g, cands, {}, cands, std::nullopt);
  for (const auto& item : report.items) {
    INFO(item.name << " " << item.detail.dump());
    CHECK(item.pass);
  }
}

TEST_CASE("full shift: uniform Bernoulli maximizes entropy") {
  const auto seq = make_system("shift:2", share(SampledSpace::symbolic({2, 10})));
  const auto& sp = seq.space();
  const double ab[] = {0.0, 1.0};
  const auto dict =
      PotentialDictionary::closure(seq, {first_symbol_potential(sp, ab), cosine_potential(sp, 1)}, {1, 16.0});
  const auto g = build_gamma_table(seq, dict, range(2, 7), {0.25}, PressureMode::top);
  const auto bern = Measure::uniform(sp.size(), "bernoulli");
  const auto h = entropy_dict(g, bern);
  CHECK(h.value >= -0.05);
  CHECK(h.value <= std::numbers::ln2 + 0.05);
  const auto fixed = Measure::dirac(sp.size(), 0, "fixed");
  const auto vc = variational_check(g, {fixed, bern, Measure::dirac(sp.size(), 5)}, "zero");
  CHECK(vc.argmax == 1);
  CHECK(vc.gap <= 0.15);
  CHECK(vc.gap >= -1e-12);
  CHECK_FALSE(non_invariance_witness(g, bern, 1, 16).has_value());
}

TEST_CASE("rotation: uniform weights are never witnessed") {
  const auto seq = make_system("rotation:0.25", share(SampledSpace::circle(64)));
  const auto& sp = seq.space();
  const auto dict = PotentialDictionary::closure(seq, {coord_potential(sp), cosine_potential(sp, 2)}, {2, 64.0});
  const auto g = build_gamma_table(seq, dict, range(2, 8), {0.25, 0.125}, PressureMode::top);
  CHECK_FALSE(non_invariance_witness(g, Measure::uniform(64), 2, 64).has_value());
  CHECK(non_invariance_witness(g, Measure::dirac(64, 3), 2, 64).has_value());
}

TEST_CASE("invariant measures integrate coboundaries to zero") {
  const auto seq = make_system("periodic:[doubling,tripling]", share(SampledSpace::circle(35)));
  const auto& sp = seq.space();
  const auto dict = PotentialDictionary::closure(seq, {coord_potential(sp), sine_potential(sp, 1)}, {2, 64.0});
  const auto inv = find_common_invariant(seq, 2);
  REQUIRE(inv.feasible);
  for (const auto& e : dict.entries())
    if (e.kind == EntryKind::coboundary) CHECK(std::abs(integrate(e.potential, inv.measure)) <= 1e-8);
}

TEST_CASE("entropy map is nonincreasing as the dictionary grows") {
  const auto seq = make_system("doubling", share(SampledSpace::circle(257)));
  const auto& sp = seq.space();
  const auto small = PotentialDictionary::closure(seq, {coord_potential(sp)}, {1, 4.0});
  const auto large = PotentialDictionary::closure(seq, {coord_potential(sp), cosine_potential(sp, 1)}, {1, 16.0});
  const auto gs = build_gamma_table(seq, small, range(2, 6), {0.25}, PressureMode::top);
  const auto gl = build_gamma_table(seq, large, range(2, 6), {0.25}, PressureMode::top);
  for (const auto& mu : {Measure::uniform(257), Measure::dirac(257, 10), Measure::dirac(257, 0)})
    CHECK(entropy_dict(gl, mu).value <= entropy_dict(gs, mu).value);
}

TEST_CASE("north-south pair: report skips the invariant-set items") {
  const auto seq = make_system("periodic:[northsouth:0.1,0.6,northsouth:0.35,0.85]", share(SampledSpace::circle(64)));
  const auto& sp = seq.space();
  const auto dict = PotentialDictionary::closure(seq, {cosine_potential(sp, 1)}, {2, 8.0});
  const auto g = build_gamma_table(seq, dict, range(2, 5), {0.25}, PressureMode::top);
  const auto inv = find_common_invariant(seq, 2);
  CHECK_FALSE(inv.feasible);
  const auto report = duality_report(seq, g, {}, {Measure::uniform(64)}, {Measure::uniform(64)}, std::nullopt);
  CHECK(report.invariant_set_empty);
  CHECK(report.item("c").skipped);
  CHECK(report.item("d").skipped);
  const auto j = to_json(report, g);
  CHECK(j["invariant_set_empty"] == true);
  CHECK(j["provenance"]["mode"] == "top");
}

TEST_CASE("gamma table provenance and threads") {
  const auto seq = make_system("doubling", share(SampledSpace::circle(129)));
  const auto& sp = seq.space();
  const auto dict = PotentialDictionary::closure(seq, {coord_potential(sp)}, {1, 4.0});
  EstimateOptions one = duality_estimate_options(), three = one;
  three.threads = 3;
  const auto a = build_gamma_table(seq, dict, range(2, 5), {0.25}, PressureMode::mis, one);
  const auto b = build_gamma_table(seq, dict, range(2, 5), {0.25}, PressureMode::mis, three);
  CHECK(a.values == b.values);
  CHECK(a.provenance.mode == PressureMode::mis);
  CHECK(a.provenance.schedule == range(2, 5));
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK_THROWS(a.value("missing"));
}

TEST_CASE("doubling: item (a) asserts on the bases, large scalings are only reported") {
  const auto seq = make_system("doubling", share(SampledSpace::circle(1025)));
  const auto& sp = seq.space();
  const auto dict =
      PotentialDictionary::closure(seq, {coord_potential(sp), cosine_potential(sp, 1), sine_potential(sp, 1)}, {1, 64.0});
  const auto g = build_gamma_table(seq, dict, range(2, 8), {0.25, 0.125}, PressureMode::top);
  const auto uni = Measure::uniform(1025);
  const auto dirac = Measure::dirac(1025, 128);
  const auto report = duality_report(seq, g, {uni}, {dirac}, {uni, dirac}, std::nullopt);
  const auto& a = report.item("a");
  CHECK(a.pass);
  CHECK(a.detail["asserted"].size() == 4);
  bool dirac_wins_somewhere = false;
  for (const auto& row : a.detail["rows"]) {
    if (row.contains("pass")) CHECK(row["argmax"] == "uniform");
    dirac_wins_somewhere = dirac_wins_somewhere || row["argmax"] != "uniform";
  }
  // The entry -64 cb(cos) is the dictionary minimizer for the Dirac itself.
  CHECK(dirac_wins_somewhere);
  CHECK(report.item("b").pass);
  CHECK(report.item("d").pass);
}

TEST_CASE("doubling: the coordinate coboundary alone witnesses the Dirac at 1/8") {
  const auto seq = make_system("doubling", share(SampledSpace::circle(16385)));
  const auto dict = PotentialDictionary::closure(seq, {coord_potential(seq.space())}, {1, 64.0});
  auto opt = duality_estimate_options();
  opt.threads = 0;
  const auto g = build_gamma_table(seq, dict, range(2, 8), {0.25, 0.125}, PressureMode::top, opt);
  const auto w = non_invariance_witness(g, Measure::dirac(16385, 2048), 1, 64.0);
  REQUIRE(w.has_value());
  CHECK(w->base == "coord");
  CHECK(w->margin > 0.0);
  CHECK_FALSE(non_invariance_witness(g, Measure::uniform(16385), 1, 64.0).has_value());
}
