#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qdarp/errors.hpp"
#include "qdarp/scans.hpp"
#include "qdarp/sweep.hpp"

using namespace qdarp;

namespace {

const ScanCurve& curve(const ScanResult& r, const std::string& name) {
  const auto it = std::find_if(r.curves.begin(), r.curves.end(), [&](const auto& c) { return c.name == name; });
  REQUIRE(it != r.curves.end());
  return *it;
}

}  // namespace

TEST_CASE("first maximum") {
  const std::vector<double> axis{0, 1, 2, 3, 4};
  auto fm = first_maximum(axis, std::vector<double>{0.0, 0.5, 0.9, 0.4, 0.95});
  REQUIRE(fm);
  CHECK(fm->index == 2);
  CHECK(fm->area_pi == 2.0);
  CHECK(fm->occupation == 0.9);
  fm = first_maximum(axis, std::vector<double>{0.0, 0.5, 0.5, 0.4, 0.2});
  REQUIRE(fm);
  CHECK(fm->index == 2);
  CHECK_FALSE(first_maximum(axis, std::vector<double>{0.0, 0.5, 0.9, 0.95, 0.99}));
  CHECK_THROWS_AS(first_maximum(axis, std::vector<double>{0.0}), DomainError);
}

TEST_CASE("detuned Rabi rotations") {
  const auto axis = SweepGrid::linspace(0.0, 4.0, 81);
  const std::vector<double> detunings{0.0, 2.0, -2.0, 4.0, -4.0};
  const auto scan = rabi_detuning_scan(detunings, axis, 0.12, {}, 1.0, 2);
  CHECK_NOTHROW(scan.validate());
  REQUIRE(scan.curves.size() == 5);
  CHECK(scan.curves[0].name == "detuning_0meV");
  CHECK(scan.curves[4].name == "detuning_-4meV");

  const auto res = first_maximum(scan.area_axis, scan.curves[0].occupation);
  REQUIRE(res);
  CHECK(res->area_pi == doctest::Approx(1.0));
  CHECK(std::abs(res->occupation - 1.0) < 1e-6);

  // Fine-step reference on the same 0.05 pi grid.
  const auto d4 = first_maximum(scan.area_axis, curve(scan, "detuning_4meV").occupation);
  REQUIRE(d4);
  CHECK(d4->area_pi == doctest::Approx(1.0));
  CHECK(d4->occupation == doctest::Approx(0.8078687316780537).epsilon(1e-8));

  for (const double d : {2.0, 4.0}) {
    const auto& plus = curve(scan, "detuning_" + std::to_string(int(d)) + "meV").occupation;
    const auto& minus = curve(scan, "detuning_-" + std::to_string(int(d)) + "meV").occupation;
    for (std::size_t j = 0; j < axis.size(); ++j) CHECK(std::abs(plus[j] - minus[j]) < 1e-10);
  }
  for (std::size_t c = 1; c < scan.curves.size(); ++c) {
    const auto fm = first_maximum(scan.area_axis, scan.curves[c].occupation);
    REQUIRE(fm);
    CHECK(fm->occupation < res->occupation);
  }
}

TEST_CASE("dipole scale rescales the area axis") {
  const std::vector<double> axis{0.4, 0.8, 1.2, 1.6};
  std::vector<double> scaled;
  for (double a : axis) scaled.push_back(a * 1.25);
  const std::vector<double> zero{0.0};
  const auto a = rabi_detuning_scan(zero, axis, 0.12, {}, 1.25, 1);
  const auto b = rabi_detuning_scan(zero, scaled, 0.12, {}, 1.0, 1);
  for (std::size_t j = 0; j < axis.size(); ++j) {
    CHECK(std::abs(a.curves[0].occupation[j] - b.curves[0].occupation[j]) < 1e-6);
  }
}

TEST_CASE("QD A / QD B comparison") {
  const TwoDotScenario s;
  CHECK(s.a.transition_energy_mev - s.b.transition_energy_mev == 8.0);
  CHECK(s.laser.center_energy_mev == 0.5 * (s.a.transition_energy_mev + s.b.transition_energy_mev));
  CHECK(s.b.dipole_scale == 1.25 * s.a.dipole_scale);

  const auto axis = SweepGrid::linspace(0.0, 4.0, 41);
  const std::vector<double> chirps{0.0, 0.3};
  const auto r = two_dot_comparison(s.a, s.b, s.laser, axis, chirps, {}, 2);
  REQUIRE(r.curves.size() == 4);
  CHECK_NOTHROW(r.validate());
  const auto& a0 = curve(r, "A_phi2_0");
  const auto& a3 = curve(r, "A_phi2_0.3");
  const auto& b0 = curve(r, "B_phi2_0");
  const auto& b3 = curve(r, "B_phi2_0.3");
  CHECK(a3.detuning_mev == 4.0);
  CHECK(b3.detuning_mev == -4.0);
  for (std::size_t j = 0; j < axis.size(); ++j) {
    if (axis[j] >= 2.5 - 1e-12) {
      CHECK(a3.occupation[j] > 0.95);
      CHECK(b3.occupation[j] > 0.95);
    }
  }
  CHECK(*std::max_element(a0.occupation.begin(), a0.occupation.end()) < 0.99);
  CHECK(*std::max_element(b0.occupation.begin(), b0.occupation.end()) < 0.99);
}

TEST_CASE("ARP robustness over detuning and dipole") {
  for (int i = 0; i <= 10; ++i) {
    for (double s : {0.8, 0.9125, 1.025, 1.1375, 1.25}) {
      const double det = -5.0 + i;
      const double occ = evolve({0.12, 3.0, 1063.0, 0.3}, {1063.0 + det, s}).occupation;
      CHECK(occ > 0.95);
    }
  }
}

TEST_CASE("scan input validation") {
  const std::vector<double> bad{0.0, 0.0};
  const std::vector<double> det{0.0};
  CHECK_THROWS_AS(rabi_detuning_scan(det, bad), DomainError);
  const std::vector<double> neg{-1.0, 0.0};
  CHECK_THROWS_AS(rabi_detuning_scan(det, neg), DomainError);
  const TwoDotScenario s;
  const std::vector<double> axis{0.0, 1.0};
  CHECK_THROWS_AS(two_dot_comparison(s.a, {1060.0, 0.0}, s.laser, axis, det), DomainError);
}
