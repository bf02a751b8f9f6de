#include "doctest.h"

#include <cmath>
#include <set>

#include "carlab/regimes.hpp"

using namespace carlab;

namespace {

const double kPi2 = std::acos(-1.0) * std::acos(-1.0);

/// The figure-scale Burgers template used throughout: U = 5, L = 1,
/// ||u0|| = ||F0|| = 0.5.
FlowParams atlas_params(double Re) {
  return make_flow_params(Re, 5.0, 1.0, 1, Flavor::Burgers1D, 0.5, 0.5);
}

} // namespace

TEST_SUITE("regimes") {

TEST_CASE("flow parameter validation and derived viscosity") {
  FlowParams p = make_flow_params(80.0, 1.0, 1.0, 1, Flavor::Burgers1D, 1.0, 0.0);
  CHECK(std::abs(p.nu * p.Re - p.U * p.L) < 1e-12);
  CHECK(p.nu == doctest::Approx(1.0 / 80.0).epsilon(1e-15));

  CHECK_THROWS_AS(make_flow_params(0.0, 1.0, 1.0, 1, Flavor::Burgers1D, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_flow_params(1.0, -1.0, 1.0, 1, Flavor::Burgers1D, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_flow_params(1.0, 1.0, 0.0, 1, Flavor::Burgers1D, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_flow_params(1.0, 1.0, 1.0, 4, Flavor::Burgers1D, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_flow_params(1.0, 1.0, 1.0, 1, Flavor::Burgers1D, 1.0, -0.5),
                  std::invalid_argument);
  // passive scalar needs a Schmidt number
  CHECK_THROWS_AS(make_flow_params(1.0, 1.0, 1.0, 3, Flavor::PassiveScalar3D, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_NOTHROW(make_flow_params(1.0, 1.0, 1.0, 3, Flavor::PassiveScalar3D, 1.0, 0.0, 4.0));
  // extreme-gradient exponent must exceed 1/2
  CHECK_THROWS_AS(
      make_flow_params(1.0, 1.0, 1.0, 3, Flavor::ExtremeGradients3D, 1.0, 0.0, 0.0, 0.5),
      std::invalid_argument);
}

TEST_CASE("flavor names round-trip") {
  for (Flavor f : {Flavor::Incompressible3D, Flavor::ExtremeGradients3D, Flavor::Compressible3D,
                   Flavor::PassiveScalar3D, Flavor::TwoD, Flavor::Burgers1D})
    CHECK(flavor_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(flavor_from_string("magnetohydro"), std::invalid_argument);
}

TEST_CASE("small-scale estimates: frozen headline values") {
  SUBCASE("incompressible three-dimensional") {
    FlowParams p = make_flow_params(1e4, 1.0, 1.0, 3, Flavor::Incompressible3D, 1.0, 0.0);
    KolmogorovEstimate k = kolmogorov_scale(p);
    CHECK(k.eta == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(k.limiting == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(k.N_min == 1000);
    CHECK(k.epsilon == doctest::Approx(1.0).epsilon(1e-12)); // U^3/L
    CHECK(k.tau == doctest::Approx(1.0).epsilon(1e-12));     // L/U
    CHECK(std::isnan(k.eta_ext));
    CHECK(std::isnan(k.eta_B));
  }
  SUBCASE("extreme gradients tighten the scale down to the Re^{-1} floor") {
    FlowParams p = make_flow_params(1e4, 1.0, 1.0, 3, Flavor::ExtremeGradients3D, 1.0, 0.0);
    KolmogorovEstimate k = kolmogorov_scale(p);
    // eta_ext = eta Re^{-(beta - 1/2)/2} with beta = 0.78
    CHECK(k.eta_ext == doctest::Approx(1e-3 * std::pow(1e4, -0.14)).epsilon(1e-12));
    CHECK(k.eta_ext == doctest::Approx(2.75e-4).epsilon(5e-3));
    CHECK(k.eta_min == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(k.limiting == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(k.N_min == 10000);
  }
  SUBCASE("passive scalar shrinks by the root of the Schmidt number") {
    FlowParams p = make_flow_params(1e4, 1.0, 1.0, 3, Flavor::PassiveScalar3D, 1.0, 0.0, 4.0);
    KolmogorovEstimate k = kolmogorov_scale(p);
    CHECK(k.eta_B == doctest::Approx(5e-4).epsilon(1e-12));
    CHECK(k.limiting == doctest::Approx(5e-4).epsilon(1e-12));
    CHECK(k.N_min == 2000);
  }
  SUBCASE("compressible tracks the incompressible scale") {
    FlowParams p = make_flow_params(1e4, 1.0, 1.0, 3, Flavor::Compressible3D, 1.0, 0.0);
    CHECK(kolmogorov_scale(p).N_min == 1000);
  }
  SUBCASE("two-dimensional") {
    FlowParams p = make_flow_params(100.0, 1.0, 1.0, 2, Flavor::TwoD, 1.0, 0.0);
    KolmogorovEstimate k = kolmogorov_scale(p);
    CHECK(k.eta == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(k.N_min == 10);
  }
  SUBCASE("one-dimensional shock width scaling") {
    FlowParams p = make_flow_params(80.0, 1.0, 1.0, 1, Flavor::Burgers1D, 1.0, 0.0);
    KolmogorovEstimate k = kolmogorov_scale(p);
    CHECK(k.limiting == doctest::Approx(1.0 / 80.0).epsilon(1e-12));
    CHECK(k.N_min == 80); // exact, protected against ceil(79.999...)
    CHECK(kolmogorov_scale(make_flow_params(0.5, 1.0, 1.0, 1, Flavor::Burgers1D, 1.0, 0.0))
              .N_min == 2); // floor
  }
}

TEST_CASE("small scales shrink with Re and stretch with L") {
  for (Flavor f : {Flavor::Incompressible3D, Flavor::ExtremeGradients3D, Flavor::PassiveScalar3D,
                   Flavor::TwoD, Flavor::Burgers1D}) {
    const int d = (f == Flavor::TwoD) ? 2 : (f == Flavor::Burgers1D ? 1 : 3);
    const double sc = (f == Flavor::PassiveScalar3D) ? 2.0 : 0.0;
    long prev = 0;
    for (double re : {5.0, 50.0, 500.0, 5000.0}) {
      KolmogorovEstimate k = kolmogorov_scale(make_flow_params(re, 1.0, 1.0, d, f, 1.0, 0.0, sc));
      CHECK(k.N_min >= prev);
      prev = k.N_min;
    }
    KolmogorovEstimate k1 =
        kolmogorov_scale(make_flow_params(100.0, 1.0, 1.0, d, f, 1.0, 0.0, sc));
    KolmogorovEstimate k2 =
        kolmogorov_scale(make_flow_params(100.0, 1.0, 3.7, d, f, 1.0, 0.0, sc));
    CHECK(k2.limiting == doctest::Approx(3.7 * k1.limiting).epsilon(1e-12));
  }
}

TEST_CASE("efficiency criterion from assembled operator data") {
  CHECK(compute_R(-1.0, 0.0, 0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(compute_R(-2.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // ||u0|| ||F2|| + ||F0||/||u0||, scaled by 1/|Re lambda_1|
  CHECK(compute_R(-4.0, 3.0, 6.0, 2.0) == doctest::Approx((2.0 * 3.0 + 3.0) / 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(compute_R(0.0, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(compute_R(0.5, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(compute_R(-1.0, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_R(-1.0, -1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("closed-form R(N): frozen value and scaling law") {
  FlowParams p = atlas_params(2.0);
  // (L^2/(d nu pi^2)) (||u0|| d^2 N^{3/2}/(2L) + ||F0||/||u0||) at N = 4
  const double expect = (1.0 / (2.5 * kPi2)) * (0.5 * 8.0 / 2.0 + 1.0);
  CHECK(estimate_R_of_N(p, 4.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(estimate_R_of_N(p, 4.0) == doctest::Approx(0.122).epsilon(5e-3));
  // drive-only floor at N = 0
  CHECK(estimate_R_of_N(p, 0.0) == doctest::Approx(1.0 / (2.5 * kPi2)).epsilon(1e-14));
  // R grows like N^{3/2} once the advection term dominates
  const double r1 = estimate_R_of_N(p, 1024.0), r2 = estimate_R_of_N(p, 4096.0);
  CHECK(r2 / r1 == doctest::Approx(8.0).epsilon(1e-2));
}

TEST_CASE("efficiency frontier inverts R(N) = 1") {
  FlowParams p = atlas_params(2.0);
  // printed one-dimensional closed form
  const double expect10 = 5.0 * kPi2 / (0.5 * std::pow(10.0, 1.5) / 2.0 + 1.0);
  CHECK(efficiency_frontier_Re(p, 10.0) == doctest::Approx(expect10).epsilon(1e-12));
  CHECK(efficiency_frontier_Re(p, 10.0) == doctest::Approx(5.54).epsilon(1e-3));

  for (double N : {4.0, 16.0, 64.0, 300.0}) {
    const double re_f = efficiency_frontier_Re(p, N);
    FlowParams q = make_flow_params(re_f, p.U, p.L, p.d, p.flavor, p.u0_norm, p.f0_norm);
    CHECK(std::abs(estimate_R_of_N(q, N) - 1.0) < 1e-9);
  }
  CHECK(efficiency_frontier_Re(p, 64.0) < efficiency_frontier_Re(p, 16.0));

  // the algebraic inverse also round-trips away from d = 1
  FlowParams p2 = make_flow_params(10.0, 2.0, 1.5, 2, Flavor::TwoD, 0.8, 0.3);
  const double re2 = efficiency_frontier_Re(p2, 24.0);
  FlowParams q2 = make_flow_params(re2, 2.0, 1.5, 2, Flavor::TwoD, 0.8, 0.3);
  CHECK(std::abs(estimate_R_of_N(q2, 24.0) - 1.0) < 1e-9);
}

TEST_CASE("Kolmogorov-scale R: frozen value, floor, and divergence flag") {
  FlowParams p = atlas_params(50.0);
  RKs r = r_ks(p);
  const double expect =
      0.5 * std::pow(2.0 * 50.0 * 5.0, 1.5) / kPi2 + 1.0 * 0.5 / (kPi2 * 0.5);
  CHECK(r.r_paper == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::abs(r.r_paper - 566.5) < 1.0);
  // substituting N_K into R(N) gives a much smaller number: flag it
  CHECK(r.divergent);
  CHECK(r.r_substituted < r.r_paper);

  // drive floor as Re -> 0
  RKs tiny = r_ks(atlas_params(1e-9));
  CHECK(tiny.r_paper == doctest::Approx(0.5 / (kPi2 * 0.5)).epsilon(1e-3));

  CHECK(r_ks(atlas_params(100.0)).r_paper > r_ks(atlas_params(50.0)).r_paper);
}

TEST_CASE("threshold crossing N*") {
  SUBCASE("figure-scale parameters land between 7.5 and 8") {
    FlowParams p = atlas_params(2.0); // Re does not enter the crossing
    const double nstar = crossing_N_star(p);
    CHECK(nstar > 7.5);
    CHECK(nstar < 8.0);
    const double rhs =
        p.U * kPi2 / (0.5 * p.u0_norm * std::pow(nstar, 1.5) + p.L * p.f0_norm / p.u0_norm);
    CHECK(std::abs(nstar - rhs) < 1e-6);
  }
  SUBCASE("degenerate crossing at the lower bracket edge") {
    FlowParams p = make_flow_params(1.0, 1.0 / kPi2, 1.0, 1, Flavor::Burgers1D, 1.0, 0.5);
    CHECK(crossing_N_star(p) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("no crossing in the bracket is refused") {
    FlowParams p = make_flow_params(1.0, 1.0, 1.0, 1, Flavor::Burgers1D, 1e-20, 0.0);
    CHECK_THROWS_AS(crossing_N_star(p), std::domain_error);
  }
}

TEST_CASE("region classification: spot checks and the boolean table") {
  CHECK(to_string(RegionLabel::I) == "I");
  CHECK(to_string(RegionLabel::V) == "V");

  CHECK(classify_region(atlas_params(2.0), 4.0) == RegionLabel::II);
  CHECK(classify_region(atlas_params(50.0), 100.0) == RegionLabel::IV);
  CHECK(classify_region(atlas_params(100.0), 4.0) == RegionLabel::V);

  for (double re : {0.3, 0.5, 2.0, 5.0, 50.0, 300.0})
    for (double n : {2.0, 4.0, 8.0, 32.0, 128.0, 512.0}) {
      FlowParams p = atlas_params(re);
      const bool eff = estimate_R_of_N(p, n) <= 1.0;
      const bool res = n >= static_cast<double>(kolmogorov_scale(p).N_min);
      const bool effks = r_ks(p).r_paper <= 1.0;
      RegionLabel expect = eff ? (res ? RegionLabel::II : RegionLabel::I)
                               : (res ? (effks ? RegionLabel::III : RegionLabel::IV)
                                      : RegionLabel::V);
      CHECK(classify_region(p, n) == expect);
    }
}

TEST_CASE("region map covers all five labels and tabulates true frontiers") {
  RegionMap map = region_map(atlas_params(2.0), 2.0, 512.0, 0.1, 1000.0, 33);
  REQUIRE(map.rows.size() == 33u * 33u);

  // lattice endpoints pinned exactly, outer N, inner Re
  CHECK(map.rows.front().N == 2.0);
  CHECK(map.rows.front().Re == 0.1);
  CHECK(map.rows.back().N == 512.0);
  CHECK(map.rows.back().Re == 1000.0);

  std::set<std::string> labels;
  for (const auto& row : map.rows) labels.insert(to_string(row.label));
  CHECK(labels == std::set<std::string>({"I", "II", "III", "IV", "V"}));

  // every row carries consistent derived columns
  for (std::size_t i = 0; i < map.rows.size(); i += 97) {
    const MapRow& row = map.rows[i];
    FlowParams p = atlas_params(row.Re);
    CHECK(row.R == doctest::Approx(estimate_R_of_N(p, row.N)).epsilon(1e-12));
    CHECK(row.N_K == kolmogorov_scale(p).N_min);
  }

  REQUIRE(map.frontier.size() == 33);
  for (const auto& f : map.frontier) {
    FlowParams q = make_flow_params(f.Re_frontier, 5.0, 1.0, 1, Flavor::Burgers1D, 0.5, 0.5);
    CHECK(std::abs(estimate_R_of_N(q, f.N) - 1.0) < 1e-9);
    // Burgers resolution frontier: L/(L/Re) = N, i.e. Re = N
    CHECK(f.Re_kolmogorov == doctest::Approx(f.N).epsilon(1e-9));
  }

  // along increasing Re at fixed N, the unresolved labels run I then V with a
  // single transition
  for (int i = 0; i < 33; ++i) {
    bool seen_v = false;
    for (int j = 0; j < 33; ++j) {
      const MapRow& row = map.rows[static_cast<std::size_t>(i) * 33 + j];
      FlowParams p = atlas_params(row.Re);
      if (row.N >= static_cast<double>(kolmogorov_scale(p).N_min)) continue;
      if (row.label == RegionLabel::V) seen_v = true;
      if (seen_v) CHECK(row.label == RegionLabel::V);
    }
  }
}

} // TEST_SUITE
