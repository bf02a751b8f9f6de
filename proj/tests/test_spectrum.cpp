#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "carlab/spectrum.hpp"

using namespace carlab;

namespace {

GridSpec periodic_grid(int N) { return make_grid(1, N, 1.0, {BoundaryKind::periodic()}); }
GridSpec wall_grid(int N) { return make_grid(1, N, 1.0, {BoundaryKind::dirichlet(0.0, 0.0)}); }

Vec random_field(int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  Vec u(N);
  for (int i = 0; i < N; ++i)
    u(i) = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return u;
}

/// Hand-built comparison fixture: one coarse series against a finer reference
/// on the same wall-bounded domain, with fully controlled energies.
struct Fixture {
  std::vector<SpectrumSeries> spectra;
  Fixture() {
    SpectrumSeries coarse;
    coarse.grid = wall_grid(30); // nyquist 31, dealiased top 20
    for (long k = 0; k <= 31; ++k) {
      coarse.kappa.push_back(k);
      coarse.energy.push_back(1.0);
    }
    SpectrumSeries ref;
    ref.grid = wall_grid(40); // nyquist 41
    for (long k = 0; k <= 41; ++k) {
      ref.kappa.push_back(k);
      ref.energy.push_back(1.0);
    }
    spectra = {coarse, ref};
  }
};

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("transform basics: DC mode, ordering, conjugate symmetry") {
  CHECK_THROWS_AS(dft_field(Vec()), std::invalid_argument);

  DftModes flat = dft_field(Vec::Ones(7));
  // kappa runs -floor(N/2) .. ceil(N/2)-1 and the DC bin holds the mean
  CHECK(flat.kappa.front() == -3);
  CHECK(flat.kappa.back() == 3);
  long dc = 3;
  CHECK(std::abs(flat.values(dc) - std::complex<double>(1.0, 0.0)) < 1e-13);
  for (long i = 0; i < 7; ++i)
    if (i != dc) CHECK(std::abs(flat.values(i)) < 1e-13);

  DftModes m = dft_field(random_field(12, 99));
  CHECK(m.kappa.front() == -6);
  CHECK(m.kappa.back() == 5);
  // real input: hat u(-k) == conj(hat u(k)) wherever both bins exist
  for (long k = 1; k <= 5; ++k) {
    const auto plus = m.values(6 + k);
    const auto minus = m.values(6 - k);
    CHECK(std::abs(minus - std::conj(plus)) < 1e-12);
  }
}

TEST_CASE("round trip restores the field") {
  for (int N : {33, 64}) {
    Vec u = random_field(N, 7u + static_cast<unsigned>(N));
    Vec back = idft_field(dft_field(u));
    CHECK((back - u).cwiseAbs().maxCoeff() < 1e-12);
  }
  DftModes broken = dft_field(Vec::Ones(5));
  broken.kappa.pop_back();
  CHECK_THROWS_AS(idft_field(broken), std::invalid_argument);
}

TEST_CASE("energy spectrum of pure tones") {
  SUBCASE("exactly periodic sine concentrates in kappa = 1") {
    const int N = 64;
    Vec u(N);
    for (int j = 0; j < N; ++j) u(j) = std::sin(2.0 * std::numbers::pi * j / N);
    SpectrumSeries s = energy_spectrum(u, periodic_grid(N));
    REQUIRE(s.kappa.size() == static_cast<std::size_t>(N / 2 + 1));
    CHECK(s.energy[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.energy[1] / s.norm_total == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("grid-sampled sine leaks only marginally") {
    // dx = L/(N-1), so the sampled tone is slightly detuned from bin 1
    const int N = 64;
    GridSpec g = periodic_grid(N);
    Vec u(N);
    for (int j = 0; j < N; ++j) u(j) = std::sin(2.0 * std::numbers::pi * j * g.dx);
    SpectrumSeries s = energy_spectrum(u, g);
    CHECK(s.energy[1] / s.norm_total > 0.999);
  }
  SUBCASE("even-N Nyquist mode is single-counted") {
    const int N = 32;
    Vec u(N);
    for (int j = 0; j < N; ++j) u(j) = (j % 2 == 0) ? 1.0 : -1.0;
    SpectrumSeries s = energy_spectrum(u, periodic_grid(N));
    CHECK(s.energy[N / 2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.norm_total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Parseval holds on periodic grids") {
  for (int N : {8, 33, 64, 256}) {
    Vec u = random_field(N, 1000u + static_cast<unsigned>(N));
    SpectrumSeries s = energy_spectrum(u, periodic_grid(N));
    const double meansq = u.squaredNorm() / static_cast<double>(N);
    CHECK(std::abs(s.norm_total - meansq) < 1e-12 * std::max(1.0, meansq));
  }
}

TEST_CASE("energy is invariant under cyclic shifts") {
  const int N = 48;
  Vec u = random_field(N, 5);
  Vec v(N);
  for (int j = 0; j < N; ++j) v(j) = u((j + 5) % N);
  SpectrumSeries a = energy_spectrum(u, periodic_grid(N));
  SpectrumSeries b = energy_spectrum(v, periodic_grid(N));
  for (std::size_t k = 0; k < a.energy.size(); ++k)
    CHECK(std::abs(a.energy[k] - b.energy[k]) < 1e-12 * std::max(1.0, a.norm_total));
}

TEST_CASE("wall-bounded fields transform through the odd extension") {
  const int N = 20;
  Vec u = random_field(N, 17);
  SpectrumSeries s = energy_spectrum(u, wall_grid(N));
  // extension length 2(N+1): kappa runs 0..N+1
  REQUIRE(s.kappa.size() == static_cast<std::size_t>(N + 2));
  CHECK(series_nyquist(s) == N + 1);
  // odd extension has zero mean and mean square sum(u^2)/(N+1)
  CHECK(s.energy[0] == doctest::Approx(0.0));
  CHECK(s.norm_total ==
        doctest::Approx(u.squaredNorm() / static_cast<double>(N + 1)).epsilon(1e-12));

  // the open-boundary path uses the same extension
  SpectrumSeries o = energy_spectrum(u, make_grid(1, N, 1.0, {BoundaryKind::open()}));
  for (std::size_t k = 0; k < s.energy.size(); ++k) CHECK(o.energy[k] == s.energy[k]);

  SUBCASE("half-sine is a single mode of the extension") {
    const int M = 15;
    Vec w(M);
    for (int i = 0; i < M; ++i)
      w(i) = std::sin(std::numbers::pi * (i + 1) / static_cast<double>(M + 1));
    SpectrumSeries t = energy_spectrum(w, wall_grid(M));
    CHECK(t.energy[1] / t.norm_total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("spectrum argument validation") {
  CHECK_THROWS_AS(energy_spectrum(Vec::Ones(5), periodic_grid(8)), std::invalid_argument);
  GridSpec g2 = make_grid(2, 4, 1.0, {BoundaryKind::periodic(), BoundaryKind::periodic()});
  CHECK_THROWS_AS(energy_spectrum(Vec::Ones(16), g2), std::invalid_argument);
}

TEST_CASE("resolved-mode window") {
  GridSpec g = periodic_grid(64);
  KappaBounds b = kappa_bounds(g);
  CHECK(b.kappa_min == 1);
  CHECK(b.kappa_nyq == 32);
  CHECK(b.kappa_max == 21); // floor(2/3 * 32)
  CHECK(kappa_bounds(g, 1.0).kappa_max == 32);
  CHECK(kappa_bounds(periodic_grid(8), 2.0 / 3.0).kappa_max == 2);
  CHECK_THROWS_AS(kappa_bounds(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kappa_bounds(g, 1.5), std::invalid_argument);
}

TEST_CASE("cascade comparison over the common band") {
  SUBCASE("identical spectra deviate by zero") {
    Fixture f;
    CascadeComparison c = cascade_compare(f.spectra, 1);
    CHECK(c.band_lo == 1);
    CHECK(c.band_hi == 20); // floor(2/3 * 31) from the coarse series
    CHECK(c.reference_index == 1);
    REQUIRE(c.rows.size() == 4); // low/mid/top/full for the one non-reference series
    for (const auto& r : c.rows) {
      CHECK(r.deviation == doctest::Approx(0.0));
      CHECK_FALSE(r.under_resolved);
    }
  }
  SUBCASE("excess top-band energy is localised and flagged") {
    Fixture f;
    // bands over a top of 20 split as low [1,6], mid [7,13], top [14,20]
    for (long k = 14; k <= 20; ++k) f.spectra[0].energy[k] = 2.0;
    CascadeComparison c = cascade_compare(f.spectra, 1);
    CHECK(band_deviation(c, 0, "low") == doctest::Approx(0.0));
    CHECK(band_deviation(c, 0, "mid") == doctest::Approx(0.0));
    CHECK(band_deviation(c, 0, "top") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(band_deviation(c, 0, "full") == doctest::Approx(7.0 / 20.0).epsilon(1e-12));
    for (const auto& r : c.rows) CHECK(r.under_resolved);
  }
  SUBCASE("empty reference bins are skipped, not divided by") {
    Fixture f;
    f.spectra[1].energy[3] = 0.0;
    f.spectra[0].energy[3] = 7.0;
    CascadeComparison c = cascade_compare(f.spectra, 1);
    CHECK(band_deviation(c, 0, "low") == doctest::Approx(0.0));
    CHECK(band_deviation(c, 0, "full") == doctest::Approx(0.0));
  }
  SUBCASE("lookup of an absent entry throws") {
    Fixture f;
    CascadeComparison c = cascade_compare(f.spectra, 1);
    CHECK_THROWS_AS(band_deviation(c, 1, "top"), std::out_of_range);
    CHECK_THROWS_AS(band_deviation(c, 0, "sideways"), std::out_of_range);
  }
  SUBCASE("input validation") {
    Fixture f;
    CHECK_THROWS_AS(cascade_compare({f.spectra[0]}, 0), std::invalid_argument);
    CHECK_THROWS_AS(cascade_compare(f.spectra, 5), std::invalid_argument);
    CHECK_THROWS_AS(cascade_compare(f.spectra, 0), std::invalid_argument); // ref not largest

    auto wrong_l = f.spectra;
    wrong_l[0].grid = make_grid(1, 30, 2.0, {BoundaryKind::dirichlet(0.0, 0.0)});
    CHECK_THROWS_AS(cascade_compare(wrong_l, 1), std::invalid_argument);

    auto mixed = f.spectra;
    mixed[0].grid = periodic_grid(30);
    CHECK_THROWS_AS(cascade_compare(mixed, 1), std::invalid_argument);

    // tiny grids leave no usable common band
    SpectrumSeries a = energy_spectrum(random_field(4, 1), periodic_grid(4));
    SpectrumSeries b = energy_spectrum(random_field(4, 2), periodic_grid(4));
    CHECK_THROWS_AS(cascade_compare({a, b}, 0), std::invalid_argument);
  }
}

} // TEST_SUITE
