#include "carlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace carlab {

namespace {

using cplx = std::complex<double>;

/// Direct O(N^2) transform; the deliberate fixed summation order keeps output
/// bit-stable across runs and worker counts.
Eigen::VectorXcd raw_dft(const Vec& u) {
  const long n = u.size();
  Eigen::VectorXcd out(n);
  const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (long k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (long j = 0; j < n; ++j) {
      const double ang = w * static_cast<double>(k) * static_cast<double>(j);
      acc += u(j) * cplx(std::cos(ang), std::sin(ang));
    }
    out(k) = acc / static_cast<double>(n);
  }
  return out;
}

/// Energy fold of an already-transformed periodic sequence of length n.
SpectrumSeries fold_energy(const Eigen::VectorXcd& raw, long n) {
  SpectrumSeries s;
  const long nyq = n / 2;
  s.kappa.reserve(nyq + 1);
  s.energy.reserve(nyq + 1);
  s.kappa.push_back(0);
  s.energy.push_back(std::norm(raw(0)));
  for (long k = 1; k <= nyq; ++k) {
    double e = 0.0;
    if (k < nyq || n % 2 == 1) {
      e = std::norm(raw(k)) + std::norm(raw(n - k));
    } else {
      // Even n: the Nyquist mode is its own negative-frequency partner.
      e = std::norm(raw(k));
    }
    s.kappa.push_back(k);
    s.energy.push_back(e);
  }
  s.norm_total = 0.0;
  for (double e : s.energy) s.norm_total += e;
  return s;
}

} // namespace

DftModes dft_field(const Vec& u) {
  const long n = u.size();
  if (n < 1) throw std::invalid_argument("dft_field: empty field");
  const Eigen::VectorXcd raw = raw_dft(u);
  DftModes m;
  m.kappa.resize(n);
  m.values.resize(n);
  const long k_lo = -(n / 2);
  for (long i = 0; i < n; ++i) {
    const long k = k_lo + i;
    m.kappa[i] = k;
    m.values(i) = raw(((k % n) + n) % n);
  }
  return m;
}

Vec idft_field(const DftModes& modes) {
  const long n = modes.values.size();
  if (n < 1 || static_cast<long>(modes.kappa.size()) != n)
    throw std::invalid_argument("idft_field: inconsistent mode table");
  Vec u(n);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (long j = 0; j < n; ++j) {
    cplx acc(0.0, 0.0);
    for (long i = 0; i < n; ++i) {
      const double ang = w * static_cast<double>(modes.kappa[i]) * static_cast<double>(j);
      acc += modes.values(i) * cplx(std::cos(ang), std::sin(ang));
    }
    u(j) = acc.real();
  }
  return u;
}

SpectrumSeries energy_spectrum(const Vec& u, const GridSpec& grid) {
  if (grid.d != 1) throw std::invalid_argument("energy_spectrum: 1-d fields only");
  if (u.size() != grid.N) throw std::invalid_argument("energy_spectrum: field size != grid.N");

  SpectrumSeries s;
  if (grid.bc[0].kind == BoundaryCondition::Periodic) {
    s = fold_energy(raw_dft(u), grid.N);
  } else {
    // One period of the odd extension: ghost zeros at both walls, then the
    // negated mirror. Length 2(N+1).
    const long n = grid.N;
    Vec v = Vec::Zero(2 * (n + 1));
    for (long i = 0; i < n; ++i) v(1 + i) = u(i);
    for (long i = 0; i < n; ++i) v(n + 2 + i) = -u(n - 1 - i);
    s = fold_energy(raw_dft(v), v.size());
  }
  s.grid = grid;
  return s;
}

long series_nyquist(const SpectrumSeries& s) {
  return s.grid.bc[0].kind == BoundaryCondition::Periodic ? s.grid.N / 2 : s.grid.N + 1;
}

KappaBounds kappa_bounds(const GridSpec& grid, double dealias_fraction) {
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw std::invalid_argument("kappa_bounds: dealias fraction must lie in (0, 1]");
  KappaBounds b;
  b.kappa_min = 1;
  b.kappa_nyq = grid.N / 2;
  b.kappa_max =
      static_cast<long>(std::floor(dealias_fraction * static_cast<double>(b.kappa_nyq)));
  return b;
}

CascadeComparison cascade_compare(const std::vector<SpectrumSeries>& spectra,
                                  std::size_t reference_index, double dealias_fraction) {
  if (spectra.size() < 2)
    throw std::invalid_argument("cascade_compare: need at least two spectra");
  if (reference_index >= spectra.size())
    throw std::invalid_argument("cascade_compare: reference index out of range");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw std::invalid_argument("cascade_compare: dealias fraction must lie in (0, 1]");

  const SpectrumSeries& ref = spectra[reference_index];
  const bool ref_periodic = ref.grid.bc[0].kind == BoundaryCondition::Periodic;
  for (const auto& s : spectra) {
    const bool periodic = s.grid.bc[0].kind == BoundaryCondition::Periodic;
    if (periodic != ref_periodic ||
        std::abs(s.grid.L - ref.grid.L) > 1e-12 * std::abs(ref.grid.L))
      throw std::invalid_argument("cascade_compare: mismatched domains");
    if (s.grid.N > ref.grid.N)
      throw std::invalid_argument("cascade_compare: reference must have the largest N");
  }

  long common_top = std::numeric_limits<long>::max();
  for (const auto& s : spectra)
    common_top = std::min(
        common_top,
        static_cast<long>(std::floor(dealias_fraction * static_cast<double>(series_nyquist(s)))));
  if (common_top < 3)
    throw std::invalid_argument("cascade_compare: common resolved band too short to compare");

  // Signal floor: bins where the reference is numerically empty carry no
  // cascade information and would turn the relative deviation into noise.
  double e_max = 0.0;
  for (long k = 1; k <= common_top; ++k) e_max = std::max(e_max, ref.energy[k]);
  const double floor_thresh = 1e-14 * e_max;

  const long t1 = common_top / 3;
  const long t2 = 2 * common_top / 3;
  struct Band {
    const char* name;
    long lo, hi;
  };
  const Band bands[] = {{"low", 1, t1}, {"mid", t1 + 1, t2}, {"top", t2 + 1, common_top},
                        {"full", 1, common_top}};

  CascadeComparison out;
  out.band_lo = 1;
  out.band_hi = common_top;
  out.reference_index = reference_index;
  for (std::size_t sid = 0; sid < spectra.size(); ++sid) {
    if (sid == reference_index) continue;
    const SpectrumSeries& s = spectra[sid];
    double dev_by_band[4] = {0, 0, 0, 0};
    for (int b = 0; b < 4; ++b) {
      double acc = 0.0;
      long cnt = 0;
      for (long k = bands[b].lo; k <= bands[b].hi; ++k) {
        if (ref.energy[k] <= floor_thresh) continue;
        acc += std::abs(s.energy[k] - ref.energy[k]) / ref.energy[k];
        ++cnt;
      }
      dev_by_band[b] = (cnt > 0) ? acc / static_cast<double>(cnt) : 0.0;
    }
    const bool flag = dev_by_band[2] > 0.5;
    for (int b = 0; b < 4; ++b)
      out.rows.push_back({sid, bands[b].name, dev_by_band[b], flag});
  }
  return out;
}

double band_deviation(const CascadeComparison& c, std::size_t series_id, const std::string& band) {
  for (const auto& r : c.rows)
    if (r.series_id == series_id && r.band == band) return r.deviation;
  throw std::out_of_range("band_deviation: no such series/band entry");
}

} // namespace carlab
