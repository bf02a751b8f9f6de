#pragma once

#include <complex>
#include <string>
#include <vector>

#include "carlab/grid.hpp"

namespace carlab {

/// Complex Fourier modes of a 1-d field, stored in ascending-kappa order.
struct DftModes {
  std::vector<long> kappa;  ///< -floor(N/2) .. ceil(N/2)-1
  Eigen::VectorXcd values;  ///< hat u(kappa) = (1/N) sum_j u_j e^{-2 pi i kappa j / N}
};

DftModes dft_field(const Vec& u);

/// Inverse transform; exact round trip with dft_field up to rounding.
Vec idft_field(const DftModes& modes);

/// One-sided energy spectrum E(kappa) >= 0 with its Parseval total.
struct SpectrumSeries {
  std::vector<long> kappa;    ///< 0 .. nyquist, ascending
  std::vector<double> energy; ///< E(kappa) = |hat u(kappa)|^2 + |hat u(-kappa)|^2
  double norm_total = 0.0;    ///< sum of E = mean square of the transformed sequence
  GridSpec grid;              ///< originating grid
};

/// Periodic fields transform directly; Dirichlet/Open fields are treated as
/// one period of an odd extension (zeros at the ghost nodes) so homogeneous
/// walls do not inject spurious high-kappa energy.
SpectrumSeries energy_spectrum(const Vec& u, const GridSpec& grid);

/// Highest mode index of the sequence a series actually transformed:
/// N/2 for periodic grids, N+1 for odd-extended ones.
long series_nyquist(const SpectrumSeries& s);

struct KappaBounds {
  long kappa_min; ///< always 1 (mode units; physical 2 pi / L)
  long kappa_nyq; ///< N/2
  long kappa_max; ///< floor(fraction * kappa_nyq)
};

/// Resolved-mode window of a grid; fraction defaults to the 2/3 dealias rule.
KappaBounds kappa_bounds(const GridSpec& grid, double dealias_fraction = 2.0 / 3.0);

struct CompareRow {
  std::size_t series_id; ///< index into the input spectra list
  std::string band;      ///< "low" | "mid" | "top" | "full"
  double deviation;      ///< mean |E - E_ref|/E_ref over signal-bearing bins
  bool under_resolved;   ///< series-level flag: top-band deviation > 0.5
};

struct CascadeComparison {
  std::vector<CompareRow> rows;
  long band_lo = 1;   ///< common resolved band, inclusive
  long band_hi = 0;
  std::size_t reference_index = 0;
};

/// Per-band relative deviation of each series from the reference over the
/// common resolved band (the smallest dealiased window among the inputs).
CascadeComparison cascade_compare(const std::vector<SpectrumSeries>& spectra,
                                  std::size_t reference_index,
                                  double dealias_fraction = 2.0 / 3.0);

/// Convenience lookup into a comparison result; throws when absent.
double band_deviation(const CascadeComparison& c, std::size_t series_id, const std::string& band);

} // namespace carlab
