#pragma once

#include <string>
#include <vector>

#include "carlab/common.hpp"

namespace carlab {

enum class Flavor {
  Incompressible3D,
  ExtremeGradients3D,
  Compressible3D,
  PassiveScalar3D,
  TwoD,
  Burgers1D,
};

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& s);

/// Physical parameters of a flow regime query. nu is derived as U*L/Re.
struct FlowParams {
  double Re = 1.0;
  double U = 1.0;
  double L = 1.0;
  double nu = 1.0; ///< derived: U*L/Re
  int d = 1;
  Flavor flavor = Flavor::Burgers1D;
  double Sc = 0.0;   ///< Schmidt number, only meaningful for PassiveScalar3D
  double u0_norm = 1.0;
  double f0_norm = 0.0;
  double beta = 0.78; ///< extreme-gradient exponent
};

/// Validates and completes a FlowParams (fills nu).
FlowParams make_flow_params(double Re, double U, double L, int d, Flavor flavor, double u0_norm,
                            double f0_norm, double Sc = 0.0, double beta = 0.78);

/// Small-scale estimates for one parameter point. Fields that do not apply to
/// the requested flavor are left as NaN.
struct KolmogorovEstimate {
  double eta;      ///< primary small scale
  double eta_ext;  ///< extreme-gradient scale (3D extreme-gradients only)
  double eta_min;  ///< conjectured floor Re^{-1} L (3D extreme-gradients only)
  double eta_B;    ///< Batchelor scale (passive scalar only)
  double epsilon;  ///< dissipation-rate estimate U^3/L
  double tau;      ///< eddy turnover L/U
  double limiting; ///< scale that actually constrains the grid
  long N_min;      ///< minimum points per axis, ceil(L/limiting), at least 2
};

KolmogorovEstimate kolmogorov_scale(const FlowParams& p);

/// R = (1/|Re(lambda1)|) (||u0|| ||F2|| + ||F0||/||u0||).
/// Throws std::domain_error when lambda1 >= 0 (criterion inapplicable) and
/// std::invalid_argument when u0_norm <= 0.
double compute_R(double f1_dominant_eig, double f2_norm, double f0_norm, double u0_norm);

/// Closed-form open-boundary estimate
///   R(N) = (L^2/(d nu pi^2)) (||u0|| d^2 N^{3/2} / (2L) + ||F0||/||u0||).
/// N may be any nonnegative real (N = 0 gives the drive-only floor).
double estimate_R_of_N(const FlowParams& p, double N);

/// Reynolds number at which R(N) = 1 for fixed N (1-d closed form):
///   Re = U pi^2 / (||u0|| N^{3/2}/2 + L ||F0||/||u0||).
double efficiency_frontier_Re(const FlowParams& p, double N);

struct RKs {
  double r_paper;       ///< ||u0|| (2 Re U)^{3/2} / pi^2 + L ||F0|| / (pi^2 ||u0||)
  double r_substituted; ///< R(N) evaluated at N = N_min of the flavor
  bool divergent;       ///< true when the two disagree by more than 1%
};

RKs r_ks(const FlowParams& p);

/// Fixed point of N = U pi^2 / ((d/2)||u0|| N^{3/2} + L ||F0||/(d ||u0||)),
/// bisected on [1, 1e6] to |N - RHS(N)| < 1e-6.
double crossing_N_star(const FlowParams& p);

enum class RegionLabel { I, II, III, IV, V };
std::string to_string(RegionLabel l);

/// Five-way partition of the (N, Re) plane. Ties (R exactly 1, N exactly
/// N_min) land on the efficient/resolved side.
RegionLabel classify_region(const FlowParams& p, double N);

struct MapRow {
  double N;
  double Re;
  double R;
  double r_ks_paper;
  long N_K;
  RegionLabel label;
};

struct FrontierRow {
  double N;
  double Re_frontier;   ///< efficiency frontier: R(N; Re) = 1
  double Re_kolmogorov; ///< resolution frontier: N_min(Re) = N
};

struct RegionMap {
  std::vector<MapRow> rows;
  std::vector<FrontierRow> frontier;
};

/// Log-spaced lattice over [N_lo, N_hi] x [Re_lo, Re_hi] with `resolution`
/// samples per axis, classified pointwise; frontier curves tabulated per N.
RegionMap region_map(const FlowParams& tmpl, double N_lo, double N_hi, double Re_lo, double Re_hi,
                     int resolution);

} // namespace carlab
