#include "carlab/regimes.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace carlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

/// ceil with a relative snap so that analytically integral values (Re^{3/4}
/// at Re = 1e4, L/delta at round parameters) do not round up by one ulp.
long snapped_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9 * std::max(1.0, std::abs(x))) return static_cast<long>(r);
  return static_cast<long>(std::ceil(x));
}

/// The flavor's limiting scale as a smooth function of Re (no ceil, no floor
/// at 2) — used both by kolmogorov_scale and to invert the resolution frontier.
double limiting_scale(const FlowParams& p) {
  const double eta3 = std::pow(p.Re, -0.75) * p.L;
  switch (p.flavor) {
    case Flavor::Incompressible3D: return eta3;
    case Flavor::ExtremeGradients3D: {
      const double alpha = p.beta - 0.5;
      const double eta_ext = eta3 * std::pow(p.Re, -alpha / 2.0);
      const double eta_min = p.L / p.Re;
      return std::min(eta_ext, eta_min);
    }
    case Flavor::Compressible3D: return eta3; // most-probable shocklet thickness ~ eta
    case Flavor::PassiveScalar3D: return eta3 / std::sqrt(p.Sc);
    case Flavor::TwoD: return std::pow(p.Re, -0.5) * p.L;
    case Flavor::Burgers1D: return p.L / p.Re; // shock width scale
  }
  throw std::logic_error("limiting_scale: unknown flavor");
}

} // namespace

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::Incompressible3D: return "incompressible3d";
    case Flavor::ExtremeGradients3D: return "extreme-gradients3d";
    case Flavor::Compressible3D: return "compressible3d";
    case Flavor::PassiveScalar3D: return "passive-scalar3d";
    case Flavor::TwoD: return "twod";
    case Flavor::Burgers1D: return "burgers1d";
  }
  throw std::logic_error("to_string(Flavor): unknown flavor");
}

Flavor flavor_from_string(const std::string& s) {
  if (s == "incompressible3d") return Flavor::Incompressible3D;
  if (s == "extreme-gradients3d") return Flavor::ExtremeGradients3D;
  if (s == "compressible3d") return Flavor::Compressible3D;
  if (s == "passive-scalar3d") return Flavor::PassiveScalar3D;
  if (s == "twod") return Flavor::TwoD;
  if (s == "burgers1d") return Flavor::Burgers1D;
  throw std::invalid_argument("unknown flow flavor '" + s + "'");
}

FlowParams make_flow_params(double Re, double U, double L, int d, Flavor flavor, double u0_norm,
                            double f0_norm, double Sc, double beta) {
  if (!(Re > 0.0)) throw std::invalid_argument("FlowParams: Re must be positive");
  if (!(U > 0.0)) throw std::invalid_argument("FlowParams: U must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("FlowParams: L must be positive");
  if (d < 1 || d > 3) throw std::invalid_argument("FlowParams: dimension must be 1, 2, or 3");
  if (flavor == Flavor::PassiveScalar3D && !(Sc > 0.0))
    throw std::invalid_argument("FlowParams: passive scalar flavor needs Sc > 0");
  if (!(u0_norm >= 0.0) || !(f0_norm >= 0.0))
    throw std::invalid_argument("FlowParams: norms must be nonnegative");
  if (!(beta > 0.5))
    throw std::invalid_argument("FlowParams: extreme-gradient beta must exceed 1/2");
  FlowParams p;
  p.Re = Re;
  p.U = U;
  p.L = L;
  p.nu = U * L / Re;
  p.d = d;
  p.flavor = flavor;
  p.Sc = Sc;
  p.u0_norm = u0_norm;
  p.f0_norm = f0_norm;
  p.beta = beta;
  return p;
}

KolmogorovEstimate kolmogorov_scale(const FlowParams& p) {
  KolmogorovEstimate k;
  k.eta = k.eta_ext = k.eta_min = k.eta_B = kNaN;
  k.epsilon = p.U * p.U * p.U / p.L;
  k.tau = p.L / p.U;

  const double eta3 = std::pow(p.Re, -0.75) * p.L;
  switch (p.flavor) {
    case Flavor::Incompressible3D:
    case Flavor::Compressible3D:
      k.eta = eta3;
      break;
    case Flavor::ExtremeGradients3D: {
      k.eta = eta3;
      const double alpha = p.beta - 0.5;
      k.eta_ext = eta3 * std::pow(p.Re, -alpha / 2.0);
      k.eta_min = p.L / p.Re;
      break;
    }
    case Flavor::PassiveScalar3D:
      k.eta = eta3;
      k.eta_B = eta3 / std::sqrt(p.Sc);
      break;
    case Flavor::TwoD:
      k.eta = std::pow(p.Re, -0.5) * p.L;
      break;
    case Flavor::Burgers1D:
      k.eta = p.L / p.Re;
      break;
  }
  k.limiting = limiting_scale(p);
  k.N_min = std::max<long>(2, snapped_ceil(p.L / k.limiting));
  return k;
}

double compute_R(double f1_dominant_eig, double f2_norm, double f0_norm, double u0_norm) {
  if (!(u0_norm > 0.0))
    throw std::invalid_argument("compute_R: ||u0|| must be positive");
  if (!(f2_norm >= 0.0) || !(f0_norm >= 0.0))
    throw std::invalid_argument("compute_R: norms must be nonnegative");
  if (!(f1_dominant_eig < 0.0))
    throw std::domain_error(
        "compute_R: dominant eigenvalue is not negative; the efficiency criterion does not apply");
  return (u0_norm * f2_norm + f0_norm / u0_norm) / std::abs(f1_dominant_eig);
}

double estimate_R_of_N(const FlowParams& p, double N) {
  if (!(N >= 0.0)) throw std::invalid_argument("estimate_R_of_N: N must be nonnegative");
  if (!(p.u0_norm > 0.0)) throw std::invalid_argument("estimate_R_of_N: ||u0|| must be positive");
  const double d = static_cast<double>(p.d);
  const double inner =
      p.u0_norm * d * d * std::pow(N, 1.5) / (2.0 * p.L) + p.f0_norm / p.u0_norm;
  return p.L * p.L / (d * p.nu * kPi2) * inner;
}

double efficiency_frontier_Re(const FlowParams& p, double N) {
  if (!(N >= 0.0)) throw std::invalid_argument("efficiency_frontier_Re: N must be nonnegative");
  if (!(p.u0_norm > 0.0))
    throw std::invalid_argument("efficiency_frontier_Re: ||u0|| must be positive");
  // Exact algebraic inverse of estimate_R_of_N in Re; reduces to the printed
  //   Re = U pi^2 / (||u0|| N^{3/2}/2 + L ||F0||/||u0||)
  // one-dimensional form when d = 1.
  const double d = static_cast<double>(p.d);
  const double inner =
      p.u0_norm * d * d * std::pow(N, 1.5) / (2.0 * p.L) + p.f0_norm / p.u0_norm;
  return d * p.U * kPi2 / (p.L * inner);
}

RKs r_ks(const FlowParams& p) {
  if (!(p.u0_norm > 0.0)) throw std::invalid_argument("r_ks: ||u0|| must be positive");
  RKs out;
  out.r_paper = p.u0_norm * std::pow(2.0 * p.Re * p.U, 1.5) / kPi2 +
                p.L * p.f0_norm / (kPi2 * p.u0_norm);
  out.r_substituted = estimate_R_of_N(p, static_cast<double>(kolmogorov_scale(p).N_min));
  const double scale = std::max(std::abs(out.r_paper), std::abs(out.r_substituted));
  out.divergent = scale > 0.0 && std::abs(out.r_paper - out.r_substituted) > 0.01 * scale;
  return out;
}

double crossing_N_star(const FlowParams& p) {
  if (!(p.u0_norm > 0.0)) throw std::invalid_argument("crossing_N_star: ||u0|| must be positive");
  const double d = static_cast<double>(p.d);
  auto rhs = [&](double N) {
    return p.U * kPi2 /
           ((d / 2.0) * p.u0_norm * std::pow(N, 1.5) + p.L * p.f0_norm / (d * p.u0_norm));
  };
  auto g = [&](double N) { return N - rhs(N); };

  double lo = 1.0, hi = 1e6;
  const double tol = 1e-6;
  double glo = g(lo), ghi = g(hi);
  if (std::abs(glo) < tol) return lo;
  if (std::abs(ghi) < tol) return hi;
  if (glo * ghi > 0.0)
    throw std::domain_error("crossing_N_star: no sign change on [1, 1e6] (degenerate parameters)");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) < 1e-9) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(g(mid)) < tol) return mid;
  throw std::runtime_error("crossing_N_star: bisection failed to reach the residual target");
}

std::string to_string(RegionLabel l) {
  switch (l) {
    case RegionLabel::I: return "I";
    case RegionLabel::II: return "II";
    case RegionLabel::III: return "III";
    case RegionLabel::IV: return "IV";
    case RegionLabel::V: return "V";
  }
  throw std::logic_error("to_string(RegionLabel): unknown label");
}

RegionLabel classify_region(const FlowParams& p, double N) {
  if (!(N >= 1.0)) throw std::invalid_argument("classify_region: N must be >= 1");
  const bool eff = estimate_R_of_N(p, N) <= 1.0;
  const bool resolved = N >= static_cast<double>(kolmogorov_scale(p).N_min);
  if (eff) return resolved ? RegionLabel::II : RegionLabel::I;
  if (!resolved) return RegionLabel::V;
  return (r_ks(p).r_paper <= 1.0) ? RegionLabel::III : RegionLabel::IV;
}

namespace {

/// Re at which the (smooth) resolution requirement L/limiting equals N.
double invert_resolution_frontier(const FlowParams& tmpl, double N) {
  auto n_of_re = [&](double Re) {
    FlowParams q = tmpl;
    q.Re = Re;
    q.nu = q.U * q.L / Re;
    return q.L / limiting_scale(q);
  };
  double lo = 1e-9, hi = 1e12;
  if (n_of_re(lo) > N) return lo;
  if (n_of_re(hi) < N) return hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi); // bisect in log Re
    if (n_of_re(mid) < N)
      lo = mid;
    else
      hi = mid;
    if (hi / lo < 1.0 + 1e-13) break;
  }
  return std::sqrt(lo * hi);
}

} // namespace

RegionMap region_map(const FlowParams& tmpl, double N_lo, double N_hi, double Re_lo, double Re_hi,
                     int resolution) {
  if (!(N_lo > 0.0 && N_hi > N_lo) || !(Re_lo > 0.0 && Re_hi > Re_lo))
    throw std::invalid_argument("region_map: ranges must be positive and increasing");
  if (resolution < 2) throw std::invalid_argument("region_map: resolution must be >= 2");

  auto log_lattice = [resolution](double lo, double hi) {
    std::vector<double> v(resolution);
    const double ratio = hi / lo;
    for (int i = 0; i < resolution; ++i)
      v[i] = lo * std::pow(ratio, static_cast<double>(i) / (resolution - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
  };
  const std::vector<double> Ns = log_lattice(N_lo, N_hi);
  const std::vector<double> Res = log_lattice(Re_lo, Re_hi);

  RegionMap out;
  out.rows.reserve(Ns.size() * Res.size());
  for (double N : Ns)
    for (double Re : Res) {
      FlowParams q = tmpl;
      q.Re = Re;
      q.nu = q.U * q.L / Re;
      MapRow row;
      row.N = N;
      row.Re = Re;
      row.R = estimate_R_of_N(q, N);
      row.r_ks_paper = r_ks(q).r_paper;
      row.N_K = kolmogorov_scale(q).N_min;
      row.label = classify_region(q, N);
      out.rows.push_back(row);
    }

  out.frontier.reserve(Ns.size());
  for (double N : Ns) {
    FrontierRow fr;
    fr.N = N;
    fr.Re_frontier = efficiency_frontier_Re(tmpl, N);
    fr.Re_kolmogorov = invert_resolution_frontier(tmpl, N);
    out.frontier.push_back(fr);
  }
  return out;
}

} // namespace carlab
