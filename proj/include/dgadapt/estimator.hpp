#ifndef DGADAPT_ESTIMATOR_HPP
#define DGADAPT_ESTIMATOR_HPP

#include <optional>
#include <vector>

#include "dgadapt/assembly.hpp"

namespace dgadapt {

/// Reaction-convection balance constants of one component:
/// kappa = max(0, inf(alpha - div b / 2)), kappa* = sup|alpha - div b| / kappa.
struct KappaInfo {
  Real kappa = 0;
  std::optional<Real> kappa_star;
};

/// Sampled at the space's volume quadrature points.
std::vector<KappaInfo> compute_kappa(const DgSpace& space, const ProblemSpec& problem);

inline std::vector<Real> kappa_values(const std::vector<KappaInfo>& infos) {
  std::vector<Real> k(infos.size());
  for (std::size_t i = 0; i < infos.size(); ++i) k[i] = infos[i].kappa;
  return k;
}

/// Per-element residual indicators of one component, split into the cell
/// residual and the three edge contributions; eta_K^2 is their exact sum.
struct ErrorIndicators {
  VectorX cell;            // eta_{R_K}^2
  VectorX edge_interior;   // eta_{E_K^0}^2
  VectorX edge_dirichlet;  // eta_{E_K^D}^2
  VectorX edge_neumann;    // eta_{E_K^N}^2
  KappaInfo kappa;

  VectorX total_squared() const { return cell + edge_interior + edge_dirichlet + edge_neumann; }
  Real eta() const { return std::sqrt(total_squared().sum()); }
};

/// One ErrorIndicators per component. The nonlinear reaction enters the cell
/// residuals only; the broken Laplacian is evaluated exactly from the basis.
std::vector<ErrorIndicators> compute_indicators(const DgSpace& space, const ProblemSpec& problem,
                                                const VectorX& U);

inline Real total_eta(const std::vector<ErrorIndicators>& indicators) {
  Real sum = 0;
  for (const auto& ind : indicators) sum += ind.total_squared().sum();
  return std::sqrt(sum);
}

/// Data-approximation error Theta^2 = Theta^2(f) + Theta^2(u^D) + Theta^2(u^N),
/// with f and b replaced by their elementwise projections and boundary data
/// by per-edge means.
struct DataError {
  Real f_part = 0;
  Real dirichlet_part = 0;
  Real neumann_part = 0;
  Real total() const { return std::sqrt(f_part + dirichlet_part + neumann_part); }
};

DataError compute_data_error(const DgSpace& space, const ProblemSpec& problem, const VectorX& U);

/// Bulk marking: per component the minimal greedy set with
/// sum_{K in M} eta_K^2 >= theta * sum_K eta_K^2 (sorted by indicator
/// descending, ties to the lower element id), then the union over components.
std::vector<Index> dorfler_mark(const std::vector<VectorX>& eta_squared, Real theta);

inline std::vector<Index> dorfler_mark(const std::vector<ErrorIndicators>& indicators,
                                       Real theta) {
  std::vector<VectorX> eta_sq;
  eta_sq.reserve(indicators.size());
  for (const auto& ind : indicators) eta_sq.push_back(ind.total_squared());
  return dorfler_mark(eta_sq, theta);
}

}  // namespace dgadapt

#endif
