#pragma once

#include <string>
#include <vector>

#include "bladegauge/blade.hpp"

namespace bladegauge {

struct DarbouxPair {
  ScalarField pi;
  ScalarField phi;
};

/// Local abelian potential A = sum_k pi_k d phi_k, with |pi_k| <= 1 on the
/// domain of interest.
struct DarbouxData {
  int dim = 4;
  std::vector<DarbouxPair> pairs;
  std::vector<GridAxis> domain;  ///< optional box; empty means "samples decide"

  int r() const { return static_cast<int>(pairs.size()) - 1; }
  int big_n() const { return 2 * static_cast<int>(pairs.size()); }
};

GaugePotential darboux_potential(const DarbouxData& data);

/// N = 2(r+1), n = 1 frame stacking the blocks
///   (e^{i(r+1)phi_k} cos rho_k, e^{-i(r+1)phi_k} sin rho_k) / sqrt(r+1),
/// rho_k = arccos(pi_k) / 2. Evaluation throws DomainError where |pi_k| > 1.
Frame darboux_frame(const DarbouxData& data);

struct DarbouxDiagnostics {
  double max_abs_pi = 0.0;
  bool gradients_independent = true;
  std::vector<Point> near_singular_points;  ///< |pi_k| > 1 - 1e-9
};

/// Checks |pi_k| <= 1 (DomainError otherwise) and gradient independence
/// (warning only) at the samples.
DarbouxDiagnostics check_darboux(const DarbouxData& data, const std::vector<Point>& samples);

/// Measured rank of A at the samples; throws RankError unless it equals
/// len(pairs) - 1.
int verify_rank(const DarbouxData& data, const std::vector<Point>& samples, double tol = 1e-6);

struct DarbouxReport {
  int big_n = 0;
  int measured_rank = 0;
  double max_residual = 0.0;       ///< |extract_potential(V) - A| over samples and axes
  double max_norm_defect = 0.0;    ///< |V^dag V - 1|
  std::vector<Point> near_singular_points;
};

/// Full contract check used by the CLI; does not throw on a rank mismatch
/// (the measured rank is reported instead).
DarbouxReport darboux_report(const DarbouxData& data, const std::vector<Point>& samples);

/// Pairs from expression strings over x0..x{dim-1}.
DarbouxData darboux_from_expressions(int dim, const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace bladegauge
