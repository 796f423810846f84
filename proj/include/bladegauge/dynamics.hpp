#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bladegauge/blade.hpp"
#include "bladegauge/em.hpp"

namespace bladegauge {

/// D^mu F_{mu nu} = sum_mu sign(mu) (d_mu F_{mu nu} + i [A_mu, F_{mu nu}]).
CMatrix ym_residual(const GaugePotential& a, const Spacetime& st, int nu, const Point& x);
/// The nu-th residual as a field (for further differentiation).
MatrixField ym_residual_field(const GaugePotential& a, const Spacetime& st, int nu);

/// -1/4 int Tr(F_{mu nu} F^{mu nu}) by the midpoint rule.
double ym_action(const GaugePotential& a, const Spacetime& st, const Grid& grid);
/// -1/4 int Tr(d_mu R d^mu R) by the midpoint rule.
double sigma_action(const RotatingBlade& r, const Spacetime& st, const Grid& grid);

/// sum_nu d^nu (V (D^mu F_{mu nu}) V^dag) with A = -i V^dag dV. Uses nested
/// finite differences unless V carries enough analytic derivatives.
CMatrix modified_eom_residual(const Frame& v, const Spacetime& st, const Point& x);
/// Same expression for a given potential (V only enters through the conjugation).
CMatrix modified_eom_residual(const Frame& v, const GaugePotential& a, const Spacetime& st, const Point& x);

/// sum_nu (d^mu F_{mu nu}) d^nu R for the N = 2 EM frame.
CMatrix maxwell_mod_residual(const EmFrameParams& params, const Spacetime& st, const Point& x);

/// P sum_mu sign(mu) (d_mu Omega_{mu nu} + i [S_mu, Omega_{mu nu}]).
CMatrix shape_gauge_ym_residual(const RotatingBlade& r, const Spacetime& st, int nu, const Point& x);
/// |V^dag (shape residual) V - ym_residual(extract_potential(V))| at x.
double shape_gauge_ym_equivalence(const Frame& v, const Spacetime& st, int nu, const Point& x);

/// sum_mu sign(mu) d_mu S_mu.
CMatrix sigma_eom_residual(const RotatingBlade& r, const Spacetime& st, const Point& x);

struct ResidualReport {
  std::string equation;
  std::vector<Point> points;
  std::vector<int> index;     ///< free index per entry (-1 when summed)
  std::vector<double> norms;  ///< max-abs entry of the residual matrix
  double max = 0.0;
  double mean = 0.0;
};

/// Evaluates `fn(x, index)` for every point and index in [0, indices) in
/// parallel; entries are ordered point-major. indices = 0 means one summed
/// entry per point with index -1.
ResidualReport collect_residuals(const std::string& equation, const std::vector<Point>& points, int indices,
                                 const std::function<CMatrix(const Point&, int)>& fn);

/// Blade field sampled on the nodes of a box. Non-periodic axes have
/// cells + 1 nodes whose end nodes are held fixed; periodic axes have `cells`
/// nodes and wrap around.
struct BladeLattice {
  std::vector<GridAxis> axes;
  int big_n = 0;
  std::vector<CMatrix> sites;
  std::vector<char> fixed;

  int dim() const { return static_cast<int>(axes.size()); }
  std::vector<int> shape() const;
  std::size_t size() const { return sites.size(); }
  Point position(std::size_t site) const;
  /// Neighbour one step along `axis` (+1 or -1); npos when off the lattice.
  std::size_t neighbour(std::size_t site, int axis, int step) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

BladeLattice sample_lattice(const RotatingBlade& r, const std::vector<GridAxis>& axes);

/// Lattice from explicit site values in node order (see node_shape). Sites
/// on the ends of open axes are fixed. Throws DimensionError on a count or
/// shape mismatch and DomainError where a site is not a Hermitian involution
/// to `tol`.
BladeLattice lattice_from_sites(const std::vector<GridAxis>& axes, std::vector<CMatrix> sites, double tol = 1e-8);

/// E = (v/4) sum_links Tr((R_j - R_i)^2) / a^2 with v the cell volume: the
/// forward-difference discretisation of +1/4 int Tr(dR dR), i.e. the static
/// sigma-model energy (minus the action with all-spatial signs).
double lattice_energy(const BladeLattice& lat);

/// Hermitian G_s with dE = sum_s Tr(B_s G_s) under R_s -> e^{iB_s} R_s e^{-iB_s};
/// zero on fixed sites.
std::vector<CMatrix> lattice_gradient(const BladeLattice& lat);

/// R_s -> e^{i eps B_s} R_s e^{-i eps B_s} on every free site.
BladeLattice conjugate_lattice(const BladeLattice& lat, const std::vector<CMatrix>& b, double eps);

struct FlowResult {
  BladeLattice final;
  std::vector<double> energy;  ///< energy before step 0 and after every step
  double max_involution_defect = 0.0;  ///< max over steps and sites of |R^2 - I|
  double max_hermiticity_defect = 0.0;
};

/// Gradient descent R_s <- e^{-i eta G_s} R_s e^{i eta G_s}, synchronous over
/// sites. Throws DivergenceError after 10 consecutive energy increases.
FlowResult sigma_flow(const BladeLattice& initial, int steps, double eta);

/// Banded monopole fixture: theta in [lo, hi] with fixed ends, phi periodic.
BladeLattice monopole_band_lattice(double g, int theta_cells, int phi_cells, double theta_lo = 0.6,
                                   double theta_hi = 2.5);

}  // namespace bladegauge
