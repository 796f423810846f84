#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bladegauge/darboux.hpp"
#include "bladegauge/dynamics.hpp"
#include "bladegauge/em.hpp"
#include "schema.hpp"

namespace bladegauge::app {

/// Fields loaded for the residuals command. Bad input raises UsageError:
/// load_scenario and load_lattice prefix it with `label` (a file path), the
/// other loaders name the JSON pointer `where` of the value they read.
struct Scenario {
  std::string label;
  int dim = 0;
  Spacetime st;
  bool spherical = false;  ///< monopole (r, theta, phi) coordinates
  std::vector<std::pair<double, double>> box;
  std::optional<GaugePotential> potential;
  std::optional<Frame> frame;
  std::optional<EmFrameParams> em;  ///< closed-form N = 2 data behind the frame
};

/// Validates against schemas/scenario.schema.json and builds the fields.
Scenario load_scenario(const json& doc, const std::string& label);
/// The builtin plane-wave scenario: closed-form frame and potential on [-1, 1]^4.
Scenario plane_wave_scenario(const RVector& k, const RVector& n);

std::vector<GridAxis> axes_from_json(const json& a);
json axes_to_json(const std::vector<GridAxis>& axes);
Frame frame_from_json(const json& spec, const std::string& where);
GaugePotential potential_from_json(const json& spec, const std::string& where);
/// Pairs whose pi and phi are expression strings or {axes, values} samples.
DarbouxData darboux_from_json(int dim, const json& pairs, const std::string& where);

/// Validates against schemas/lattice.schema.json: explicit sites, or a frame
/// sampled at the nodes.
BladeLattice load_lattice(const json& doc, const std::string& label);
/// {axes, N, sites: [{point, re, im}]}; load_lattice reads it back.
json lattice_to_json(const BladeLattice& lat);
/// [{point, re, im}] with R at each point.
json blade_dump(const RotatingBlade& r, const std::vector<Point>& points);

/// Regular grid "lo:hi:n[,lo:hi:n...]" with n nodes per axis, lo and hi
/// included; a single axis spec repeats over all `dim` axes.
std::vector<Point> parse_grid(const std::string& spec, int dim);

/// Throws UsageError listing the schema violations of `doc`.
void require_valid(std::string_view schema, const json& doc, const std::string& where);

}  // namespace bladegauge::app
