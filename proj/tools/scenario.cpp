#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "app.hpp"
#include "bladegauge/expr.hpp"
#include "bladegauge/tabulated.hpp"

namespace bladegauge::app {

namespace {

RVector vector_of(const json& a) {
  RVector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

std::string at_ptr(const std::string& p) { return p.empty() ? "/" : p; }

const json& need(const json& spec, const char* key, const std::string& where, const std::string& what) {
  const auto it = spec.find(key);
  if (it == spec.end()) throw UsageError(at_ptr(where) + ": " + what + " needs '" + key + "'");
  return *it;
}

Patch patch_of(const json& spec) { return spec.value("patch", "plus") == "minus" ? Patch::minus : Patch::plus; }

void check_builtin_or_tabulated(const json& spec, const std::string& where) {
  const bool b = spec.contains("builtin");
  const bool t = spec.contains("tabulated");
  if (b == t) throw UsageError(at_ptr(where) + ": give exactly one of 'builtin' and 'tabulated'");
}

std::vector<double> flat_numbers(const json& a) {
  std::vector<double> out;
  out.reserve(a.size());
  for (const json& x : a) out.push_back(x.get<double>());
  return out;
}

// Complex entries from parallel re/im arrays; im defaults to zeros.
std::vector<Complex> entries(const json& tab, std::size_t expected, const std::string& where) {
  const std::vector<double> re = flat_numbers(tab.at("re"));
  const std::vector<double> im = tab.contains("im") ? flat_numbers(tab.at("im")) : std::vector<double>(re.size(), 0.0);
  if (re.size() != expected)
    throw UsageError(where + "/re: expected " + std::to_string(expected) + " numbers, got " + std::to_string(re.size()));
  if (im.size() != expected)
    throw UsageError(where + "/im: expected " + std::to_string(expected) + " numbers, got " + std::to_string(im.size()));
  std::vector<Complex> out(expected);
  for (std::size_t i = 0; i < expected; ++i) out[i] = Complex(re[i], im[i]);
  return out;
}

std::vector<GridAxis> checked_axes(const json& a, const std::string& where) {
  std::vector<GridAxis> axes = axes_from_json(a);
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (!(axes[k].upper > axes[k].lower)) throw UsageError(where + "/axes/" + std::to_string(k) + ": needs upper > lower");
    if (axes[k].periodic && axes[k].cells < 3)
      throw UsageError(where + "/axes/" + std::to_string(k) + ": a periodic axis needs at least 3 cells");
  }
  return axes;
}

ScalarField pair_function(int dim, const json& f, const std::string& where) {
  if (f.is_string()) {
    try {
      return Expression::parse(f.get<std::string>()).field(dim);
    } catch (const std::invalid_argument& e) {
      throw UsageError(at_ptr(where) + ": " + e.what());
    }
  }
  const std::vector<GridAxis> axes = checked_axes(f.at("axes"), where);
  if (static_cast<int>(axes.size()) != dim) throw UsageError(where + "/axes: needs one axis per coordinate (" + std::to_string(dim) + ")");
  const std::vector<double> values = flat_numbers(f.at("values"));
  if (values.size() != node_count(axes))
    throw UsageError(where + "/values: expected " + std::to_string(node_count(axes)) + " numbers, got " + std::to_string(values.size()));
  return tabulated_field(axes, values);
}

json matrix_rows(const CMatrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

json point_json(const Point& x) {
  json p = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) p.push_back(x(i));
  return p;
}

CMatrix matrix_from_rows(const json& re, const json& im, const std::string& where) {
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = rows ? static_cast<Eigen::Index>(re[0].size()) : 0;
  if (!im.is_null() && im.size() != re.size()) throw UsageError(where + "/im: shape differs from re");
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& r = re[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(r.size()) != cols) throw UsageError(where + "/re/" + std::to_string(i) + ": ragged row");
    for (Eigen::Index j = 0; j < cols; ++j) {
      double y = 0.0;
      if (!im.is_null()) {
        const json& ir = im[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(ir.size()) != cols) throw UsageError(where + "/im/" + std::to_string(i) + ": ragged row");
        y = ir[static_cast<std::size_t>(j)].get<double>();
      }
      m(i, j) = Complex(r[static_cast<std::size_t>(j)].get<double>(), y);
    }
  }
  return m;
}

// Library errors raised while building fields from user input are input
// errors, not failed checks.
template <typename F>
auto as_usage(const std::string& where, F build) {
  try {
    return build();
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(at_ptr(where) + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(at_ptr(where) + ": " + e.what());
  }
}

}  // namespace

void require_valid(std::string_view schema, const json& doc, const std::string& where) {
  const std::vector<SchemaViolation> bad = validate(schema_for(schema), doc);
  if (bad.empty()) return;
  std::string msg = where + ": invalid " + std::string(schema);
  for (const SchemaViolation& v : bad) msg += "\n  " + (v.pointer.empty() ? std::string("/") : v.pointer) + ": " + v.message;
  throw UsageError(msg);
}

std::vector<GridAxis> axes_from_json(const json& a) {
  std::vector<GridAxis> out;
  for (const json& x : a)
    out.push_back(GridAxis{x.at("lower").get<double>(), x.at("upper").get<double>(), x.at("cells").get<int>(), x.value("periodic", false)});
  return out;
}

json axes_to_json(const std::vector<GridAxis>& axes) {
  json out = json::array();
  for (const GridAxis& a : axes) out.push_back({{"lower", a.lower}, {"upper", a.upper}, {"cells", a.cells}, {"periodic", a.periodic}});
  return out;
}

DarbouxData darboux_from_json(int dim, const json& pairs, const std::string& where) {
  DarbouxData data;
  data.dim = dim;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string at = where + "/pairs/" + std::to_string(k);
    data.pairs.push_back({pair_function(dim, pairs[k].at("pi"), at + "/pi"), pair_function(dim, pairs[k].at("phi"), at + "/phi")});
  }
  return data;
}

Frame frame_from_json(const json& spec, const std::string& where) {
  check_builtin_or_tabulated(spec, where);
  return as_usage(where, [&]() -> Frame {
    if (spec.contains("tabulated")) {
      const std::string at = where + "/tabulated";
      const json& tab = spec.at("tabulated");
      const std::vector<GridAxis> axes = checked_axes(tab.at("axes"), at);
      const int big_n = tab.at("N");
      const int n = tab.at("rank");
      if (n >= big_n) throw UsageError(at_ptr(at) + ": rank must be below N");
      const std::size_t nodes = node_count(axes);
      const std::size_t per = static_cast<std::size_t>(big_n * n);
      const std::vector<Complex> e = entries(tab, nodes * per, at);
      std::vector<CMatrix> samples;
      for (std::size_t s = 0; s < nodes; ++s) {
        CMatrix v(big_n, n);
        for (int i = 0; i < big_n; ++i)
          for (int j = 0; j < n; ++j) v(i, j) = e[s * per + static_cast<std::size_t>(i * n + j)];
        if (unitarity_defect(v) > 1e-6) throw UsageError(at_ptr(at) + ": node " + std::to_string(s) + " does not have orthonormal columns");
        samples.push_back(std::move(v));
      }
      return orthonormalized_frame(big_n, n, tabulated_field(axes, samples));
    }
    const std::string name = spec.at("builtin");
    const std::string what = "builtin frame '" + name + "'";
    if (name == "plane_wave")
      return em_frame(plane_wave_params(vector_of(need(spec, "k", where, what)), vector_of(need(spec, "n", where, what))));
    if (name == "monopole") return em_frame(monopole_params(need(spec, "g", where, what).get<double>(), patch_of(spec)));
    if (name == "darboux") {
      const int dim = need(spec, "dim", where, what);
      return darboux_frame(darboux_from_json(dim, need(spec, "pairs", where, what), where));
    }
    return random_smooth_frame(need(spec, "N", where, what), need(spec, "rank", where, what), need(spec, "dim", where, what),
                               spec.value("seed", 1));
  });
}

GaugePotential potential_from_json(const json& spec, const std::string& where) {
  check_builtin_or_tabulated(spec, where);
  return as_usage(where, [&]() -> GaugePotential {
    if (spec.contains("tabulated")) {
      const std::string at = where + "/tabulated";
      const json& tab = spec.at("tabulated");
      const std::vector<GridAxis> axes = checked_axes(tab.at("axes"), at);
      const int dim = static_cast<int>(axes.size());
      const int n = tab.at("rank");
      const std::size_t nodes = node_count(axes);
      const std::size_t per = static_cast<std::size_t>(n * n);
      const std::vector<Complex> e = entries(tab, nodes * per * static_cast<std::size_t>(dim), at);
      std::vector<MatrixField> comps;
      for (int mu = 0; mu < dim; ++mu) {
        std::vector<CMatrix> samples;
        for (std::size_t s = 0; s < nodes; ++s) {
          CMatrix a(n, n);
          const std::size_t base = (s * static_cast<std::size_t>(dim) + static_cast<std::size_t>(mu)) * per;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = e[base + static_cast<std::size_t>(i * n + j)];
          if (hermiticity_defect(a) > 1e-8)
            throw UsageError(at_ptr(at) + ": A_" + std::to_string(mu) + " at node " + std::to_string(s) + " is not Hermitian");
          samples.push_back(std::move(a));
        }
        comps.push_back(tabulated_field(axes, samples));
      }
      return GaugePotential(n, std::move(comps));
    }
    const std::string name = spec.at("builtin");
    const std::string what = "builtin potential '" + name + "'";
    if (name == "plane_wave") return plane_wave_potential(vector_of(need(spec, "k", where, what)), vector_of(need(spec, "n", where, what)));
    if (name == "monopole") return monopole_potential(need(spec, "g", where, what).get<double>(), patch_of(spec));
    if (name == "constant_field")
      return constant_field_potential(need(spec, "dim", where, what), need(spec, "b", where, what), spec.value("i", 0), spec.value("j", 1));
    if (name == "pure_gauge")
      return pure_gauge_potential(random_gauge_map(need(spec, "rank", where, what), need(spec, "dim", where, what), spec.value("seed", 1)));
    if (name == "random")
      return random_smooth_potential(need(spec, "rank", where, what), need(spec, "dim", where, what), spec.value("seed", 1));
    const int dim = need(spec, "dim", where, what);
    return darboux_potential(darboux_from_json(dim, need(spec, "pairs", where, what), where));
  });
}

Scenario plane_wave_scenario(const RVector& k, const RVector& n) {
  Scenario s;
  s.label = "planewave";
  s.dim = 4;
  s.st = Spacetime::minkowski();
  s.box.assign(4, {-1.0, 1.0});
  s.em = plane_wave_params(k, n);
  s.frame = em_frame(*s.em);
  s.potential = plane_wave_potential(k, n);
  return s;
}

namespace {
Scenario build_scenario(const json& doc);
BladeLattice build_lattice(const json& doc);
}  // namespace

Scenario load_scenario(const json& doc, const std::string& label) {
  require_valid("scenario", doc, label);
  try {
    Scenario s = build_scenario(doc);
    s.label = label;
    return s;
  } catch (const UsageError& e) {
    throw UsageError(label + ": " + e.what());
  }
}

namespace {

Scenario build_scenario(const json& doc) {
  const std::string where;
  Scenario s;
  if (!doc.contains("potential") && !doc.contains("frame")) throw UsageError(at_ptr(where) + ": needs a 'potential', a 'frame' or both");
  std::vector<std::pair<double, double>> tab_box;
  auto note_box = [&](const json& spec) {
    if (!spec.contains("tabulated")) return;
    const std::vector<GridAxis> axes = axes_from_json(spec.at("tabulated").at("axes"));
    if (tab_box.empty()) tab_box.assign(axes.size(), {-HUGE_VAL, HUGE_VAL});
    for (std::size_t k = 0; k < axes.size() && k < tab_box.size(); ++k) {
      tab_box[k].first = std::max(tab_box[k].first, axes[k].lower);
      tab_box[k].second = std::min(tab_box[k].second, axes[k].upper);
    }
  };
  auto is_monopole = [](const json& spec) { return spec.value("builtin", "") == "monopole"; };
  if (doc.contains("potential")) {
    const json& spec = doc.at("potential");
    s.potential = potential_from_json(spec, where + "/potential");
    s.dim = s.potential->dim();
    s.spherical = is_monopole(spec);
    note_box(spec);
  }
  if (doc.contains("frame")) {
    const json& spec = doc.at("frame");
    s.frame = frame_from_json(spec, where + "/frame");
    if (s.potential && s.frame->dim() != s.dim)
      throw UsageError(at_ptr(where) + ": frame and potential live on charts of different dimension");
    if (s.potential && s.frame->n() != s.potential->n())
      throw UsageError(at_ptr(where) + ": frame rank differs from the potential's gauge group U(n)");
    if (s.potential && is_monopole(spec) != s.spherical)
      throw UsageError(at_ptr(where) + ": monopole fields use (r, theta, phi) and cannot be mixed with Cartesian ones");
    s.dim = s.frame->dim();
    s.spherical = is_monopole(spec);
    const std::string name = spec.value("builtin", "");
    if (name == "plane_wave") s.em = plane_wave_params(vector_of(spec.at("k")), vector_of(spec.at("n")));
    if (name == "monopole") s.em = monopole_params(spec.at("g").get<double>(), patch_of(spec));
    note_box(spec);
  }

  if (doc.contains("signature")) {
    const json& sig = doc.at("signature");
    if (sig.is_string()) {
      const std::string name = sig;
      if (name == "minkowski") {
        s.st = Spacetime::minkowski(s.dim);
      } else if (name == "euclidean") {
        s.st = Spacetime::euclidean(s.dim);
      } else {
        throw UsageError(where + "/signature: expected minkowski, euclidean or an array of signs");
      }
    } else {
      if (static_cast<int>(sig.size()) != s.dim) throw UsageError(where + "/signature: needs one sign per axis");
      s.st = Spacetime::euclidean(s.dim);
      for (std::size_t k = 0; k < sig.size(); ++k) {
        const int v = sig[k];
        if (v != 1 && v != -1) throw UsageError(where + "/signature/" + std::to_string(k) + ": must be +1 or -1");
        s.st.signature[k] = v;
      }
    }
  } else {
    s.st = s.spherical ? Spacetime::spherical() : Spacetime::minkowski(s.dim);
  }

  if (doc.contains("box")) {
    const json& b = doc.at("box");
    if (static_cast<int>(b.size()) != s.dim) throw UsageError(where + "/box: needs one [lo, hi] interval per axis");
    for (std::size_t k = 0; k < b.size(); ++k) {
      s.box.emplace_back(b[k][0].get<double>(), b[k][1].get<double>());
      if (!(s.box.back().first < s.box.back().second)) throw UsageError(where + "/box/" + std::to_string(k) + ": empty interval");
    }
  } else if (!tab_box.empty()) {
    if (static_cast<int>(tab_box.size()) != s.dim) throw UsageError(at_ptr(where) + ": tabulated axes do not match the chart dimension");
    for (std::size_t k = 0; k < tab_box.size(); ++k)
      if (!(tab_box[k].first < tab_box[k].second)) throw UsageError(at_ptr(where) + ": tabulated boxes do not overlap on axis " + std::to_string(k));
    s.box = tab_box;
  } else if (s.spherical) {
    s.box = {{0.5, 2.0}, {0.3, kPi - 0.3}, {0.0, 2 * kPi}};
  } else {
    s.box.assign(static_cast<std::size_t>(s.dim), {-1.0, 1.0});
  }
  return s;
}

BladeLattice build_lattice(const json& doc) {
  const std::string where;
  const std::vector<GridAxis> axes = checked_axes(doc.at("axes"), where);
  const bool has_sites = doc.contains("sites");
  if (has_sites == doc.contains("frame")) throw UsageError(at_ptr(where) + ": give exactly one of 'sites' and 'frame'");
  return as_usage(where, [&]() -> BladeLattice {
    if (!has_sites) {
      const Frame v = frame_from_json(doc.at("frame"), where + "/frame");
      if (v.dim() != static_cast<int>(axes.size())) throw UsageError(at_ptr(where) + ": frame dimension differs from the axis count");
      const BladeLattice lat = sample_lattice(blade_from_frame(v), axes);
      if (doc.contains("N") && doc.at("N").get<int>() != lat.big_n) throw UsageError(where + "/N: differs from the frame's N");
      return lat;
    }
    const json& sites = doc.at("sites");
    std::vector<CMatrix> values;
    BladeLattice shell;
    shell.axes = axes;
    if (sites.size() != node_count(axes))
      throw UsageError(where + "/sites: expected " + std::to_string(node_count(axes)) + " sites, got " + std::to_string(sites.size()));
    for (std::size_t s = 0; s < sites.size(); ++s) {
      const std::string at = where + "/sites/" + std::to_string(s);
      const json& site = sites[s];
      values.push_back(matrix_from_rows(site.at("re"), site.contains("im") ? site.at("im") : json(), at));
      if (doc.contains("N") && values.back().rows() != doc.at("N").get<int>()) throw UsageError(at_ptr(at) + ": not N x N");
      if (site.contains("point")) {
        const Point expected = shell.position(s);
        const RVector p = vector_of(site.at("point"));
        if (p.size() != expected.size() || (p - expected).cwiseAbs().maxCoeff() > 1e-9)
          throw UsageError(at + "/point: does not match node " + std::to_string(s) + " of the axes");
      }
    }
    return lattice_from_sites(axes, std::move(values));
  });
}

}  // namespace

BladeLattice load_lattice(const json& doc, const std::string& label) {
  require_valid("lattice", doc, label);
  try {
    return build_lattice(doc);
  } catch (const UsageError& e) {
    throw UsageError(label + ": " + e.what());
  }
}

json lattice_to_json(const BladeLattice& lat) {
  json sites = json::array();
  for (std::size_t s = 0; s < lat.size(); ++s)
    sites.push_back({{"point", point_json(lat.position(s))}, {"re", matrix_rows(lat.sites[s], false)}, {"im", matrix_rows(lat.sites[s], true)}});
  return {{"axes", axes_to_json(lat.axes)}, {"N", lat.big_n}, {"sites", sites}};
}

json blade_dump(const RotatingBlade& r, const std::vector<Point>& points) {
  std::vector<CMatrix> values(points.size());
  const MatrixField rf = r.field();
  parallel_for(points.size(), [&](std::size_t i) { values[i] = rf(points[i]); });
  json out = json::array();
  for (std::size_t i = 0; i < points.size(); ++i)
    out.push_back({{"point", point_json(points[i])}, {"re", matrix_rows(values[i], false)}, {"im", matrix_rows(values[i], true)}});
  return out;
}

std::vector<Point> parse_grid(const std::string& spec, int dim) {
  struct Axis {
    double lo, hi;
    int n;
  };
  std::vector<Axis> axes;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    Axis a{};
    char c1 = 0, c2 = 0;
    std::stringstream one(item);
    if (!(one >> a.lo >> c1 >> a.hi >> c2 >> a.n) || c1 != ':' || c2 != ':' || !(one >> std::ws).eof())
      throw UsageError("--grid: '" + item + "' is not lo:hi:n");
    if (a.n < 1) throw UsageError("--grid: '" + item + "' needs n >= 1");
    if (a.n > 1 && !(a.lo < a.hi)) throw UsageError("--grid: '" + item + "' needs lo < hi");
    axes.push_back(a);
  }
  if (axes.size() == 1 && dim > 1) axes.assign(static_cast<std::size_t>(dim), axes.front());
  if (static_cast<int>(axes.size()) != dim)
    throw UsageError("--grid: " + std::to_string(axes.size()) + " axes given for a " + std::to_string(dim) + "-dimensional scenario");
  std::size_t total = 1;
  for (const Axis& a : axes) total *= static_cast<std::size_t>(a.n);
  if (total > 1000000) throw UsageError("--grid: more than 10^6 points");
  std::vector<Point> out;
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point p(dim);
    std::size_t rest = flat;
    for (std::size_t k = axes.size(); k-- > 0;) {
      const Axis& a = axes[k];
      const auto i = static_cast<int>(rest % static_cast<std::size_t>(a.n));
      rest /= static_cast<std::size_t>(a.n);
      p(static_cast<Eigen::Index>(k)) = a.n == 1 ? a.lo : a.lo + (a.hi - a.lo) * i / (a.n - 1);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace bladegauge::app
