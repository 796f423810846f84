#include "bladegauge/darboux.hpp"

#include <cmath>
#include <sstream>

#include "bladegauge/expr.hpp"

namespace bladegauge {

namespace {

std::string describe(const Point& x) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ')';
  return os.str();
}

int pairs_order(const DarbouxData& data) {
  int order = 2;
  for (const auto& p : data.pairs) order = std::min({order, p.pi.max_order(), p.phi.max_order()});
  return order;
}

}  // namespace

GaugePotential darboux_potential(const DarbouxData& data) {
  const DarbouxData d = data;
  std::vector<MatrixField> comps;
  for (int mu = 0; mu < d.dim; ++mu) {
    if (d.pairs.empty()) {
      comps.push_back(MatrixField::constant(d.dim, CMatrix::Zero(1, 1)));
      continue;
    }
    const double step = d.pairs.front().pi.step();
    comps.push_back(derived_field<CMatrix>(d.dim, pairs_order(d), 1, step, [d, mu](const Point& x, int order) {
      Jet<double> a = constant_jet(0.0, d.dim, order);
      for (const auto& p : d.pairs) a = a + p.pi.jet(x, order) * derivative(p.phi.jet(x, order + 1), mu);
      return jet_map(a, [](double v) {
        CMatrix m(1, 1);
        m(0, 0) = v;
        return m;
      });
    }));
  }
  return GaugePotential(1, std::move(comps));
}

Frame darboux_frame(const DarbouxData& data) {
  if (data.pairs.empty()) throw ParameterError("darboux_frame: no Darboux pairs given");
  const DarbouxData d = data;
  const int blocks = static_cast<int>(d.pairs.size());
  const double phase = static_cast<double>(blocks);  // r + 1
  const double norm = 1.0 / std::sqrt(phase);
  return Frame(d.big_n(), 1, MatrixField::analytic(d.dim, pairs_order(d), [d, phase, norm](const Point& x, int order) {
    std::vector<Jet<Complex>> entries;
    for (std::size_t k = 0; k < d.pairs.size(); ++k) {
      const Jet<double> pi = d.pairs[k].pi.jet(x, order);
      if (!(std::abs(pi.value) <= 1.0)) {
        throw DomainError("darboux_frame: |pi_" + std::to_string(k) + "| = " + std::to_string(std::abs(pi.value)) +
                          " > 1 at " + describe(x));
      }
      Jet<double> rho;
      try {
        rho = 0.5 * arccos(pi);
      } catch (const DomainError&) {
        throw DomainError("darboux_frame: pi_" + std::to_string(k) + " reaches +-1 at " + describe(x) +
                          "; the frame is not differentiable there");
      }
      const Jet<double> alpha = phase * d.pairs[k].phi.jet(x, order);
      entries.push_back(norm * (exp_i(alpha) * to_complex(cos(rho))));
      entries.push_back(norm * (exp_i(-alpha) * to_complex(sin(rho))));
    }
    return assemble(d.big_n(), 1, entries);
  }, d.pairs.front().pi.step()));
}

DarbouxDiagnostics check_darboux(const DarbouxData& data, const std::vector<Point>& samples) {
  DarbouxDiagnostics out;
  const double edge = 1.0 - default_tolerances().near_singular;
  for (const Point& x : samples) {
    bool near = false;
    RMatrix grads(static_cast<Eigen::Index>(2 * data.pairs.size()), data.dim);
    for (std::size_t k = 0; k < data.pairs.size(); ++k) {
      const double pi = data.pairs[k].pi(x);
      if (std::abs(pi) > 1.0) {
        throw DomainError("check_darboux: |pi_" + std::to_string(k) + "| = " + std::to_string(std::abs(pi)) +
                          " > 1 at " + describe(x));
      }
      out.max_abs_pi = std::max(out.max_abs_pi, std::abs(pi));
      near = near || std::abs(pi) > edge;
      for (int mu = 0; mu < data.dim; ++mu) {
        grads(static_cast<Eigen::Index>(2 * k), mu) = data.pairs[k].pi.partial(mu, x);
        grads(static_cast<Eigen::Index>(2 * k + 1), mu) = data.pairs[k].phi.partial(mu, x);
      }
    }
    if (near) out.near_singular_points.push_back(x);
    if (grads.rows() > 0) {
      Eigen::JacobiSVD<RMatrix> svd(grads);
      const auto& s = svd.singularValues();
      const bool full = grads.rows() <= grads.cols() && s(s.size() - 1) > 1e-8 * std::max(1.0, s(0));
      if (!full && out.gradients_independent) {
        log_warning("check_darboux: Darboux gradients are dependent at " + describe(x));
      }
      out.gradients_independent = out.gradients_independent && full;
    }
  }
  return out;
}

int verify_rank(const DarbouxData& data, const std::vector<Point>& samples, double tol) {
  if (data.pairs.empty()) throw ParameterError("verify_rank: no Darboux pairs given");
  const int expected = data.r();
  if (2 * expected >= data.dim) {
    throw RankError("verify_rank: " + std::to_string(data.pairs.size()) + " pairs need r < d/2 (d = " +
                    std::to_string(data.dim) + ")");
  }
  const FormRank measured = form_rank(scalar_form(darboux_potential(data)), samples, tol);
  if (measured.rank != expected) {
    throw RankError("verify_rank: measured rank " + std::to_string(measured.rank) + ", expected " +
                    std::to_string(expected) + " from " + std::to_string(data.pairs.size()) +
                    " pairs; the data may be degenerate at the samples");
  }
  return measured.rank;
}

DarbouxReport darboux_report(const DarbouxData& data, const std::vector<Point>& samples) {
  DarbouxReport out;
  const DarbouxDiagnostics diag = check_darboux(data, samples);
  out.near_singular_points = diag.near_singular_points;
  out.big_n = data.big_n();
  out.measured_rank = form_rank(scalar_form(darboux_potential(data)), samples).rank;
  const Frame v = darboux_frame(data);
  const GaugePotential lhs = extract_potential(v);
  const GaugePotential rhs = darboux_potential(data);
  std::vector<double> residual(samples.size(), 0.0);
  std::vector<double> norm(samples.size(), 0.0);
  parallel_for(samples.size(), [&](std::size_t i) {
    const Point& x = samples[i];
    norm[i] = unitarity_defect(v(x));
    for (int mu = 0; mu < data.dim; ++mu) residual[i] = std::max(residual[i], max_abs(lhs.at(mu, x) - rhs.at(mu, x)));
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.max_residual = std::max(out.max_residual, residual[i]);
    out.max_norm_defect = std::max(out.max_norm_defect, norm[i]);
  }
  return out;
}

DarbouxData darboux_from_expressions(int dim, const std::vector<std::pair<std::string, std::string>>& pairs) {
  DarbouxData data;
  data.dim = dim;
  for (const auto& [pi, phi] : pairs) {
    data.pairs.push_back({Expression::parse(pi).field(dim), Expression::parse(phi).field(dim)});
  }
  return data;
}

}  // namespace bladegauge
