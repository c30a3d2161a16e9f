#include "lilab/hypothesis_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lilab/errors.hpp"
#include "lilab/scale.hpp"
#include "lilab/special.hpp"

namespace lilab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_scales(const std::vector<double>& scales) {
  if (scales.size() < 2) {
    throw DomainError("checks need at least two scales");
  }
  double prev = min_scale();
  for (double u : scales) {
    if (!(u > prev)) {
      throw DomainError("scales must be strictly increasing and exceed e");
    }
    prev = u;
  }
}

// Odometer walk over the box grid.
template <typename F>
void for_each_grid_point(const Box& box, int points_per_axis, F&& visit) {
  const int d = static_cast<int>(box.lo.size());
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vec z(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      const double w = points_per_axis == 1
                           ? 0.0
                           : static_cast<double>(idx[static_cast<std::size_t>(
                                 i)]) /
                                 (points_per_axis - 1);
      z[i] = box.lo[i] + w * (box.hi[i] - box.lo[i]);
    }
    visit(z);
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < points_per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
    if (i == d) break;
  }
}

}  // namespace

HReport check_hypothesis_H(const CoefficientSystem& sys, const Box& box,
                           const std::vector<double>& scales,
                           int points_per_axis, double tol) {
  if (!sys.has_limit()) {
    throw DomainError("hypothesis check needs a declared limit system");
  }
  if (box.lo.size() != sys.dim() || box.hi.size() != sys.dim()) {
    throw DomainError("box dimension mismatch");
  }
  for (Eigen::Index i = 0; i < box.lo.size(); ++i) {
    if (!(box.lo[i] <= box.hi[i])) {
      throw DomainError("box is empty along axis " + std::to_string(i));
    }
  }
  if (points_per_axis < 1) {
    throw DomainError("grid needs at least one point per axis");
  }
  if (std::pow(static_cast<double>(points_per_axis), sys.dim()) > 2e6) {
    throw DomainError("box grid too large");
  }
  if (!(tol > 0.0)) {
    throw DomainError("tolerance must be positive");
  }
  check_scales(scales);

  const int d = sys.dim();
  const int k = sys.noise_dim();
  const LimitSystem& limit = sys.limit();

  HReport report;
  report.tol = tol;
  report.entries.reserve(scales.size() * static_cast<std::size_t>(k + 1));

  for (double u : scales) {
    RescaledSystem rs = rescale(sys, u);
    for (int f = 0; f <= k; ++f) {
      const VectorField& scaled =
          f == 0 ? rs.fields().drift() : rs.fields().diffusion(f - 1);
      const VectorField& lim = f == 0 ? limit.drift() : limit.diffusion(f - 1);

      HEntry e;
      e.u = u;
      e.field = f;
      e.witness = box.lo;
      e.witness_jacobian = box.lo;
      Vec va(d), vb(d);
      Mat ja(d, d), jb(d, d);
      for_each_grid_point(box, points_per_axis, [&](const Vec& z) {
        scaled.eval(z, va);
        lim.eval(z, vb);
        const double dev = (va - vb).norm();
        if (dev > e.sup_dev) {
          e.sup_dev = dev;
          e.witness = z;
        }
        scaled.jacobian(z, ja);
        lim.jacobian(z, jb);
        const double jdev = (ja - jb).cwiseAbs().maxCoeff();
        if (jdev > e.sup_dev_jacobian) {
          e.sup_dev_jacobian = jdev;
          e.witness_jacobian = z;
        }
      });
      report.entries.push_back(std::move(e));
    }
  }

  report.pass = true;
  std::ostringstream detail;
  for (int f = 0; f <= k; ++f) {
    double prev_dev = std::numeric_limits<double>::infinity();
    double prev_jdev = std::numeric_limits<double>::infinity();
    double last_dev = 0.0, last_jdev = 0.0;
    for (const auto& e : report.entries) {
      if (e.field != f) continue;
      if (e.sup_dev > prev_dev + 1e-12 ||
          e.sup_dev_jacobian > prev_jdev + 1e-12) {
        report.pass = false;
        detail << "field " << f << " deviation grew at u = " << e.u << "; ";
      }
      prev_dev = e.sup_dev;
      prev_jdev = e.sup_dev_jacobian;
      last_dev = e.sup_dev;
      last_jdev = e.sup_dev_jacobian;
    }
    if (!(last_dev < tol) || !(last_jdev < tol)) {
      report.pass = false;
      detail << "field " << f << " final deviation " << last_dev << " / "
             << last_jdev << " not below " << tol << "; ";
    }
  }
  report.detail = detail.str();
  return report;
}

CReport check_condition_C(const InitialConditionSpec& init, int dim,
                          const std::vector<double>& scales, double delta,
                          std::int64_t mc_samples, std::uint64_t mc_seed) {
  if (dim < 1) {
    throw DomainError("state dimension must be positive");
  }
  if (!(delta > 0.0)) {
    throw DomainError("delta must be positive");
  }
  if (mc_samples < 1) {
    throw DomainError("Monte Carlo sample count must be positive");
  }
  check_scales(scales);

  CReport report;
  report.delta = delta;
  report.entries.reserve(scales.size());

  bool used_mc = false;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const double u = scales[s];
    const double level = delta * phi(u);
    const double big_l = loglog(u);

    CEntry e;
    e.u = u;
    if (auto logp = init.log_tail(level, dim)) {
      e.method = "analytic";
      e.estimate = (*logp == kNegInf) ? kNegInf : *logp / big_l;
    } else {
      used_mc = true;
      std::mt19937_64 gen(mix_seed(mc_seed, s));
      std::int64_t hits = 0;
      for (std::int64_t i = 0; i < mc_samples; ++i) {
        if (init.sample_norm(dim, gen) > level) ++hits;
      }
      if (hits == 0) {
        e.method = "mc_underflow";
        e.estimate = -std::log(static_cast<double>(mc_samples)) / big_l;
      } else {
        e.method = "mc";
        e.estimate = std::log(static_cast<double>(hits) /
                              static_cast<double>(mc_samples)) /
                     big_l;
      }
    }
    report.entries.push_back(std::move(e));
  }

  // Diagnostic verdict: the normalized tails must fall along the ladder and
  // end clearly negative.  Monte Carlo entries get statistical slack.
  const double slack = used_mc ? 0.5 : 1e-12;
  report.pass = true;
  std::ostringstream detail;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& e : report.entries) {
    if (e.estimate > prev + slack) {
      report.pass = false;
      detail << "estimate rose at u = " << e.u << "; ";
    }
    prev = e.estimate;
  }
  if (!(report.entries.back().estimate <= -1.0)) {
    report.pass = false;
    detail << "final estimate " << report.entries.back().estimate
           << " not below -1; ";
  }
  report.detail = detail.str();
  return report;
}

}  // namespace lilab
