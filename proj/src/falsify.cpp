#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "cpr/certify.hpp"
#include "cpr/parallel.hpp"
#include "cpr/rng.hpp"
#include "pair_objective.hpp"

namespace cpr {
namespace {

using detail::PairObjective;

constexpr std::size_t kStallWindow = 15;

struct RunResult {
  double objective;
  double distance;
  Eigen::VectorXd point;
};

struct Workspace {
  Workspace(Eigen::Index nr, Eigen::Index np)
      : r(nr), r_trial(nr), jac(nr, np), jtj(np, np), lhs(np, np), grad(np), step(np), trial(np), llt(np) {}
  Eigen::VectorXd r, r_trial;
  Eigen::MatrixXd jac, jtj, lhs;
  Eigen::VectorXd grad, step, trial;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

RunResult run_levenberg_marquardt(PairObjective& obj, Workspace& ws, Eigen::VectorXd p,
                                  const SearchOptions& opt) {
  p.normalize();
  double f = obj.evaluate(p, ws.r, &ws.jac);
  double mu = -1.0;
  double nu = 2.0;
  int stalls = 0;
  std::array<double, kStallWindow> history;
  history.fill(std::numeric_limits<double>::infinity());
  // Zero-residual solutions converge quadratically, so keep polishing well
  // past the acceptance level; measurement gaps are re-verified downstream.
  const double polish = opt.accept * 1e-16;
  for (std::size_t it = 0; it < opt.max_iterations && f > polish; ++it) {
    // Zero-residual basins shrink f by orders of magnitude within a few steps;
    // a run that cannot halve f over the window sits on a positive floor.
    double& past = history[it % kStallWindow];
    if (f > opt.accept * 1e3 && f > 0.5 * past) break;
    past = f;
    ws.jtj.noalias() = ws.jac.transpose() * ws.jac;
    ws.grad.noalias() = ws.jac.transpose() * ws.r;
    if (mu < 0.0) mu = 1e-3 * ws.jtj.diagonal().maxCoeff();
    if (ws.grad.norm() <= 1e-15 * std::max(1.0, f)) break;
    ws.lhs = ws.jtj;
    ws.lhs.diagonal().array() += mu;
    ws.llt.compute(ws.lhs);
    ws.step = ws.llt.solve(-ws.grad);
    ws.trial = p + ws.step;
    ws.trial.normalize();
    const double f_trial = obj.evaluate(ws.trial, ws.r_trial, nullptr);
    const double predicted = -(ws.step.dot(ws.grad) * 2.0 + ws.step.dot(ws.jtj * ws.step));
    const double rho = predicted > 0.0 ? (f - f_trial) / predicted : -1.0;
    if (f_trial < f) {
      // A run creeping along a positive floor is a local minimum, not a witness.
      const bool small = (f - f_trial) < 1e-3 * f && f > opt.accept;
      stalls = small ? stalls + 1 : 0;
      p.swap(ws.trial);
      f = obj.evaluate(p, ws.r, &ws.jac);
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * std::max(rho, 0.0) - 1.0, 3));
      nu = 2.0;
      if (stalls >= 8) break;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (mu > 1e20) break;
    }
  }
  return RunResult{f, obj.distance(), std::move(p)};
}

ComplexSignal signal_from(const Eigen::VectorXd& u, Eigen::Index m) {
  return ComplexSignal::from_parts(std::span<const double>(u.data(), static_cast<std::size_t>(m)),
                                   std::span<const double>(u.data() + m, static_cast<std::size_t>(m)));
}

}  // namespace

SearchResult falsify_search(const RealFrame& frame, const SearchOptions& options) {
  const auto m = static_cast<Eigen::Index>(frame.m());
  SearchResult result;
  result.stats.budget = options.budget;
  result.stats.seed = options.seed;
  if (options.budget == 0) return result;

  std::vector<double> objective(options.budget, std::numeric_limits<double>::infinity());
  std::vector<std::optional<Eigen::VectorXd>> hits(options.budget);

  const auto hit = first_success(options.budget, [&](std::size_t i) {
    thread_local std::optional<PairObjective> obj;
    thread_local std::optional<Workspace> ws;
    obj.emplace(frame, options);
    if (!ws || ws->jac.rows() != obj->residuals() || ws->jac.cols() != obj->params()) {
      ws.emplace(obj->residuals(), obj->params());
    }
    Rng rng(options.seed, i);
    Eigen::VectorXd p(4 * m);
    for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = rng.normal();
    RunResult run = run_levenberg_marquardt(*obj, *ws, std::move(p), options);
    objective[i] = run.objective;
    if (run.objective <= options.accept && run.distance >= options.delta) {
      hits[i] = std::move(run.point);
      return true;
    }
    return false;
  });

  const std::size_t ran = hit ? *hit + 1 : options.budget;
  result.stats.restarts = ran;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ran; ++i) best = std::min(best, objective[i]);
  result.stats.best_objective = best;
  if (hit) {
    const Eigen::VectorXd& p = *hits[*hit];
    ComplexSignal x = signal_from(p.head(2 * m), m);
    ComplexSignal y = signal_from(p.tail(2 * m), m);
    SymmetricLift target = real_lift(x) - real_lift(y);
    result.witness = make_witness(std::move(x), std::move(y), std::move(target));
  }
  return result;
}

}  // namespace cpr
