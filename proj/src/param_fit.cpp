#include "optopix/param_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace optopix {

const FitParameter& FitResult::parameter(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no fit parameter named '" + name + "'");
}

double r_squared(const std::vector<double>& observed, const std::vector<double>& predicted) {
  if (observed.size() != predicted.size() || observed.empty()) {
    throw validation_error("domain", "r_squared needs equal-length, non-empty series");
  }
  // Welford for SS_tot.
  double mean = 0.0, ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double y = observed[i];
    const double delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    ss_tot += delta * (y - mean);
    const double e = y - predicted[i];
    ss_res += e * e;
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

namespace {

struct LmProblem {
  Eigen::Index n_params;
  // residual = observed - model
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
  // Jacobian of the model
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

struct LmOutcome {
  Eigen::VectorXd x;
  Eigen::MatrixXd jtj;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
};

LmOutcome levenberg_marquardt(const LmProblem& prob, Eigen::VectorXd x, int max_iterations,
                              double step_tolerance) {
  LmOutcome out;
  Eigen::VectorXd r = prob.residual(x);
  double sse = r.squaredNorm();
  double lambda = 1e-3;
  Eigen::MatrixXd j = prob.jacobian(x);
  for (int it = 1; it <= max_iterations; ++it) {
    out.iterations = it;
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    if (g.norm() == 0.0) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd a = jtj;
    for (Eigen::Index k = 0; k < a.rows(); ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
    const Eigen::VectorXd step = a.ldlt().solve(g);
    if (!step.allFinite()) break;
    const Eigen::VectorXd trial = x + step;
    const Eigen::VectorXd r_trial = prob.residual(trial);
    const double sse_trial = r_trial.allFinite() ? r_trial.squaredNorm()
                                                 : std::numeric_limits<double>::infinity();
    bool small = true;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (std::abs(step(k)) > step_tolerance * std::max(std::abs(x(k)), 1.0)) small = false;
    }
    if (sse_trial <= sse) {
      x = trial;
      r = r_trial;
      sse = sse_trial;
      j = prob.jacobian(x);
      lambda = std::max(lambda / 10.0, 1e-12);
    } else {
      lambda *= 10.0;
    }
    if (small) {
      out.converged = true;
      break;
    }
    if (lambda > 1e20) break;
  }
  out.x = x;
  out.jtj = j.transpose() * j;
  out.sse = sse;
  return out;
}

// Standard errors from s^2 (J^T J)^{-1}.
Eigen::VectorXd standard_errors(const LmOutcome& o, std::size_t n_obs) {
  const auto p = o.x.size();
  Eigen::VectorXd se = Eigen::VectorXd::Zero(p);
  if (static_cast<Eigen::Index>(n_obs) <= p) return se;
  const double s2 = o.sse / static_cast<double>(static_cast<Eigen::Index>(n_obs) - p);
  const Eigen::MatrixXd cov = o.jtj.inverse() * s2;
  for (Eigen::Index k = 0; k < p; ++k) se(k) = std::sqrt(std::max(cov(k, k), 0.0));
  return se;
}

}  // namespace

FitResult fit_rc(const TraceSeries& trace, double absorbed_power, const RcFitOptions& options) {
  if (!(absorbed_power > 0.0)) throw validation_error("domain", "absorbed_power must be > 0");
  if (!(options.window > 0.0)) throw validation_error("domain", "fit window must be > 0");
  if (trace.empty() || trace.time.back() + 1e-9 < options.onset + options.window ||
      trace.time.front() > options.onset + 1e-9) {
    std::ostringstream os;
    os << "trace does not cover the fit window [" << options.onset << ", "
       << options.onset + options.window << "] s";
    throw validation_error("insufficient-data", os.str());
  }

  std::vector<double> t, y;
  std::optional<double> baseline = options.baseline;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double dt = trace.time[i] - options.onset;
    if (dt < -1e-12) continue;
    if (dt > options.window + 1e-9) break;
    if (!baseline) baseline = trace.absorber_temperature[i];
    t.push_back(std::max(dt, 0.0));
    y.push_back(trace.absorber_temperature[i]);
  }
  if (t.size() < 3) throw validation_error("insufficient-data", "fewer than 3 samples in window");
  for (double& v : y) v -= *baseline;

  const auto n = static_cast<Eigen::Index>(t.size());
  const double p = absorbed_power;
  LmProblem prob;
  prob.n_params = 2;
  prob.residual = [&](const Eigen::VectorXd& x) {
    const double tau = std::exp(x(1));
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = y[i] - p * x(0) * -std::expm1(-t[i] / tau);
    return r;
  };
  prob.jacobian = [&](const Eigen::VectorXd& x) {
    const double tau = std::exp(x(1));
    Eigen::MatrixXd j(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = t[i] / tau;
      const double e = std::exp(-s);
      j(i, 0) = p * -std::expm1(-s);
      j(i, 1) = -p * x(0) * s * e;
    }
    return j;
  };

  Eigen::VectorXd x0(2);
  const double r0 = y.back() / p;
  x0 << (r0 > 0.0 ? r0 : 1.0), std::log(options.window / 3.0);
  const LmOutcome o =
      levenberg_marquardt(prob, x0, options.max_iterations, options.step_tolerance);
  const Eigen::VectorXd se = standard_errors(o, t.size());

  const double r = o.x(0);
  const double tau = std::exp(o.x(1));
  const double c = tau / r;
  FitResult res;
  res.parameters.push_back({"R", r, se(0), "K/W"});
  res.parameters.push_back({"tau", tau, tau * se(1), "s"});
  // First-order propagation, ignoring the R-tau correlation.
  const double c_err = c * std::hypot(se(0) / r, se(1));
  res.parameters.push_back({"C", c, c_err, "J/K"});
  std::vector<double> pred(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) pred[i] = p * r * -std::expm1(-t[i] / tau);
  res.r_squared = r_squared(y, pred);
  res.residual_rms = std::sqrt(o.sse / static_cast<double>(t.size()));
  res.iterations = o.iterations;
  res.converged = o.converged;
  res.window = options.window;
  if (!o.converged || !std::isfinite(r) || !std::isfinite(tau)) {
    std::ostringstream os;
    os << "R/tau fit did not converge after " << o.iterations << " iterations (R = " << r
       << " K/W, tau = " << tau << " s)";
    throw FitError(os.str(), res);
  }
  return res;
}

FitResult fit_bridge_law(std::vector<std::pair<double, double>> pairs) {
  if (pairs.size() < 3) {
    throw validation_error("insufficient-data", "bridge law fit needs at least 3 points");
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].first > 0.0)) throw validation_error("domain", "widths must be > 0");
    if (i > 0 && pairs[i].first == pairs[i - 1].first) {
      throw validation_error("insufficient-data", "bridge widths must be distinct");
    }
  }
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [w, r] : pairs) {
    const double x = 1.0 / w;
    sxy += x * r;
    sxx += x * x;
  }
  const double a = sxy / sxx;
  std::vector<double> obs, pred;
  double sse = 0.0;
  for (const auto& [w, r] : pairs) {
    obs.push_back(r);
    pred.push_back(a / w);
    sse += (r - a / w) * (r - a / w);
  }
  FitResult res;
  const double dof = static_cast<double>(pairs.size() - 1);
  res.parameters.push_back({"a", a, std::sqrt(sse / dof / sxx), "K m/W"});
  res.r_squared = r_squared(obs, pred);
  res.residual_rms = std::sqrt(sse / static_cast<double>(pairs.size()));
  res.iterations = 1;
  res.converged = true;
  return res;
}

FitResult fit_cyclic_ratios(std::vector<std::pair<double, double>> points, RatioModel model) {
  if (points.size() < 3) {
    throw validation_error("insufficient-data", "ratio fit needs at least 3 points");
  }
  std::sort(points.begin(), points.end());
  for (const auto& pt : points) {
    if (!(pt.first > 0.0)) throw validation_error("domain", "gap durations must be > 0");
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  FitResult res;
  std::vector<double> obs, pred;
  if (model == RatioModel::hyperbolic) {
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [tg, v] : points) {
      sxy += v / tg;
      sxx += 1.0 / (tg * tg);
    }
    const double tau = sxy / sxx;
    double sse = 0.0;
    for (const auto& [tg, v] : points) {
      obs.push_back(v);
      pred.push_back(tau / tg);
      sse += (v - tau / tg) * (v - tau / tg);
    }
    res.parameters.push_back(
        {"tau", tau, std::sqrt(sse / static_cast<double>(n - 1) / sxx), "s"});
    res.iterations = 1;
    res.converged = true;
    res.residual_rms = std::sqrt(sse / static_cast<double>(n));
  } else {
    LmProblem prob;
    prob.n_params = 1;
    prob.residual = [&](const Eigen::VectorXd& x) {
      const double tau = std::exp(x(0));
      Eigen::VectorXd r(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        r(i) = points[i].second + std::expm1(-points[i].first / tau);
      }
      return r;
    };
    prob.jacobian = [&](const Eigen::VectorXd& x) {
      const double tau = std::exp(x(0));
      Eigen::MatrixXd j(n, 1);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double s = points[i].first / tau;
        j(i, 0) = -s * std::exp(-s);
      }
      return j;
    };
    // Start from the median gap.
    Eigen::VectorXd x0(1);
    x0 << std::log(points[points.size() / 2].first);
    const LmOutcome o = levenberg_marquardt(prob, x0, 100, 1e-10);
    const double tau = std::exp(o.x(0));
    res.parameters.push_back({"tau", tau, tau * standard_errors(o, points.size())(0), "s"});
    res.iterations = o.iterations;
    res.converged = o.converged;
    res.residual_rms = std::sqrt(o.sse / static_cast<double>(n));
    for (const auto& [tg, v] : points) {
      obs.push_back(v);
      pred.push_back(-std::expm1(-tg / tau));
    }
    if (!o.converged) {
      res.r_squared = r_squared(obs, pred);
      throw FitError("exponential ratio fit did not converge", res);
    }
  }
  res.r_squared = r_squared(obs, pred);
  return res;
}

TraceSeries synthetic_rc_trace(double r, double c, double absorbed_power, double duration,
                               double sample_period, double wall_temperature) {
  if (!(r > 0.0) || !(c > 0.0) || !(sample_period > 0.0) || !(duration >= sample_period)) {
    throw validation_error("domain", "invalid synthetic trace parameters");
  }
  const double tau = r * c;
  const auto n = static_cast<std::size_t>(std::floor(duration / sample_period + 1e-9)) + 1;
  TraceSeries tr;
  tr.sample_period = sample_period;
  tr.time.resize(n);
  tr.absorber_temperature.resize(n);
  tr.air_temperature.assign(n, wall_temperature);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * sample_period;
    tr.time[i] = t;
    tr.absorber_temperature[i] = wall_temperature + absorbed_power * r * -std::expm1(-t / tau);
  }
  return tr;
}

void add_gaussian_noise(TraceSeries& trace, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : trace.absorber_temperature) v += noise(rng);
}

}  // namespace optopix
