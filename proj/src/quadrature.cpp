#include "nsclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <queue>
#include <string>

#include "nsclab/errors.hpp"

namespace nsclab::quad {

namespace {

GaussLegendre16 make_rule() {
  GaussLegendre16 rule{};
  constexpr int n = kNodes;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[i] = x;
    rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

struct Node {
  Panel panel;
  Eigen::VectorXd whole;   // GL16 on the panel
  Eigen::VectorXd left;    // GL16 on the left half
  Eigen::VectorXd right;   // GL16 on the right half
  Eigen::VectorXd error;
  Eigen::VectorXd noise;   // roundoff floor, proportional to the integral of |f|
  double priority = 0.0;
};

constexpr double kNoiseFactor = 50.0 * std::numeric_limits<double>::epsilon();

struct ByPriority {
  bool operator()(const Node& x, const Node& y) const { return x.priority < y.priority; }
};

class Engine {
 public:
  Engine(const VectorIntegrand& f, int m) : f_(f), m_(m), buf_(m) {}

  Eigen::VectorXd rule(double a, double b, Eigen::VectorXd* abs_acc = nullptr) {
    const auto& gl = gauss_legendre16();
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < kNodes; ++i) {
      buf_.setZero();
      f_(mid + half * gl.x[i], buf_);
      acc += gl.w[i] * buf_;
      if (abs_acc) *abs_acc += (gl.w[i] * half) * buf_.cwiseAbs();
    }
    evaluations_ += kNodes;
    return acc * half;
  }

  Node refine(const Panel& p, Eigen::VectorXd whole) {
    const double mid = 0.5 * (p.a + p.b);
    Eigen::VectorXd absint = Eigen::VectorXd::Zero(m_);
    Eigen::VectorXd l = rule(p.a, mid, &absint);
    Eigen::VectorXd r = rule(mid, p.b, &absint);
    Node n{p, std::move(whole), std::move(l), std::move(r), {}, kNoiseFactor * absint, 0.0};
    n.error = (n.whole - n.left - n.right).cwiseAbs();
    return n;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const VectorIntegrand& f_;
  int m_;
  Eigen::VectorXd buf_;
  std::size_t evaluations_ = 0;
};

}  // namespace

const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule = make_rule();
  return rule;
}

Result integrate(const VectorIntegrand& f, int components, std::span<const double> breakpoints,
                 const Options& opts) {
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate: need at least two breakpoints");
  Engine engine(f, components);

  std::vector<Panel> initial;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (!(b > a)) {
      if (b == a) continue;
      throw std::invalid_argument("integrate: breakpoints must be nondecreasing");
    }
    const auto pieces = static_cast<std::size_t>(
        std::isfinite(opts.max_width) ? std::max(1.0, std::ceil((b - a) / opts.max_width)) : 1.0);
    if (pieces > opts.max_panels) {
      throw QuadratureFailure("integrate: oscillation cap needs " + std::to_string(pieces) +
                              " panels, budget is " + std::to_string(opts.max_panels));
    }
    for (std::size_t k = 0; k < pieces; ++k) {
      initial.push_back({a + (b - a) * k / pieces, a + (b - a) * (k + 1) / pieces});
    }
  }

  Result res;
  res.value = Eigen::VectorXd::Zero(components);
  res.error = Eigen::VectorXd::Zero(components);
  if (initial.empty()) return res;

  std::vector<Node> nodes;
  nodes.reserve(initial.size());
  for (const auto& p : initial) nodes.push_back(engine.refine(p, engine.rule(p.a, p.b)));

  auto totals = [&](const std::vector<Node>& all, Eigen::VectorXd& value, Eigen::VectorXd& error,
                    Eigen::VectorXd& noise) {
    value.setZero();
    error.setZero();
    noise.setZero();
    for (const auto& n : all) {
      value += n.left + n.right;
      error += n.error;
      noise += n.noise;
    }
  };

  // Scale used to rank panels: the component's share of its own tolerance.
  auto priority = [&](const Node& n, const Eigen::VectorXd& value) {
    double p = 0.0;
    for (int c = 0; c < components; ++c) {
      const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(value(c)));
      const double e = n.error(c) - n.noise(c);
      if (e <= 0.0) continue;
      p = std::max(p, tol > 0.0 ? e / tol : std::numeric_limits<double>::max());
    }
    return p;
  };

  // Errors at the roundoff floor of the summed panels cannot be reduced further.
  auto converged = [&](const Eigen::VectorXd& value, const Eigen::VectorXd& error,
                       const Eigen::VectorXd& noise) {
    for (int c = 0; c < components; ++c) {
      if (error(c) > std::max(opts.abs_tol, opts.rel_tol * std::abs(value(c))) + noise(c)) return false;
    }
    return true;
  };

  Eigen::VectorXd value(components), error(components), noise(components);
  totals(nodes, value, error, noise);

  std::priority_queue<Node, std::vector<Node>, ByPriority> heap;
  for (auto& n : nodes) {
    n.priority = priority(n, value);
    heap.push(std::move(n));
  }
  nodes.clear();

  std::size_t count = heap.size();
  std::size_t since_resum = 0;
  while (!converged(value, error, noise)) {
    if (count >= opts.max_panels) {
      throw QuadratureFailure("integrate: panel budget " + std::to_string(opts.max_panels) +
                              " exhausted, error " + std::to_string(error.maxCoeff()));
    }
    Node worst = heap.top();
    heap.pop();
    if (worst.priority == 0.0) break;
    const double mid = 0.5 * (worst.panel.a + worst.panel.b);
    if (!(mid > worst.panel.a && mid < worst.panel.b)) {
      throw QuadratureFailure("integrate: panel width reached machine resolution");
    }
    Node l = engine.refine({worst.panel.a, mid}, worst.left);
    Node r = engine.refine({mid, worst.panel.b}, worst.right);
    value += (l.left + l.right + r.left + r.right) - (worst.left + worst.right);
    error += l.error + r.error - worst.error;
    noise += l.noise + r.noise - worst.noise;
    l.priority = priority(l, value);
    r.priority = priority(r, value);
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++count;

    // Periodically rebuild sums and priorities to avoid drift and stale keys.
    if (++since_resum >= std::max<std::size_t>(256, heap.size() / 4)) {
      since_resum = 0;
      std::vector<Node> all;
      all.reserve(heap.size());
      while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
      }
      totals(all, value, error, noise);
      for (auto& n : all) {
        n.priority = priority(n, value);
        heap.push(std::move(n));
      }
    }
  }

  std::vector<Node> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Node& x, const Node& y) { return x.panel.a < y.panel.a; });
  Eigen::VectorXd final_noise(components);
  totals(all, res.value, res.error, final_noise);
  res.panels.reserve(2 * all.size());
  for (const auto& n : all) {
    const double mid = 0.5 * (n.panel.a + n.panel.b);
    res.panels.push_back({n.panel.a, mid});
    res.panels.push_back({mid, n.panel.b});
  }
  res.evaluations = engine.evaluations();
  return res;
}

std::pair<double, double> integrate(const std::function<double(double)>& f,
                                    std::span<const double> breakpoints, const Options& opts) {
  const VectorIntegrand g = [&f](double x, Eigen::Ref<Eigen::VectorXd> out) { out(0) = f(x); };
  const Result r = integrate(g, 1, breakpoints, opts);
  return {r.value(0), r.error(0)};
}

Eigen::VectorXd integrate_on(std::span<const Panel> panels, const VectorIntegrand& f,
                             int components) {
  const auto& gl = gauss_legendre16();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(components);
  Eigen::VectorXd buf(components);
  for (const auto& p : panels) {
    const double half = 0.5 * (p.b - p.a), mid = 0.5 * (p.a + p.b);
    for (int i = 0; i < kNodes; ++i) {
      buf.setZero();
      f(mid + half * gl.x[i], buf);
      acc += (gl.w[i] * half) * buf;
    }
  }
  return acc;
}

}  // namespace nsclab::quad
