#include "belle/endo_approx.hpp"

#include <algorithm>
#include <sstream>

namespace belle {

namespace {

std::optional<Point> checked_preimage(const WindowInjection& h, Point y) {
  auto p = h.preimage(y);
  if (p && h.apply(*p) != y) return std::nullopt;
  return p;
}

class SigmaRule final : public InjectionRule {
 public:
  SigmaRule(WindowInjection tau, std::uint64_t n, std::uint64_t i) : tau_(std::move(tau)), n_(n), i_(i) {}

  Domain domain() const override { return tau_.domain(); }

  Point apply(Point x) const override {
    const OrbitTrace t = trace_orbit(tau_, x);
    if (t.kind != TraceKind::semi_orbit) return tau_.apply(x);
    const std::uint64_t j = t.position;
    if (j >= i_ + 1 && (j - i_ - 1) % n_ == 0) {
      const std::uint64_t k = (j - i_ - 1) / n_;
      return belle::advance(tau_, t.root, k == 0 ? 0 : (k - 1) * n_ + i_ + 2);
    }
    return tau_.apply(x);
  }

  std::optional<Point> preimage(Point y) const override {
    const OrbitTrace t = trace_orbit(tau_, y);
    if (t.kind != TraceKind::semi_orbit) return tau_.preimage(y);
    const std::uint64_t j = t.position;
    if (j == 0) return belle::advance(tau_, t.root, i_ + 1);
    if (j >= i_ + 2 && (j - i_ - 2) % n_ == 0) return belle::advance(tau_, t.root, j + n_ - 1);
    return tau_.preimage(y);
  }

  nlohmann::json descriptor() const override {
    return {{"kind", "approx"}, {"tau", tau_.descriptor()}, {"n", n_}, {"i", i_}};
  }

 private:
  WindowInjection tau_;
  std::uint64_t n_;
  std::uint64_t i_;
};

}  // namespace

OrbitDecomposition orbit_decompose(const WindowInjection& tau, Point N) {
  if (auto c = find_collision(tau, N)) throw *c;
  OrbitDecomposition out;
  out.window = N;
  out.points.resize(static_cast<std::size_t>(N));
  std::vector<bool> done(static_cast<std::size_t>(N), false);
  std::vector<Point> path;
  for (Point x = 0; x < N; ++x) {
    if (done[x]) continue;
    path.assign(1, x);
    while (true) {
      const Point y = path.back();
      auto p = checked_preimage(tau, y);
      if (!p) {
        // y is a root; path runs from x back to it.
        const std::size_t len = path.size();
        for (std::size_t t = 0; t < len; ++t) out.points[path[t]] = {OrbitKind::semi_orbit, y, len - 1 - t};
        break;
      }
      if (*p >= N) {
        for (Point z : path) out.points[z] = {OrbitKind::undetermined, 0, 0};
        break;
      }
      if (*p == x) {
        const auto min_it = std::min_element(path.begin(), path.end());
        const std::size_t im = static_cast<std::size_t>(min_it - path.begin());
        const std::size_t len = path.size();
        for (std::size_t t = 0; t < len; ++t)
          out.points[path[t]] = {OrbitKind::orbit, *min_it, (im + len - t) % len};
        break;
      }
      if (done[*p]) {
        const PointClass base = out.points[*p];
        const std::size_t len = path.size();
        for (std::size_t t = 0; t < len; ++t) {
          PointClass c = base;
          if (base.kind == OrbitKind::semi_orbit) c.position = base.position + (len - t);
          else c = {OrbitKind::undetermined, 0, 0};
          out.points[path[t]] = c;
        }
        break;
      }
      path.push_back(*p);
    }
    for (Point z : path) done[z] = true;
  }
  for (const auto& c : out.points) {
    if (c.kind == OrbitKind::orbit && c.position == 0) ++out.orbits;
    else if (c.kind == OrbitKind::semi_orbit && c.position == 0) ++out.semi_orbits;
    else if (c.kind == OrbitKind::undetermined) ++out.undetermined;
  }
  return out;
}

std::vector<WindowInjection> approximate_by_automorphisms(const WindowInjection& tau, std::size_t n) {
  if (n == 0) throw std::invalid_argument("need at least one bijection");
  std::vector<WindowInjection> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::make_shared<SigmaRule>(tau, n, i));
  return out;
}

DefectProfile defect_profile(const WindowInjection& tau, const std::vector<WindowInjection>& sigmas, Point N) {
  DefectProfile p;
  p.counts.assign(static_cast<std::size_t>(N), 0);
  for (Point x = 0; x < N; ++x) {
    const Point target = tau.apply(x);
    std::uint32_t c = 0;
    for (const auto& s : sigmas)
      if (s.apply(x) != target) ++c;
    p.counts[x] = c;
    p.max_defect = std::max(p.max_defect, c);
    ++p.histogram[c];
    if (trace_orbit(tau, x).kind == TraceKind::unknown) p.undetermined.push_back(x);
  }
  return p;
}

RandomEndo strip_lift(const std::vector<WindowInjection>& gs) {
  if (gs.empty()) throw std::invalid_argument("strip_lift needs at least one endomorphism");
  return RandomEndo(uniform_horizontal_strips(gs));
}

std::string cycle_notation(const WindowInjection& g, Point limit, std::size_t max_cycle) {
  std::ostringstream out;
  std::vector<bool> seen(static_cast<std::size_t>(limit), false);
  for (Point x = 0; x < limit; ++x) {
    if (seen[x]) continue;
    seen[x] = true;
    Point y = g.apply(x);
    if (y == x) continue;
    out << '(' << x;
    std::size_t len = 1;
    while (y != x && len < max_cycle) {
      if (y < limit) seen[y] = true;
      out << ' ' << y;
      y = g.apply(y);
      ++len;
    }
    if (y != x) out << " ...";
    out << ')';
  }
  return out.str();
}

}  // namespace belle
