#include "belle/realization.hpp"

#include <algorithm>
#include <thread>

namespace belle {

void RealizationSpec::validate() const {
  if (groups.empty()) throw std::invalid_argument("a realization needs at least one group");
  Rational total{0};
  RationalSet covered;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    const auto& g = groups[c];
    if (g.pieces.empty()) throw std::invalid_argument("group " + std::to_string(c) + " has no pieces");
    if (covered.intersects(g.home)) throw std::invalid_argument("home set " + std::to_string(c) + " overlaps another");
    covered = covered.unite(g.home);
    total += g.home.measure();
    PiecewiseConstant sum = PiecewiseConstant::constant(Rational(0));
    for (const auto& p : g.pieces) sum = sum + p.density;
    const PiecewiseConstant slice = g.home.slice_profile();
    const PiecewiseConstant diff = sum + slice.scaled(Rational(-1));
    for (const auto& piece : diff.pieces())
      if (piece.value != 0)
        throw DensityMismatch(piece.omega, slice.value_at(piece.omega.lo), sum.value_at(piece.omega.lo));
  }
  if (total != 1) throw std::invalid_argument("home sets cover measure " + to_string(total) + ", not 1");
}

StepMap<Point> assemble_realization(const RealizationSpec& spec) {
  spec.validate();
  std::vector<StepMap<Point>::Cell> cells;
  for (const auto& g : spec.groups) {
    std::vector<PiecewiseConstant> densities;
    for (const auto& p : g.pieces) densities.push_back(p.density);
    auto parts = density_split(g.home, densities);
    for (std::size_t q = 0; q < parts.size(); ++q) cells.push_back({std::move(parts[q]), g.pieces[q].value});
  }
  return StepMap<Point>::from_cells(std::move(cells));
}

IdentityReport verify_probability_identity(const StepMap<Point>& f, const RealizationSpec& spec,
                                           const std::vector<ProbabilityEvent>& events, unsigned jobs) {
  for (const auto& e : events)
    if (!e.strip.is_vertical_strip()) throw std::invalid_argument("event '" + e.label + "' is not a vertical strip");
  IdentityReport report;
  report.checks.resize(events.size() * spec.groups.size());
  auto run = [&](std::size_t e) {
    const auto& ev = events[e];
    const auto omegas = ev.strip.omega_support();
    for (std::size_t c = 0; c < spec.groups.size(); ++c) {
      const auto& g = spec.groups[c];
      EventCheck check{e, c, Rational(0), Rational(0), false};
      const RationalSet window = ev.strip.intersect(g.home);
      for (const auto& cell : f.cells())
        if (ev.predicate(cell.value)) check.measured += cell.region.intersect(window).measure();
      for (const auto& p : g.pieces)
        if (ev.predicate(p.value)) check.predicted += p.density.integral_over(omegas);
      check.ok = check.measured == check.predicted;
      report.checks[e * spec.groups.size() + c] = std::move(check);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(events.size())));
  if (workers <= 1) {
    for (std::size_t e = 0; e < events.size(); ++e) run(e);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t e = w; e < events.size(); e += workers) run(e);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& c : report.checks) report.passed = report.passed && c.ok;
  return report;
}

}  // namespace belle
