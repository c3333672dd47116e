#include "belle/pair_model.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace belle {

NoRepresentativeMatch::NoRepresentativeMatch(std::size_t cell, const std::string& value)
    : std::runtime_error("no representative factors cell " + std::to_string(cell) + " with value " + value),
      cell_(cell) {}

namespace {

std::optional<Point> checked_preimage(const WindowInjection& h, Point y) {
  auto p = h.preimage(y);
  if (p && h.apply(*p) != y) return std::nullopt;
  return p;
}

std::optional<std::size_t> index_of(const std::vector<Point>& sorted, Point y) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), y);
  if (it == sorted.end() || *it != y) return std::nullopt;
  return static_cast<std::size_t>(it - sorted.begin());
}

// g(rep(x)) = h(x); the i-th root of rep goes to the i-th root of h.
class FactorRule final : public InjectionRule {
 public:
  FactorRule(WindowInjection h, WindowInjection rep, Point window)
      : h_(std::move(h)),
        rep_(std::move(rep)),
        window_(window),
        h_roots_(window_roots(h_, window)),
        rep_roots_(window_roots(rep_, window)) {}

  bool balanced() const { return h_roots_.size() == rep_roots_.size(); }
  Domain domain() const override { return h_.domain(); }

  Point apply(Point y) const override {
    if (auto p = checked_preimage(rep_, y)) return h_.apply(*p);
    if (auto i = index_of(rep_roots_, y)) return h_roots_[*i];
    throw std::domain_error("factor undefined at " + std::to_string(y) + ": root outside the window");
  }

  std::optional<Point> preimage(Point z) const override {
    if (auto p = checked_preimage(h_, z)) return rep_.apply(*p);
    if (auto i = index_of(h_roots_, z)) return rep_roots_[*i];
    return std::nullopt;
  }

  nlohmann::json descriptor() const override {
    return {{"kind", "factor"}, {"h", h_.descriptor()}, {"rep", rep_.descriptor()}, {"window", window_}};
  }

 private:
  WindowInjection h_, rep_;
  Point window_;
  std::vector<Point> h_roots_, rep_roots_;
};

LinearData materialize(const LinearData& d, std::size_t m) {
  LinearData out = d;
  for (std::size_t i = out.images.size(); i < m; ++i) out.images.push_back(FqVector::basis(d.q, i + d.tail_shift));
  return out;
}

std::optional<WindowInjection> factor_linear(const LinearData& h, const LinearData& rep) {
  if (h.q != rep.q || h.tail_shift != rep.tail_shift) return std::nullopt;
  const unsigned q = h.q;
  const std::size_t s = h.tail_shift;
  std::size_t m = std::max(h.images.size(), rep.images.size());
  std::size_t support = m + s;
  for (const auto* d : {&h, &rep})
    for (const auto& v : d->images) support = std::max(support, v.coords.size());
  m = std::max(m, support - s);
  const LinearData hm = materialize(h, m), rm = materialize(rep, m);
  const std::size_t U = m + s;
  // Bases of span{e_0..e_{U-1}}: the images followed by completing standard vectors.
  auto complete = [&](const LinearData& d) {
    EchelonBasis b(q);
    for (const auto& v : d.images) b.insert(v);
    for (std::size_t t = 0; t < U && b.rank() < U; ++t) b.insert(FqVector::basis(q, t));
    return b;
  };
  const EchelonBasis from = complete(rm), to = complete(hm);
  if (from.rank() != U || to.rank() != U) return std::nullopt;
  std::vector<FqVector> images;
  for (std::size_t t = 0; t < U; ++t) {
    auto c = from.express(FqVector::basis(q, t));
    FqVector img = FqVector::zero(q);
    for (std::size_t i = 0; i < c->size(); ++i)
      if ((*c)[i] != 0) img = img + scale((*c)[i], to.inserted()[i]);
    images.push_back(img);
  }
  return linear_endo_from_basis_images(q, std::move(images), 0);
}

struct Piece {
  Rational length;
  std::size_t a;
  std::size_t b;
};

// Streams the refinement of two partitions slab by slab.
template <class Fn>
void for_each_slab(const PartitionView& p, const PartitionView& q, Fn&& fn) {
  const std::vector<PartitionView> parts{p, q};
  std::optional<Interval> current;
  std::vector<Piece> pieces;
  for_each_refined_piece(parts, [&](const Interval& x, const Interval& y, std::span<const std::size_t> idx) {
    if (current && !(*current == x)) {
      fn(*current, pieces);
      pieces.clear();
    }
    current = x;
    pieces.push_back({y.length(), idx[0], idx[1]});
  });
  if (current) fn(*current, pieces);
}

}  // namespace

std::optional<WindowInjection> factor_through(const WindowInjection& h, const WindowInjection& rep, Point N) {
  if (!(h.domain() == rep.domain())) return std::nullopt;
  if (h == rep) return identity_endo(h.domain());
  std::optional<WindowInjection> g;
  if (h.domain().kind == DomainKind::fq_vectors) {
    auto lh = as_linear(h), lr = as_linear(rep);
    if (!lh || !lr) return std::nullopt;
    g = factor_linear(*lh, *lr);
    if (!g) return std::nullopt;
  } else if (rep.is_identity()) {
    g = h;
  } else {
    if (!is_injective_on_window(h, N) || !is_injective_on_window(rep, N)) return std::nullopt;
    auto rule = std::make_shared<FactorRule>(h, rep, N);
    if (!rule->balanced()) return std::nullopt;
    g = WindowInjection(std::move(rule));
  }
  if (!is_automorphism_on_window(*g, N)) return std::nullopt;
  for (Point x = 0; x < N; ++x)
    if (g->apply(rep.apply(x)) != h.apply(x)) return std::nullopt;
  return g;
}

OrbitReduction orbit_reduce(const RandomEndo& h_hat, const std::vector<WindowInjection>& reps, Point N) {
  std::vector<StepMap<WindowInjection>::Cell> g_cells;
  std::vector<StepMap<std::size_t>::Cell> a_cells;
  const auto& cells = h_hat.map().cells();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    bool matched = false;
    for (std::size_t k = 0; k < reps.size() && !matched; ++k) {
      if (auto g = factor_through(cells[ci].value, reps[k], N)) {
        g_cells.push_back({cells[ci].region, *g});
        a_cells.push_back({cells[ci].region, k});
        matched = true;
      }
    }
    if (!matched) throw NoRepresentativeMatch(ci, cells[ci].value.key());
  }
  return {RandomEndo(StepMap<WindowInjection>::canonical(std::move(g_cells))),
          StepMap<std::size_t>::canonical(std::move(a_cells))};
}

std::vector<WindowInjection> pure_set_representatives(const RandomEndo& h_hat, Point N) {
  std::set<Point> counts;
  for (const auto& c : h_hat.map().cells()) counts.insert(window_roots(c.value, N).size());
  std::vector<WindowInjection> reps;
  for (Point c : counts) reps.push_back(shift_endo(c));
  return reps;
}

RandomApproximation approximate_random_endo(const RandomEndo& h_hat, const std::vector<WindowInjection>& reps,
                                            const Rational& eps, Point N) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  OrbitReduction red = orbit_reduce(h_hat, reps, N);
  RandomApproximation out;
  out.bound = 0;
  std::vector<StepMap<WindowInjection>::Cell> cells;
  for (const auto& cell : red.assignment.cells()) {
    const WindowInjection& rep = reps[cell.value];
    RepresentativeFamily fam{cell.value, cell.region, 1, 0};
    std::vector<WindowInjection> family;
    if (is_automorphism_on_window(rep, N)) {
      family.push_back(rep);
    } else {
      if (rep.domain().kind != DomainKind::natural)
        throw std::invalid_argument("representative " + rep.key() +
                                    " is not bijective and has no approximating family of linear automorphisms");
      fam.n = static_cast<std::size_t>(ceil(Rational(1) / eps).get_ui());
      family = approximate_by_automorphisms(rep, fam.n);
      fam.max_defect = defect_profile(rep, family, N).max_defect;
    }
    std::vector<Rational> weights(fam.n, Rational(1, static_cast<long>(fam.n)));
    for (auto& w : weights) w.canonicalize();
    auto parts = vertical_split(cell.region, weights);
    for (std::size_t i = 0; i < fam.n; ++i) cells.push_back({std::move(parts[i]), family[i]});
    Rational contribution = measure(cell.region) * Rational(fam.max_defect) / Rational(static_cast<long>(fam.n));
    out.bound += contribution;
    out.families.push_back(std::move(fam));
  }
  out.bound.canonicalize();
  RandomEndo lifted(StepMap<WindowInjection>::canonical(std::move(cells)));
  out.result = compose(red.g, lifted);
  return out;
}

Rational dist_to_image(const RandomVariable& f, const RandomEndo& h_hat) {
  const auto& fc = f.cells();
  const auto& hc = h_hat.map().cells();
  Rational total{0};
  for_each_slab(f.partition(), h_hat.map().partition(), [&](const Interval& x, const std::vector<Piece>& pieces) {
    std::set<Point> candidates;
    for (const auto& p : pieces)
      if (auto a = checked_preimage(hc[p.b].value, fc[p.a].value)) candidates.insert(*a);
    Rational best{1};
    for (Point a : candidates) {
      Rational cost{0};
      for (const auto& p : pieces)
        if (hc[p.b].value.apply(a) != fc[p.a].value) cost += p.length;
      if (cost < best) best = cost;
    }
    total += x.length() * best;
  });
  return total;
}

namespace {

struct SlabWorst {
  Interval omega;
  Rational disagreement;
  Point argmax;
};

std::vector<SlabWorst> worst_by_slab(const RandomEndo& g, const RandomEndo& h, const std::vector<Point>& alphabet) {
  if (!(g.domain() == h.domain())) throw std::invalid_argument("random endomorphisms act on different domains");
  auto table = [&](const RandomEndo& e) {
    std::vector<std::vector<Point>> t;
    for (const auto& c : e.map().cells()) {
      std::vector<Point> row;
      row.reserve(alphabet.size());
      for (Point a : alphabet) row.push_back(c.value.apply(a));
      t.push_back(std::move(row));
    }
    return t;
  };
  const auto gv = table(g), hv = table(h);
  std::vector<SlabWorst> out;
  for_each_slab(g.map().partition(), h.map().partition(), [&](const Interval& x, const std::vector<Piece>& pieces) {
    SlabWorst w{x, Rational(0), alphabet.empty() ? 0 : alphabet.front()};
    for (std::size_t ai = 0; ai < alphabet.size(); ++ai) {
      Rational d{0};
      for (const auto& p : pieces)
        if (gv[p.a][ai] != hv[p.b][ai]) d += p.length;
      if (d > w.disagreement) {
        w.disagreement = d;
        w.argmax = alphabet[ai];
      }
    }
    out.push_back(std::move(w));
  });
  return out;
}

}  // namespace

Rational worst_case_distance(const RandomEndo& g, const RandomEndo& h, const std::vector<Point>& alphabet) {
  Rational total{0};
  for (const auto& w : worst_by_slab(g, h, alphabet)) total += w.omega.length() * w.disagreement;
  return total;
}

std::vector<Point> window_alphabet(Point N) {
  std::vector<Point> a(static_cast<std::size_t>(N));
  for (Point x = 0; x < N; ++x) a[x] = x;
  return a;
}

GapBounds hausdorff_gap(const RandomEndo& g, const RandomEndo& h, const std::vector<Point>& alphabet,
                        std::size_t extra_probes, std::uint64_t seed) {
  const auto worst = worst_by_slab(g, h, alphabet);
  GapBounds out{Rational(0), Rational(0)};
  for (const auto& w : worst) out.upper += w.omega.length() * w.disagreement;
  if (alphabet.empty()) return out;

  std::vector<RandomVariable> probes;
  const std::size_t constants = std::min<std::size_t>(alphabet.size(), 16);
  for (std::size_t i = 0; i < constants; ++i) probes.push_back(RandomVariable::constant(alphabet[i]));
  std::vector<Rational> breaks;
  std::vector<Point> values;
  for (const auto& w : worst) {
    if (!values.empty()) breaks.push_back(w.omega.lo);
    values.push_back(w.argmax);
    probes.push_back(RandomVariable::constant(w.argmax));
  }
  probes.push_back(RandomVariable::from_cells([&] {
    std::vector<RandomVariable::Cell> cells;
    Rational lo{0};
    for (std::size_t i = 0; i < values.size(); ++i) {
      Rational hi = i < breaks.size() ? breaks[i] : Rational(1);
      cells.push_back({RationalSet::vertical_strip({lo, hi}), values[i]});
      lo = hi;
    }
    return cells;
  }()));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> strips(1, 4);
  for (std::size_t i = 0; i < extra_probes; ++i) {
    const int n = strips(rng);
    std::vector<Point> vals;
    for (int k = 0; k < n; ++k) vals.push_back(alphabet[pick(rng)]);
    probes.push_back(uniform_vertical_strips(vals));
  }
  for (const auto& f : probes) {
    out.lower = std::max(out.lower, dist_to_image(apply(g, f), h));
    out.lower = std::max(out.lower, dist_to_image(apply(h, f), g));
  }
  return out;
}

Certificate certify_epsilon_isomorphism(const PairModel& pair1, const PairModel& pair2, const Rational& eps,
                                        unsigned grid, unsigned jobs) {
  if (!(pair1.domain == pair2.domain) || pair1.window != pair2.window)
    throw std::invalid_argument("pairs live on different structures or windows");
  if (!(pair1.image.domain() == pair1.domain) || !(pair2.image.domain() == pair2.domain))
    throw std::invalid_argument("pair image does not act on the pair's structure");
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const Point N = pair1.window;
  const auto alphabet = window_alphabet(N);
  Certificate cert;
  cert.g = RandomEndo::constant(identity_endo(pair1.domain));
  cert.bound = 0;
  cert.gap = {Rational(0), Rational(0)};

  if (pair1.image == pair2.image) {
    cert.certified = true;
    cert.strips = 1;
    cert.reason = "identical pairs";
    return cert;
  }
  if (!is_automorphism_valued(pair1.image, N)) {
    cert.reason = "the first image is not automorphism-valued on the window";
    return cert;
  }
  const RandomEndo undo = inverse(pair1.image);
  if (is_automorphism_valued(pair2.image, N)) {
    cert.g = compose(pair2.image, undo);
    cert.strips = 1;
  } else if (pair2.domain.kind == DomainKind::natural) {
    try {
      auto approx = approximate_random_endo(pair2.image, pure_set_representatives(pair2.image, N), eps, N);
      cert.g = compose(approx.result, undo);
      cert.bound = approx.bound;
      for (const auto& fam : approx.families) cert.strips = std::max(cert.strips, fam.n);
    } catch (const NoRepresentativeMatch& e) {
      cert.reason = e.what();
      return cert;
    }
  } else {
    // A linear embedding with a complement has no linear approximants; back the
    // refusal with the exhaustive search on the window.
    const auto& h = pair2.image.map().cells().front().value;
    std::vector<FqVector> w;
    for (Point x = 0; x < N; ++x)
      if (Point y = h.apply(x); y < N) w.push_back(FqVector::from_code(pair2.domain.q, y));
    EchelonBasis basis(pair2.domain.q);
    std::vector<FqVector> gens;
    for (const auto& v : w)
      if (basis.insert(v)) gens.push_back(v);
    cert.reason = "the second image is not automorphism-valued over F_" + std::to_string(pair2.domain.q);
    try {
      cert.search = exhaustive_pair_search(pair2.domain.q, pair2.dim, grid, gens, jobs);
      cert.reason += "; exhaustive search on a " + std::to_string(grid) + "x" + std::to_string(grid) +
                     " grid finds minimal gap " + to_string(cert.search->gap);
      if (cert.search->gap > eps) cert.reason += " > " + to_string(eps);
    } catch (const SearchTooLarge& e) {
      cert.reason += std::string("; ") + e.what();
    }
    return cert;
  }
  cert.gap = hausdorff_gap(compose(cert.g, pair1.image), pair2.image, alphabet);
  cert.bound = std::max(cert.bound, cert.gap.upper);
  cert.certified = cert.bound <= eps;
  cert.reason = cert.certified ? "certified" : "certified bound " + to_string(cert.bound) + " exceeds epsilon";
  return cert;
}

}  // namespace belle
