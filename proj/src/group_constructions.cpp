#include "belle/group_constructions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace belle {

NoCosetFactorization::NoCosetFactorization(std::size_t cell, const std::string& value)
    : std::runtime_error("cell " + std::to_string(cell) + " value " + value +
                         " does not factor through any coset representative"),
      cell_(cell) {}

NotInPresentation::NotInPresentation(const std::string& group, const std::string& value)
    : std::invalid_argument(value + " is not in " + group) {}

Point product_code(bool right, Point x) { return 2 * x + (right ? 1 : 0); }

std::pair<bool, Point> product_decode(Point code) { return {code % 2 == 1, code / 2}; }

Point pair_code(Point b, Point a) {
  const Point s = b + a;
  return s * (s + 1) / 2 + a;
}

std::pair<Point, Point> pair_decode(Point code) {
  // Largest s with s(s+1)/2 <= code.
  Point s = static_cast<Point>((std::sqrt(8.0L * static_cast<long double>(code) + 1) - 1) / 2);
  while (s * (s + 1) / 2 > code) --s;
  while ((s + 1) * (s + 2) / 2 <= code) ++s;
  const Point a = code - s * (s + 1) / 2;
  return {s - a, a};
}

namespace {

Rational half(const Rational& x) {
  Rational h = x / 2;
  h.canonicalize();
  return h;
}

bool automorphism_on(const WindowInjection& v, const std::vector<Point>& alphabet) {
  std::set<Point> seen;
  for (Point x : alphabet) {
    if (!seen.insert(v.apply(x)).second) return false;
    if (!v.preimage(x)) return false;
  }
  return true;
}

bool automorphism_valued_on(const RandomEndo& h, const std::vector<Point>& alphabet) {
  for (const auto& c : h.map().cells())
    if (!automorphism_on(c.value, alphabet)) return false;
  return true;
}

RandomEndo map_values(const RandomEndo& h, const std::function<WindowInjection(const WindowInjection&)>& fn) {
  return RandomEndo(h.map().map(fn));
}

Approximation exact(const RandomEndo& h, const std::string& label, const Rational& eps) {
  return {h, Rational(0), Budget{label, eps, Rational(0), {}, Rational(0)}};
}

class ProductRule final : public InjectionRule {
 public:
  ProductRule(WindowInjection l, WindowInjection r) : left(std::move(l)), right(std::move(r)) {}
  Domain domain() const override { return Domain::natural(); }
  Point apply(Point x) const override {
    auto [side, p] = product_decode(x);
    return product_code(side, side ? right.apply(p) : left.apply(p));
  }
  std::optional<Point> preimage(Point y) const override {
    auto [side, p] = product_decode(y);
    auto q = side ? right.preimage(p) : left.preimage(p);
    if (!q) return std::nullopt;
    return product_code(side, *q);
  }
  nlohmann::json descriptor() const override {
    return {{"kind", "product"}, {"left", left.descriptor()}, {"right", right.descriptor()}};
  }

  WindowInjection left, right;
};

class ComponentRule final : public InjectionRule {
 public:
  ComponentRule(WindowInjection v, bool side, Domain dom) : v_(std::move(v)), side_(side), domain_(dom) {}
  Domain domain() const override { return domain_; }
  Point apply(Point x) const override {
    auto [side, p] = product_decode(v_.apply(product_code(side_, x)));
    if (side != side_) throw std::domain_error("component leaves its half at " + std::to_string(x));
    return p;
  }
  std::optional<Point> preimage(Point y) const override {
    auto x = v_.preimage(product_code(side_, y));
    if (!x) return std::nullopt;
    auto [side, p] = product_decode(*x);
    if (side != side_) return std::nullopt;
    return p;
  }
  nlohmann::json descriptor() const override {
    return {{"kind", "component"}, {"side", side_ ? "right" : "left"}, {"of", v_.descriptor()}, {"domain", domain_.name()}};
  }

 private:
  WindowInjection v_;
  bool side_;
  Domain domain_;
};

class WreathRule final : public InjectionRule {
 public:
  explicit WreathRule(WreathParts parts) : parts_(std::move(parts)) {}
  Domain domain() const override { return Domain::natural(); }
  Point apply(Point x) const override {
    auto [b, a] = pair_decode(x);
    return pair_code(parts_.top.apply(b), parts_.coordinate(b).apply(a));
  }
  std::optional<Point> preimage(Point y) const override {
    auto [hb, ga] = pair_decode(y);
    auto b = parts_.top.preimage(hb);
    if (!b) return std::nullopt;
    auto a = parts_.coordinate(*b).preimage(ga);
    if (!a) return std::nullopt;
    return pair_code(*b, *a);
  }
  nlohmann::json descriptor() const override {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& [b, g] : parts_.coords) coords.push_back({b, g.descriptor()});
    return {{"kind", "wreath"}, {"top", parts_.top.descriptor()}, {"coords", coords}, {"fibre", parts_.fibre.name()}};
  }
  const WreathParts& parts() const { return parts_; }

 private:
  WreathParts parts_;
};

class BlockRule final : public InjectionRule {
 public:
  BlockRule(std::vector<Block> blocks, std::vector<std::size_t> perm) : blocks_(std::move(blocks)), perm_(std::move(perm)) {
    inv_.resize(perm_.size());
    for (std::size_t k = 0; k < perm_.size(); ++k) inv_[perm_[k]] = k;
  }
  Domain domain() const override { return Domain::natural(); }
  Point apply(Point x) const override {
    const std::size_t k = block_of(x);
    const Point t = (x - blocks_[k].residue) / blocks_[k].modulus;
    const Block& to = blocks_[perm_[k]];
    return to.modulus * t + to.residue;
  }
  std::optional<Point> preimage(Point y) const override {
    const std::size_t k = block_of(y);
    const Point t = (y - blocks_[k].residue) / blocks_[k].modulus;
    const Block& from = blocks_[inv_[k]];
    return from.modulus * t + from.residue;
  }
  nlohmann::json descriptor() const override {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : blocks_) blocks.push_back({b.modulus, b.residue});
    return {{"kind", "blocks"}, {"blocks", blocks}, {"perm", perm_}};
  }

 private:
  std::size_t block_of(Point x) const {
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      if (x % blocks_[k].modulus == blocks_[k].residue) return k;
    throw std::logic_error("blocks do not cover " + std::to_string(x));
  }
  std::vector<Block> blocks_;
  std::vector<std::size_t> perm_, inv_;
};

// --- leaves ---------------------------------------------------------------

class PureSet final : public PermGroupPresentation {
 public:
  explicit PureSet(Point window) : window_(window) {
    if (window == 0) throw std::invalid_argument("pure set window must be positive");
  }
  std::string describe() const override { return "pure"; }
  Domain domain() const override { return Domain::natural(); }
  std::vector<Point> alphabet() const override { return window_alphabet(window_); }
  bool contains(const WindowInjection& v) const override {
    return v.domain() == Domain::natural() && is_injective_on_window(v, window_);
  }
  Approximation approximate(const RandomEndo& h, const Rational& eps) const override {
    for (const auto& c : h.map().cells())
      if (!contains(c.value)) throw NotInPresentation("pure", c.value.key());
    const std::string label = "pure[" + std::to_string(window_) + "]";
    if (is_automorphism_valued(h, window_)) return exact(h, label, eps);
    auto a = approximate_random_endo(h, pure_set_representatives(h, window_), eps, window_);
    Budget b{label, eps, a.bound, {}, Rational(0)};
    for (const auto& f : a.families) b.label += f.n > 1 ? " n=" + std::to_string(f.n) : "";
    return {a.result, a.bound, b};
  }
  RandomEndo demo_endo() const override { return RandomEndo::constant(successor_endo()); }

 private:
  Point window_;
};

class Trivial final : public PermGroupPresentation {
 public:
  std::string describe() const override { return "trivial"; }
  Domain domain() const override { return Domain::natural(); }
  std::vector<Point> alphabet() const override { return {0}; }
  bool contains(const WindowInjection& v) const override {
    return v.domain() == Domain::natural() && v.apply(0) == 0;
  }
  Approximation approximate(const RandomEndo& h, const Rational& eps) const override {
    for (const auto& c : h.map().cells())
      if (!contains(c.value)) throw NotInPresentation("trivial", c.value.key());
    return exact(h, "trivial", eps);
  }
  RandomEndo demo_endo() const override { return RandomEndo::constant(identity_endo()); }
};

class FqVectors final : public PermGroupPresentation {
 public:
  FqVectors(unsigned q, unsigned dim) : q_(q), dim_(dim), window_(fq_window(q, dim)) {}
  std::string describe() const override {
    return "fq(q=" + std::to_string(q_) + ",d=" + std::to_string(dim_) + ")";
  }
  Domain domain() const override { return Domain::fq(q_); }
  std::vector<Point> alphabet() const override { return window_alphabet(window_); }
  bool contains(const WindowInjection& v) const override {
    return v.domain() == domain() && is_automorphism_on_window(v, window_);
  }
  Approximation approximate(const RandomEndo& h, const Rational& eps) const override {
    for (const auto& c : h.map().cells())
      if (!contains(c.value)) throw NotInPresentation(describe(), c.value.key());
    return exact(h, describe(), eps);
  }
  RandomEndo demo_endo() const override {
    std::vector<FqVector> images;
    for (unsigned i = 0; i < dim_; ++i) images.push_back(FqVector::basis(q_, (i + 1) % dim_));
    return RandomEndo::constant(linear_endo_from_basis_images(q_, images));
  }

 private:
  unsigned q_, dim_;
  Point window_;
};

// --- combinators ------------------------------------------------------------

class DirectProduct final : public PermGroupPresentation {
 public:
  DirectProduct(Presentation G, Presentation H) : G_(std::move(G)), H_(std::move(H)) {
    left_ = G_->alphabet();
    right_ = H_->alphabet();
  }
  std::string describe() const override { return "product(" + G_->describe() + "," + H_->describe() + ")"; }
  Domain domain() const override { return Domain::natural(); }
  std::vector<Point> alphabet() const override {
    std::vector<Point> out;
    for (Point a : left_) out.push_back(product_code(false, a));
    for (Point b : right_) out.push_back(product_code(true, b));
    std::sort(out.begin(), out.end());
    return out;
  }
  bool contains(const WindowInjection& v) const override {
    auto parts = split(v);
    return parts && G_->contains(parts->first) && H_->contains(parts->second);
  }
  Approximation approximate(const RandomEndo& h, const Rational& eps) const override {
    auto parts = [&](bool right) {
      return map_values(h, [&](const WindowInjection& v) {
        auto p = split(v);
        if (!p) throw NotInPresentation(describe(), v.key());
        return right ? p->second : p->first;
      });
    };
    const Rational share = half(eps);
    auto a = G_->approximate(parts(false), share);
    auto b = H_->approximate(parts(true), share);
    auto joined = combine(a.result.map(), b.result.map(),
                          [](const WindowInjection& l, const WindowInjection& r) { return product_endo(l, r); });
    Rational bound = a.bound + b.bound;
    bound.canonicalize();
    Budget budget{describe(), eps, bound, {a.budget, b.budget}, Rational(0)};
    return {RandomEndo(joined), bound, budget};
  }
  RandomEndo demo_endo() const override {
    return RandomEndo(G_->demo_endo().map().map(
        [&](const WindowInjection& v) { return product_endo(v, identity_endo(H_->domain())); }));
  }

 private:
  std::optional<std::pair<WindowInjection, WindowInjection>> split(const WindowInjection& v) const {
    return product_components(v, left_, right_, G_->domain(), H_->domain());
  }
  Presentation G_, H_;
  std::vector<Point> left_, right_;
};

class Wreath final : public PermGroupPresentation {
 public:
  Wreath(Presentation G, Presentation H, long m) : G_(std::move(G)), H_(std::move(H)), m_(m) {
    if (m <= 0) throw std::invalid_argument("wreath truncation m must be positive, got " + std::to_string(m));
    const auto top = H_->alphabet();
    for (Point b = 0; b < static_cast<Point>(m); ++b)
      if (!std::binary_search(top.begin(), top.end(), b))
        throw std::invalid_argument("coordinate " + std::to_string(b) + " lies outside the top group's window");
  }
  std::string describe() const override {
    return "wreath(" + G_->describe() + "," + H_->describe() + ",m=" + std::to_string(m_) + ")";
  }
  Domain domain() const override { return Domain::natural(); }
  std::vector<Point> alphabet() const override {
    std::vector<Point> out;
    for (Point b = 0; b < static_cast<Point>(m_); ++b)
      for (Point a : G_->alphabet()) out.push_back(pair_code(b, a));
    std::sort(out.begin(), out.end());
    return out;
  }
  bool contains(const WindowInjection& v) const override {
    auto p = parts(v);
    if (!p || !H_->contains(p->top)) return false;
    const auto fibre = G_->alphabet();
    for (const auto& [b, g] : p->coords) {
      if (b < static_cast<Point>(m_) ? !G_->contains(g) : !automorphism_on(g, fibre)) return false;
    }
    return true;
  }
  Approximation approximate(const RandomEndo& h, const Rational& eps) const override {
    for (const auto& c : h.map().cells())
      if (!contains(c.value)) throw NotInPresentation(describe(), c.value.key());
    Budget budget{describe(), eps, Rational(0), {}, Rational(0)};
    auto top = H_->approximate(map_values(h, [&](const WindowInjection& v) { return parts(v)->top; }), half(eps));
    budget.parts.push_back(top.budget);
    Rational bound = top.bound;
    using Values = std::vector<WindowInjection>;
    StepMap<Values> acc = top.result.map().map([](const WindowInjection& v) { return Values{v}; });
    Rational share = half(eps);
    for (Point b = 0; b < static_cast<Point>(m_); ++b) {
      share = half(share);
      auto coord = G_->approximate(
          map_values(h, [&](const WindowInjection& v) { return parts(v)->coordinate(b); }), share);
      coord.budget.label = "b" + std::to_string(b) + ": " + coord.budget.label;
      budget.parts.push_back(coord.budget);
      bound += coord.bound;
      acc = combine(acc, coord.result.map(), [](const Values& vs, const WindowInjection& g) {
        Values out = vs;
        out.push_back(g);
        return out;
      });
    }
    budget.residual = share;
    bound.canonicalize();
    budget.certified = bound;
    const Domain fibre = G_->domain();
    auto joined = combine(acc, h.map(), [&](const Values& vs, const WindowInjection& original) {
      std::map<Point, WindowInjection> coords;
      const auto original_parts = parts(original);
      for (const auto& [b, g] : original_parts->coords)
        if (b >= static_cast<Point>(m_)) coords.emplace(b, g);
      for (std::size_t i = 1; i < vs.size(); ++i) coords.emplace(static_cast<Point>(i - 1), vs[i]);
      return wreath_endo(vs[0], std::move(coords), fibre);
    });
    return {RandomEndo(joined), bound, budget};
  }
  RandomEndo demo_endo() const override {
    const Domain top = H_->domain(), fibre = G_->domain();
    return RandomEndo(G_->demo_endo().map().map(
        [&](const WindowInjection& v) { return wreath_endo(identity_endo(top), {{0, v}}, fibre); }));
  }

 private:
  std::optional<WreathParts> parts(const WindowInjection& v) const {
    if (v.is_identity()) return WreathParts{identity_endo(H_->domain()), {}, G_->domain()};
    return wreath_parts(v);
  }
  Presentation G_, H_;
  long m_;
};

class FiniteIndex final : public PermGroupPresentation {
 public:
  FiniteIndex(Presentation H, std::vector<WindowInjection> reps) : H_(std::move(H)), reps_(std::move(reps)) {
    if (reps_.empty()) throw std::invalid_argument("at least one coset representative is required");
    const auto alpha = H_->alphabet();
    for (const auto& g : reps_) {
      if (!automorphism_on(g, alpha))
        throw std::invalid_argument("coset representative " + g.key() + " is not bijective on the window");
      undo_.push_back(inverse(g));
    }
  }
  std::string describe() const override {
    std::string s = "findex(" + H_->describe() + ",reps=[";
    for (std::size_t j = 0; j < reps_.size(); ++j) s += (j ? "," : "") + rep_name(reps_[j]);
    return s + "])";
  }
  Domain domain() const override { return H_->domain(); }
  std::vector<Point> alphabet() const override { return H_->alphabet(); }
  bool contains(const WindowInjection& v) const override { return coset(v).has_value(); }
  Approximation approximate(const RandomEndo& h, const Rational& eps) const override {
    std::vector<StepMap<std::size_t>::Cell> assign;
    std::vector<StepMap<WindowInjection>::Cell> peeled;
    const auto& cells = h.map().cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      auto j = coset(cells[i].value);
      if (!j) throw NoCosetFactorization(i, cells[i].value.key());
      assign.push_back({cells[i].region, *j});
      peeled.push_back({cells[i].region, compose(undo_[*j], cells[i].value)});
    }
    auto inner = H_->approximate(RandomEndo(StepMap<WindowInjection>::canonical(std::move(peeled))), eps);
    auto joined = combine(StepMap<std::size_t>::canonical(std::move(assign)), inner.result.map(),
                          [&](std::size_t j, const WindowInjection& g) { return compose(reps_[j], g); });
    Budget budget{describe(), eps, inner.bound, {inner.budget}, Rational(0)};
    return {RandomEndo(joined), inner.bound, budget};
  }
  RandomEndo demo_endo() const override {
    auto sides = vertical_strip_map<std::size_t>({Rational(1, 2)}, {0, reps_.size() - 1});
    return RandomEndo(combine(H_->demo_endo().map(), sides, [&](const WindowInjection& v, std::size_t j) {
      return compose(reps_[j], v);
    }));
  }

 private:
  std::optional<std::size_t> coset(const WindowInjection& v) const {
    for (std::size_t j = 0; j < reps_.size(); ++j)
      if (H_->contains(compose(undo_[j], v))) return j;
    return std::nullopt;
  }
  static std::string rep_name(const WindowInjection& g) {
    for (const char* name : {"id", "swap", "rot3", "rot3^2"})
      if (named_coset_rep(name) == g) return name;
    return g.key();
  }
  Presentation H_;
  std::vector<WindowInjection> reps_, undo_;
};

}  // namespace

WindowInjection WreathParts::coordinate(Point b) const {
  auto it = coords.find(b);
  return it == coords.end() ? identity_endo(fibre) : it->second;
}

WindowInjection product_endo(WindowInjection left, WindowInjection right) {
  if (left.is_identity() && right.is_identity()) return identity_endo();
  return WindowInjection(std::make_shared<ProductRule>(std::move(left), std::move(right)));
}

WindowInjection product_component(WindowInjection v, bool right, Domain domain) {
  return WindowInjection(std::make_shared<ComponentRule>(std::move(v), right, domain));
}

std::optional<std::pair<WindowInjection, WindowInjection>> product_components(const WindowInjection& v,
                                                                             const std::vector<Point>& left_alphabet,
                                                                             const std::vector<Point>& right_alphabet,
                                                                             Domain left_domain, Domain right_domain) {
  if (v.is_identity()) return std::make_pair(identity_endo(left_domain), identity_endo(right_domain));
  if (auto p = dynamic_cast<const ProductRule*>(&v.rule()))
    if (p->left.domain() == left_domain && p->right.domain() == right_domain) return std::make_pair(p->left, p->right);
  if (!(v.domain() == Domain::natural())) return std::nullopt;
  for (Point a : left_alphabet)
    if (v.apply(product_code(false, a)) % 2 != 0) return std::nullopt;
  for (Point b : right_alphabet)
    if (v.apply(product_code(true, b)) % 2 != 1) return std::nullopt;
  return std::make_pair(WindowInjection(std::make_shared<ComponentRule>(v, false, left_domain)),
                        WindowInjection(std::make_shared<ComponentRule>(v, true, right_domain)));
}

WindowInjection wreath_endo(WindowInjection top, std::map<Point, WindowInjection> coords, Domain fibre) {
  for (auto it = coords.begin(); it != coords.end();) it = it->second.is_identity() ? coords.erase(it) : std::next(it);
  if (top.is_identity() && coords.empty()) return identity_endo();
  return WindowInjection(std::make_shared<WreathRule>(WreathParts{std::move(top), std::move(coords), fibre}));
}

std::optional<WreathParts> wreath_parts(const WindowInjection& v) {
  if (auto w = dynamic_cast<const WreathRule*>(&v.rule())) return w->parts();
  return std::nullopt;
}

WindowInjection block_permutation(std::vector<Block> blocks, std::vector<std::size_t> perm) {
  if (blocks.empty() || perm.size() != blocks.size()) throw std::invalid_argument("one image index per block");
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != k) throw std::invalid_argument("block images must form a permutation");
  Point period = 1;
  for (const auto& b : blocks) {
    if (b.modulus == 0 || b.residue >= b.modulus) throw std::invalid_argument("bad residue class");
    period = std::lcm(period, b.modulus);
  }
  for (Point x = 0; x < period; ++x) {
    int hits = 0;
    for (const auto& b : blocks) hits += x % b.modulus == b.residue;
    if (hits != 1) throw std::invalid_argument("blocks do not partition N at " + std::to_string(x));
  }
  return WindowInjection(std::make_shared<BlockRule>(std::move(blocks), std::move(perm)));
}

WindowInjection swap_blocks() { return block_permutation({{2, 0}, {2, 1}}, {1, 0}); }

WindowInjection rotate_blocks() { return block_permutation({{2, 0}, {4, 1}, {4, 3}}, {1, 2, 0}); }

WindowInjection named_coset_rep(const std::string& name) {
  if (name == "id") return identity_endo();
  if (name == "swap") return swap_blocks();
  if (name == "rot3") return rotate_blocks();
  if (name == "rot3^2") return block_permutation({{2, 0}, {4, 1}, {4, 3}}, {2, 0, 1});
  throw std::invalid_argument("unknown coset representative '" + name + "'");
}

Presentation pure_set(Point window) { return std::make_shared<PureSet>(window); }
Presentation trivial_group() { return std::make_shared<Trivial>(); }
Presentation fq_vectors(unsigned q, unsigned dim) { return std::make_shared<FqVectors>(q, dim); }
Presentation direct_product(Presentation G, Presentation H) {
  return std::make_shared<DirectProduct>(std::move(G), std::move(H));
}
Presentation wreath_product(Presentation G, Presentation H, long m) {
  return std::make_shared<Wreath>(std::move(G), std::move(H), m);
}
Presentation finite_index_supergroup(Presentation H, std::vector<WindowInjection> coset_reps) {
  return std::make_shared<FiniteIndex>(std::move(H), std::move(coset_reps));
}

Rational measured_distance(const PermGroupPresentation& P, const RandomEndo& h, const Approximation& a) {
  return worst_case_distance(a.result, h, P.alphabet());
}

// --- parser -------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& s, Point window) : s_(s), window_(window) {}

  Presentation parse() {
    auto p = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("composition expression: " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string word() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '^' || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return s_.substr(start, pos_ - start);
  }
  long number() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || (pos_ - start == 1 && s_[start] == '-')) fail("expected a number");
    return std::stol(s_.substr(start, pos_ - start));
  }
  long keyword_number(const std::string& key) {
    if (word() != key) fail("expected " + key + "=");
    expect('=');
    return number();
  }

  Presentation expr() {
    const std::string head = word();
    if (head == "pure") return pure_set(window_);
    if (head == "trivial") return trivial_group();
    if (head == "fq") {
      expect('(');
      const long q = keyword_number("q");
      expect(',');
      const long d = keyword_number("d");
      expect(')');
      if (q < 2 || d < 1) fail("bad field or dimension");
      return fq_vectors(static_cast<unsigned>(q), static_cast<unsigned>(d));
    }
    if (head == "product") {
      expect('(');
      auto g = expr();
      expect(',');
      auto h = expr();
      expect(')');
      return direct_product(g, h);
    }
    if (head == "wreath") {
      expect('(');
      auto g = expr();
      expect(',');
      auto h = expr();
      expect(',');
      const long m = keyword_number("m");
      expect(')');
      return wreath_product(g, h, m);
    }
    if (head == "findex") {
      expect('(');
      auto h = expr();
      expect(',');
      if (word() != "reps") fail("expected reps=");
      expect('=');
      expect('[');
      std::vector<WindowInjection> reps;
      do reps.push_back(named_coset_rep(word()));
      while (accept(','));
      expect(']');
      expect(')');
      return finite_index_supergroup(h, reps);
    }
    fail("unknown group '" + head + "'");
  }

  const std::string& s_;
  Point window_;
  std::size_t pos_ = 0;
};

}  // namespace

Presentation parse_presentation(const std::string& expr, Point window) { return Parser(expr, window).parse(); }

}  // namespace belle
