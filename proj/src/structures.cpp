#include "belle/structures.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace belle {

using nlohmann::json;

Domain Domain::fq(unsigned q) {
  if (!is_prime_power(q)) throw std::invalid_argument("GF(" + std::to_string(q) + ") is not a field");
  return {DomainKind::fq_vectors, q};
}

std::string Domain::name() const {
  return kind == DomainKind::natural ? "pure" : "fq" + std::to_string(q);
}

Point fq_window(unsigned q, unsigned d) {
  Point n = 1;
  for (unsigned i = 0; i < d; ++i) {
    if (n > UINT64_MAX / q) throw std::overflow_error("window too large");
    n *= q;
  }
  return n;
}

NotInjective::NotInjective(Point a, Point b, Point image)
    : std::runtime_error("not injective: " + std::to_string(a) + " and " + std::to_string(b) + " both map to " +
                         std::to_string(image)),
      a_(a),
      b_(b),
      image_(image) {}

DependentImages::DependentImages(std::size_t index)
    : std::invalid_argument("basis image " + std::to_string(index) + " is dependent on the earlier images"),
      index_(index) {}

namespace {

json domain_json(const Domain& d) {
  if (d.kind == DomainKind::natural) return "pure";
  return json{{"fq", d.q}};
}

Point checked_power(Point base, std::uint64_t exp) {
  Point r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > UINT64_MAX / base) throw std::overflow_error("point code exceeds 64 bits");
    r *= base;
  }
  return r;
}

class IdentityRule final : public InjectionRule {
 public:
  explicit IdentityRule(Domain d) : d_(d) {}
  Domain domain() const override { return d_; }
  Point apply(Point x) const override { return x; }
  std::optional<Point> preimage(Point y) const override { return y; }
  json descriptor() const override {
    if (d_.kind == DomainKind::natural) return {{"kind", "identity"}};
    return {{"kind", "identity"}, {"q", d_.q}};
  }
  OrbitTrace trace(Point x) const override { return {TraceKind::orbit, x, 0}; }
  std::optional<Point> advance(Point root, std::uint64_t) const override { return root; }

 private:
  Domain d_;
};

class ShiftRule final : public InjectionRule {
 public:
  explicit ShiftRule(Point k) : k_(k) {}
  Domain domain() const override { return Domain::natural(); }
  Point apply(Point x) const override {
    if (x > UINT64_MAX - k_) throw std::overflow_error("shift overflows 64 bits");
    return x + k_;
  }
  std::optional<Point> preimage(Point y) const override {
    if (y < k_) return std::nullopt;
    return y - k_;
  }
  json descriptor() const override {
    if (k_ == 1) return {{"kind", "successor"}};
    return {{"kind", "shift"}, {"k", k_}};
  }
  OrbitTrace trace(Point x) const override { return {TraceKind::semi_orbit, x % k_, x / k_}; }
  std::optional<Point> advance(Point root, std::uint64_t steps) const override {
    if (steps != 0 && k_ > (UINT64_MAX - root) / steps) throw std::overflow_error("shift overflows 64 bits");
    return root + steps * k_;
  }
  Point k() const { return k_; }

 private:
  Point k_;
};

class TableRule final : public InjectionRule {
 public:
  explicit TableRule(const std::vector<std::pair<Point, Point>>& table) {
    for (auto [x, y] : table) {
      if (forward_.count(x)) throw std::invalid_argument("table lists " + std::to_string(x) + " twice");
      if (x != y) forward_[x] = y;
    }
    for (auto [x, y] : forward_) reverse_.emplace(y, x);
  }
  Domain domain() const override { return Domain::natural(); }
  Point apply(Point x) const override {
    auto it = forward_.find(x);
    return it == forward_.end() ? x : it->second;
  }
  std::optional<Point> preimage(Point y) const override {
    auto it = reverse_.find(y);
    if (it != reverse_.end()) return it->second;
    if (forward_.count(y)) return std::nullopt;
    return y;
  }
  json descriptor() const override {
    json t = json::array();
    for (auto [x, y] : forward_) t.push_back({x, y});
    if (t.empty()) return {{"kind", "identity"}};
    return {{"kind", "table"}, {"table", t}};
  }
  const std::map<Point, Point>& forward() const { return forward_; }

 private:
  std::map<Point, Point> forward_;
  std::multimap<Point, Point> reverse_;
};

class LinearRule final : public InjectionRule {
 public:
  LinearRule(unsigned q, std::vector<FqVector> images, std::size_t tail_shift)
      : q_(q), field_(FiniteField::get(q)), images_(std::move(images)), s_(tail_shift), basis_(q) {
    for (const auto& v : images_)
      if (v.q != q) throw std::invalid_argument("basis image over the wrong field");
    while (!images_.empty() && images_.back() == FqVector::basis(q, images_.size() - 1 + s_)) images_.pop_back();
    const std::size_t m = images_.size();
    std::size_t support = m + s_;
    for (const auto& v : images_) support = std::max(support, v.coords.size());
    // Images first, then the tail vectors that share their support.
    std::vector<FqVector> extended = images_;
    for (std::size_t i = m; i + s_ < support; ++i) extended.push_back(FqVector::basis(q, i + s_));
    for (std::size_t i = 0; i < extended.size(); ++i)
      if (!basis_.insert(extended[i])) throw DependentImages(i);
    q_pow_s_ = m == 0 ? checked_power(q, s_) : 0;
  }

  Domain domain() const override { return Domain::fq(q_); }

  FqVector apply_vector(const FqVector& v) const {
    const std::size_t m = images_.size();
    FqVector out = FqVector::zero(q_);
    for (std::size_t i = 0; i < std::min(m, v.coords.size()); ++i)
      if (v.coords[i] != 0) out = out + scale(v.coords[i], images_[i]);
    if (v.coords.size() > m) {
      FqVector tail{q_, std::vector<unsigned>(v.coords.size() + s_, 0)};
      for (std::size_t i = m; i < v.coords.size(); ++i) tail.coords[i + s_] = v.coords[i];
      tail.trim();
      out = out + tail;
    }
    return out;
  }

  Point apply(Point x) const override {
    if (images_.empty()) {
      if (x != 0 && x > UINT64_MAX / q_pow_s_) throw std::overflow_error("point code exceeds 64 bits");
      return x * q_pow_s_;
    }
    return apply_vector(FqVector::from_code(q_, x)).code();
  }

  std::optional<Point> preimage(Point y) const override {
    if (images_.empty()) {
      if (y % q_pow_s_ != 0) return std::nullopt;
      return y / q_pow_s_;
    }
    const FqVector w = FqVector::from_code(q_, y);
    EchelonBasis basis = basis_;
    // basis_ already covers indices < inserted().size(); extend the tail to w's support.
    for (std::size_t i = basis.inserted().size(); i + s_ < w.coords.size(); ++i) basis.insert(FqVector::basis(q_, i + s_));
    auto c = basis.express(w);
    if (!c) return std::nullopt;
    return FqVector::from_coords(q_, std::move(*c)).code();
  }

  json descriptor() const override {
    if (images_.empty() && s_ == 0) return {{"kind", "identity"}, {"q", q_}};
    json imgs = json::array();
    for (const auto& v : images_) imgs.push_back(v.coords);
    return {{"kind", "linear"}, {"q", q_}, {"images", imgs}, {"tail_shift", s_}};
  }

  OrbitTrace trace(Point x) const override {
    if (!images_.empty()) return {};
    if (x == 0 || s_ == 0) return {TraceKind::orbit, x, 0};
    std::uint64_t zeros = 0;
    Point r = x;
    while (r % q_ == 0) {
      r /= q_;
      ++zeros;
    }
    const std::uint64_t pos = zeros / s_;
    return {TraceKind::semi_orbit, x / checked_power(q_, pos * s_), pos};
  }

  std::optional<Point> advance(Point root, std::uint64_t steps) const override {
    if (!images_.empty()) return std::nullopt;
    const Point f = checked_power(q_pow_s_, steps);
    if (root != 0 && root > UINT64_MAX / f) throw std::overflow_error("point code exceeds 64 bits");
    return root * f;
  }

  LinearData data() const { return {q_, images_, s_}; }

 private:
  unsigned q_;
  std::shared_ptr<const FiniteField> field_;
  std::vector<FqVector> images_;
  std::size_t s_;
  EchelonBasis basis_;
  Point q_pow_s_ = 0;
};

class CompositeRule final : public InjectionRule {
 public:
  CompositeRule(WindowInjection outer, WindowInjection inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
  Domain domain() const override { return inner_.domain(); }
  Point apply(Point x) const override { return outer_.apply(inner_.apply(x)); }
  std::optional<Point> preimage(Point y) const override {
    auto p = outer_.preimage(y);
    if (!p) return std::nullopt;
    return inner_.preimage(*p);
  }
  json descriptor() const override {
    return {{"kind", "compose"}, {"outer", outer_.descriptor()}, {"inner", inner_.descriptor()}};
  }

 private:
  WindowInjection outer_, inner_;
};

class InverseRule final : public InjectionRule {
 public:
  explicit InverseRule(WindowInjection g) : g_(std::move(g)) {}
  Domain domain() const override { return g_.domain(); }
  Point apply(Point x) const override {
    auto p = g_.preimage(x);
    if (!p) throw std::domain_error("inverse undefined at " + std::to_string(x) + ": not in the image");
    return *p;
  }
  std::optional<Point> preimage(Point y) const override { return g_.apply(y); }
  json descriptor() const override { return {{"kind", "inverse"}, {"of", g_.descriptor()}}; }
  const WindowInjection& of() const { return g_; }

 private:
  WindowInjection g_;
};

const WindowInjection& natural_identity() {
  static const WindowInjection id(std::make_shared<IdentityRule>(Domain::natural()));
  return id;
}

// Linear data materialized so that e_i -> e_{i+s} holds for every i >= m.
LinearData materialize(const LinearData& d, std::size_t m) {
  LinearData out = d;
  for (std::size_t i = out.images.size(); i < m; ++i) out.images.push_back(FqVector::basis(d.q, i + d.tail_shift));
  return out;
}

}  // namespace

WindowInjection::WindowInjection() : WindowInjection(natural_identity()) {}

WindowInjection::WindowInjection(std::shared_ptr<const InjectionRule> rule) : rule_(std::move(rule)) {
  if (!rule_) throw std::invalid_argument("null injection rule");
  descriptor_ = std::make_shared<const json>(rule_->descriptor());
  key_ = std::make_shared<const std::string>(descriptor_->dump());
}

std::string WindowInjection::kind() const { return descriptor_->at("kind").get<std::string>(); }

bool WindowInjection::is_identity() const { return kind() == "identity"; }

WindowInjection identity_endo(Domain domain) {
  if (domain.kind == DomainKind::natural) return natural_identity();
  return WindowInjection(std::make_shared<IdentityRule>(domain));
}

WindowInjection successor_endo() { return shift_endo(1); }

WindowInjection shift_endo(Point k) {
  if (k == 0) return identity_endo();
  return WindowInjection(std::make_shared<ShiftRule>(k));
}

WindowInjection table_endo(std::vector<std::pair<Point, Point>> table) {
  return WindowInjection(std::make_shared<TableRule>(table));
}

WindowInjection linear_endo_from_basis_images(unsigned q, std::vector<FqVector> images, std::size_t tail_shift) {
  auto rule = std::make_shared<LinearRule>(q, std::move(images), tail_shift);
  if (rule->data().images.empty() && tail_shift == 0) return identity_endo(Domain::fq(q));
  return WindowInjection(std::move(rule));
}

WindowInjection basis_shift_endo(unsigned q, std::size_t s) { return linear_endo_from_basis_images(q, {}, s); }

std::optional<LinearData> as_linear(const WindowInjection& h) {
  if (auto* lin = dynamic_cast<const LinearRule*>(&h.rule())) return lin->data();
  if (dynamic_cast<const IdentityRule*>(&h.rule()) && h.domain().kind == DomainKind::fq_vectors)
    return LinearData{h.domain().q, {}, 0};
  return std::nullopt;
}

WindowInjection compose(const WindowInjection& outer, const WindowInjection& inner) {
  if (!(outer.domain() == inner.domain()))
    throw std::invalid_argument("cannot compose endomorphisms of " + outer.domain().name() + " and " +
                                inner.domain().name());
  if (outer.is_identity()) return inner;
  if (inner.is_identity()) return outer;
  auto* so = dynamic_cast<const ShiftRule*>(&outer.rule());
  auto* si = dynamic_cast<const ShiftRule*>(&inner.rule());
  if (so && si) return shift_endo(so->k() + si->k());
  if (auto* io = dynamic_cast<const InverseRule*>(&outer.rule()); io && io->of() == inner) return identity_endo(inner.domain());
  if (auto* ii = dynamic_cast<const InverseRule*>(&inner.rule()); ii && ii->of() == outer) return identity_endo(inner.domain());
  auto lo = as_linear(outer), li = as_linear(inner);
  if (lo && li) {
    const std::size_t m_in = li->images.size(), m_out = lo->images.size();
    const std::size_t m = std::max(m_in, m_out > li->tail_shift ? m_out - li->tail_shift : std::size_t{0});
    const LinearData in = materialize(*li, m);
    const LinearRule outer_rule(lo->q, lo->images, lo->tail_shift);
    std::vector<FqVector> images;
    images.reserve(m);
    for (const auto& v : in.images) images.push_back(outer_rule.apply_vector(v));
    return linear_endo_from_basis_images(lo->q, std::move(images), li->tail_shift + lo->tail_shift);
  }
  return WindowInjection(std::make_shared<CompositeRule>(outer, inner));
}

WindowInjection inverse(const WindowInjection& g) {
  if (g.is_identity()) return g;
  if (auto* inv = dynamic_cast<const InverseRule*>(&g.rule())) return inv->of();
  if (auto* table = dynamic_cast<const TableRule*>(&g.rule())) {
    std::vector<Point> keys, values;
    std::vector<std::pair<Point, Point>> swapped;
    for (auto [x, y] : table->forward()) {
      keys.push_back(x);
      values.push_back(y);
      swapped.emplace_back(y, x);
    }
    std::sort(values.begin(), values.end());
    if (keys == values) return table_endo(std::move(swapped));
  }
  if (auto lin = as_linear(g); lin && lin->tail_shift == 0) {
    // A bijective linear map fixes e_i for i >= m; invert on span{e_0..e_{K-1}}.
    std::size_t K = lin->images.size();
    for (const auto& v : lin->images) K = std::max(K, v.coords.size());
    const LinearData d = materialize(*lin, K);
    EchelonBasis basis(d.q);
    for (const auto& v : d.images) basis.insert(v);
    if (basis.rank() == K) {
      std::vector<FqVector> images;
      for (std::size_t t = 0; t < K; ++t)
        images.push_back(FqVector::from_coords(d.q, *basis.express(FqVector::basis(d.q, t))));
      return linear_endo_from_basis_images(d.q, std::move(images), 0);
    }
  }
  return WindowInjection(std::make_shared<InverseRule>(g));
}

std::optional<NotInjective> find_collision(const WindowInjection& h, Point N) {
  std::unordered_map<Point, Point> seen;
  seen.reserve(static_cast<std::size_t>(N));
  for (Point x = 0; x < N; ++x) {
    const Point y = h.apply(x);
    auto [it, fresh] = seen.emplace(y, x);
    if (!fresh) return NotInjective(it->second, x, y);
  }
  return std::nullopt;
}

bool is_injective_on_window(const WindowInjection& h, Point N) { return !find_collision(h, N).has_value(); }

bool is_automorphism_on_window(const WindowInjection& h, Point N) {
  if (!is_injective_on_window(h, N)) return false;
  for (Point y = 0; y < N; ++y) {
    auto p = h.preimage(y);
    if (!p || h.apply(*p) != y) return false;
  }
  return true;
}

std::vector<Point> window_roots(const WindowInjection& h, Point N) {
  std::vector<Point> roots;
  for (Point y = 0; y < N; ++y) {
    auto p = h.preimage(y);
    if (!p || h.apply(*p) != y) roots.push_back(y);
  }
  return roots;
}

OrbitTrace trace_orbit(const WindowInjection& h, Point x, std::uint64_t max_steps) {
  OrbitTrace fast = h.rule().trace(x);
  if (fast.kind != TraceKind::unknown) return fast;
  Point y = x;
  for (std::uint64_t steps = 0; steps <= max_steps; ++steps) {
    auto p = h.preimage(y);
    if (!p) return {TraceKind::semi_orbit, y, steps};
    if (*p == x) return {TraceKind::orbit, x, 0};
    y = *p;
  }
  return {};
}

Point advance(const WindowInjection& h, Point root, std::uint64_t steps) {
  if (auto fast = h.rule().advance(root, steps)) return *fast;
  Point y = root;
  for (std::uint64_t i = 0; i < steps; ++i) y = h.apply(y);
  return y;
}

}  // namespace belle
