#pragma once

// Countable structures presented lazily: the pure set N and the vector space
// F_q^(N) (points coded as in finite_field.hpp). Endomorphisms are injective
// evaluable rules with partial inverses; every check is relative to a window
// [0, N) of point codes.

#include "belle/finite_field.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace belle {

enum class DomainKind { natural, fq_vectors };

struct Domain {
  DomainKind kind = DomainKind::natural;
  unsigned q = 0;

  static Domain natural() { return {}; }
  static Domain fq(unsigned q);
  std::string name() const;
  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Window size for a vector space of dimension d: q^d points.
Point fq_window(unsigned q, unsigned d);

enum class TraceKind { unknown, orbit, semi_orbit };

/// Where a point sits relative to the (semi-)orbits of an injection.
/// For semi_orbit, the point is the position-th iterate of root.
struct OrbitTrace {
  TraceKind kind = TraceKind::unknown;
  Point root = 0;
  std::uint64_t position = 0;
};

class InjectionRule {
 public:
  virtual ~InjectionRule() = default;
  virtual Domain domain() const = 0;
  virtual Point apply(Point x) const = 0;
  virtual std::optional<Point> preimage(Point y) const = 0;
  virtual nlohmann::json descriptor() const = 0;
  /// Closed-form orbit position, if the rule knows one.
  virtual OrbitTrace trace(Point) const { return {}; }
  /// Closed-form iterate apply^steps(root), if the rule knows one.
  virtual std::optional<Point> advance(Point, std::uint64_t) const { return std::nullopt; }
};

class WindowInjection {
 public:
  /// Identity on the natural numbers.
  WindowInjection();
  explicit WindowInjection(std::shared_ptr<const InjectionRule> rule);

  Point apply(Point x) const { return rule_->apply(x); }
  Point operator()(Point x) const { return rule_->apply(x); }
  std::optional<Point> preimage(Point y) const { return rule_->preimage(y); }
  Domain domain() const { return rule_->domain(); }
  const nlohmann::json& descriptor() const { return *descriptor_; }
  /// Canonical text of the descriptor; equal keys mean equal rules.
  const std::string& key() const { return *key_; }
  std::string kind() const;
  bool is_identity() const;
  const InjectionRule& rule() const { return *rule_; }
  const std::shared_ptr<const InjectionRule>& rule_ptr() const { return rule_; }

  friend bool operator==(const WindowInjection& a, const WindowInjection& b) { return a.key() == b.key(); }
  friend bool operator<(const WindowInjection& a, const WindowInjection& b) { return a.key() < b.key(); }

 private:
  std::shared_ptr<const InjectionRule> rule_;
  std::shared_ptr<const nlohmann::json> descriptor_;
  std::shared_ptr<const std::string> key_;
};

class NotInjective : public std::runtime_error {
 public:
  NotInjective(Point a, Point b, Point image);
  Point first() const { return a_; }
  Point second() const { return b_; }
  Point image() const { return image_; }

 private:
  Point a_, b_, image_;
};

/// Raised when linear_endo_from_basis_images gets dependent images.
class DependentImages : public std::invalid_argument {
 public:
  explicit DependentImages(std::size_t index);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// --- constructors -----------------------------------------------------------

WindowInjection identity_endo(Domain domain = Domain::natural());
WindowInjection successor_endo();
/// x -> x + k on N.
WindowInjection shift_endo(Point k);
/// Finite table of (x, y) pairs; unlisted points are fixed. Not validated:
/// use is_injective_on_window.
WindowInjection table_endo(std::vector<std::pair<Point, Point>> table);
/// Linear map e_i -> images[i] for i < images.size(), e_i -> e_{i+tail_shift}
/// beyond. Throws DependentImages if the images (together with the tail)
/// are linearly dependent, reporting the first dependent index.
WindowInjection linear_endo_from_basis_images(unsigned q, std::vector<FqVector> images, std::size_t tail_shift = 0);
/// e_i -> e_{i+s}: image span{e_s, e_{s+1}, ...}.
WindowInjection basis_shift_endo(unsigned q, std::size_t s = 1);
/// outer after inner, with light simplification (identities, shifts, linear maps).
WindowInjection compose(const WindowInjection& outer, const WindowInjection& inner);
/// Two-sided inverse of a bijection. apply throws std::domain_error at points
/// outside the image of g.
WindowInjection inverse(const WindowInjection& g);

/// Linear data of a linear rule: e_i -> images[i] (i < m), e_i -> e_{i+s} beyond.
struct LinearData {
  unsigned q;
  std::vector<FqVector> images;
  std::size_t tail_shift;
};
std::optional<LinearData> as_linear(const WindowInjection& h);

// --- window checks ------------------------------------------------------------

/// First colliding pair on [0, N), if any.
std::optional<NotInjective> find_collision(const WindowInjection& h, Point N);
bool is_injective_on_window(const WindowInjection& h, Point N);
/// Injective on [0, N) and every y < N has a preimage x with h(x) = y.
/// Sound relative to the window: says nothing about points >= N.
bool is_automorphism_on_window(const WindowInjection& h, Point N);
/// Points y < N with no preimage, ascending.
std::vector<Point> window_roots(const WindowInjection& h, Point N);

/// Position of x in the (semi-)orbits of h: the closed form if the rule has
/// one, otherwise a walk along preimages capped at max_steps (unknown beyond).
OrbitTrace trace_orbit(const WindowInjection& h, Point x, std::uint64_t max_steps = 10'000'000);
/// h^steps(root), by closed form or iteration.
Point advance(const WindowInjection& h, Point root, std::uint64_t steps);

}  // namespace belle
