#include "belle/geometry_bounds.hpp"

#include "belle/structures.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <thread>

namespace belle {

void GeometrySpec::validate() const {
  if (arity < 1) throw std::invalid_argument("tuple arity must be at least 1");
  if (kind != GeometryKind::disintegrated && !is_prime_power(q))
    throw std::invalid_argument("field size " + std::to_string(q) + " is not a prime power");
}

GeometryKind parse_geometry_kind(const std::string& s) {
  if (s == "affine") return GeometryKind::affine;
  if (s == "projective") return GeometryKind::projective;
  if (s == "disintegrated") return GeometryKind::disintegrated;
  throw std::invalid_argument("unknown geometry '" + s + "'");
}

std::string to_string(GeometryKind k) {
  switch (k) {
    case GeometryKind::affine: return "affine";
    case GeometryKind::projective: return "projective";
    case GeometryKind::disintegrated: return "disintegrated";
  }
  return "?";
}

namespace {

BigInt ipow(unsigned q, long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), q, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

BigInt closed_set_size(const GeometrySpec& g, long d) {
  g.validate();
  if (d < 0) throw std::invalid_argument("dimension must be non-negative");
  switch (g.kind) {
    case GeometryKind::affine: return ipow(g.q, d);
    case GeometryKind::projective: return BigInt((ipow(g.q, d + 1) - 1) / (g.q - 1));
    case GeometryKind::disintegrated: return BigInt(d);
  }
  return 0;
}

Rational closure_ratio(const GeometrySpec& g, long d, long k) {
  if (k < 0 || k > d) throw std::invalid_argument("codimension must lie in [0, d]");
  const BigInt a = closed_set_size(g, d);
  if (a == 0) return Rational(1);
  Rational r(closed_set_size(g, d - k), a);
  r.canonicalize();
  return r;
}

std::optional<unsigned> min_k_for_delta(const GeometrySpec& g, const Rational& delta) {
  g.validate();
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0,1)");
  if (g.kind == GeometryKind::disintegrated) return std::nullopt;
  unsigned k = 1;
  while (delta * Rational(ipow(g.q, k)) < 1) ++k;
  if (!verify_k_for_delta(g, delta, k)) throw std::logic_error("k(delta) failed its ratio check");
  return k;
}

bool verify_k_for_delta(const GeometrySpec& g, const Rational& delta, unsigned k, unsigned max_d) {
  for (long d = 0; d <= static_cast<long>(max_d); ++d)
    for (long j = k; j <= d; ++j)
      if (closure_ratio(g, d, j) > delta) return false;
  return true;
}

Rational epsilon_lower_bound(long n, bool modular) {
  if (n < 1) throw std::invalid_argument("tuple arity must be at least 1");
  Rational r(1, modular ? n : 2 * n);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------

std::size_t Subspace::size() const {
  std::size_t n = 0;
  for (auto w : bits) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Subspace::subset_of(const Subspace& other) const {
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & ~other.bits[i]) return false;
  return true;
}

namespace {

// Addition and scalar tables on the point codes of F_q^dim.
struct CodeTables {
  Point points;
  std::vector<std::uint32_t> add;
  std::vector<std::uint32_t> mul;

  CodeTables(unsigned q, unsigned dim) : points(fq_window(q, dim)) {
    if (points > 1024) throw std::invalid_argument("subspace enumeration is limited to 1024 points");
    add.resize(points * points);
    mul.resize(q * points);
    for (Point x = 0; x < points; ++x) {
      const FqVector u = FqVector::from_code(q, x);
      for (Point y = 0; y < points; ++y) add[x * points + y] = static_cast<std::uint32_t>((u + FqVector::from_code(q, y)).code());
      for (unsigned c = 0; c < q; ++c) mul[c * points + x] = static_cast<std::uint32_t>(scale(c, u).code());
    }
  }
};

void enumerate_rref(unsigned q, unsigned dim, const CodeTables& t, std::vector<Subspace>& out) {
  const std::size_t words = static_cast<std::size_t>((t.points + 63) / 64);
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    std::vector<unsigned> pivots;
    for (unsigned c = 0; c < dim; ++c)
      if (mask & (1u << c)) pivots.push_back(c);
    // Free entries: row r, column j > pivot r, j not a pivot.
    std::vector<std::pair<unsigned, unsigned>> free;
    for (unsigned r = 0; r < pivots.size(); ++r)
      for (unsigned j = pivots[r] + 1; j < dim; ++j)
        if (!(mask & (1u << j))) free.emplace_back(r, j);
    std::vector<unsigned> values(free.size(), 0);
    while (true) {
      std::vector<Point> rows;
      for (unsigned r = 0; r < pivots.size(); ++r) {
        std::vector<unsigned> c(dim, 0);
        c[pivots[r]] = 1;
        for (std::size_t f = 0; f < free.size(); ++f)
          if (free[f].first == r) c[free[f].second] = values[f];
        rows.push_back(FqVector::from_coords(q, c).code());
      }
      std::vector<Point> span{0};
      for (Point row : rows) {
        std::vector<Point> next;
        next.reserve(span.size() * q);
        for (unsigned c = 0; c < q; ++c)
          for (Point e : span) next.push_back(t.add[e * t.points + t.mul[c * t.points + row]]);
        span = std::move(next);
      }
      Subspace s{static_cast<unsigned>(pivots.size()), std::vector<std::uint64_t>(words, 0)};
      for (Point e : span) s.bits[e / 64] |= std::uint64_t{1} << (e % 64);
      out.push_back(std::move(s));
      std::size_t k = 0;
      while (k < values.size() && ++values[k] == q) values[k++] = 0;
      if (k == values.size()) break;
    }
  }
}

std::vector<Point> projective_points(unsigned q, const std::vector<Point>& set) {
  std::vector<Point> out;
  for (Point x : set) {
    if (x == 0) continue;
    const FqVector v = FqVector::from_code(q, x);
    if (*std::find_if(v.coords.begin(), v.coords.end(), [](unsigned c) { return c != 0; }) == 1) out.push_back(x);
  }
  return out;
}

bool is_flat(unsigned q, const std::vector<Point>& set, bool through_origin) {
  if (set.empty()) return !through_origin;
  const FqVector base = through_origin ? FqVector::zero(q) : FqVector::from_code(q, set.front());
  std::vector<FqVector> diffs;
  for (Point x : set) diffs.push_back(FqVector::from_code(q, x) - base);
  std::vector<Point> span = enumerate_span(q, diffs);
  std::set<Point> shifted;
  for (Point x : span) shifted.insert((FqVector::from_code(q, x) + base).code());
  return std::set<Point>(set.begin(), set.end()) == shifted;
}

}  // namespace

std::vector<Subspace> enumerate_subspaces(unsigned q, unsigned dim) {
  FiniteField::get(q);
  CodeTables t(q, dim);
  std::vector<Subspace> out;
  enumerate_rref(q, dim, t, out);
  return out;
}

void ClosedSetChain::validate() const {
  geometry.validate();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& s = sets[i];
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("closed set " + std::to_string(i) + " must be sorted without repeats");
    if (geometry.kind != GeometryKind::disintegrated &&
        !is_flat(geometry.q, s, geometry.kind == GeometryKind::projective))
      throw std::invalid_argument("set " + std::to_string(i) + " is not closed in the geometry");
    if (i > 0) {
      const auto& prev = sets[i - 1];
      if (!std::includes(s.begin(), s.end(), prev.begin(), prev.end()))
        throw std::invalid_argument("chain is not increasing at " + std::to_string(i));
    }
  }
}

AveragingWitness averaging_witness(const ClosedSetChain& chain, const std::vector<TraceCell>& traces,
                                   const RationalSet& C) {
  if (chain.sets.empty()) throw std::invalid_argument("empty chain");
  chain.validate();
  std::vector<Rational> weight;
  std::vector<std::set<Point>> closed;
  for (const auto& t : traces) {
    weight.push_back(measure(t.cell.intersect(C)));
    closed.emplace_back(t.closed.begin(), t.closed.end());
  }
  std::optional<AveragingWitness> best;
  for (std::size_t i = 0; i < chain.sets.size(); ++i) {
    const auto points = chain.geometry.kind == GeometryKind::projective ? projective_points(chain.geometry.q, chain.sets[i])
                                                                        : chain.sets[i];
    if (points.empty()) continue;
    Rational total{0};
    std::optional<std::pair<Point, Rational>> local;
    for (Point b : points) {
      Rational m{0};
      for (std::size_t c = 0; c < traces.size(); ++c)
        if (closed[c].count(b)) m += weight[c];
      total += m;
      if (!local || m < local->second) local = {b, m};
    }
    if (!best || local->second < best->measure) {
      Rational avg = total / Rational(static_cast<long>(points.size()));
      best = AveragingWitness{i, local->first, local->second, avg};
    }
  }
  if (!best) throw std::invalid_argument("chain has no points");
  return *best;
}

// ---------------------------------------------------------------------------

SearchTooLarge::SearchTooLarge(const std::string& count)
    : std::runtime_error("search space of " + count + " candidates exceeds the 10^7 guard") {}

std::vector<std::vector<Point>> general_linear_group(unsigned q, unsigned dim) {
  const Point P = fq_window(q, dim);
  const Point matrices = fq_window(P > 0 ? static_cast<unsigned>(P) : 1, dim);
  if (matrices > (1u << 22)) throw std::invalid_argument("GL enumeration too large");
  std::vector<std::vector<Point>> out;
  for (Point m = 0; m < matrices; ++m) {
    // Column j of the matrix is the vector with code digit j of m in base P.
    std::vector<FqVector> cols;
    Point rest = m;
    for (unsigned j = 0; j < dim; ++j) {
      cols.push_back(FqVector::from_code(q, rest % P));
      rest /= P;
    }
    if (rank(q, cols) != dim) continue;
    std::vector<Point> table(static_cast<std::size_t>(P));
    for (Point x = 0; x < P; ++x) {
      const FqVector v = FqVector::from_code(q, x);
      FqVector y = FqVector::zero(q);
      for (unsigned j = 0; j < dim; ++j) y = y + scale(v.at(j), cols[j]);
      table[x] = y.code();
    }
    out.push_back(std::move(table));
  }
  return out;
}

namespace {

struct ColumnScore {
  unsigned forward;
  unsigned backward;
};

SearchResult search_group(const std::vector<std::vector<Point>>& group, const std::vector<bool>& in_w, unsigned grid,
                          unsigned jobs) {
  if (grid < 1) throw std::invalid_argument("grid must be at least 1");
  const std::size_t G = group.size();
  const std::size_t P = in_w.size();
  BigInt candidates;
  mpz_ui_pow_ui(candidates.get_mpz_t(), G, static_cast<unsigned long>(grid) * grid);
  if (candidates > 10'000'000) throw SearchTooLarge(candidates.get_str());

  std::vector<std::vector<Point>> inv(G, std::vector<Point>(P));
  for (std::size_t a = 0; a < G; ++a)
    for (Point x = 0; x < P; ++x) inv[a][group[a][x]] = x;

  std::size_t T = 1;
  for (unsigned r = 0; r < grid; ++r) T *= G;
  std::vector<ColumnScore> scores(T);
  std::vector<std::size_t> rows(grid);
  std::vector<Point> hits;
  for (std::size_t t = 0; t < T; ++t) {
    std::size_t rest = t;
    for (unsigned r = 0; r < grid; ++r) {
      rows[r] = rest % G;
      rest /= G;
    }
    // forward: worst v of rows minus the largest agreement on one w in W.
    unsigned worst_fwd = 0;
    for (Point v = 0; v < P; ++v) {
      hits.clear();
      for (unsigned r = 0; r < grid; ++r)
        if (in_w[group[rows[r]][v]]) hits.push_back(group[rows[r]][v]);
      std::sort(hits.begin(), hits.end());
      unsigned best = 0;
      for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        while (j < hits.size() && hits[j] == hits[i]) ++j;
        best = std::max(best, static_cast<unsigned>(j - i));
        i = j;
      }
      worst_fwd = std::max(worst_fwd, grid - best);
    }
    unsigned worst_bwd = 0;
    for (Point w = 0; w < P; ++w) {
      if (!in_w[w]) continue;
      hits.clear();
      for (unsigned r = 0; r < grid; ++r) hits.push_back(inv[rows[r]][w]);
      std::sort(hits.begin(), hits.end());
      unsigned best = 0;
      for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        while (j < hits.size() && hits[j] == hits[i]) ++j;
        best = std::max(best, static_cast<unsigned>(j - i));
        i = j;
      }
      worst_bwd = std::max(worst_bwd, grid - best);
    }
    scores[t] = {worst_fwd, worst_bwd};
  }

  // Enumerate every assignment of column tuples; workers split the first column.
  struct Best {
    unsigned value = UINT32_MAX;
    std::vector<std::size_t> combo;
    unsigned fwd = 0, bwd = 0;
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(T)));
  std::vector<Best> partial(workers);
  auto run = [&](unsigned w) {
    Best& b = partial[w];
    std::vector<std::size_t> combo(grid, 0);
    for (std::size_t first = w; first < T; first += workers) {
      combo.assign(grid, 0);
      combo[0] = first;
      while (true) {
        unsigned f = 0, bk = 0;
        for (unsigned c = 0; c < grid; ++c) {
          f += scores[combo[c]].forward;
          bk += scores[combo[c]].backward;
        }
        const unsigned v = std::max(f, bk);
        if (v < b.value || (v == b.value && combo < b.combo)) b = {v, combo, f, bk};
        unsigned k = 1;
        while (k < grid && ++combo[k] == T) combo[k++] = 0;
        if (k >= grid) break;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  Best best;
  for (const auto& b : partial)
    if (b.value < best.value || (b.value == best.value && b.combo < best.combo)) best = b;

  SearchResult out;
  out.gap = Rational(best.value, grid * grid);
  out.gap.canonicalize();
  out.candidates = candidates;
  out.grid = grid;
  out.group_order = G;
  out.forward = best.fwd;
  out.backward = best.bwd;
  for (unsigned c = 0; c < grid; ++c) {
    std::size_t rest = best.combo[c];
    for (unsigned r = 0; r < grid; ++r) {
      out.best.push_back(rest % G);
      rest /= G;
    }
  }
  return out;
}

}  // namespace

SearchResult exhaustive_pair_search(unsigned q, unsigned dim, unsigned grid, const std::vector<FqVector>& w_gens,
                                    unsigned jobs) {
  const Point P = fq_window(q, dim);
  std::vector<bool> in_w(static_cast<std::size_t>(P), false);
  for (Point x : enumerate_span(q, w_gens)) {
    if (x >= P) throw std::invalid_argument("W must lie inside F_q^dim");
    in_w[x] = true;
  }
  // Guard before enumerating the group itself.
  BigInt order = 1;
  for (unsigned i = 0; i < dim; ++i) order *= BigInt(static_cast<unsigned long>(P)) - BigInt(fq_window(q, i));
  BigInt candidates;
  mpz_pow_ui(candidates.get_mpz_t(), order.get_mpz_t(), static_cast<unsigned long>(grid) * grid);
  if (candidates > 10'000'000) throw SearchTooLarge(candidates.get_str());
  return search_group(general_linear_group(q, dim), in_w, grid, jobs);
}

SearchResult exhaustive_pure_search(unsigned size, unsigned w_size, unsigned grid, unsigned jobs) {
  if (size < 1 || size > 8 || w_size > size) throw std::invalid_argument("pure search needs 1 <= w_size <= size <= 8");
  std::vector<Point> perm(size);
  for (unsigned i = 0; i < size; ++i) perm[i] = i;
  std::vector<std::vector<Point>> group;
  do group.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<bool> in_w(size, false);
  for (unsigned i = 0; i < w_size; ++i) in_w[i] = true;
  return search_group(group, in_w, grid, jobs);
}

}  // namespace belle
