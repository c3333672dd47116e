#include "belle/serialization.hpp"

#include <algorithm>

namespace belle {

MalformedInput::MalformedInput(const std::string& path, const std::string& what)
    : std::invalid_argument(path + ": " + what) {}

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw MalformedInput(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw MalformedInput(path, std::string("missing \"") + key + "\"");
  return *it;
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw MalformedInput(path, "expected an array");
  return j;
}

std::uint64_t unsigned_from_json(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw MalformedInput(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string string_from_json(const json& j, const std::string& path) {
  if (!j.is_string()) throw MalformedInput(path, "expected a string");
  return j.get<std::string>();
}

template <class Fn>
auto guarded(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const MalformedInput&) {
    throw;
  } catch (const json::exception& e) {
    throw MalformedInput(path, e.what());
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(path, e.what());
  }
}

std::string sub(const std::string& path, const std::string& key) { return path + "." + key; }
std::string sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

json rects_to_json(const RationalSet& s) {
  json out = json::array();
  for (const auto& r : s.rects())
    out.push_back({to_json(r.omega.lo), to_json(r.omega.hi), to_json(r.omega_prime.lo), to_json(r.omega_prime.hi)});
  return out;
}

RationalSet rects_from_json(const json& j, const std::string& path) {
  std::vector<Rect> rects;
  for (std::size_t i = 0; i < array_at(j, path).size(); ++i) {
    const auto& r = j[i];
    const std::string p = sub(path, i);
    if (!r.is_array() || r.size() != 4) throw MalformedInput(p, "a rectangle is [x0, x1, y0, y1]");
    Rational c[4];
    for (std::size_t k = 0; k < 4; ++k) c[k] = rational_from_json(r[k], sub(p, k));
    if (!(0 <= c[0] && c[0] < c[1] && c[1] <= 1 && 0 <= c[2] && c[2] < c[3] && c[3] <= 1))
      throw MalformedInput(p, "rectangle outside the unit square or empty");
    rects.push_back(make_rect(c[0], c[1], c[2], c[3]));
  }
  return RationalSet::from_rects(rects);
}

template <class V, class Fn>
StepMap<V> step_map_from_json(const json& j, const std::string& path, Fn&& value) {
  const json& cells = field(j, "cells", path);
  std::vector<typename StepMap<V>::Cell> out;
  for (std::size_t i = 0; i < array_at(cells, sub(path, "cells")).size(); ++i) {
    const std::string p = sub(sub(path, "cells"), i);
    out.push_back({rects_from_json(field(cells[i], "rects", p), sub(p, "rects")),
                   value(field(cells[i], "value", p), sub(p, "value"))});
  }
  return guarded(path, [&] { return StepMap<V>::from_cells(std::move(out)); });
}

std::vector<Point> points_from_json(const json& j, const std::string& path) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < array_at(j, path).size(); ++i) out.push_back(unsigned_from_json(j[i], sub(path, i)));
  return out;
}

}  // namespace

json to_json(const Rational& r) { return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}}; }

Rational rational_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return guarded(path, [&] { return parse_rational(j.get<std::string>()); });
  if (j.is_object()) {
    auto part = [&](const char* key) -> std::string {
      const json& v = field(j, key, path);
      if (v.is_number_integer()) return std::to_string(v.get<long>());
      return string_from_json(v, sub(path, key));
    };
    return guarded(path, [&] { return parse_rational(part("num") + "/" + part("den")); });
  }
  throw MalformedInput(path, "expected a rational");
}

json to_json(const RationalSet& s) { return {{"rects", rects_to_json(s)}}; }

RationalSet rational_set_from_json(const json& j, const std::string& path) {
  return rects_from_json(field(j, "rects", path), sub(path, "rects"));
}

json to_json(const PiecewiseConstant& p) {
  json breaks = json::array(), values = json::array();
  for (const auto& piece : p.pieces()) {
    if (piece.omega.lo != 0) breaks.push_back(to_json(piece.omega.lo));
    values.push_back(to_json(piece.value));
  }
  return {{"breaks", breaks}, {"values", values}};
}

PiecewiseConstant piecewise_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || j.contains("num")) return PiecewiseConstant::constant(rational_from_json(j, path));
  std::vector<Rational> breaks, values;
  const json& b = j.contains("breaks") ? j["breaks"] : json::array();
  for (std::size_t i = 0; i < array_at(b, sub(path, "breaks")).size(); ++i)
    breaks.push_back(rational_from_json(b[i], sub(sub(path, "breaks"), i)));
  const json& v = field(j, "values", path);
  for (std::size_t i = 0; i < array_at(v, sub(path, "values")).size(); ++i)
    values.push_back(rational_from_json(v[i], sub(sub(path, "values"), i)));
  return guarded(path, [&] { return PiecewiseConstant::from_steps(breaks, values); });
}

json to_json(const StepMap<Point>& f) {
  json cells = json::array();
  for (const auto& c : f.cells()) cells.push_back({{"rects", rects_to_json(c.region)}, {"value", c.value}});
  return {{"cells", cells}};
}

StepMap<Point> random_variable_from_json(const json& j, const std::string& path) {
  if (j.is_number_unsigned() || j.is_number_integer()) return StepMap<Point>::constant(unsigned_from_json(j, path));
  return step_map_from_json<Point>(j, path, [](const json& v, const std::string& p) { return unsigned_from_json(v, p); });
}

Domain domain_from_name(const std::string& name) {
  if (name == "pure") return Domain::natural();
  if (name.size() > 2 && name.rfind("fq", 0) == 0) {
    const std::string digits = name.substr(2);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) && digits.size() < 6)
      return Domain::fq(static_cast<unsigned>(std::stoul(digits)));
  }
  throw std::invalid_argument("unknown structure '" + name + "'");
}

WindowInjection endo_from_json(const json& j, const std::string& path) {
  if (j.is_string()) return guarded(path, [&] { return endo_from_text(j.get<std::string>()); });
  const std::string kind = string_from_json(field(j, "kind", path), sub(path, "kind"));
  auto child = [&](const char* key) { return endo_from_json(field(j, key, path), sub(path, key)); };
  auto q_of = [&] { return static_cast<unsigned>(unsigned_from_json(field(j, "q", path), sub(path, "q"))); };
  return guarded(path, [&]() -> WindowInjection {
    if (kind == "identity") return j.contains("q") ? identity_endo(Domain::fq(q_of())) : identity_endo();
    if (kind == "successor") return successor_endo();
    if (kind == "shift") return shift_endo(unsigned_from_json(field(j, "k", path), sub(path, "k")));
    if (kind == "table") {
      std::vector<std::pair<Point, Point>> table;
      const json& t = field(j, "table", path);
      for (std::size_t i = 0; i < array_at(t, sub(path, "table")).size(); ++i) {
        const std::string p = sub(sub(path, "table"), i);
        if (!t[i].is_array() || t[i].size() != 2) throw MalformedInput(p, "a table entry is [x, y]");
        table.emplace_back(unsigned_from_json(t[i][0], p), unsigned_from_json(t[i][1], p));
      }
      return table_endo(std::move(table));
    }
    if (kind == "linear") {
      const unsigned q = q_of();
      std::vector<FqVector> images;
      const json& imgs = field(j, "images", path);
      for (std::size_t i = 0; i < array_at(imgs, sub(path, "images")).size(); ++i) {
        std::vector<unsigned> coords;
        for (const auto& c : array_at(imgs[i], sub(sub(path, "images"), i)))
          coords.push_back(static_cast<unsigned>(unsigned_from_json(c, sub(sub(path, "images"), i))));
        images.push_back(FqVector::from_coords(q, coords));
      }
      const std::size_t s = j.contains("tail_shift") ? unsigned_from_json(j["tail_shift"], sub(path, "tail_shift")) : 0;
      return linear_endo_from_basis_images(q, std::move(images), s);
    }
    if (kind == "compose") return compose(child("outer"), child("inner"));
    if (kind == "inverse") return inverse(child("of"));
    if (kind == "approx") {
      const auto n = unsigned_from_json(field(j, "n", path), sub(path, "n"));
      const auto i = unsigned_from_json(field(j, "i", path), sub(path, "i"));
      if (n == 0 || i >= n) throw MalformedInput(path, "need 0 <= i < n");
      return approximate_by_automorphisms(child("tau"), n)[i];
    }
    if (kind == "factor") {
      const Point window = unsigned_from_json(field(j, "window", path), sub(path, "window"));
      auto g = factor_through(child("h"), child("rep"), window);
      if (!g) throw MalformedInput(path, "h does not factor through rep on the window");
      return *g;
    }
    if (kind == "product") return product_endo(child("left"), child("right"));
    if (kind == "component") {
      const std::string side = string_from_json(field(j, "side", path), sub(path, "side"));
      if (side != "left" && side != "right") throw MalformedInput(sub(path, "side"), "expected left or right");
      return product_component(child("of"), side == "right",
                               domain_from_name(string_from_json(field(j, "domain", path), sub(path, "domain"))));
    }
    if (kind == "wreath") {
      std::map<Point, WindowInjection> coords;
      const json& cs = field(j, "coords", path);
      for (std::size_t i = 0; i < array_at(cs, sub(path, "coords")).size(); ++i) {
        const std::string p = sub(sub(path, "coords"), i);
        if (!cs[i].is_array() || cs[i].size() != 2) throw MalformedInput(p, "a coordinate is [b, endo]");
        coords.emplace(unsigned_from_json(cs[i][0], p), endo_from_json(cs[i][1], sub(p, 1)));
      }
      return wreath_endo(child("top"), std::move(coords),
                         domain_from_name(string_from_json(field(j, "fibre", path), sub(path, "fibre"))));
    }
    if (kind == "blocks") {
      std::vector<Block> blocks;
      const json& bs = field(j, "blocks", path);
      for (std::size_t i = 0; i < array_at(bs, sub(path, "blocks")).size(); ++i) {
        const std::string p = sub(sub(path, "blocks"), i);
        if (!bs[i].is_array() || bs[i].size() != 2) throw MalformedInput(p, "a block is [modulus, residue]");
        blocks.push_back({unsigned_from_json(bs[i][0], p), unsigned_from_json(bs[i][1], p)});
      }
      std::vector<std::size_t> perm;
      for (const auto& k : array_at(field(j, "perm", path), sub(path, "perm")))
        perm.push_back(unsigned_from_json(k, sub(path, "perm")));
      return block_permutation(std::move(blocks), std::move(perm));
    }
    throw MalformedInput(sub(path, "kind"), "unknown endomorphism kind '" + kind + "'");
  });
}

WindowInjection endo_from_text(const std::string& text, Domain context) {
  const std::string path = "endo";
  if (!text.empty() && text.front() == '{') {
    json j = guarded(path, [&] { return json::parse(text); });
    return endo_from_json(j, path);
  }
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto number = [&](const std::string& s) -> Point {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 18)
      throw MalformedInput(path, "expected a number in '" + text + "'");
    return std::stoull(s);
  };
  if (head == "identity") return identity_endo(arg.empty() ? context : domain_from_name(arg));
  if (head == "successor" && arg.empty()) return successor_endo();
  if (head == "shift") return shift_endo(number(arg));
  if (head == "table") {
    json j = guarded(path, [&] { return json::parse(arg); });
    return endo_from_json(json{{"kind", "table"}, {"table", j}}, path);
  }
  if (head == "basis-shift") {
    if (context.kind != DomainKind::fq_vectors) throw MalformedInput(path, "basis-shift needs a vector space");
    return basis_shift_endo(context.q, arg.empty() ? 1 : number(arg));
  }
  if (arg.empty() && (head == "swap" || head == "rot3" || head == "rot3^2" || head == "id"))
    return named_coset_rep(head);
  throw MalformedInput(path, "unknown endomorphism '" + text + "'");
}

json to_json(const RandomEndo& h) {
  json cells = json::array();
  for (const auto& c : h.map().cells()) cells.push_back({{"rects", rects_to_json(c.region)}, {"value", c.value.descriptor()}});
  return {{"cells", cells}};
}

RandomEndo random_endo_from_json(const json& j, const std::string& path) {
  if (j.is_string() || (j.is_object() && j.contains("kind"))) return RandomEndo::constant(endo_from_json(j, path));
  auto map = step_map_from_json<WindowInjection>(j, path, [](const json& v, const std::string& p) {
    return endo_from_json(v, p);
  });
  return guarded(path, [&] { return RandomEndo(std::move(map)); });
}

json to_json(const PairModel& p) {
  json out{{"structure", p.domain.kind == DomainKind::natural ? "pure" : "fq"}, {"window", p.window}};
  if (p.domain.kind == DomainKind::fq_vectors) {
    out["q"] = p.domain.q;
    out["dim"] = p.dim;
  }
  out["image"] = to_json(p.image);
  return out;
}

PairModel pair_from_json(const json& j, Point default_window, const std::string& path) {
  const std::string structure = string_from_json(field(j, "structure", path), sub(path, "structure"));
  PairModel p;
  if (structure == "pure") {
    p.domain = Domain::natural();
    p.window = j.contains("window") ? unsigned_from_json(j["window"], sub(path, "window")) : default_window;
    if (p.window == 0) throw MalformedInput(sub(path, "window"), "window must be positive");
  } else if (structure == "fq") {
    const auto q = unsigned_from_json(field(j, "q", path), sub(path, "q"));
    p.domain = guarded(sub(path, "q"), [&] { return Domain::fq(static_cast<unsigned>(q)); });
    p.dim = static_cast<unsigned>(unsigned_from_json(field(j, "dim", path), sub(path, "dim")));
    if (p.dim == 0 || p.dim > 8) throw MalformedInput(sub(path, "dim"), "dimension must be in [1, 8]");
    p.window = fq_window(p.domain.q, p.dim);
  } else {
    throw MalformedInput(sub(path, "structure"), "expected \"pure\" or \"fq\"");
  }
  const json& image = field(j, "image", path);
  if (image.is_string()) p.image = RandomEndo::constant(guarded(sub(path, "image"), [&] {
                           return endo_from_text(image.get<std::string>(), p.domain);
                         }));
  else
    p.image = random_endo_from_json(image, sub(path, "image"));
  if (!(p.image.domain() == p.domain)) throw MalformedInput(sub(path, "image"), "image acts on another structure");
  return p;
}

PairModel pair_from_text(const std::string& text, Point default_window) {
  if (!text.empty() && text.front() == '{') {
    json j = guarded("pair", [&] { return json::parse(text); });
    return pair_from_json(j, default_window, "pair");
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw MalformedInput("pair", "expected <structure>:<endo>, got '" + text + "'");
  const std::string structure = text.substr(0, colon);
  json j;
  j["image"] = text.substr(colon + 1);
  if (structure == "pure") {
    j["structure"] = "pure";
  } else {
    const auto x = structure.find('x');
    if (structure.rfind("fq", 0) != 0 || x == std::string::npos)
      throw MalformedInput("pair", "expected pure or fq<Q>x<D>, got '" + structure + "'");
    j["structure"] = "fq";
    try {
      j["q"] = std::stoul(structure.substr(2, x - 2));
      j["dim"] = std::stoul(structure.substr(x + 1));
    } catch (const std::exception&) {
      throw MalformedInput("pair", "expected fq<Q>x<D>, got '" + structure + "'");
    }
  }
  return pair_from_json(j, default_window, "pair");
}

json to_json(const DefectProfile& d) {
  json hist = json::array();
  for (const auto& [defect, count] : d.histogram) hist.push_back({defect, count});
  return {{"max_defect", d.max_defect}, {"histogram", hist}, {"undetermined", d.undetermined.size()}};
}

json to_json(const GapBounds& g) { return {{"upper", to_json(g.upper)}, {"lower", to_json(g.lower)}}; }

json to_json(const SearchResult& s) {
  return {{"gap", to_json(s.gap)},   {"candidates", s.candidates.get_str()},
          {"grid", s.grid},          {"group_order", s.group_order},
          {"best", s.best},          {"forward", s.forward},
          {"backward", s.backward}};
}

json to_json(const Certificate& c) {
  json out{{"certified", c.certified}, {"reason", c.reason},          {"bound", to_json(c.bound)},
           {"gap", to_json(c.gap)},    {"strips", c.strips},          {"g", to_json(c.g)}};
  if (c.search) out["search"] = to_json(*c.search);
  return out;
}

json to_json(const Budget& b) {
  json parts = json::array();
  for (const auto& p : b.parts) parts.push_back(to_json(p));
  json out{{"label", b.label}, {"allocated", to_json(b.allocated)}, {"certified", to_json(b.certified)}};
  if (!parts.empty()) out["parts"] = parts;
  if (b.residual != 0) out["residual"] = to_json(b.residual);
  return out;
}

json to_json(const RealizationSpec& spec) {
  json groups = json::array();
  for (const auto& g : spec.groups) {
    json pieces = json::array();
    for (const auto& p : g.pieces) pieces.push_back({{"value", p.value}, {"density", to_json(p.density)}});
    groups.push_back({{"home", to_json(g.home)}, {"pieces", pieces}});
  }
  return {{"groups", groups}};
}

RealizationSpec realization_from_json(const json& j, const std::string& path) {
  RealizationSpec spec;
  const json& groups = field(j, "groups", path);
  for (std::size_t c = 0; c < array_at(groups, sub(path, "groups")).size(); ++c) {
    const std::string gp = sub(sub(path, "groups"), c);
    RealizationGroup g;
    g.home = rational_set_from_json(field(groups[c], "home", gp), sub(gp, "home"));
    const json& pieces = field(groups[c], "pieces", gp);
    for (std::size_t q = 0; q < array_at(pieces, sub(gp, "pieces")).size(); ++q) {
      const std::string pp = sub(sub(gp, "pieces"), q);
      g.pieces.push_back({unsigned_from_json(field(pieces[q], "value", pp), sub(pp, "value")),
                          piecewise_from_json(field(pieces[q], "density", pp), sub(pp, "density"))});
    }
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

std::vector<ProbabilityEvent> events_from_json(const json& j, const std::string& path) {
  std::vector<ProbabilityEvent> events;
  for (std::size_t e = 0; e < array_at(j, path).size(); ++e) {
    const std::string p = sub(path, e);
    const json& strip = field(j[e], "strip", p);
    if (!strip.is_array() || strip.size() != 2) throw MalformedInput(sub(p, "strip"), "a strip is [lo, hi]");
    const Rational lo = rational_from_json(strip[0], sub(p, "strip")), hi = rational_from_json(strip[1], sub(p, "strip"));
    if (!(0 <= lo && lo < hi && hi <= 1)) throw MalformedInput(sub(p, "strip"), "need 0 <= lo < hi <= 1");
    ProbabilityEvent ev{RationalSet::vertical_strip({lo, hi}), [](Point) { return true; },
                        j[e].contains("label") ? string_from_json(j[e]["label"], sub(p, "label")) : "event " + std::to_string(e)};
    if (j[e].contains("values")) {
      auto accepted = points_from_json(j[e]["values"], sub(p, "values"));
      std::sort(accepted.begin(), accepted.end());
      ev.predicate = [accepted](Point v) { return std::binary_search(accepted.begin(), accepted.end(), v); };
    }
    events.push_back(std::move(ev));
  }
  return events;
}

json to_json(const IdentityReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"event", c.event},
                      {"group", c.group},
                      {"measured", to_json(c.measured)},
                      {"predicted", to_json(c.predicted)},
                      {"ok", c.ok}});
  return {{"passed", r.passed}, {"checks", checks}};
}

}  // namespace belle
