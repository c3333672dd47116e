#include "commands.hpp"

#include "belle/serialization.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef BELLE_BASELINE_DIR
#define BELLE_BASELINE_DIR "baselines"
#endif

namespace belle::cli {

namespace fs = std::filesystem;

std::string baseline_dir() {
  if (const char* env = std::getenv("BELLE_PAIRE_BASELINES"); env && *env) return env;
  return BELLE_BASELINE_DIR;
}

namespace {

struct Config {
  Point window = 64;
  unsigned grid = 2;
  std::string eps = "1/10";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string format = "json";
};

struct Refusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw MalformedInput(path, e.what());
  }
}

/// "@path" reads a file, anything else is taken literally.
std::string text_arg(const std::string& arg) {
  if (arg.empty() || arg.front() != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw MalformedInput(arg.substr(1), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rational parse_eps(const std::string& text) {
  Rational eps;
  try {
    eps = parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput("--eps", e.what());
  }
  if (eps <= 0) throw MalformedInput("--eps", "epsilon must be positive");
  return eps;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// --- approx-endo / lift -------------------------------------------------------

struct EndoArgs {
  std::string endo = "successor";
  std::string structure = "pure";
  std::size_t n = 10;
  Point preview = 12;
};

WindowInjection checked_endo(const EndoArgs& a, Point window) {
  const Domain d = [&] {
    try {
      return domain_from_name(a.structure);
    } catch (const std::invalid_argument& e) {
      throw MalformedInput("--structure", e.what());
    }
  }();
  auto tau = endo_from_text(text_arg(a.endo), d);
  if (!(tau.domain() == d)) throw MalformedInput("--endo", "acts on " + tau.domain().name() + ", not " + d.name());
  if (auto c = find_collision(tau, window)) throw *c;
  return tau;
}

int cmd_approx_endo(const Config& cfg, const EndoArgs& a, std::ostream& out) {
  const auto tau = checked_endo(a, cfg.window);
  const auto sigmas = approximate_by_automorphisms(tau, a.n);
  const auto profile = defect_profile(tau, sigmas, cfg.window);
  bool bijective = true;
  for (const auto& s : sigmas) bijective = bijective && is_automorphism_on_window(s, cfg.window);
  if (cfg.format == "csv") {
    out << "defect,points\n";
    for (const auto& [d, count] : profile.histogram) out << d << "," << count << "\n";
  } else {
    json previews = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(a.n, 4); ++i)
      previews.push_back({{"i", i},
                          {"cycles", cycle_notation(sigmas[i], std::min(a.preview, cfg.window))},
                          {"rule", sigmas[i].descriptor()}});
    json report = to_json(profile);
    report["endo"] = tau.descriptor();
    report["n"] = a.n;
    report["window"] = cfg.window;
    report["sigma_bijective"] = bijective;
    report["sigmas"] = previews;
    emit_json(out, report);
  }
  return profile.max_defect <= 1 && bijective ? ok : refused;
}

int cmd_lift(const Config& cfg, const EndoArgs& a, std::ostream& out) {
  const auto tau = checked_endo(a, cfg.window);
  const auto sigmas = approximate_by_automorphisms(tau, a.n);
  const auto profile = defect_profile(tau, sigmas, cfg.window);
  const auto lift = strip_lift(sigmas);
  const Rational distance = worst_case_distance(lift, RandomEndo::constant(tau), window_alphabet(cfg.window));
  Rational bound = Rational(profile.max_defect) / Rational(static_cast<long>(a.n));
  bound.canonicalize();
  const bool within = distance <= bound;
  if (cfg.format == "csv") {
    out << "n,distance,bound,within\n" << a.n << "," << to_string(distance) << "," << to_string(bound) << ","
        << (within ? "true" : "false") << "\n";
  } else {
    emit_json(out, {{"endo", tau.descriptor()},
                    {"n", a.n},
                    {"distance", to_json(distance)},
                    {"bound", to_json(bound)},
                    {"within", within},
                    {"lift", to_json(lift)}});
  }
  return within ? ok : refused;
}

// --- pairs ----------------------------------------------------------------------

struct PairArgs {
  std::string pair1, pair2, out_path;
  std::size_t probes = 8;
};

int cmd_pair_certify(const Config& cfg, const PairArgs& a, std::ostream& out) {
  const auto p1 = pair_from_text(text_arg(a.pair1), cfg.window);
  const auto p2 = pair_from_text(text_arg(a.pair2), cfg.window);
  const Rational eps = parse_eps(cfg.eps);
  if (!(p1.domain == p2.domain) || p1.window != p2.window)
    throw MalformedInput("--pair2", "pairs live on different structures or windows");
  const auto cert = certify_epsilon_isomorphism(p1, p2, eps, cfg.grid, cfg.jobs);
  json report = to_json(cert);
  report["eps"] = to_json(eps);
  report["pair1"] = to_json(p1);
  report["pair2"] = to_json(p2);
  if (!a.out_path.empty()) {
    std::ofstream file(a.out_path);
    if (!file) throw MalformedInput(a.out_path, "cannot write file");
    file << report.dump(2) << "\n";
  }
  if (cfg.format == "csv") {
    out << "certified,bound,upper,lower,strips,reason\n"
        << (cert.certified ? "true" : "false") << "," << to_string(cert.bound) << "," << to_string(cert.gap.upper) << ","
        << to_string(cert.gap.lower) << "," << cert.strips << "," << csv_field(cert.reason) << "\n";
  } else {
    emit_json(out, report);
  }
  return cert.certified ? ok : refused;
}

int cmd_pair_distance(const Config& cfg, const PairArgs& a, std::ostream& out) {
  const auto p1 = pair_from_text(text_arg(a.pair1), cfg.window);
  const auto p2 = pair_from_text(text_arg(a.pair2), cfg.window);
  if (!(p1.domain == p2.domain) || p1.window != p2.window)
    throw MalformedInput("--pair2", "pairs live on different structures or windows");
  const auto gap = hausdorff_gap(p1.image, p2.image, window_alphabet(p1.window), a.probes, cfg.seed);
  if (cfg.format == "csv") {
    out << "upper,lower\n" << to_string(gap.upper) << "," << to_string(gap.lower) << "\n";
  } else {
    json report = to_json(gap);
    report["window"] = p1.window;
    report["probes"] = a.probes;
    report["seed"] = cfg.seed;
    emit_json(out, report);
  }
  return ok;
}

// --- compose ---------------------------------------------------------------------

struct ComposeArgs {
  std::string expr;
  std::string endo_file;
};

void budget_rows(const Budget& b, const std::string& prefix, std::ostream& out) {
  const std::string label = prefix.empty() ? b.label : prefix + "/" + b.label;
  out << csv_field(label) << "," << to_string(b.allocated) << "," << to_string(b.certified) << ","
      << to_string(b.residual) << "\n";
  for (const auto& p : b.parts) budget_rows(p, label, out);
}

int cmd_compose(const Config& cfg, const ComposeArgs& a, std::ostream& out) {
  const Rational eps = parse_eps(cfg.eps);
  Presentation P;
  try {
    P = parse_presentation(a.expr, cfg.window);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput("--expr", e.what());
  }
  const RandomEndo h = a.endo_file.empty() ? P->demo_endo() : random_endo_from_json(read_json_file(a.endo_file), a.endo_file);
  const auto approx = P->approximate(h, eps);
  const Rational measured = measured_distance(*P, h, approx);
  const bool within = measured <= eps && approx.bound <= eps;
  if (cfg.format == "csv") {
    out << "label,allocated,certified,residual\n";
    budget_rows(approx.budget, "", out);
    out << "measured," << to_string(measured) << ",,\n";
  } else {
    emit_json(out, {{"expression", P->describe()},
                    {"eps", to_json(eps)},
                    {"bound", to_json(approx.bound)},
                    {"measured", to_json(measured)},
                    {"within", within},
                    {"cells", approx.result.size()},
                    {"budget", to_json(approx.budget)}});
  }
  return within ? ok : refused;
}

// --- bound -----------------------------------------------------------------------------

struct BoundArgs {
  std::string geometry = "affine";
  unsigned q = 2;
  long n_max = 4;
  std::vector<std::string> deltas{"1/2", "1/4", "1/8"};
};

int cmd_bound(const Config& cfg, const BoundArgs& a, std::ostream& out) {
  GeometrySpec g;
  try {
    g = {parse_geometry_kind(a.geometry), a.q, 1};
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw MalformedInput("--geometry", e.what());
  }
  if (a.n_max < 1) throw MalformedInput("--n-max", "must be at least 1");
  json rows = json::array(), ks = json::array();
  std::ostringstream csv;
  csv << "n,bound,modular_bound\n";
  for (long n = 1; n <= a.n_max; ++n) {
    const Rational b = epsilon_lower_bound(n, false), m = epsilon_lower_bound(n, true);
    rows.push_back({{"n", n}, {"bound", to_json(b)}, {"modular_bound", to_json(m)}});
    csv << n << "," << to_string(b) << "," << to_string(m) << "\n";
  }
  csv << "\ndelta,k\n";
  for (const auto& text : a.deltas) {
    Rational delta;
    try {
      delta = parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw MalformedInput("--delta", e.what());
    }
    if (delta <= 0 || delta >= 1) throw MalformedInput("--delta", "delta must lie in (0, 1)");
    const auto k = min_k_for_delta(g, delta);
    json row{{"delta", to_json(delta)}, {"k", k ? json(*k) : json(nullptr)}};
    if (k) row["verified"] = verify_k_for_delta(g, delta, *k);
    ks.push_back(row);
    csv << to_string(delta) << "," << (k ? std::to_string(*k) : std::string("none")) << "\n";
  }
  if (cfg.format == "csv")
    out << csv.str();
  else
    emit_json(out, {{"geometry", to_string(g.kind)}, {"q", g.q}, {"rows", rows}, {"k_for_delta", ks}});
  return ok;
}

// --- search ------------------------------------------------------------------------------

struct SearchArgs {
  unsigned q = 2, dim = 2, w_dim = 1;
  unsigned pure_size = 0, w_size = 1;
  bool check_baselines = false;
  bool record = false;
};

struct SearchCase {
  std::string kind;
  unsigned q = 0, dim = 0, w_dim = 0, size = 0, w_size = 0, grid = 0;

  std::string name() const {
    if (kind == "pure")
      return "search-pure" + std::to_string(size) + "-w" + std::to_string(w_size) + "-g" + std::to_string(grid);
    return "search-q" + std::to_string(q) + "-d" + std::to_string(dim) + "-w" + std::to_string(w_dim) + "-g" +
           std::to_string(grid);
  }
  json to_json_params() const {
    if (kind == "pure") return {{"kind", kind}, {"size", size}, {"w_size", w_size}, {"grid", grid}};
    return {{"kind", kind}, {"q", q}, {"dim", dim}, {"w_dim", w_dim}, {"grid", grid}};
  }
  static SearchCase from_json(const json& j, const std::string& path) {
    SearchCase c;
    try {
      c.kind = j.at("kind").get<std::string>();
      c.grid = j.at("grid").get<unsigned>();
      if (c.kind == "pure") {
        c.size = j.at("size").get<unsigned>();
        c.w_size = j.at("w_size").get<unsigned>();
      } else if (c.kind == "fq") {
        c.q = j.at("q").get<unsigned>();
        c.dim = j.at("dim").get<unsigned>();
        c.w_dim = j.at("w_dim").get<unsigned>();
      } else {
        throw MalformedInput(path, "unknown search kind '" + c.kind + "'");
      }
    } catch (const json::exception& e) {
      throw MalformedInput(path, e.what());
    }
    return c;
  }
  SearchResult run(unsigned jobs) const {
    if (kind == "pure") return exhaustive_pure_search(size, w_size, grid, jobs);
    if (w_dim > dim) throw MalformedInput("--w-dim", "W cannot exceed the ambient dimension");
    std::vector<FqVector> gens;
    for (unsigned i = 0; i < w_dim; ++i) gens.push_back(FqVector::basis(q, i));
    return exhaustive_pair_search(q, dim, grid, gens, jobs);
  }
};

std::optional<Rational> stored_gap(const SearchCase& c) {
  const fs::path file = fs::path(baseline_dir()) / (c.name() + ".json");
  if (!fs::exists(file)) return std::nullopt;
  const json j = read_json_file(file.string());
  if (!j.contains("gap")) throw MalformedInput(file.string(), "baseline without a gap");
  return rational_from_json(j["gap"], file.string() + ":gap");
}

int cmd_search(const Config& cfg, const SearchArgs& a, std::ostream& out) {
  if (a.check_baselines) {
    json results = json::array();
    bool all = true;
    std::vector<fs::path> files;
    if (fs::is_directory(baseline_dir()))
      for (const auto& entry : fs::directory_iterator(baseline_dir()))
        if (entry.path().extension() == ".json" && entry.path().filename().string().rfind("search-", 0) == 0)
          files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (cfg.format == "csv") out << "baseline,expected,actual,match\n";
    for (const auto& f : files) {
      const json j = read_json_file(f.string());
      const auto c = SearchCase::from_json(j, f.string());
      const Rational expected = rational_from_json(j.at("gap"), f.string() + ":gap");
      const Rational actual = c.run(cfg.jobs).gap;
      const bool match = expected == actual;
      all = all && match;
      results.push_back({{"baseline", f.filename().string()},
                         {"expected", to_json(expected)},
                         {"actual", to_json(actual)},
                         {"match", match}});
      if (cfg.format == "csv")
        out << f.filename().string() << "," << to_string(expected) << "," << to_string(actual) << ","
            << (match ? "true" : "false") << "\n";
    }
    if (cfg.format != "csv") emit_json(out, {{"directory", baseline_dir()}, {"baselines", results}, {"all_match", all}});
    return all ? ok : refused;
  }

  SearchCase c;
  c.grid = cfg.grid;
  if (a.pure_size > 0) {
    c.kind = "pure";
    c.size = a.pure_size;
    c.w_size = a.w_size;
  } else {
    c.kind = "fq";
    c.q = a.q;
    c.dim = a.dim;
    c.w_dim = a.w_dim;
  }
  const auto result = c.run(cfg.jobs);
  json report = to_json(result);
  report["params"] = c.to_json_params();
  std::string status = "none";
  if (a.record) {
    fs::create_directories(baseline_dir());
    json stored = c.to_json_params();
    stored["gap"] = to_json(result.gap);
    std::ofstream file(fs::path(baseline_dir()) / (c.name() + ".json"));
    file << stored.dump(2) << "\n";
    status = "recorded";
  } else if (auto expected = stored_gap(c)) {
    status = *expected == result.gap ? "match" : "mismatch";
  }
  report["baseline"] = status;
  if (cfg.format == "csv")
    out << "gap,candidates,forward,backward,baseline\n"
        << to_string(result.gap) << "," << result.candidates.get_str() << "," << result.forward << "," << result.backward
        << "," << status << "\n";
  else
    emit_json(out, report);
  return status == "mismatch" ? refused : ok;
}

// --- realize / verify ---------------------------------------------------------------

struct RealizeArgs {
  std::string spec, events, f;
};

int cmd_realize(const Config& cfg, const RealizeArgs& a, std::ostream& out) {
  const auto spec = realization_from_json(read_json_file(a.spec), a.spec);
  const auto f = assemble_realization(spec);
  if (cfg.format == "csv") {
    out << "x0,x1,y0,y1,value\n";
    for (const auto& c : f.cells())
      for (const auto& r : c.region.rects())
        out << to_string(r.omega.lo) << "," << to_string(r.omega.hi) << "," << to_string(r.omega_prime.lo) << ","
            << to_string(r.omega_prime.hi) << "," << c.value << "\n";
  } else {
    emit_json(out, to_json(f));
  }
  return ok;
}

int cmd_verify(const Config& cfg, const RealizeArgs& a, std::ostream& out) {
  const auto spec = realization_from_json(read_json_file(a.spec), a.spec);
  const auto events = events_from_json(read_json_file(a.events), a.events);
  const auto f = a.f.empty() ? assemble_realization(spec) : random_variable_from_json(read_json_file(a.f), a.f);
  const auto report = verify_probability_identity(f, spec, events, cfg.jobs);
  if (cfg.format == "csv") {
    out << "event,group,measured,predicted,ok\n";
    for (const auto& c : report.checks)
      out << c.event << "," << c.group << "," << to_string(c.measured) << "," << to_string(c.predicted) << ","
          << (c.ok ? "true" : "false") << "\n";
  } else {
    emit_json(out, to_json(report));
  }
  return report.passed ? ok : refused;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized pure sets and vector spaces: approximations, certificates and bounds", "belle-paire"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--window", cfg.window, "window size N: points [0, N)")->check(CLI::PositiveNumber);
  app.add_option("--grid", cfg.grid, "grid side for the exhaustive search")->check(CLI::Range(1u, 8u));
  app.add_option("--eps", cfg.eps, "epsilon as p/q");
  app.add_option("--seed", cfg.seed, "seed for sampled probes");
  app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::function<int()> action;

  EndoArgs endo;
  auto* approx = app.add_subcommand("approx-endo", "automorphism family approximating an endomorphism");
  auto* lift = app.add_subcommand("lift", "strip lift of the family to a random automorphism");
  for (auto* sub : {approx, lift}) {
    sub->add_option("--endo", endo.endo, "endomorphism shorthand, JSON, or @file");
    sub->add_option("--structure", endo.structure, "pure or fqQ");
    sub->add_option("--n", endo.n, "family size")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  }
  approx->add_option("--preview", endo.preview, "cycle preview limit");
  approx->callback([&] { action = [&] { return cmd_approx_endo(cfg, endo, out); }; });
  lift->callback([&] { action = [&] { return cmd_lift(cfg, endo, out); }; });

  PairArgs pairs;
  auto* certify = app.add_subcommand("pair-certify", "certify an epsilon-isomorphism between two pairs");
  auto* distance = app.add_subcommand("pair-distance", "Hausdorff gap between two pair images");
  for (auto* sub : {certify, distance}) {
    sub->add_option("--pair1", pairs.pair1, "pair: pure:<endo>, fq<Q>x<D>:<endo>, JSON, or @file")->required();
    sub->add_option("--pair2", pairs.pair2, "second pair")->required();
  }
  certify->add_option("--out", pairs.out_path, "also write the certificate here");
  distance->add_option("--probes", pairs.probes, "random probes for the lower bound");
  certify->callback([&] { action = [&] { return cmd_pair_certify(cfg, pairs, out); }; });
  distance->callback([&] { action = [&] { return cmd_pair_distance(cfg, pairs, out); }; });

  ComposeArgs comp;
  auto* compose_cmd = app.add_subcommand("compose", "approximate through a product/wreath/finite-index expression");
  compose_cmd->add_option("--expr", comp.expr, "composition expression")->required();
  compose_cmd->add_option("--endo-file", comp.endo_file, "random endomorphism JSON (default: a demo)");
  compose_cmd->callback([&] { action = [&] { return cmd_compose(cfg, comp, out); }; });

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "lower bounds on epsilon and k(delta)");
  bound_cmd->add_option("--geometry", bound.geometry, "affine, projective or disintegrated");
  bound_cmd->add_option("--q", bound.q, "field size");
  bound_cmd->add_option("--n-max", bound.n_max, "largest arity n");
  bound_cmd->add_option("--delta", bound.deltas, "delta values p/q");
  bound_cmd->callback([&] { action = [&] { return cmd_bound(cfg, bound, out); }; });

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "exhaustive smallest-gap search at tiny scale");
  search_cmd->add_option("--q", search.q, "field size");
  search_cmd->add_option("--dim", search.dim, "dimension of V");
  search_cmd->add_option("--w-dim", search.w_dim, "W = span of the first w-dim basis vectors");
  search_cmd->add_option("--pure-size", search.pure_size, "search Sym(size) on a pure set instead");
  search_cmd->add_option("--w-size", search.w_size, "W = {0..w-size-1} for the pure search");
  search_cmd->add_flag("--check-baselines", search.check_baselines, "rerun every stored baseline");
  search_cmd->add_flag("--record-baseline", search.record, "store the result as a baseline");
  search_cmd->callback([&] { action = [&] { return cmd_search(cfg, search, out); }; });

  RealizeArgs real;
  auto* realize = app.add_subcommand("realize", "assemble a random variable from densities");
  auto* verify = app.add_subcommand("verify", "check the probability identities of a realization");
  for (auto* sub : {realize, verify}) sub->add_option("--spec", real.spec, "realization spec JSON")->required();
  verify->add_option("--events", real.events, "events JSON")->required();
  verify->add_option("--f", real.f, "random variable JSON (default: assemble the spec)");
  realize->callback([&] { action = [&] { return cmd_realize(cfg, real, out); }; });
  verify->callback([&] { action = [&] { return cmd_verify(cfg, real, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : malformed;
  }

  try {
    return action();
  } catch (const NotInjective& e) {
    err << "precondition failed: " << e.what() << "\n";
    return precondition;
  } catch (const DensityMismatch& e) {
    err << "precondition failed: " << e.what() << "\n";
    return precondition;
  } catch (const DependentImages& e) {
    err << "precondition failed: " << e.what() << "\n";
    return precondition;
  } catch (const NotInPresentation& e) {
    err << "precondition failed: " << e.what() << "\n";
    return precondition;
  } catch (const NoCosetFactorization& e) {
    err << "precondition failed: " << e.what() << "\n";
    return precondition;
  } catch (const NoRepresentativeMatch& e) {
    err << "precondition failed: " << e.what() << "\n";
    return precondition;
  } catch (const SearchTooLarge& e) {
    err << "precondition failed: " << e.what() << "\n";
    return precondition;
  } catch (const std::invalid_argument& e) {
    err << "malformed input: " << e.what() << "\n";
    return malformed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return precondition;
  }
}

}  // namespace belle::cli
