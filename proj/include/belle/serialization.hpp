#pragma once

// JSON forms of the library's values. Rationals are {"num": "p", "den": "q"}
// (a "p/q" string or an integer is also read); rectangles are
// [x0, x1, y0, y1]; step maps are {"cells": [{"rects": [...], "value": v}]}.

#include "belle/endo_approx.hpp"
#include "belle/group_constructions.hpp"
#include "belle/pair_model.hpp"
#include "belle/realization.hpp"

#include <json.hpp>

namespace belle {

using nlohmann::json;

/// Bad JSON shape or value; `what()` names the JSON path.
class MalformedInput : public std::invalid_argument {
 public:
  MalformedInput(const std::string& path, const std::string& what);
};

json to_json(const Rational& r);
Rational rational_from_json(const json& j, const std::string& path = "$");

json to_json(const RationalSet& s);
RationalSet rational_set_from_json(const json& j, const std::string& path = "$");

json to_json(const PiecewiseConstant& p);
PiecewiseConstant piecewise_from_json(const json& j, const std::string& path = "$");

json to_json(const StepMap<Point>& f);
StepMap<Point> random_variable_from_json(const json& j, const std::string& path = "$");

Domain domain_from_name(const std::string& name);

/// Rebuilds a rule from its descriptor.
WindowInjection endo_from_json(const json& j, const std::string& path = "$");
/// Shorthands: identity, successor, shift:K, table:[[x,y],...], basis-shift[:S],
/// swap, rot3, rot3^2. identity and basis-shift act on `context`. Text starting
/// with '{' is read as a JSON descriptor.
WindowInjection endo_from_text(const std::string& text, Domain context = Domain::natural());

json to_json(const RandomEndo& h);
/// A step map of descriptors, or a single descriptor for a constant.
RandomEndo random_endo_from_json(const json& j, const std::string& path = "$");

json to_json(const PairModel& p);
/// {"structure": "pure" | "fq", "q", "dim", "window", "image"}; window and dim
/// default to the arguments.
PairModel pair_from_json(const json& j, Point default_window, const std::string& path = "$");
/// "pure:<endo>" or "fq<Q>x<D>:<endo>", or JSON text.
PairModel pair_from_text(const std::string& text, Point default_window);

json to_json(const DefectProfile& d);
json to_json(const GapBounds& g);
json to_json(const SearchResult& s);
json to_json(const Certificate& c);
json to_json(const Budget& b);

json to_json(const RealizationSpec& spec);
RealizationSpec realization_from_json(const json& j, const std::string& path = "$");
/// [{"strip": [lo, hi], "values": [...], "label": "..."}]; a missing "values" accepts everything.
std::vector<ProbabilityEvent> events_from_json(const json& j, const std::string& path = "$");
json to_json(const IdentityReport& r);

}  // namespace belle
