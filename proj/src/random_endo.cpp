#include "belle/random_endo.hpp"

namespace belle {

RandomEndo::RandomEndo() : map_(StepMap<WindowInjection>::constant(identity_endo())) {}

RandomEndo::RandomEndo(StepMap<WindowInjection> map) : map_(std::move(map)) {
  const Domain d = map_.cells().front().value.domain();
  for (const auto& c : map_.cells())
    if (!(c.value.domain() == d))
      throw std::invalid_argument("random endomorphism mixes domains " + d.name() + " and " + c.value.domain().name());
}

RandomEndo RandomEndo::constant(WindowInjection h) { return RandomEndo(StepMap<WindowInjection>::constant(std::move(h))); }

RandomVariable apply(const RandomEndo& h, const RandomVariable& f) {
  return combine(h.map(), f, [](const WindowInjection& g, Point a) { return g.apply(a); });
}

RandomEndo compose(const RandomEndo& outer, const RandomEndo& inner) {
  if (!(outer.domain() == inner.domain()))
    throw std::invalid_argument("cannot compose random endomorphisms of " + outer.domain().name() + " and " +
                                inner.domain().name());
  return RandomEndo(combine(outer.map(), inner.map(),
                            [](const WindowInjection& g, const WindowInjection& h) { return compose(g, h); }));
}

RandomEndo inverse(const RandomEndo& g) {
  return RandomEndo(g.map().map([](const WindowInjection& h) { return inverse(h); }));
}

bool is_automorphism_valued(const RandomEndo& h, Point N) {
  for (const auto& c : h.map().cells())
    if (!is_automorphism_on_window(c.value, N)) return false;
  return true;
}

}  // namespace belle
