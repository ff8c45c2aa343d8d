#pragma once

// JSON forms of the closed forms and sampled densities. Exact values are
// decimal strings so that nothing is rounded on the way out.

#include <json.hpp>

#include <string>

#include "wlsmin/exact_core.hpp"
#include "wlsmin/fixed_trace.hpp"
#include "wlsmin/grid.hpp"

namespace wlsmin {

using Json = nlohmann::ordered_json;

inline Json to_json(const SminClosedForm& form) {
  Json j;
  j["n"] = form.params().n();
  j["m"] = form.params().m();
  j["kind"] = "regular";
  Json coeffs = Json::array();
  for (const auto& t : form.terms()) {
    coeffs.push_back({{"j", t.j}, {"num", t.h.get_num().get_str()}, {"den", t.h.get_den().get_str()}});
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

/// Terms are h_j x^{x_exp} (1-nx)^{one_minus_nx_exp} with the Gamma(nm)/Gamma(nm-j) weight
/// folded into num/den.
inline Json to_json(const FTSminClosedForm& form) {
  Json j;
  j["n"] = form.params().n();
  j["m"] = form.params().m();
  j["kind"] = "fixed-trace";
  j["degenerate"] = form.degenerate();
  Json coeffs = Json::array();
  if (!form.degenerate()) {
    for (const auto& t : form.terms()) {
      const Rational w = form.weight(t.j);
      coeffs.push_back({{"j", t.j},
                        {"num", w.get_num().get_str()},
                        {"den", w.get_den().get_str()},
                        {"exponents", {t.x_exponent, t.one_minus_nx_exponent}}});
    }
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline Rational rational_from_strings(const std::string& num, const std::string& den) {
  return ratio(BigInt(num), BigInt(den));
}

/// Rebuilds a regular closed form and re-checks the unit-mass identity.
inline SminClosedForm smin_from_json(const Json& j) {
  if (j.at("kind") != "regular") throw DomainError("expected kind \"regular\"");
  const EnsembleParams p(j.at("n").get<int>(), j.at("m").get<int>());
  std::vector<Rational> h;
  int expect = p.alpha() + 1;
  for (const auto& c : j.at("coeffs")) {
    if (c.at("j").get<int>() != expect++) throw DomainError("coefficients must be listed for consecutive j");
    h.push_back(rational_from_strings(c.at("num").get<std::string>(), c.at("den").get<std::string>()));
  }
  SminClosedForm form(p, std::move(h));
  if (form.total_mass() != 1) throw NumericalFailure("deserialized coefficients are not normalized");
  return form;
}

inline Json to_json(const GridDensity& g) {
  Json j;
  j["kind"] = g.kind;
  if (g.params) {
    j["n"] = g.params->n();
    j["m"] = g.params->m();
  }
  j["x"] = g.xs;
  j["density"] = g.ys;
  return j;
}

}  // namespace wlsmin
