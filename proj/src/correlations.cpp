// Copyright 2026 The causality-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "causality/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace causality::correlations {

std::size_t Scenario::num_settings() const {
  std::size_t n = 1;
  for (std::size_t s : settings) n *= s;
  return n;
}

std::size_t Scenario::num_outcomes() const {
  std::size_t n = 1;
  for (std::size_t o : outcomes) n *= o;
  return n;
}

std::size_t Scenario::party_index(const std::string& name) const {
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (parties[i] == name) return i;
  }
  throw Error("unknown party '" + name + "'");
}

Scenario Scenario::restricted(const std::vector<std::size_t>& keep) const {
  Scenario s;
  for (std::size_t k : keep) {
    s.parties.push_back(parties.at(k));
    s.settings.push_back(settings.at(k));
    s.outcomes.push_back(outcomes.at(k));
  }
  return s;
}

void check_scenario(const Scenario& s) {
  if (s.parties.empty()) throw Error("scenario has no parties");
  if (s.settings.size() != s.parties.size() || s.outcomes.size() != s.parties.size()) {
    throw Error("scenario cardinality lists do not match the party list");
  }
  std::set<std::string> names(s.parties.begin(), s.parties.end());
  if (names.size() != s.parties.size()) throw Error("scenario lists a party twice");
  for (std::size_t k = 0; k < s.parties.size(); ++k) {
    if (s.settings[k] < 1 || s.outcomes[k] < 1) throw Error("scenario cardinalities must be positive");
  }
}

std::vector<std::size_t> unflatten(std::size_t flat, const std::vector<std::size_t>& radices) {
  std::vector<std::size_t> digits(radices.size(), 0);
  for (std::size_t k = radices.size(); k-- > 0;) {
    digits[k] = flat % radices[k];
    flat /= radices[k];
  }
  return digits;
}

std::size_t flatten(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& radices) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < radices.size(); ++k) flat = flat * radices[k] + digits[k];
  return flat;
}

ProbabilityTable zero_table(const Scenario& s) {
  check_scenario(s);
  return ProbabilityTable{s, std::vector<double>(s.num_settings() * s.num_outcomes(), 0.0)};
}

TableCheck check_table(const ProbabilityTable& t, const Tolerances& tol) {
  check_scenario(t.scenario);
  TableCheck c;
  const std::size_t ns = t.scenario.num_settings();
  const std::size_t no = t.scenario.num_outcomes();
  if (t.p.size() != ns * no) {
    c.valid = false;
    return c;
  }
  c.min_entry = *std::min_element(t.p.begin(), t.p.end());
  for (std::size_t s = 0; s < ns; ++s) {
    double sum = 0;
    for (std::size_t o = 0; o < no; ++o) sum += t(s, o);
    c.max_normalization_error = std::max(c.max_normalization_error, std::abs(sum - 1.0));
  }
  c.valid = c.max_normalization_error <= tol.probability_sum && c.min_entry >= -1e-12;
  return c;
}

namespace {

void check_partition(std::size_t n, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<int> count(n, 0);
  for (std::size_t k : a) {
    if (k >= n) throw Error("party index out of range");
    ++count[k];
  }
  for (std::size_t k : b) {
    if (k >= n) throw Error("party index out of range");
    ++count[k];
  }
  for (int c : count) {
    if (c != 1) throw Error("subsets must partition the parties");
  }
}

std::vector<std::size_t> complement_of(std::size_t n, const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::find(subset.begin(), subset.end(), k) == subset.end()) rest.push_back(k);
  }
  return rest;
}

std::vector<std::size_t> pick(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out;
  for (std::size_t k : idx) out.push_back(digits[k]);
  return out;
}

std::vector<std::size_t> radices(const std::vector<std::size_t>& all, const std::vector<std::size_t>& idx) {
  return pick(all, idx);
}

}  // namespace

std::vector<double> marginal(const ProbabilityTable& t, const std::vector<std::size_t>& keep) {
  const Scenario& sc = t.scenario;
  const std::size_t ns = sc.num_settings();
  const std::size_t no = sc.num_outcomes();
  const auto keep_radix = radices(sc.outcomes, keep);
  std::size_t nk = 1;
  for (std::size_t r : keep_radix) nk *= r;
  std::vector<double> m(ns * nk, 0.0);
  std::vector<std::size_t> map(no);
  for (std::size_t o = 0; o < no; ++o) map[o] = flatten(pick(unflatten(o, sc.outcomes), keep), keep_radix);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t o = 0; o < no; ++o) m[s * nk + map[o]] += t(s, o);
  }
  return m;
}

SignalingResult no_signaling_subset(const ProbabilityTable& t, const std::vector<std::size_t>& from,
                                    const std::vector<std::size_t>& to, const Tolerances& tol) {
  const Scenario& sc = t.scenario;
  check_partition(sc.num_parties(), from, to);
  SignalingResult r;
  if (from.empty() || to.empty()) return r;
  const auto m = marginal(t, to);
  const std::size_t ns = sc.num_settings();
  const std::size_t nk = m.size() / ns;
  for (std::size_t s = 0; s < ns; ++s) {
    auto digits = unflatten(s, sc.settings);
    for (std::size_t k : from) digits[k] = 0;
    const std::size_t ref = flatten(digits, sc.settings);
    for (std::size_t o = 0; o < nk; ++o) {
      r.max_violation = std::max(r.max_violation, std::abs(m[s * nk + o] - m[ref * nk + o]));
    }
  }
  r.no_signaling = r.max_violation <= tol.marginal;
  return r;
}

SignalingResult no_signaling_subset(const ProbabilityTable& t, const std::vector<std::string>& from,
                                    const std::vector<std::string>& to, const Tolerances& tol) {
  std::vector<std::size_t> f, g;
  for (const auto& n : from) f.push_back(t.scenario.party_index(n));
  for (const auto& n : to) g.push_back(t.scenario.party_index(n));
  return no_signaling_subset(t, f, g, tol);
}

ProbabilityTable reduced_process(const ProbabilityTable& t, const std::vector<std::size_t>& keep,
                                 const Tolerances& tol) {
  const Scenario& sc = t.scenario;
  const auto discarded = complement_of(sc.num_parties(), keep);
  check_partition(sc.num_parties(), keep, discarded);
  if (keep.empty()) throw Error("reduced process needs at least one kept party");
  const SignalingResult ns = no_signaling_subset(t, discarded, keep, tol);
  if (!ns.no_signaling) {
    throw Error("reduced process undefined: discarded parties signal to the kept set (violation " +
                std::to_string(ns.max_violation) + ")");
  }
  const auto m = marginal(t, keep);
  ProbabilityTable out = zero_table(sc.restricted(keep));
  const std::size_t nk = out.scenario.num_outcomes();
  for (std::size_t sk = 0; sk < out.scenario.num_settings(); ++sk) {
    const auto kd = unflatten(sk, out.scenario.settings);
    std::vector<std::size_t> digits(sc.num_parties(), 0);
    for (std::size_t i = 0; i < keep.size(); ++i) digits[keep[i]] = kd[i];
    const std::size_t s = flatten(digits, sc.settings);
    for (std::size_t o = 0; o < nk; ++o) out(sk, o) = m[s * nk + o];
  }
  return out;
}

ConditionalFamily conditional_process(const ProbabilityTable& t, const std::vector<std::size_t>& given,
                                      const Tolerances& tol) {
  const Scenario& sc = t.scenario;
  const ProbabilityTable reduced = reduced_process(t, given, tol);
  ConditionalFamily fam;
  fam.given = given;
  fam.rest = complement_of(sc.num_parties(), given);
  if (fam.rest.empty()) throw Error("conditional process needs at least one remaining party");
  fam.given_scenario = reduced.scenario;
  fam.rest_scenario = sc.restricted(fam.rest);
  const std::size_t ng = fam.given_scenario.num_outcomes();
  fam.by_event.assign(fam.given_scenario.num_settings() * ng, std::nullopt);
  for (std::size_t sg = 0; sg < fam.given_scenario.num_settings(); ++sg) {
    const auto sgd = unflatten(sg, fam.given_scenario.settings);
    for (std::size_t og = 0; og < ng; ++og) {
      const double pg = reduced(sg, og);
      if (pg <= tol.zero_probability) continue;
      const auto ogd = unflatten(og, fam.given_scenario.outcomes);
      ProbabilityTable q = zero_table(fam.rest_scenario);
      for (std::size_t sr = 0; sr < fam.rest_scenario.num_settings(); ++sr) {
        const auto srd = unflatten(sr, fam.rest_scenario.settings);
        std::vector<std::size_t> sd(sc.num_parties());
        for (std::size_t i = 0; i < given.size(); ++i) sd[given[i]] = sgd[i];
        for (std::size_t i = 0; i < fam.rest.size(); ++i) sd[fam.rest[i]] = srd[i];
        const std::size_t s = flatten(sd, sc.settings);
        for (std::size_t orr = 0; orr < fam.rest_scenario.num_outcomes(); ++orr) {
          const auto ord = unflatten(orr, fam.rest_scenario.outcomes);
          std::vector<std::size_t> od(sc.num_parties());
          for (std::size_t i = 0; i < given.size(); ++i) od[given[i]] = ogd[i];
          for (std::size_t i = 0; i < fam.rest.size(); ++i) od[fam.rest[i]] = ord[i];
          q(sr, orr) = t(s, flatten(od, sc.outcomes)) / pg;
        }
      }
      fam.by_event[sg * ng + og] = std::move(q);
    }
  }
  return fam;
}

ProbabilityTable recompose(const ConditionalFamily& family, const ProbabilityTable& reduced,
                           const Scenario& full) {
  ProbabilityTable out = zero_table(full);
  const std::size_t ng = family.given_scenario.num_outcomes();
  for (std::size_t s = 0; s < full.num_settings(); ++s) {
    const auto sd = unflatten(s, full.settings);
    const std::size_t sg = flatten(pick(sd, family.given), family.given_scenario.settings);
    const std::size_t sr = flatten(pick(sd, family.rest), family.rest_scenario.settings);
    for (std::size_t o = 0; o < full.num_outcomes(); ++o) {
      const auto od = unflatten(o, full.outcomes);
      const std::size_t og = flatten(pick(od, family.given), family.given_scenario.outcomes);
      const std::size_t orr = flatten(pick(od, family.rest), family.rest_scenario.outcomes);
      const auto& q = family.by_event[sg * ng + og];
      out(s, o) = q ? (*q)(sr, orr) * reduced(sg, og) : 0.0;
    }
  }
  return out;
}

FixedOrderResult fixed_order_causal_check(const ProbabilityTable& t, const CausalConfiguration& config,
                                          const Tolerances& tol) {
  const Scenario& sc = t.scenario;
  const std::size_t n = sc.num_parties();
  if (config.parties().size() != n) throw Error("causal configuration has the wrong number of parties");
  std::vector<std::size_t> cfg(n);
  for (std::size_t k = 0; k < n; ++k) cfg[k] = config.index_of(sc.parties[k]);
  FixedOrderResult result;
  for (std::size_t subset = 1; subset < (std::size_t{1} << n); ++subset) {
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < n; ++k) {
      if ((subset >> k) & 1u) kept.push_back(k);
    }
    const auto discarded = complement_of(n, kept);
    if (!no_signaling_subset(t, discarded, kept, tol).no_signaling) continue;
    const ProbabilityTable reduced = reduced_process(t, kept, tol);
    const std::size_t m = kept.size();
    for (std::size_t x = 1; x + 1 < (std::size_t{1} << m); ++x) {
      std::vector<std::size_t> from, to, from_cfg, to_cfg;
      for (std::size_t i = 0; i < m; ++i) {
        if ((x >> i) & 1u) {
          from.push_back(i);
          from_cfg.push_back(cfg[kept[i]]);
        } else {
          to.push_back(i);
          to_cfg.push_back(cfg[kept[i]]);
        }
      }
      if (config.any_precedes(from_cfg, to_cfg)) continue;
      const SignalingResult r = no_signaling_subset(reduced, from, to, tol);
      if (!r.no_signaling) {
        result.compatible = false;
        result.kept = kept;
        for (std::size_t i : from) result.from.push_back(kept[i]);
        for (std::size_t i : to) result.to.push_back(kept[i]);
        result.violation = r.max_violation;
        return result;
      }
    }
  }
  return result;
}

ProbabilityTable mix_tables(const std::vector<std::pair<double, ProbabilityTable>>& parts, double tol) {
  if (parts.empty()) throw Error("mixture needs at least one table");
  double total = 0;
  for (const auto& [w, t] : parts) {
    if (w < -tol) throw Error("mixture weights must be nonnegative");
    if (!(t.scenario == parts.front().second.scenario)) throw Error("mixture tables have different scenarios");
    total += w;
  }
  if (std::abs(total - 1.0) > tol) throw Error("mixture weights must sum to 1");
  ProbabilityTable out = zero_table(parts.front().second.scenario);
  for (const auto& [w, t] : parts) {
    for (std::size_t i = 0; i < out.p.size(); ++i) out.p[i] += w * t.p[i];
  }
  return out;
}

}  // namespace causality::correlations
