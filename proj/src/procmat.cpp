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


#include "causality/procmat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace causality::procmat {

using qlinalg::Slot;
using qlinalg::TensorSpace;

TensorSpace process_space(const std::vector<PartySpec>& parties) {
  std::vector<Slot> slots;
  for (const PartySpec& p : parties) {
    choi::check_party(p);
    slots.push_back(Slot{p.input_label(), p.d_in});
    slots.push_back(Slot{p.output_label(), p.d_out});
  }
  return TensorSpace(std::move(slots));
}

TensorSpace ProcessMatrix::space() const { return process_space(parties); }

std::size_t ProcessMatrix::party_index(const std::string& name) const {
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (parties[i].name == name) return i;
  }
  throw Error("unknown party '" + name + "'");
}

std::vector<std::string> ProcessMatrix::party_names() const {
  std::vector<std::string> names;
  for (const auto& p : parties) names.push_back(p.name);
  return names;
}

double ProcessMatrix::expected_trace() const {
  double t = 1;
  for (const auto& p : parties) t *= static_cast<double>(p.d_out);
  return t;
}

ProcessMatrix make_process(std::vector<PartySpec> parties, ComplexMatrix matrix) {
  if (parties.empty()) throw Error("a process matrix needs at least one party");
  const TensorSpace space = process_space(parties);
  if (static_cast<std::size_t>(matrix.rows()) != space.dim() || matrix.rows() != matrix.cols()) {
    throw Error("process matrix dimension " + std::to_string(matrix.rows()) +
                " does not match the parties' total dimension " + std::to_string(space.dim()));
  }
  return ProcessMatrix{std::move(parties), std::move(matrix)};
}

std::string TermType::label(const std::vector<PartySpec>& parties) const {
  if (mask == 0) return "1";
  std::string out;
  for (std::size_t k = 0; k < num_parties; ++k) {
    const std::string name = k < parties.size() ? parties[k].name : "P" + std::to_string(k);
    if (input(k)) out += name + "1";
    if (output(k)) out += name + "2";
  }
  return out;
}

std::uint64_t party_bits(std::size_t k) { return std::uint64_t{3} << (2 * k); }

std::uint64_t parties_bits(const std::vector<std::size_t>& parties) {
  std::uint64_t bits = 0;
  for (std::size_t k : parties) bits |= party_bits(k);
  return bits;
}

bool is_allowed_mask(std::uint64_t mask, const std::vector<std::size_t>& parties) {
  if (mask == 0) return true;
  for (std::size_t k : parties) {
    const bool in = (mask >> (2 * k)) & 1u;
    const bool out = (mask >> (2 * k + 1)) & 1u;
    if (in && !out) return true;
  }
  return false;
}

bool is_allowed_mask(std::uint64_t mask, std::size_t num_parties) {
  std::vector<std::size_t> all(num_parties);
  for (std::size_t k = 0; k < num_parties; ++k) all[k] = k;
  return is_allowed_mask(mask, all);
}

namespace {

std::vector<TermType> enumerate_types(const std::vector<PartySpec>& parties, bool allowed) {
  const std::size_t n = parties.size();
  if (n == 0) throw Error("term types need at least one party");
  if (n > 16) throw Error("too many parties for term-type enumeration");
  std::uint64_t usable = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (parties[k].d_in > 1) usable |= std::uint64_t{1} << (2 * k);
    if (parties[k].d_out > 1) usable |= std::uint64_t{1} << (2 * k + 1);
  }
  std::vector<TermType> out;
  const std::uint64_t limit = std::uint64_t{1} << (2 * n);
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    if ((mask & ~usable) != 0) continue;
    if (is_allowed_mask(mask, n) == allowed) out.push_back(TermType{mask, n});
  }
  return out;
}

std::vector<std::size_t> indices_of(const ProcessMatrix& w, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(w.party_index(n));
  std::set<std::size_t> unique(out.begin(), out.end());
  if (unique.size() != out.size()) throw Error("party listed twice");
  return out;
}

std::vector<std::size_t> complement_parties(std::size_t n, const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::find(subset.begin(), subset.end(), k) == subset.end()) rest.push_back(k);
  }
  return rest;
}

std::vector<std::size_t> slots_of(const std::vector<std::size_t>& parties) {
  std::vector<std::size_t> slots;
  for (std::size_t k : parties) {
    slots.push_back(2 * k);
    slots.push_back(2 * k + 1);
  }
  return slots;
}

// Present terms whose restriction onto `from` is not an allowed type for
// `from` alone.
std::vector<PresentTerm> restriction_violations(const std::vector<PresentTerm>& terms,
                                                const std::vector<std::size_t>& from) {
  const std::uint64_t bits = parties_bits(from);
  std::vector<PresentTerm> bad;
  for (const auto& t : terms) {
    if (!is_allowed_mask(t.type.mask & bits, from)) bad.push_back(t);
  }
  return bad;
}

}  // namespace

std::vector<TermType> allowed_term_types(const std::vector<PartySpec>& parties) {
  return enumerate_types(parties, true);
}

std::vector<TermType> forbidden_term_types(const std::vector<PartySpec>& parties) {
  return enumerate_types(parties, false);
}

std::vector<PresentTerm> term_types_present(const ProcessMatrix& w, const Tolerances& tol) {
  const TensorSpace space = w.space();
  const qlinalg::HSTransform transform(space);
  const ComplexVector coeffs = transform.forward(w.matrix);
  std::map<std::uint64_t, double> by_mask;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double mag = std::abs(coeffs[i]);
    if (mag <= tol.coefficient_zero) continue;
    double& slot = by_mask[transform.support_mask(static_cast<std::size_t>(i))];
    slot = std::max(slot, mag);
  }
  std::vector<PresentTerm> out;
  for (const auto& [mask, mag] : by_mask) out.push_back(PresentTerm{TermType{mask, w.parties.size()}, mag});
  return out;
}

ValidationReport validate(const ProcessMatrix& w, const Tolerances& tol) {
  ValidationReport r;
  const std::size_t n = w.parties.size();
  r.hermiticity_error = qlinalg::hermiticity_error(w.matrix);
  r.min_eigenvalue = qlinalg::min_eigenvalue(w.matrix);
  r.trace = w.matrix.trace().real();
  r.expected_trace = w.expected_trace();
  double din = 1;
  for (const auto& p : w.parties) din *= static_cast<double>(p.d_in);
  r.expected_identity_coefficient = 1.0 / din;
  const auto terms = term_types_present(w, tol);
  const qlinalg::HSTransform transform(w.space());
  r.identity_coefficient = transform.forward(w.matrix)[0].real();
  for (const auto& t : terms) {
    if (!is_allowed_mask(t.type.mask, n)) r.forbidden_terms.push_back(t);
  }
  if (r.hermiticity_error > tol.hermiticity) {
    r.failures.push_back("not Hermitian (deviation " + std::to_string(r.hermiticity_error) + ")");
  }
  if (r.min_eigenvalue < tol.psd_min_eigenvalue) {
    r.failures.push_back("not positive semidefinite (min eigenvalue " + std::to_string(r.min_eigenvalue) + ")");
  }
  if (std::abs(r.trace - r.expected_trace) > tol.trace) {
    r.failures.push_back("trace " + std::to_string(r.trace) + " differs from the product of output dimensions " +
                         std::to_string(r.expected_trace));
  }
  if (std::abs(r.identity_coefficient - r.expected_identity_coefficient) > tol.trace) {
    r.failures.push_back("identity coefficient " + std::to_string(r.identity_coefficient) + " differs from " +
                         std::to_string(r.expected_identity_coefficient));
  }
  for (const auto& t : r.forbidden_terms) {
    r.failures.push_back("forbidden term type " + t.type.label(w.parties));
  }
  r.valid = r.failures.empty();
  return r;
}

OutcomeDistribution probabilities(const ProcessMatrix& w,
                                  const std::vector<choi::Instrument>& instruments) {
  const std::size_t n = w.parties.size();
  if (instruments.size() != n) throw Error("need exactly one instrument per party");
  OutcomeDistribution out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& inst = instruments[k];
    if (inst.party.d_in != w.parties[k].d_in || inst.party.d_out != w.parties[k].d_out) {
      throw Error("instrument for party " + std::to_string(k) + " ('" + inst.party.name +
                  "') does not match the dimensions of '" + w.parties[k].name + "'");
    }
    for (const auto& m : inst.outcomes) {
      if (static_cast<std::size_t>(m.rows()) != inst.party.d_in * inst.party.d_out) {
        throw Error("instrument outcome has the wrong dimension");
      }
    }
    out.outcome_counts.push_back(inst.outcomes.size());
  }
  // Contract party by party; the remaining operator shrinks each step.
  struct Frame {
    ComplexMatrix m;
    std::size_t flat;
  };
  std::vector<Frame> frames{{w.matrix, 0}};
  std::vector<PartySpec> rest = w.parties;
  for (std::size_t k = 0; k < n; ++k) {
    const TensorSpace space = process_space(rest);
    std::vector<Frame> next;
    const std::size_t slots[] = {0, 1};
    for (const Frame& f : frames) {
      for (std::size_t j = 0; j < instruments[k].outcomes.size(); ++j) {
        next.push_back(Frame{qlinalg::contract(f.m, space, slots, instruments[k].outcomes[j]),
                             f.flat * instruments[k].outcomes.size() + j});
      }
    }
    frames = std::move(next);
    rest.erase(rest.begin());
  }
  out.p.assign(frames.size(), 0.0);
  for (const Frame& f : frames) out.p[f.flat] = f.m(0, 0).real();
  return out;
}

SignalingReport no_signaling_matrix(const ProcessMatrix& w, const std::vector<std::string>& from,
                                    const std::vector<std::string>& to, const Tolerances& tol) {
  const auto f = indices_of(w, from);
  const auto t = indices_of(w, to);
  for (std::size_t k : f) {
    if (std::find(t.begin(), t.end(), k) != t.end()) throw Error("signaling subsets overlap");
  }
  if (f.size() + t.size() != w.parties.size()) throw Error("signaling subsets must partition the parties");
  SignalingReport r;
  if (f.empty()) return r;
  r.offending = restriction_violations(term_types_present(w, tol), f);
  r.no_signaling = r.offending.empty();
  return r;
}

ProcessMatrix reduced_matrix(const ProcessMatrix& w, const std::vector<std::string>& keep,
                             const Tolerances& tol) {
  const auto kept = indices_of(w, keep);
  const auto discarded = complement_parties(w.parties.size(), kept);
  if (!discarded.empty()) {
    const auto bad = restriction_violations(term_types_present(w, tol), discarded);
    if (!bad.empty()) {
      throw Error("reduced process undefined (signaling into kept set's marginal): term type " +
                  bad.front().type.label(w.parties));
    }
  }
  double norm = 1;
  for (std::size_t k : discarded) norm *= static_cast<double>(w.parties[k].d_out);
  const ComplexMatrix m = qlinalg::partial_trace(w.matrix, w.space(), slots_of(kept)) / norm;
  std::vector<PartySpec> parties;
  for (std::size_t k : kept) parties.push_back(w.parties[k]);
  return make_process(std::move(parties), m);
}

ConditionalResult condition_on_event(const ProcessMatrix& w, const std::string& party,
                                     const choi::CJOperator& event, const Tolerances& tol) {
  const std::size_t x = w.party_index(party);
  const PartySpec& spec = w.parties[x];
  if (event.party.d_in != spec.d_in || event.party.d_out != spec.d_out) {
    throw Error("event dimensions do not match party '" + party + "'");
  }
  const auto rest = complement_parties(w.parties.size(), {x});
  if (rest.empty()) throw Error("conditioning needs at least one remaining party");
  const auto bad = restriction_violations(term_types_present(w, tol), rest);
  if (!bad.empty()) {
    throw Error("event probability is instrument dependent: the remaining parties signal to '" + party +
                "' through term type " + bad.front().type.label(w.parties));
  }
  double norm = 1;
  for (std::size_t k : rest) norm *= static_cast<double>(w.parties[k].d_out);
  const std::size_t slots[] = {2 * x, 2 * x + 1};
  const ComplexMatrix contracted = qlinalg::contract(w.matrix, w.space(), slots, event.matrix);
  const double p = contracted.trace().real() / norm;
  if (p <= tol.zero_probability) throw Error("zero-probability event");
  std::vector<PartySpec> parties;
  for (std::size_t k : rest) parties.push_back(w.parties[k]);
  ConditionalResult r;
  r.matrix = make_process(std::move(parties), contracted / p);
  r.probability = p;
  r.report = validate(r.matrix, tol);
  return r;
}

ProcessMatrix extend_with_ancilla(const ProcessMatrix& w, const ComplexMatrix& rho,
                                  const std::vector<AncillaSlot>& ancillas, const Tolerances& tol) {
  std::size_t anc_dim = 1;
  for (const auto& a : ancillas) {
    if (a.dim < 1) throw Error("ancilla dimension must be positive");
    anc_dim *= a.dim;
  }
  if (static_cast<std::size_t>(rho.rows()) != anc_dim || rho.rows() != rho.cols()) {
    throw Error("ancilla state has the wrong dimension");
  }
  if (!qlinalg::is_hermitian(rho, tol.hermiticity) || qlinalg::min_eigenvalue(rho) < tol.psd_min_eigenvalue ||
      std::abs(rho.trace() - Complex(1)) > tol.trace) {
    throw Error("ancilla state is not a density matrix");
  }
  const TensorSpace space = w.space();
  std::vector<Slot> combined = space.slots();
  for (std::size_t i = 0; i < ancillas.size(); ++i) {
    w.party_index(ancillas[i].party);
    combined.push_back(Slot{"ancilla" + std::to_string(i), ancillas[i].dim});
  }
  const TensorSpace combined_space(combined);
  std::vector<std::size_t> order;
  std::vector<PartySpec> parties = w.parties;
  for (std::size_t k = 0; k < w.parties.size(); ++k) {
    order.push_back(2 * k);
    for (std::size_t i = 0; i < ancillas.size(); ++i) {
      if (ancillas[i].party == w.parties[k].name) {
        order.push_back(space.num_slots() + i);
        parties[k].d_in *= ancillas[i].dim;
      }
    }
    order.push_back(2 * k + 1);
  }
  const ComplexMatrix m = qlinalg::permute_slots(qlinalg::kron(w.matrix, rho), combined_space, order);
  return make_process(std::move(parties), m);
}

FixedOrderReport fixed_order_compatible(const ProcessMatrix& w, const CausalConfiguration& config,
                                        const Tolerances& tol) {
  const std::size_t n = w.parties.size();
  if (config.parties().size() != n) throw Error("causal configuration has the wrong number of parties");
  // Map configuration indices onto the matrix's party order.
  std::vector<std::size_t> cfg(n);
  for (std::size_t k = 0; k < n; ++k) cfg[k] = config.index_of(w.parties[k].name);
  const auto terms = term_types_present(w, tol);
  FixedOrderReport report;
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t s = 1; s <= all; ++s) {
    std::vector<std::size_t> kept, discarded;
    for (std::size_t k = 0; k < n; ++k) ((s >> k) & 1u ? kept : discarded).push_back(k);
    if (!discarded.empty() && !restriction_violations(terms, discarded).empty()) continue;
    // Terms of the reduced matrix: those with identity on every discarded slot.
    std::vector<PresentTerm> reduced;
    const std::uint64_t dbits = parties_bits(discarded);
    for (const auto& t : terms) {
      if ((t.type.mask & dbits) == 0) reduced.push_back(t);
    }
    for (std::uint64_t x = s; x > 0; x = (x - 1) & s) {
      if (x == s) continue;
      std::vector<std::size_t> from, to, from_cfg, to_cfg;
      for (std::size_t k : kept) {
        if ((x >> k) & 1u) {
          from.push_back(k);
          from_cfg.push_back(cfg[k]);
        } else {
          to.push_back(k);
          to_cfg.push_back(cfg[k]);
        }
      }
      if (config.any_precedes(from_cfg, to_cfg)) continue;
      if (!restriction_violations(reduced, from).empty()) {
        report.compatible = false;
        for (std::size_t k : kept) report.kept.push_back(w.parties[k].name);
        for (std::size_t k : from) report.from.push_back(w.parties[k].name);
        for (std::size_t k : to) report.to.push_back(w.parties[k].name);
        return report;
      }
    }
  }
  return report;
}

}  // namespace causality::procmat
