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


#include "causality/random_processes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/QR>

namespace causality::generators {

using qlinalg::Slot;
using qlinalg::TensorSpace;

namespace {

std::size_t dim_of(const std::vector<Slot>& slots) {
  std::size_t d = 1;
  for (const auto& s : slots) d *= s.dim;
  return d;
}

std::vector<Slot> concat(std::vector<Slot> a, const std::vector<Slot>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string memory_label(std::size_t k) { return "mem" + std::to_string(k); }

}  // namespace

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(n(rng), n(rng));
  }
  return g;
}

ComplexMatrix random_isometry(std::size_t d_in, std::size_t d_out, Rng& rng) {
  if (d_out < d_in) throw Error("isometry needs d_out >= d_in");
  const ComplexMatrix g = random_ginibre(d_out, d_in, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
  const ComplexMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) { return random_isometry(d, d, rng); }

ComplexVector random_pure_state(std::size_t d, Rng& rng) {
  ComplexVector v = random_ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

ComplexMatrix random_density(std::size_t d, std::size_t rank, Rng& rng) {
  if (rank == 0 || rank > d) rank = d;
  const ComplexMatrix g = random_ginibre(d, rank, rng);
  const ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

std::vector<ComplexMatrix> random_kraus(std::size_t d_in, std::size_t d_out, std::size_t rank, Rng& rng) {
  if (rank == 0) rank = d_in * d_out;
  rank = std::max(rank, (d_in + d_out - 1) / d_out);
  const ComplexMatrix v = random_isometry(d_in, d_out * rank, rng);
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < rank; ++k) {
    kraus.push_back(v.block(static_cast<Eigen::Index>(k * d_out), 0, static_cast<Eigen::Index>(d_out),
                            static_cast<Eigen::Index>(d_in)));
  }
  return kraus;
}

ComplexMatrix channel_choi(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw Error("channel needs at least one Kraus operator");
  const auto d_out = static_cast<std::size_t>(kraus.front().rows());
  const auto d_in = static_cast<std::size_t>(kraus.front().cols());
  ComplexMatrix j = ComplexMatrix::Zero(static_cast<Eigen::Index>(d_in * d_out), static_cast<Eigen::Index>(d_in * d_out));
  ComplexVector v(static_cast<Eigen::Index>(d_in * d_out));
  for (const auto& k : kraus) {
    for (std::size_t i = 0; i < d_in; ++i) {
      for (std::size_t o = 0; o < d_out; ++o) {
        v(static_cast<Eigen::Index>(i * d_out + o)) = k(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i));
      }
    }
    j += v * v.adjoint();
  }
  return j;
}

LabeledOperator random_state_on(const std::vector<Slot>& slots, std::size_t rank, Rng& rng) {
  return LabeledOperator{TensorSpace(slots), random_density(dim_of(slots), rank, rng)};
}

LabeledOperator random_channel_on(const std::vector<Slot>& in, const std::vector<Slot>& out, std::size_t rank,
                                  Rng& rng) {
  return LabeledOperator{TensorSpace(concat(in, out)), channel_choi(random_kraus(dim_of(in), dim_of(out), rank, rng))};
}

std::vector<LabeledOperator> random_binary_instrument_on(const std::vector<Slot>& in, const std::vector<Slot>& out,
                                                         Rng& rng) {
  auto kraus = random_kraus(dim_of(in), dim_of(out), 0, rng);
  const std::size_t split = std::max<std::size_t>(1, kraus.size() / 2);
  const TensorSpace space(concat(in, out));
  std::vector<ComplexMatrix> first(kraus.begin(), kraus.begin() + static_cast<std::ptrdiff_t>(split));
  std::vector<ComplexMatrix> second(kraus.begin() + static_cast<std::ptrdiff_t>(split), kraus.end());
  if (second.empty()) throw Error("instrument split needs at least two Kraus operators");
  return {LabeledOperator{space, channel_choi(first)}, LabeledOperator{space, channel_choi(second)}};
}

LabeledOperator link(const LabeledOperator& a, const LabeledOperator& b) {
  LabeledOperator out;
  out.matrix = qlinalg::link_product(a.matrix, a.space, b.matrix, b.space, &out.space);
  return out;
}

procmat::ProcessMatrix to_process(const LabeledOperator& op, const std::vector<choi::PartySpec>& parties) {
  const TensorSpace target = procmat::process_space(parties);
  return procmat::make_process(parties, qlinalg::embed(op.matrix, op.space, target));
}

namespace {

Slot in_slot(const choi::PartySpec& p) { return Slot{p.input_label(), p.d_in}; }
Slot out_slot(const choi::PartySpec& p) { return Slot{p.output_label(), p.d_out}; }

// Links the parties in `order` after an optional head operator whose open
// slots are `head_out` (already connected to the parties acting before).
LabeledOperator chain_from(const LabeledOperator* head, const std::vector<Slot>& head_out,
                           const std::vector<choi::PartySpec>& parties, const std::vector<std::size_t>& order,
                           const ChainOptions& options, std::size_t memory_base, Rng& rng) {
  const bool memory = options.memory_dim > 1;
  auto mem = [&](std::size_t k) { return Slot{memory_label(memory_base + k), options.memory_dim}; };
  LabeledOperator acc;
  std::vector<Slot> open;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& party = parties[order[k]];
    std::vector<Slot> targets = {in_slot(party)};
    if (memory && k + 1 < order.size()) targets.push_back(mem(k));
    if (k == 0 && head == nullptr) {
      acc = random_state_on(targets, options.state_rank, rng);
    } else {
      const std::vector<Slot>& sources = k == 0 ? head_out : open;
      const LabeledOperator step = random_channel_on(sources, targets, options.kraus_rank, rng);
      acc = (k == 0) ? link(*head, step) : link(acc, step);
    }
    open = {out_slot(party)};
    if (memory && k + 1 < order.size()) open.push_back(mem(k));
  }
  return acc;
}

}  // namespace

procmat::ProcessMatrix fixed_order_process(const std::vector<choi::PartySpec>& parties,
                                           const std::vector<std::size_t>& order, const ChainOptions& options,
                                           Rng& rng) {
  if (order.size() != parties.size()) throw Error("order must list every party once");
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] != k) throw Error("order must list every party once");
  }
  return to_process(chain_from(nullptr, {}, parties, order, options, 0, rng), parties);
}

procmat::ProcessMatrix random_bipartite_separable(const std::vector<choi::PartySpec>& parties, double q, Rng& rng,
                                                  const ChainOptions& options) {
  if (parties.size() != 2) throw Error("bipartite generator needs two parties");
  if (q < 0 || q > 1) throw Error("mixing weight must lie in [0, 1]");
  const auto ab = fixed_order_process(parties, {0, 1}, options, rng);
  const auto ba = fixed_order_process(parties, {1, 0}, options, rng);
  return procmat::make_process(parties, q * ab.matrix + (1 - q) * ba.matrix);
}

procmat::ProcessMatrix random_tripartite_ecs(const std::vector<choi::PartySpec>& parties, Rng& rng,
                                             const ChainOptions& options, std::vector<LabeledOperator>* blocks) {
  if (blocks != nullptr) blocks->clear();
  if (parties.size() != 3) throw Error("tripartite generator needs three parties");
  const auto weights = random_distribution(3, rng);
  const TensorSpace space = procmat::process_space(parties);
  ComplexMatrix total = ComplexMatrix::Zero(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
  const std::size_t md = std::max<std::size_t>(options.memory_dim, 2);
  for (std::size_t f = 0; f < 3; ++f) {
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != f) others.push_back(k);
    }
    const Slot m0{memory_label(100), md};
    const Slot m1{memory_label(101), md};
    const LabeledOperator head = random_state_on({in_slot(parties[f]), m0}, options.state_rank, rng);
    const auto branches = random_binary_instrument_on({out_slot(parties[f]), m0}, {m1}, rng);
    for (std::size_t b = 0; b < 2; ++b) {
      const std::vector<std::size_t> order =
          b == 0 ? std::vector<std::size_t>{others[0], others[1]} : std::vector<std::size_t>{others[1], others[0]};
      const LabeledOperator start = link(head, branches[b]);
      const LabeledOperator comb = chain_from(&start, {m1}, parties, order, options, 200 + 10 * b, rng);
      total += weights[f] * to_process(comb, parties).matrix;
      if (blocks != nullptr) blocks->push_back(LabeledOperator{comb.space, weights[f] * comb.matrix});
    }
    if (blocks != nullptr) {
      // Branch 0 ends with others[1]; keep the block with others[0] last first.
      std::swap((*blocks)[blocks->size() - 2], (*blocks)[blocks->size() - 1]);
    }
  }
  return procmat::make_process(parties, total);
}

choi::CJOperator random_cp_event(const choi::PartySpec& party, Rng& rng) {
  auto kraus = random_kraus(party.d_in, party.d_out, 0, rng);
  std::uniform_int_distribution<std::size_t> count(1, kraus.size());
  kraus.resize(count(rng));
  return choi::choi_from_kraus(party, kraus);
}

choi::CJOperator random_cptp(const choi::PartySpec& party, Rng& rng) {
  return choi::choi_from_kraus(party, random_kraus(party.d_in, party.d_out, 0, rng));
}

choi::Instrument random_instrument(const choi::PartySpec& party, std::size_t outcomes, Rng& rng) {
  if (outcomes == 0) throw Error("instrument needs at least one outcome");
  const std::size_t rank = std::max<std::size_t>(outcomes, party.d_in * party.d_out);
  const auto kraus = random_kraus(party.d_in, party.d_out, rank, rng);
  choi::Instrument inst;
  inst.party = party;
  for (std::size_t j = 0; j < outcomes; ++j) {
    std::vector<ComplexMatrix> part;
    for (std::size_t k = j; k < kraus.size(); k += outcomes) part.push_back(kraus[k]);
    inst.outcomes.push_back(choi::choi_from_kraus(party, part).matrix);
  }
  return inst;
}

std::vector<double> random_distribution(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (auto& x : p) x = e(rng);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= s;
  return p;
}

correlations::ProbabilityTable random_table(const correlations::Scenario& scenario, Rng& rng) {
  correlations::check_scenario(scenario);
  auto t = correlations::zero_table(scenario);
  const std::size_t no = scenario.num_outcomes();
  for (std::size_t s = 0; s < scenario.num_settings(); ++s) {
    const auto d = random_distribution(no, rng);
    for (std::size_t o = 0; o < no; ++o) t(s, o) = d[o];
  }
  return t;
}

namespace {

// Response tables for a fixed order; responses[k] is indexed by the context
// (settings of positions 0..k, outcomes of positions 0..k-1) and the outcome.
struct OrderedResponses {
  std::vector<std::size_t> order;
  std::vector<std::vector<double>> responses;
  std::vector<std::vector<std::size_t>> radices;
};

OrderedResponses draw_responses(const correlations::Scenario& sc, const std::vector<std::size_t>& order, Rng& rng,
                                bool deterministic) {
  OrderedResponses r;
  r.order = order;
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::vector<std::size_t> rad;
    for (std::size_t j = 0; j <= k; ++j) rad.push_back(sc.settings[order[j]]);
    for (std::size_t j = 0; j < k; ++j) rad.push_back(sc.outcomes[order[j]]);
    std::size_t contexts = 1;
    for (std::size_t x : rad) contexts *= x;
    const std::size_t no = sc.outcomes[order[k]];
    std::vector<double> resp(contexts * no, 0.0);
    std::uniform_int_distribution<std::size_t> pick(0, no - 1);
    for (std::size_t c = 0; c < contexts; ++c) {
      if (deterministic) {
        resp[c * no + pick(rng)] = 1.0;
      } else {
        const auto d = random_distribution(no, rng);
        std::copy(d.begin(), d.end(), resp.begin() + static_cast<std::ptrdiff_t>(c * no));
      }
    }
    r.responses.push_back(std::move(resp));
    r.radices.push_back(std::move(rad));
  }
  return r;
}

double response_probability(const OrderedResponses& r, const correlations::Scenario& sc,
                            const std::vector<std::size_t>& s, const std::vector<std::size_t>& o,
                            std::size_t from_position = 0) {
  double p = 1.0;
  for (std::size_t k = from_position; k < r.order.size(); ++k) {
    std::vector<std::size_t> digits;
    for (std::size_t j = 0; j <= k; ++j) digits.push_back(s[r.order[j]]);
    for (std::size_t j = 0; j < k; ++j) digits.push_back(o[r.order[j]]);
    const std::size_t c = correlations::flatten(digits, r.radices[k]);
    p *= r.responses[k][c * sc.outcomes[r.order[k]] + o[r.order[k]]];
    if (p == 0) break;
  }
  return p;
}

correlations::ProbabilityTable table_from(const correlations::Scenario& sc,
                                          const std::function<double(const std::vector<std::size_t>&,
                                                                     const std::vector<std::size_t>&)>& prob) {
  auto t = correlations::zero_table(sc);
  for (std::size_t s = 0; s < sc.num_settings(); ++s) {
    const auto sd = correlations::unflatten(s, sc.settings);
    for (std::size_t o = 0; o < sc.num_outcomes(); ++o) t(s, o) = prob(sd, correlations::unflatten(o, sc.outcomes));
  }
  return t;
}

std::vector<std::size_t> random_order(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

correlations::ProbabilityTable random_fixed_order_table(const correlations::Scenario& scenario,
                                                        const std::vector<std::size_t>& order, Rng& rng,
                                                        bool deterministic) {
  correlations::check_scenario(scenario);
  if (order.size() != scenario.num_parties()) throw Error("order must list every party once");
  const auto r = draw_responses(scenario, order, rng, deterministic);
  return table_from(scenario, [&](const auto& s, const auto& o) { return response_probability(r, scenario, s, o); });
}

correlations::ProbabilityTable random_causal_table(const correlations::Scenario& scenario, Rng& rng,
                                                   std::size_t components) {
  if (components == 0) throw Error("need at least one component");
  const auto w = random_distribution(components, rng);
  std::vector<std::pair<double, correlations::ProbabilityTable>> parts;
  for (std::size_t c = 0; c < components; ++c) {
    parts.emplace_back(w[c], random_fixed_order_table(scenario, random_order(scenario.num_parties(), rng), rng));
  }
  return correlations::mix_tables(parts);
}

correlations::ProbabilityTable random_dynamical_table(const correlations::Scenario& scenario, Rng& rng,
                                                      std::size_t components) {
  correlations::check_scenario(scenario);
  if (scenario.num_parties() != 3) throw Error("dynamical-order tables need three parties");
  if (components == 0) throw Error("need at least one component");
  const auto w = random_distribution(components, rng);
  std::vector<std::pair<double, correlations::ProbabilityTable>> parts;
  std::uniform_int_distribution<std::size_t> pick_first(0, 2);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t c = 0; c < components; ++c) {
    const std::size_t f = pick_first(rng);
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != f) others.push_back(k);
    }
    const auto r0 = draw_responses(scenario, {f, others[0], others[1]}, rng, false);
    const auto r1 = draw_responses(scenario, {f, others[1], others[0]}, rng, false);
    const std::size_t contexts = scenario.settings[f] * scenario.outcomes[f];
    std::vector<bool> choice(contexts);
    for (std::size_t i = 0; i < contexts; ++i) choice[i] = coin(rng);
    parts.emplace_back(w[c], table_from(scenario, [&](const auto& s, const auto& o) {
                         const bool second = choice[s[f] * scenario.outcomes[f] + o[f]];
                         // Both branches share the first party's response from r0.
                         const double pf = response_probability(
                             OrderedResponses{{f}, {r0.responses[0]}, {r0.radices[0]}}, scenario, s, o);
                         if (pf == 0) return 0.0;
                         return pf * response_probability(second ? r1 : r0, scenario, s, o, 1);
                       }));
  }
  return correlations::mix_tables(parts);
}

}  // namespace causality::generators
