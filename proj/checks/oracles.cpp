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


#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace causality::checks::oracles {
namespace {

using correlations::ProbabilityTable;
using correlations::Scenario;

ComplexMatrix random_qubit_channel_choi(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> rank_dist(1, 4);
  const int rank = rank_dist(rng);
  ComplexMatrix g(2 * rank, 2);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  const Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(2 * rank, 2);
  ComplexMatrix choi = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < rank; ++k) {
    ComplexVector vec(4);
    for (int i = 0; i < 2; ++i) {
      for (int o = 0; o < 2; ++o) vec(i * 2 + o) = v(2 * k + o, i);
    }
    choi += vec * vec.adjoint();
  }
  return choi;
}

ComplexMatrix pauli_matrix(char c) {
  ComplexMatrix m(2, 2);
  const Complex i(0, 1);
  switch (c) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, -i, i, 0;
      break;
    case 'z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw Error(std::string("unknown Pauli name '") + c + "'");
  }
  return m;
}

// Allowed masks by the validity rule restricted to `parties`.
bool rule_allowed(std::uint64_t mask, const std::vector<std::size_t>& parties) {
  bool any = false;
  for (std::size_t k : parties) {
    const bool in = (mask >> (2 * k)) & 1u;
    const bool out = (mask >> (2 * k + 1)) & 1u;
    if (in && !out) return true;
    any = any || in || out;
  }
  return !any;
}

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (std::size_t x : v) p *= x;
  return p;
}

// Digits of `flat` in the mixed radix `radices`, most significant first.
std::vector<std::size_t> digits(std::size_t flat, const std::vector<std::size_t>& radices) {
  std::vector<std::size_t> d(radices.size());
  for (std::size_t k = radices.size(); k-- > 0;) {
    d[k] = flat % radices[k];
    flat /= radices[k];
  }
  return d;
}

std::size_t undigits(const std::vector<std::size_t>& d, const std::vector<std::size_t>& radices) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < radices.size(); ++k) flat = flat * radices[k] + d[k];
  return flat;
}

// Every function from a domain of size `domain` to a range of size `range`.
std::vector<std::vector<std::size_t>> all_functions(std::size_t domain, std::size_t range) {
  std::vector<std::vector<std::size_t>> out;
  std::size_t count = 1;
  for (std::size_t i = 0; i < domain; ++i) count *= range;
  for (std::size_t f = 0; f < count; ++f) {
    std::vector<std::size_t> values(domain);
    std::size_t rest = f;
    for (std::size_t i = 0; i < domain; ++i) {
      values[i] = rest % range;
      rest /= range;
    }
    out.push_back(std::move(values));
  }
  return out;
}

// Marginal p(o_keep | s_all) as a map from (flat s_all, flat o_keep).
std::vector<double> marginal_of(const std::vector<double>& p, const std::vector<std::size_t>& settings,
                                const std::vector<std::size_t>& outcomes, const std::vector<std::size_t>& keep) {
  const std::size_t ns = product(settings);
  const std::size_t no = product(outcomes);
  std::vector<std::size_t> kept_radices;
  for (std::size_t k : keep) kept_radices.push_back(outcomes[k]);
  const std::size_t nk = product(kept_radices);
  std::vector<double> m(ns * nk, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t o = 0; o < no; ++o) {
      const auto od = digits(o, outcomes);
      std::vector<std::size_t> kd;
      for (std::size_t k : keep) kd.push_back(od[k]);
      m[s * nk + undigits(kd, kept_radices)] += p[s * no + o];
    }
  }
  return m;
}

// True when the marginal over `to` outcomes ignores the settings of `from`.
bool settings_ignored(const std::vector<double>& p, const std::vector<std::size_t>& settings,
                      const std::vector<std::size_t>& outcomes, const std::vector<std::size_t>& from,
                      const std::vector<std::size_t>& to, double tol) {
  const auto m = marginal_of(p, settings, outcomes, to);
  const std::size_t ns = product(settings);
  const std::size_t nk = m.size() / ns;
  for (std::size_t s = 0; s < ns; ++s) {
    auto d = digits(s, settings);
    for (std::size_t k : from) d[k] = 0;
    const std::size_t base = undigits(d, settings);
    for (std::size_t o = 0; o < nk; ++o) {
      if (std::abs(m[s * nk + o] - m[base * nk + o]) > tol) return false;
    }
  }
  return true;
}

}  // namespace

LocalVanishing sample_local_vanishing(std::uint64_t seed, std::size_t samples) {
  std::mt19937_64 rng(seed);
  const char names[4] = {'I', 'x', 'y', 'z'};
  double largest[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t n = 0; n < samples; ++n) {
    const ComplexMatrix choi = random_qubit_channel_choi(rng);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        ComplexMatrix sigma(4, 4);
        const ComplexMatrix pa = pauli_matrix(names[a]);
        const ComplexMatrix pb = pauli_matrix(names[b]);
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) sigma.block(2 * i, 2 * j, 2, 2) = pa(i, j) * pb;
        }
        const double v = std::abs((sigma * choi).trace());
        double& slot = largest[a != 0][b != 0];
        slot = std::max(slot, v);
      }
    }
  }
  LocalVanishing out;
  for (int i = 0; i < 2; ++i) {
    for (int o = 0; o < 2; ++o) out.always_zero[i][o] = largest[i][o] < 1e-9;
  }
  return out;
}

std::vector<std::uint64_t> normalization_preserving_masks(std::size_t num_parties, const LocalVanishing& local) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * num_parties)); ++mask) {
    bool vanishes = false;
    for (std::size_t k = 0; k < num_parties; ++k) {
      const int in = (mask >> (2 * k)) & 1u;
      const int o = (mask >> (2 * k + 1)) & 1u;
      vanishes = vanishes || local.always_zero[in][o];
    }
    if (mask == 0 || vanishes) out.push_back(mask);
  }
  return out;
}

std::vector<Complex> pauli_coefficients(const ComplexMatrix& m, std::size_t num_qubits) {
  const std::size_t d = std::size_t{1} << num_qubits;
  if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d) {
    throw Error("matrix size does not match the qubit count");
  }
  const Complex phases[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  std::vector<Complex> out(d * d);
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t z = 0; z < d; ++z) {
      Complex sum = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const double sign = (std::popcount(j & z) % 2) ? -1.0 : 1.0;
        sum += sign * m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ x));
      }
      out[x * d + z] = phases[std::popcount(x & z) % 4] * sum / static_cast<double>(d);
    }
  }
  return out;
}

std::uint64_t QubitLayout::slot_mask(std::uint64_t qubit_support) const {
  std::uint64_t mask = 0;
  for (std::size_t s = 0; s < first_qubit.size(); ++s) {
    for (std::size_t q = first_qubit[s]; q < first_qubit[s] + width[s]; ++q) {
      if ((qubit_support >> (num_qubits - 1 - q)) & 1u) mask |= std::uint64_t{1} << s;
    }
  }
  return mask;
}

QubitLayout qubit_layout(const std::vector<std::size_t>& slot_dims) {
  QubitLayout layout;
  for (std::size_t d : slot_dims) {
    if (d == 0 || (d & (d - 1)) != 0) throw Error("slot dimension is not a power of two");
    layout.first_qubit.push_back(layout.num_qubits);
    const auto w = static_cast<std::size_t>(std::countr_zero(d));
    layout.width.push_back(w);
    layout.num_qubits += w;
  }
  return layout;
}

std::map<std::uint64_t, double> term_type_weights(const ComplexMatrix& m, const std::vector<std::size_t>& slot_dims,
                                                  double floor) {
  const QubitLayout layout = qubit_layout(slot_dims);
  const auto coeffs = pauli_coefficients(m, layout.num_qubits);
  const std::size_t d = std::size_t{1} << layout.num_qubits;
  std::map<std::uint64_t, double> out;
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t z = 0; z < d; ++z) {
      const double v = std::abs(coeffs[x * d + z]);
      if (v <= floor) continue;
      double& slot = out[layout.slot_mask(x | z)];
      slot = std::max(slot, v);
    }
  }
  return out;
}

std::vector<std::vector<double>> one_way_vertices(const Scenario& sc) {
  if (sc.num_parties() != 2) throw Error("one-way vertices need two parties");
  const std::size_t sa = sc.settings[0], sb = sc.settings[1];
  const std::size_t oa = sc.outcomes[0], ob = sc.outcomes[1];
  const std::size_t cells = sa * sb * oa * ob;
  std::vector<std::vector<double>> out;
  // Alice first: a = f(x), b = g(x, y).
  for (const auto& f : all_functions(sa, oa)) {
    for (const auto& g : all_functions(sa * sb, ob)) {
      std::vector<double> v(cells, 0.0);
      for (std::size_t x = 0; x < sa; ++x) {
        for (std::size_t y = 0; y < sb; ++y) {
          v[(x * sb + y) * oa * ob + f[x] * ob + g[x * sb + y]] = 1.0;
        }
      }
      out.push_back(std::move(v));
    }
  }
  // Bob first: b = g(y), a = f(x, y).
  for (const auto& g : all_functions(sb, ob)) {
    for (const auto& f : all_functions(sa * sb, oa)) {
      std::vector<double> v(cells, 0.0);
      for (std::size_t x = 0; x < sa; ++x) {
        for (std::size_t y = 0; y < sb; ++y) {
          v[(x * sb + y) * oa * ob + f[x * sb + y] * ob + g[y]] = 1.0;
        }
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

double hull_distance(const std::vector<std::vector<double>>& points, const std::vector<double>& target) {
  const std::set<std::vector<double>> unique(points.begin(), points.end());
  if (unique.empty()) throw Error("hull of an empty point set");
  const auto dim = static_cast<Eigen::Index>(target.size());
  Eigen::MatrixXd p(dim, static_cast<Eigen::Index>(unique.size()));
  Eigen::Index col = 0;
  for (const auto& pt : unique) {
    for (Eigen::Index i = 0; i < dim; ++i) p(i, col) = pt[i] - target[i];
    ++col;
  }
  const double scale = p.colwise().squaredNorm().maxCoeff();
  Eigen::Index start = 0;
  p.colwise().squaredNorm().minCoeff(&start);
  std::vector<Eigen::Index> corral{start};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = p.col(start);
  const double eps = 1e-12;
  for (int major = 0; major < 10000; ++major) {
    Eigen::Index j = 0;
    const Eigen::VectorXd dots = p.transpose() * x;
    dots.minCoeff(&j);
    if (x.squaredNorm() - dots(j) <= eps * scale) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
    corral.push_back(j);
    lambda.conservativeResize(lambda.size() + 1);
    lambda(lambda.size() - 1) = 0;
    while (true) {
      const auto k = static_cast<Eigen::Index>(corral.size());
      Eigen::MatrixXd ps(dim, k);
      for (Eigen::Index i = 0; i < k; ++i) ps.col(i) = p.col(corral[i]);
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      kkt.topLeftCorner(k, k) = ps.transpose() * ps;
      kkt.block(0, k, k, 1).setOnes();
      kkt.block(k, 0, 1, k).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs(k) = 1;
      const Eigen::VectorXd alpha = kkt.completeOrthogonalDecomposition().solve(rhs).head(k);
      if (alpha.minCoeff() > eps) {
        lambda = alpha;
        break;
      }
      double theta = 1;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (alpha(i) <= eps) theta = std::min(theta, lambda(i) / (lambda(i) - alpha(i)));
      }
      lambda = lambda + theta * (alpha - lambda);
      std::vector<Eigen::Index> kept;
      std::vector<double> kept_lambda;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (lambda(i) > eps) {
          kept.push_back(corral[i]);
          kept_lambda.push_back(lambda(i));
        }
      }
      corral = kept;
      lambda = Eigen::Map<Eigen::VectorXd>(kept_lambda.data(), static_cast<Eigen::Index>(kept_lambda.size()));
      lambda /= lambda.sum();
    }
    x = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < corral.size(); ++i) x += lambda(static_cast<Eigen::Index>(i)) * p.col(corral[i]);
  }
  return x.norm();
}

lp::Rational deterministic_bound(const polytope::Game& game) {
  const std::size_t no = game.scenario.num_outcomes();
  bool first = true;
  lp::Rational best = 0;
  for (const auto& v : one_way_vertices(game.scenario)) {
    lp::Rational value = 0;
    for (std::size_t cell = 0; cell < v.size(); ++cell) {
      if (v[cell] != 0) value += game.setting_distribution[cell / no] * game.payoff[cell];
    }
    if (first || value > best) best = value;
    first = false;
  }
  return best;
}

bool brute_force_fixed_order(const ProbabilityTable& t, const CausalConfiguration& config, double tol) {
  const Scenario& sc = t.scenario;
  const std::size_t n = sc.num_parties();
  std::vector<std::size_t> cfg(n);
  for (std::size_t k = 0; k < n; ++k) cfg[k] = config.index_of(sc.parties[k]);
  for (std::uint64_t kept_mask = 1; kept_mask < (std::uint64_t{1} << n); ++kept_mask) {
    std::vector<std::size_t> kept, dropped;
    for (std::size_t k = 0; k < n; ++k) ((kept_mask >> k) & 1u ? kept : dropped).push_back(k);
    if (!settings_ignored(t.p, sc.settings, sc.outcomes, dropped, kept, tol)) continue;
    // Reduced table on the kept parties, read at the dropped settings 0.
    std::vector<std::size_t> rs, ro;
    for (std::size_t k : kept) {
      rs.push_back(sc.settings[k]);
      ro.push_back(sc.outcomes[k]);
    }
    const auto m = marginal_of(t.p, sc.settings, sc.outcomes, kept);
    const std::size_t nro = product(ro);
    std::vector<double> reduced(product(rs) * nro);
    for (std::size_t s = 0; s < product(rs); ++s) {
      const auto sd = digits(s, rs);
      std::vector<std::size_t> full(n, 0);
      for (std::size_t i = 0; i < kept.size(); ++i) full[kept[i]] = sd[i];
      const std::size_t fs = undigits(full, sc.settings);
      for (std::size_t o = 0; o < nro; ++o) reduced[s * nro + o] = m[fs * nro + o];
    }
    const std::size_t km = kept.size();
    for (std::uint64_t x = 1; x + 1 < (std::uint64_t{1} << km); ++x) {
      std::vector<std::size_t> from, to;
      for (std::size_t i = 0; i < km; ++i) ((x >> i) & 1u ? from : to).push_back(i);
      bool ordered = false;
      for (std::size_t f : from) {
        for (std::size_t g : to) ordered = ordered || config.precedes(cfg[kept[f]], cfg[kept[g]]);
      }
      if (ordered) continue;
      if (!settings_ignored(reduced, rs, ro, from, to, tol)) return false;
    }
  }
  return true;
}

ComplexMatrix switch_mixture(const ComplexVector& psi) {
  auto delta = [](std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; };
  ComplexMatrix w = ComplexMatrix::Zero(16, 16);
  for (std::size_t r = 0; r < 16; ++r) {
    const std::size_t a1 = (r >> 3) & 1u, a2 = (r >> 2) & 1u, b1 = (r >> 1) & 1u, b2 = r & 1u;
    for (std::size_t c = 0; c < 16; ++c) {
      const std::size_t a1c = (c >> 3) & 1u, a2c = (c >> 2) & 1u, b1c = (c >> 1) & 1u, b2c = c & 1u;
      const Complex alice_first = psi(a1) * std::conj(psi(a1c)) * delta(a2, b1) * delta(a2c, b1c) * delta(b2, b2c);
      const Complex bob_first = psi(b1) * std::conj(psi(b1c)) * delta(b2, a1) * delta(b2c, a1c) * delta(a2, a2c);
      w(r, c) = 0.5 * (alice_first + bob_first);
    }
  }
  return w;
}

ComplexMatrix pauli_product(const std::string& ops) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (char c : ops) {
    const ComplexMatrix p = pauli_matrix(c);
    ComplexMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * p;
    }
    out = next;
  }
  return out;
}

WitnessRecheck recheck_witness(const procmat::ProcessMatrix& target, const convexsep::FeasibilityReport& report,
                               double psd_tol, double sum_tol, double span_tol) {
  WitnessRecheck out;
  const qlinalg::TensorSpace space = target.space();
  const QubitLayout layout = qubit_layout(space.dims());
  const std::size_t nq = layout.num_qubits;
  const std::size_t d = std::size_t{1} << nq;
  std::map<std::string, std::vector<Complex>> groups;
  std::vector<Complex> total(d * d, Complex(0, 0));
  out.min_eigenvalue = 0;
  bool first_block = true;
  for (const auto& block : report.blocks) {
    const ComplexMatrix h = 0.5 * (block.matrix + block.matrix.adjoint());
    const double lo = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues().minCoeff();
    out.min_eigenvalue = first_block ? lo : std::min(out.min_eigenvalue, lo);
    first_block = false;
    const QubitLayout local = qubit_layout(block.space.dims());
    // Reduced qubit q sits at full qubit position full_of[q].
    std::vector<std::size_t> full_of;
    for (std::size_t s = 0; s < block.space.num_slots(); ++s) {
      const std::size_t fs = space.index_of(block.space.slot(s).label);
      for (std::size_t q = 0; q < local.width[s]; ++q) full_of.push_back(layout.first_qubit[fs] + q);
    }
    auto lift = [&](std::size_t bits) {
      std::size_t f = 0;
      for (std::size_t q = 0; q < local.num_qubits; ++q) {
        if ((bits >> (local.num_qubits - 1 - q)) & 1u) f |= std::size_t{1} << (nq - 1 - full_of[q]);
      }
      return f;
    };
    const auto coeffs = pauli_coefficients(block.matrix, local.num_qubits);
    const std::size_t dl = std::size_t{1} << local.num_qubits;
    const std::string group = block.name.substr(0, block.name.find(' '));
    auto& acc = groups[group];
    acc.resize(d * d, Complex(0, 0));
    for (std::size_t x = 0; x < dl; ++x) {
      for (std::size_t z = 0; z < dl; ++z) {
        const std::size_t idx = lift(x) * d + lift(z);
        acc[idx] += coeffs[x * dl + z];
        total[idx] += coeffs[x * dl + z];
      }
    }
  }
  const auto target_coeffs = pauli_coefficients(target.matrix, nq);
  for (std::size_t i = 0; i < total.size(); ++i) {
    out.sum_error = std::max(out.sum_error, std::abs(total[i] - target_coeffs[i]));
  }
  std::vector<std::size_t> all(target.parties.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  std::ostringstream detail;
  for (const auto& [name, acc] : groups) {
    const std::size_t f = target.party_index(name);
    std::vector<std::size_t> others;
    for (std::size_t k : all) {
      if (k != f) others.push_back(k);
    }
    for (std::size_t x = 0; x < d; ++x) {
      for (std::size_t z = 0; z < d; ++z) {
        const double v = std::abs(acc[x * d + z]);
        if (v <= span_tol) continue;
        const std::uint64_t mask = layout.slot_mask(x | z);
        if (!rule_allowed(mask, all) || !rule_allowed(mask, others)) {
          out.forbidden_weight = std::max(out.forbidden_weight, v);
        }
      }
    }
  }
  out.ok = !report.blocks.empty() && out.min_eigenvalue >= -psd_tol && out.sum_error <= sum_tol &&
           out.forbidden_weight <= span_tol;
  detail << report.blocks.size() << " blocks, min eigenvalue " << out.min_eigenvalue << ", sum error "
         << out.sum_error << ", forbidden weight " << out.forbidden_weight;
  out.detail = detail.str();
  return out;
}

}  // namespace causality::checks::oracles
