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


#include <algorithm>
#include <cmath>
#include <random>

#include "causality/polytope.hpp"

namespace causality::polytope {
namespace {

// One party's measure-and-prepare instrument for one setting: the input is
// measured in the orthonormal basis `basis` (columns); result m yields
// outcome assign[m] and the output vector prep[m].
struct LocalStrategy {
  ComplexMatrix basis;
  std::vector<std::size_t> assign;
  std::vector<ComplexVector> prep;
};

ComplexMatrix haar_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

ComplexVector random_unit(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(normal(rng), normal(rng));
  return v.normalized();
}

LocalStrategy random_local(const choi::PartySpec& p, std::size_t outcomes, std::mt19937_64& rng) {
  LocalStrategy s;
  s.basis = haar_unitary(p.d_in, rng);
  std::uniform_int_distribution<std::size_t> pick(0, outcomes - 1);
  for (std::size_t m = 0; m < p.d_in; ++m) {
    s.assign.push_back(pick(rng));
    s.prep.push_back(random_unit(p.d_out, rng));
  }
  return s;
}

choi::Instrument to_instrument(const choi::PartySpec& p, std::size_t outcomes, const LocalStrategy& s) {
  const auto d = static_cast<Eigen::Index>(p.d_in * p.d_out);
  choi::Instrument inst{p, std::vector<ComplexMatrix>(outcomes, ComplexMatrix::Zero(d, d))};
  for (std::size_t m = 0; m < p.d_in; ++m) {
    const ComplexVector f = s.basis.col(static_cast<Eigen::Index>(m));
    inst.outcomes[s.assign[m]] += qlinalg::kron(f * f.adjoint(), s.prep[m] * s.prep[m].adjoint());
  }
  return inst;
}

// <f| G |f> on the output factor.
ComplexMatrix sandwich_input(const ComplexMatrix& g, const ComplexVector& f, std::size_t dout) {
  const auto din = f.size();
  const auto n = static_cast<Eigen::Index>(dout);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index j = 0; j < din; ++j) {
      const Complex w = std::conj(f[i]) * f[j];
      if (w == Complex(0)) continue;
      h += w * g.block(i * n, j * n, n, n);
    }
  }
  return h;
}

// <chi| G |chi> on the input factor.
ComplexMatrix sandwich_output(const ComplexMatrix& g, const ComplexVector& chi, std::size_t din) {
  const auto n = chi.size();
  const auto d = static_cast<Eigen::Index>(din);
  ComplexMatrix k(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) k(i, j) = chi.dot(g.block(i * n, j * n, n, n) * chi);
  }
  return k;
}

void improve_local(const std::vector<ComplexMatrix>& g, const choi::PartySpec& p, std::size_t inner,
                   LocalStrategy& s) {
  const std::size_t din = p.d_in;
  for (std::size_t it = 0; it < inner; ++it) {
    // Best outcome and preparation for every measurement result.
    for (std::size_t m = 0; m < din; ++m) {
      const ComplexVector f = s.basis.col(static_cast<Eigen::Index>(m));
      double best = s.prep[m].dot(sandwich_input(g[s.assign[m]], f, p.d_out) * s.prep[m]).real();
      for (std::size_t o = 0; o < g.size(); ++o) {
        const ComplexMatrix h = sandwich_input(g[o], f, p.d_out);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
        const double top = es.eigenvalues()[h.rows() - 1];
        if (top > best + 1e-14) {
          best = top;
          s.assign[m] = o;
          s.prep[m] = es.eigenvectors().col(h.rows() - 1);
        }
      }
    }
    if (din == 1) continue;
    // Basis update: maximize sum_m <f_m|K_m|f_m> over orthonormal bases by
    // polar-decomposition steps on PSD-shifted K_m.
    std::vector<ComplexMatrix> k(din);
    double shift = 0;
    for (std::size_t m = 0; m < din; ++m) {
      const ComplexMatrix km = sandwich_output(g[s.assign[m]], s.prep[m], din);
      k[m] = 0.5 * (km + km.adjoint());
      shift = std::max(shift, -qlinalg::min_eigenvalue(k[m]));
    }
    for (auto& km : k) km += (shift + 1e-9) * ComplexMatrix::Identity(km.rows(), km.cols());
    for (int polar = 0; polar < 4; ++polar) {
      ComplexMatrix f(din, din);
      for (std::size_t m = 0; m < din; ++m) {
        f.col(static_cast<Eigen::Index>(m)) = k[m] * s.basis.col(static_cast<Eigen::Index>(m));
      }
      Eigen::JacobiSVD<ComplexMatrix> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
      s.basis = svd.matrixU() * svd.matrixV().adjoint();
    }
  }
}

}  // namespace

SeesawResult optimize_quantum_value(const procmat::ProcessMatrix& w, const Game& g, const SeesawConfig& config) {
  check_game(g);
  if (w.parties.size() != 2 || g.scenario.num_parties() != 2) {
    throw Error("the seesaw optimizer supports bipartite process matrices only");
  }
  const Scenario& sc = g.scenario;
  const std::size_t no = sc.num_outcomes();
  const qlinalg::TensorSpace space = w.space();
  std::mt19937_64 rng(config.seed);
  SeesawResult best;
  best.value = -1;

  for (std::size_t restart = 0; restart < std::max<std::size_t>(config.restarts, 1); ++restart) {
    std::vector<std::vector<LocalStrategy>> local(2);
    for (std::size_t x = 0; x < 2; ++x) {
      for (std::size_t s = 0; s < sc.settings[x]; ++s) local[x].push_back(random_local(w.parties[x], sc.outcomes[x], rng));
    }
    auto strategy = [&]() {
      Strategy st(2);
      for (std::size_t x = 0; x < 2; ++x) {
        for (const auto& ls : local[x]) st[x].push_back(to_instrument(w.parties[x], sc.outcomes[x], ls));
      }
      return st;
    };
    std::vector<double> history;
    bool converged = false;
    std::size_t quiet = 0;
    double value = game_value(g, quantum_table(w, sc, strategy()));
    std::size_t sweep = 0;
    for (; sweep < config.max_sweeps && !converged; ++sweep) {
      for (std::size_t x = 0; x < 2; ++x) {
        const std::size_t y = 1 - x;
        const std::size_t y_slots[] = {2 * y, 2 * y + 1};
        // Operators on X after contracting Y's current instruments.
        std::vector<std::vector<ComplexMatrix>> reduced(sc.settings[y]);
        for (std::size_t sy = 0; sy < sc.settings[y]; ++sy) {
          const auto inst = to_instrument(w.parties[y], sc.outcomes[y], local[y][sy]);
          for (const auto& m : inst.outcomes) reduced[sy].push_back(qlinalg::contract(w.matrix, space, y_slots, m));
        }
        for (std::size_t sx = 0; sx < sc.settings[x]; ++sx) {
          const auto dx = static_cast<Eigen::Index>(w.parties[x].d_in * w.parties[x].d_out);
          std::vector<ComplexMatrix> gop(sc.outcomes[x], ComplexMatrix::Zero(dx, dx));
          for (std::size_t sy = 0; sy < sc.settings[y]; ++sy) {
            std::vector<std::size_t> sd(2);
            sd[x] = sx;
            sd[y] = sy;
            const std::size_t s = correlations::flatten(sd, sc.settings);
            const double pi = g.setting_distribution[s].get_d();
            if (pi == 0) continue;
            for (std::size_t ox = 0; ox < sc.outcomes[x]; ++ox) {
              for (std::size_t oy = 0; oy < sc.outcomes[y]; ++oy) {
                std::vector<std::size_t> od(2);
                od[x] = ox;
                od[y] = oy;
                const double v = g.payoff[s * no + correlations::flatten(od, sc.outcomes)].get_d();
                if (v != 0) gop[ox] += (pi * v) * reduced[sy][oy];
              }
            }
          }
          for (auto& m : gop) m = 0.5 * (m + m.adjoint());
          improve_local(gop, w.parties[x], config.inner_iterations, local[x][sx]);
        }
      }
      const double next = game_value(g, quantum_table(w, sc, strategy()));
      history.push_back(next);
      quiet = next - value <= config.convergence_tolerance ? quiet + 1 : 0;
      value = std::max(value, next);
      converged = quiet >= 3;
    }
    if (value > best.value) {
      best.value = value;
      best.converged = converged;
      best.sweeps = sweep;
      best.strategy = strategy();
      best.table = quantum_table(w, sc, best.strategy);
      best.history = history;
    }
  }
  return best;
}

}  // namespace causality::polytope
