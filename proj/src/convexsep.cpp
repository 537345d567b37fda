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


#include "causality/convexsep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

namespace causality::convexsep {

using qlinalg::HSTransform;
using qlinalg::TensorSpace;

namespace {

std::uint64_t slot_bits(const std::vector<std::size_t>& slots) {
  std::uint64_t bits = 0;
  for (std::size_t s : slots) bits |= std::uint64_t{1} << s;
  return bits;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& removed) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) out.push_back(i);
  }
  return out;
}

// Affine projection for the coefficients that share one support mask.
struct MaskProjection {
  std::vector<std::size_t> blocks;  // participating blocks
  Eigen::MatrixXd p;                // k x k
  Eigen::VectorXd q;                // k
  bool consistent = true;
};

MaskProjection build_mask_projection(const SeparabilitySpec& spec, std::uint64_t mask,
                                     const std::vector<std::uint64_t>& identity_bits) {
  MaskProjection mp;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    if ((mask & identity_bits[b]) != 0) continue;
    if (spec.blocks[b].span && !spec.blocks[b].span(mask)) continue;
    mp.blocks.push_back(b);
  }
  const std::size_t k = mp.blocks.size();
  if (k == 0) {
    mp.consistent = false;
    return mp;
  }
  std::vector<Eigen::VectorXd> rows;
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    if (spec.groups[g].allowed(mask)) continue;
    Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (spec.blocks[mp.blocks[i]].group == g) {
        row(static_cast<Eigen::Index>(i)) = 1;
        any = true;
      }
    }
    if (any) rows.push_back(row);
  }
  rows.push_back(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k)));
  Eigen::MatrixXd g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < rows.size(); ++r) g.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  const Eigen::MatrixXd pinv = g.completeOrthogonalDecomposition().pseudoInverse();
  mp.p = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) - pinv * g;
  mp.q = pinv.col(g.rows() - 1);
  Eigen::VectorXd e_last = Eigen::VectorXd::Zero(g.rows());
  e_last(g.rows() - 1) = 1;
  mp.consistent = (g * mp.q - e_last).norm() < 1e-10;
  return mp;
}

struct BlockData {
  TensorSpace space;
  HSTransform transform;
  std::vector<std::size_t> full_index;  // reduced coefficient -> full coefficient
};

double max_abs_imag(const ComplexVector& v) {
  return v.size() == 0 ? 0.0 : v.imag().cwiseAbs().maxCoeff();
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::kFeasible:
      return "feasible";
    case Status::kInconclusive:
      return "inconclusive";
    case Status::kCertifiedInfeasible:
      return "certified-infeasible";
  }
  return "unknown";
}

FeasibilityReport solve_separability(const SeparabilitySpec& spec, const ComplexMatrix& target,
                                     const DykstraOptions& options) {
  const TensorSpace& space = spec.space;
  if (target.rows() != static_cast<Eigen::Index>(space.dim()) || target.cols() != target.rows()) {
    throw Error("target matrix does not match the separability space");
  }
  if (spec.blocks.empty()) throw Error("separability spec has no blocks");
  for (const auto& b : spec.blocks) {
    if (b.group >= spec.groups.size()) throw Error("block '" + b.name + "' refers to a missing group");
    for (std::size_t s : b.identity_slots) {
      if (s >= space.num_slots()) throw Error("block '" + b.name + "' has an out-of-range identity slot");
    }
  }
  const HSTransform full(space);
  const ComplexVector target_complex = full.forward(target);
  if (max_abs_imag(target_complex) > 1e-9) throw Error("target matrix is not Hermitian");
  const Eigen::VectorXd t = target_complex.real();
  const double full_dim = static_cast<double>(space.dim());
  const double frob_scale = std::sqrt(full_dim);

  std::vector<std::uint64_t> identity_bits;
  std::vector<BlockData> data;
  for (const auto& b : spec.blocks) {
    identity_bits.push_back(slot_bits(b.identity_slots));
    const auto keep = complement(space.num_slots(), b.identity_slots);
    TensorSpace reduced = space.subspace(keep);
    HSTransform transform(reduced);
    std::vector<std::size_t> map(transform.num_coefficients());
    std::vector<std::size_t> mu_full(space.num_slots(), 0);
    for (std::size_t beta = 0; beta < map.size(); ++beta) {
      const auto mu = transform.multi_index(beta);
      std::fill(mu_full.begin(), mu_full.end(), 0);
      for (std::size_t i = 0; i < keep.size(); ++i) mu_full[keep[i]] = mu[i];
      map[beta] = full.flat_index(mu_full);
    }
    data.push_back(BlockData{std::move(reduced), std::move(transform), std::move(map)});
  }

  // Per full coefficient: which (block, reduced index) pairs carry it.
  const std::size_t n = full.num_coefficients();
  std::vector<std::vector<std::size_t>> carriers(n);
  for (std::size_t b = 0; b < data.size(); ++b) {
    for (std::size_t beta = 0; beta < data[b].full_index.size(); ++beta) {
      carriers[data[b].full_index[beta]].push_back(beta);
    }
  }
  std::map<std::uint64_t, MaskProjection> cache;
  std::vector<const MaskProjection*> proj(n);
  FeasibilityReport report;
  double inconsistency = 0;
  std::uint64_t worst_mask = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const std::uint64_t mask = full.support_mask(a);
    auto it = cache.find(mask);
    if (it == cache.end()) it = cache.emplace(mask, build_mask_projection(spec, mask, identity_bits)).first;
    proj[a] = &it->second;
    if (!it->second.consistent && std::abs(t(static_cast<Eigen::Index>(a))) > inconsistency) {
      inconsistency = std::abs(t(static_cast<Eigen::Index>(a)));
      worst_mask = mask;
    }
  }
  if (inconsistency > 1e-10) {
    report.status = Status::kInconclusive;
    report.residual = frob_scale * inconsistency;
    std::ostringstream note;
    note << "affine constraints are inconsistent: the target carries a term with slot mask 0x" << std::hex
         << worst_mask << " that no admissible block combination can produce";
    report.note = note.str();
    return report;
  }
  // Reduced index lookup for the carriers, aligned with proj[a]->blocks.
  std::vector<std::vector<std::size_t>> carrier_index(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& blocks = proj[a]->blocks;
    carrier_index[a].assign(blocks.size(), 0);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::size_t b = blocks[i];
      std::size_t found = n;
      for (std::size_t beta : carriers[a]) {
        if (beta < data[b].full_index.size() && data[b].full_index[beta] == a) {
          found = beta;
          break;
        }
      }
      if (found == n) throw Error("internal error: coefficient map is incomplete");
      carrier_index[a][i] = found;
    }
  }

  const std::size_t nb = data.size();
  auto project_affine = [&](const std::vector<Eigen::VectorXd>& in, std::vector<Eigen::VectorXd>& out) {
    for (std::size_t b = 0; b < nb; ++b) out[b].setZero(in[b].size());
    Eigen::VectorXd v;
    for (std::size_t a = 0; a < n; ++a) {
      const MaskProjection& mp = *proj[a];
      const auto k = static_cast<Eigen::Index>(mp.blocks.size());
      if (k == 0) continue;
      v.resize(k);
      for (Eigen::Index i = 0; i < k; ++i) v(i) = in[mp.blocks[i]](static_cast<Eigen::Index>(carrier_index[a][i]));
      const Eigen::VectorXd w = mp.p * v + mp.q * t(static_cast<Eigen::Index>(a));
      for (Eigen::Index i = 0; i < k; ++i) out[mp.blocks[i]](static_cast<Eigen::Index>(carrier_index[a][i])) = w(i);
    }
  };
  auto project_cone = [&](std::size_t b, const Eigen::VectorXd& in) -> Eigen::VectorXd {
    const ComplexMatrix m = data[b].transform.inverse(RealVector(in));
    const ComplexMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    const RealVector clamped = es.eigenvalues().cwiseMax(0.0);
    const ComplexMatrix psd = es.eigenvectors() * clamped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return data[b].transform.forward(psd).real();
  };
  auto block_min_eigenvalue = [&](std::size_t b, const Eigen::VectorXd& c) {
    const ComplexMatrix m = data[b].transform.inverse(RealVector(c));
    return qlinalg::min_eigenvalue(0.5 * (m + m.adjoint()));
  };

  std::vector<Eigen::VectorXd> x(nb), y(nb), p(nb), z(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto size = static_cast<Eigen::Index>(data[b].full_index.size());
    x[b] = Eigen::VectorXd::Zero(size);
    p[b] = Eigen::VectorXd::Zero(size);
  }
  project_affine(std::vector<Eigen::VectorXd>(x), x);

  bool done = false;
  std::size_t it = 0;
  double residual = 0;
  while (it < options.max_iterations) {
    ++it;
    for (std::size_t b = 0; b < nb; ++b) {
      z[b] = x[b] + p[b];
      y[b] = project_cone(b, z[b]);
      p[b] = z[b] - y[b];
    }
    project_affine(y, x);
    double sq = 0;
    for (std::size_t b = 0; b < nb; ++b) sq += (y[b] - x[b]).squaredNorm();
    residual = frob_scale * std::sqrt(sq);
    if (options.log_period > 0 && (it % options.log_period == 0 || it == 1)) report.residual_log.push_back(residual);
    if (residual <= options.residual_tolerance) {
      double worst = 0;
      for (std::size_t b = 0; b < nb; ++b) worst = std::min(worst, block_min_eigenvalue(b, x[b]));
      if (worst >= -options.psd_tolerance) {
        done = true;
        break;
      }
    }
  }
  report.iterations = it;
  report.residual = residual;
  if (!done) {
    report.status = Status::kInconclusive;
    report.note = "projection budget exhausted";
    return report;
  }
  report.status = Status::kFeasible;
  for (std::size_t b = 0; b < nb; ++b) {
    WitnessBlock wb;
    wb.name = spec.blocks[b].name;
    wb.space = data[b].space;
    for (std::size_t s : spec.blocks[b].identity_slots) wb.identity_labels.push_back(space.slot(s).label);
    const ComplexMatrix m = data[b].transform.inverse(RealVector(x[b]));
    wb.matrix = 0.5 * (m + m.adjoint());
    report.blocks.push_back(std::move(wb));
  }
  return report;
}

WitnessValidation validate_witness(const SeparabilitySpec& spec, const ComplexMatrix& target,
                                   const FeasibilityReport& report, double psd_tol, double span_tol,
                                   double sum_tol) {
  WitnessValidation v;
  if (report.blocks.size() != spec.blocks.size()) return v;
  const TensorSpace& space = spec.space;
  const HSTransform full(space);
  ComplexMatrix sum = ComplexMatrix::Zero(target.rows(), target.cols());
  std::vector<Eigen::VectorXd> group_sums(spec.groups.size(),
                                          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full.num_coefficients())));
  v.min_eigenvalue = 0;
  bool first = true;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const WitnessBlock& wb = report.blocks[b];
    const double me = qlinalg::min_eigenvalue(wb.matrix);
    v.min_eigenvalue = first ? me : std::min(v.min_eigenvalue, me);
    first = false;
    const ComplexMatrix embedded = qlinalg::embed(wb.matrix, wb.space, space);
    sum += embedded;
    const ComplexVector c = full.forward(embedded);
    const std::uint64_t id_bits = slot_bits(spec.blocks[b].identity_slots);
    for (std::size_t a = 0; a < full.num_coefficients(); ++a) {
      const std::uint64_t mask = full.support_mask(a);
      const double mag = std::abs(c(static_cast<Eigen::Index>(a)));
      const bool in_span = (mask & id_bits) == 0 && (!spec.blocks[b].span || spec.blocks[b].span(mask));
      if (!in_span) v.span_error = std::max(v.span_error, mag);
    }
    group_sums[spec.blocks[b].group] += c.real();
  }
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    for (std::size_t a = 0; a < full.num_coefficients(); ++a) {
      if (!spec.groups[g].allowed(full.support_mask(a))) {
        v.span_error = std::max(v.span_error, std::abs(group_sums[g](static_cast<Eigen::Index>(a))));
      }
    }
  }
  v.sum_error = (sum - target).norm();
  v.ok = v.min_eigenvalue >= -psd_tol && v.span_error <= span_tol && v.sum_error <= sum_tol;
  return v;
}

namespace {

void require_parties(const procmat::ProcessMatrix& w, std::size_t n, const char* what) {
  if (w.parties.size() != n) {
    throw Error(std::string(what) + " needs exactly " + std::to_string(n) + " parties");
  }
}

std::size_t out_slot(std::size_t k) { return 2 * k + 1; }

// Component in which `first` acts first: two blocks with the output of one of
// the other parties traced to the identity.
bool restriction_allowed(std::uint64_t mask, const std::vector<std::size_t>& parties) {
  return procmat::is_allowed_mask(mask & procmat::parties_bits(parties), parties);
}

void add_first_party_component(SeparabilitySpec& spec, const procmat::ProcessMatrix& w, std::size_t first) {
  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != first) others.push_back(k);
  }
  const std::size_t g = spec.groups.size();
  const std::string f = w.parties[first].name;
  spec.groups.push_back(GroupSpec{f + " first", [others](std::uint64_t mask) {
                                    return procmat::is_allowed_mask(mask, 3) &&
                                           restriction_allowed(mask, others);
                                  }});
  for (std::size_t last : others) {
    BlockSpec b;
    b.name = f + " first, " + w.parties[last].name + " last";
    b.identity_slots = {out_slot(last)};
    b.group = g;
    spec.blocks.push_back(std::move(b));
  }
}

}  // namespace

SeparabilitySpec bipartite_spec(const procmat::ProcessMatrix& w) {
  require_parties(w, 2, "bipartite causal separability");
  SeparabilitySpec spec;
  spec.space = w.space();
  spec.groups.push_back(GroupSpec{"valid", [](std::uint64_t mask) { return procmat::is_allowed_mask(mask, 2); }});
  const auto allowed = [](std::uint64_t mask) { return procmat::is_allowed_mask(mask, 2); };
  spec.blocks.push_back(BlockSpec{w.parties[0].name + " before " + w.parties[1].name, {out_slot(1)}, allowed, 0});
  spec.blocks.push_back(BlockSpec{w.parties[1].name + " before " + w.parties[0].name, {out_slot(0)}, allowed, 0});
  return spec;
}

SeparabilitySpec fixed_first_spec(const procmat::ProcessMatrix& w, std::size_t first) {
  require_parties(w, 3, "fixed-first extensible causal separability");
  if (first >= 3) throw Error("first party index out of range");
  SeparabilitySpec spec;
  spec.space = w.space();
  add_first_party_component(spec, w, first);
  return spec;
}

SeparabilitySpec tripartite_ecs_spec(const procmat::ProcessMatrix& w) {
  require_parties(w, 3, "tripartite extensible causal separability");
  SeparabilitySpec spec;
  spec.space = w.space();
  for (std::size_t f = 0; f < 3; ++f) add_first_party_component(spec, w, f);
  return spec;
}

FeasibilityReport bipartite_causal_sep(const procmat::ProcessMatrix& w, const DykstraOptions& options) {
  return solve_separability(bipartite_spec(w), w.matrix, options);
}

FeasibilityReport fixed_first_ecs(const procmat::ProcessMatrix& w, const std::string& first,
                                  const DykstraOptions& options, const Tolerances& tol) {
  require_parties(w, 3, "fixed-first extensible causal separability");
  const std::size_t f = w.party_index(first);
  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != f) others.push_back(k);
  }
  std::vector<std::string> offending;
  for (const auto& term : procmat::term_types_present(w, tol)) {
    if (!procmat::is_allowed_mask(term.type.mask, 3) || !restriction_allowed(term.type.mask, others)) {
      offending.push_back(term.type.label(w.parties));
    }
  }
  if (!offending.empty()) {
    std::string list;
    for (const auto& o : offending) list += (list.empty() ? "" : ", ") + o;
    throw Error("matrix has term types not allowed with " + first + " first: " + list);
  }
  return solve_separability(fixed_first_spec(w, f), w.matrix, options);
}

std::optional<Certificate> rank1_nonseparability_certificate(const procmat::ProcessMatrix& w,
                                                             const Tolerances& tol) {
  require_parties(w, 3, "rank-one nonseparability certificate");
  const qlinalg::EigenDecomposition e = qlinalg::eig_hermitian(w.matrix, tol.hermiticity);
  const Eigen::Index d = e.values.size();
  if (d < 2) return std::nullopt;
  const double largest = e.values(d - 1);
  const double second = e.values(d - 2);
  if (second > tol.rank_one) return std::nullopt;
  const auto names = w.party_names();
  Certificate c;
  c.kind = "rank-one-signaling";
  c.largest_eigenvalue = largest;
  c.second_eigenvalue = second;
  for (const auto& x : names) {
    std::vector<std::string> rest;
    for (const auto& o : names) {
      if (o != x) rest.push_back(o);
    }
    if (procmat::no_signaling_matrix(w, rest, {x}, tol).no_signaling) return std::nullopt;
    c.signaled_parties.push_back(x);
  }
  std::ostringstream reason;
  reason << "matrix is rank one (second eigenvalue " << second
         << ") so it cannot be a nontrivial mixture, and every party receives signaling from the others, so no "
            "single party can act first";
  c.reason = reason.str();
  return c;
}

FeasibilityReport tripartite_ecs(const procmat::ProcessMatrix& w, const EcsOptions& options,
                                 const Tolerances& tol) {
  require_parties(w, 3, "tripartite extensible causal separability");
  if (options.use_certificate) {
    if (auto cert = rank1_nonseparability_certificate(w, tol)) {
      FeasibilityReport r;
      r.status = Status::kCertifiedInfeasible;
      r.certificate = std::move(cert);
      r.note = "rank-one certificate applied before projections";
      return r;
    }
  }
  return solve_separability(tripartite_ecs_spec(w), w.matrix, options.dykstra);
}

}  // namespace causality::convexsep
