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


#include "causality/choi.hpp"

#include <algorithm>
#include <cmath>

namespace causality::choi {

using qlinalg::Slot;
using qlinalg::TensorSpace;

qlinalg::TensorSpace PartySpec::space() const {
  return TensorSpace({Slot{input_label(), d_in}, Slot{output_label(), d_out}});
}

void check_party(const PartySpec& party) {
  if (party.name.empty()) throw Error("party name must not be empty");
  if (party.d_in < 1 || party.d_out < 1) throw Error("party '" + party.name + "' has a zero dimension");
}

ComplexMatrix Instrument::total() const {
  const auto d = static_cast<Eigen::Index>(party.d_in * party.d_out);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& m : outcomes) sum += m;
  return sum;
}

CJOperator choi_from_kraus(const PartySpec& party, const std::vector<ComplexMatrix>& kraus,
                           double tol) {
  check_party(party);
  const auto din = static_cast<Eigen::Index>(party.d_in);
  const auto dout = static_cast<Eigen::Index>(party.d_out);
  ComplexMatrix completeness = ComplexMatrix::Zero(din, din);
  ComplexMatrix m = ComplexMatrix::Zero(din * dout, din * dout);
  for (const ComplexMatrix& e : kraus) {
    if (e.rows() != dout || e.cols() != din) {
      throw Error("Kraus operator has shape " + std::to_string(e.rows()) + "x" +
                  std::to_string(e.cols()) + ", expected d_out x d_in = " + std::to_string(dout) +
                  "x" + std::to_string(din));
    }
    completeness += e.adjoint() * e;
    ComplexVector v(din * dout);
    for (Eigen::Index i = 0; i < din; ++i) v.segment(i * dout, dout) = e.col(i);
    const ComplexVector vc = v.conjugate();
    m += vc * vc.adjoint();
  }
  const double excess = -qlinalg::min_eigenvalue(qlinalg::identity(party.d_in) - completeness);
  if (excess > tol) {
    throw Error("Kraus operators violate sum E^dagger E <= 1 by " + std::to_string(excess));
  }
  return CJOperator{party, m};
}

namespace {

CptpReport check_total(const PartySpec& party, const ComplexMatrix& m, const Tolerances& tol) {
  CptpReport report;
  const auto d = static_cast<Eigen::Index>(party.d_in * party.d_out);
  if (m.rows() != d || m.cols() != d) {
    report.message = "CJ operator has the wrong dimension";
    return report;
  }
  report.hermitian = qlinalg::is_hermitian(m, tol.hermiticity);
  report.min_eigenvalue = qlinalg::min_eigenvalue(m);
  const std::size_t keep[] = {0};
  const ComplexMatrix reduced = qlinalg::partial_trace(m, party.space(), keep);
  report.trace_condition_error = (reduced - qlinalg::identity(party.d_in)).cwiseAbs().maxCoeff();
  if (!report.hermitian) {
    report.message = "not Hermitian";
  } else if (report.min_eigenvalue < tol.psd_min_eigenvalue) {
    report.message = "not positive semidefinite (min eigenvalue " +
                     std::to_string(report.min_eigenvalue) + ")";
  } else if (report.trace_condition_error > tol.cptp) {
    report.message = "not trace preserving (deviation " +
                     std::to_string(report.trace_condition_error) + ")";
  } else {
    report.cptp = true;
  }
  return report;
}

}  // namespace

CptpReport is_cptp(const CJOperator& m, const Tolerances& tol) {
  check_party(m.party);
  return check_total(m.party, m.matrix, tol);
}

CptpReport check_instrument(const Instrument& instrument, const Tolerances& tol) {
  check_party(instrument.party);
  if (instrument.outcomes.empty()) {
    CptpReport report;
    report.message = "instrument has no outcomes";
    return report;
  }
  const auto d = static_cast<Eigen::Index>(instrument.party.d_in * instrument.party.d_out);
  for (std::size_t j = 0; j < instrument.outcomes.size(); ++j) {
    const ComplexMatrix& m = instrument.outcomes[j];
    if (m.rows() != d || m.cols() != d) {
      CptpReport report;
      report.message = "outcome " + std::to_string(j) + " has the wrong dimension";
      return report;
    }
    const double herm = qlinalg::hermiticity_error(m);
    const double lo = qlinalg::min_eigenvalue(m);
    if (herm > tol.hermiticity || lo < tol.psd_min_eigenvalue) {
      CptpReport report;
      report.hermitian = herm <= tol.hermiticity;
      report.min_eigenvalue = lo;
      report.message = "outcome " + std::to_string(j) + " is not completely positive";
      return report;
    }
  }
  return check_total(instrument.party, instrument.total(), tol);
}

Instrument measure_prepare(const PartySpec& party, const std::vector<ComplexMatrix>& povm,
                           const std::vector<ComplexMatrix>& preparations, const Tolerances& tol) {
  check_party(party);
  if (povm.size() != preparations.size()) {
    throw Error("measure_prepare needs one preparation per POVM element");
  }
  if (povm.empty()) throw Error("measure_prepare needs at least one outcome");
  const auto din = static_cast<Eigen::Index>(party.d_in);
  const auto dout = static_cast<Eigen::Index>(party.d_out);
  ComplexMatrix sum = ComplexMatrix::Zero(din, din);
  Instrument out{party, {}};
  for (std::size_t j = 0; j < povm.size(); ++j) {
    const ComplexMatrix& e = povm[j];
    const ComplexMatrix& rho = preparations[j];
    if (e.rows() != din || e.cols() != din) throw Error("POVM element has the wrong dimension");
    if (rho.rows() != dout || rho.cols() != dout) throw Error("preparation has the wrong dimension");
    if (!qlinalg::is_hermitian(e, tol.hermiticity) ||
        qlinalg::min_eigenvalue(e) < tol.psd_min_eigenvalue) {
      throw Error("POVM element " + std::to_string(j) + " is not positive semidefinite");
    }
    if (!qlinalg::is_hermitian(rho, tol.hermiticity) ||
        qlinalg::min_eigenvalue(rho) < tol.psd_min_eigenvalue ||
        std::abs(rho.trace() - Complex(1)) > tol.trace) {
      throw Error("preparation " + std::to_string(j) + " is not a density matrix");
    }
    sum += e;
    out.outcomes.push_back(qlinalg::kron(e, rho.transpose()));
  }
  const double dev = (sum - qlinalg::identity(party.d_in)).cwiseAbs().maxCoeff();
  if (dev > tol.cptp) throw Error("POVM elements do not sum to the identity (deviation " + std::to_string(dev) + ")");
  return out;
}

ComplexMatrix maximally_entangled(std::size_t d, bool normalized) {
  if (d < 1) throw Error("dimension must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector phi = ComplexVector::Zero(n * n);
  for (Eigen::Index j = 0; j < n; ++j) phi[j * n + j] = 1.0;
  ComplexMatrix m = phi * phi.adjoint();
  if (normalized) m /= static_cast<double>(d);
  return m;
}

ComplexMatrix projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

ComplexMatrix basis_projector(std::size_t d, std::size_t k) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return m;
}

}  // namespace causality::choi
