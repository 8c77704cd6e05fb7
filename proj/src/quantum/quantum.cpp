// Copyright 2026 The causim Authors
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

#include "causim/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "causim/error.hpp"

namespace causim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix hermitian_part(const Matrix &m) { return 0.5 * (m + m.adjoint()); }

void require_square(const Matrix &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " must be a nonempty square matrix");
    }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char *what) {
    if (a != b) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": dimension " + std::to_string(a) +
                        " vs " + std::to_string(b));
    }
}

void check_family_shape(const std::vector<Matrix> &ops, const char *what) {
    if (ops.empty()) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " is empty");
    }
    for (const auto &m : ops) {
        require_square(m, what);
        require_same_dim(m.rows(), ops.front().rows(), what);
    }
}

double max_abs(const Matrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

Tolerances Tolerances::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance scale must be positive");
    }
    Tolerances t = *this;
    for (double *f : {&t.state_norm, &t.hermitian, &t.psd, &t.trace, &t.completeness,
                      &t.effect_bound, &t.unitary, &t.sqrt_negative, &t.phase_fit,
                      &t.unimodular, &t.zero_product, &t.zero_branch, &t.phase_match,
                      &t.fidelity, &t.commutator, &t.signalling}) {
        *f *= factor;
    }
    return t;
}

// ------------------------------------------------------------------ states

PureState PureState::make(Vector amplitudes, const Tolerances &tol) {
    if (amplitudes.size() == 0 || !amplitudes.allFinite()) {
        throw Error(ErrorCode::InvalidState, "state vector is empty or not finite");
    }
    const double dev = std::abs(amplitudes.norm() - 1.0);
    if (dev > tol.state_norm) {
        throw Error(ErrorCode::InvalidState,
                    "state norm deviates from 1 by " + std::to_string(dev));
    }
    return PureState(std::move(amplitudes));
}

PureState PureState::normalized(Vector amplitudes) {
    const double n = amplitudes.norm();
    if (amplitudes.size() == 0 || !std::isfinite(n) || n == 0.0) {
        throw Error(ErrorCode::InvalidState, "cannot normalize a zero vector");
    }
    return PureState(amplitudes / n);
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index k) {
    if (dim < 1 || k < 0 || k >= dim) {
        throw Error(ErrorCode::InvalidState, "basis index out of range");
    }
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return PureState(std::move(v));
}

DensityOperator DensityOperator::make(Matrix rho, const Tolerances &tol) {
    if (rho.rows() != rho.cols() || rho.rows() == 0 || !rho.allFinite()) {
        throw Error(ErrorCode::InvalidState, "density matrix must be square and finite");
    }
    if (!is_hermitian(rho, tol.hermitian)) {
        throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
    }
    if (!is_psd(rho, tol.psd)) {
        throw Error(ErrorCode::InvalidState, "density matrix has a negative eigenvalue");
    }
    if (std::abs(rho.trace().real() - 1.0) > tol.trace) {
        throw Error(ErrorCode::InvalidState, "density matrix trace differs from 1");
    }
    return DensityOperator(hermitian_part(rho));
}

DensityOperator DensityOperator::from_pure(const PureState &psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

Unitary Unitary::make(Matrix u, const Tolerances &tol) {
    require_square(u, "unitary");
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    const double r = (u.adjoint() * u - id).norm();
    if (!(r <= tol.unitary)) {
        throw Error(ErrorCode::NotUnitary,
                    "U†U deviates from identity by " + std::to_string(r));
    }
    return Unitary(std::move(u));
}

Unitary Unitary::identity(Eigen::Index dim) { return Unitary(Matrix::Identity(dim, dim)); }

// ------------------------------------------------------------ measurements

VerificationReport validate_measurement(const std::vector<Matrix> &kraus,
                                        const Tolerances &tol) {
    check_family_shape(kraus, "measurement family");
    const Eigen::Index d = kraus.front().rows();
    const Matrix id = Matrix::Identity(d, d);
    std::vector<Matrix> effects;
    effects.reserve(kraus.size());
    Matrix total = Matrix::Zero(d, d);
    for (const auto &m : kraus) {
        effects.push_back(m.adjoint() * m);
        total += effects.back();
    }
    const double completeness = (total - id).norm();

    const auto block_sum = [&](std::uint64_t mask, bool inside) {
        Matrix s = Matrix::Zero(d, d);
        for (std::size_t k = 0; k < effects.size(); ++k) {
            if (((mask >> k) & 1U) == static_cast<std::uint64_t>(inside)) s += effects[k];
        }
        return s;
    };
    double additivity = 0.0;
    const std::size_t n = effects.size();
    if (n <= 16) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            additivity = std::max(
                additivity, (block_sum(mask, true) + block_sum(mask, false) - id).norm());
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t mask = std::uint64_t{1} << k;
            additivity = std::max(
                additivity, (block_sum(mask, true) + block_sum(mask, false) - id).norm());
        }
    }

    VerificationReport rep;
    rep.check = "validate_measurement";
    rep.evidence["completeness_residual"] = completeness;
    rep.evidence["additivity_residual"] = additivity;
    rep.evidence["outcomes"] = static_cast<double>(n);
    rep.tolerances["completeness"] = tol.completeness;
    rep.pass = completeness <= tol.completeness && additivity <= tol.completeness;
    return rep;
}

MeasurementFamily MeasurementFamily::make(std::vector<Matrix> kraus,
                                          std::vector<std::string> labels,
                                          const Tolerances &tol) {
    const auto rep = validate_measurement(kraus, tol);
    if (!rep.pass) {
        throw Error(ErrorCode::InvalidMeasurement,
                    "completeness residual " +
                        std::to_string(rep.evidence.at("completeness_residual")));
    }
    if (labels.empty()) {
        for (std::size_t k = 0; k < kraus.size(); ++k) labels.push_back(std::to_string(k));
    }
    if (labels.size() != kraus.size()) {
        throw Error(ErrorCode::InvalidMeasurement, "label count differs from outcome count");
    }
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
        throw Error(ErrorCode::InvalidMeasurement, "outcome labels repeat");
    }
    return MeasurementFamily(std::move(kraus), std::move(labels));
}

std::size_t MeasurementFamily::outcome(const std::string &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw Error(ErrorCode::UnknownOutcome, "no outcome labelled '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

Povm Povm::make(std::vector<Matrix> effects, const Tolerances &tol) {
    check_family_shape(effects, "POVM");
    const Eigen::Index d = effects.front().rows();
    Matrix total = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < effects.size(); ++k) {
        const Matrix &e = effects[k];
        if (!is_hermitian(e, tol.completeness)) {
            throw Error(ErrorCode::InvalidPovm, "effect " + std::to_string(k) + " is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(e), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol.psd) {
            throw Error(ErrorCode::InvalidPovm, "effect " + std::to_string(k) + " is not PSD");
        }
        if (es.eigenvalues().maxCoeff() > 1.0 + tol.effect_bound) {
            throw Error(ErrorCode::InvalidPovm, "effect " + std::to_string(k) + " exceeds 1");
        }
        total += e;
    }
    const double r = (total - Matrix::Identity(d, d)).norm();
    if (r > tol.completeness) {
        throw Error(ErrorCode::InvalidPovm, "effects sum to 1 only within " + std::to_string(r));
    }
    for (auto &e : effects) e = hermitian_part(e);
    return Povm(std::move(effects));
}

Povm povm_from_measurement(const MeasurementFamily &family) {
    std::vector<Matrix> effects;
    effects.reserve(family.size());
    for (const auto &m : family.kraus()) effects.push_back(m.adjoint() * m);
    return Povm::make(std::move(effects));
}

Matrix psd_sqrt(const Matrix &m, const Tolerances &tol) {
    require_square(m, "matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -tol.sqrt_negative) {
        throw Error(ErrorCode::NotPSD,
                    "eigenvalue " + std::to_string(ev.minCoeff()) + " below zero");
    }
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

MeasurementFamily measurement_from_povm(const Povm &povm, const Tolerances &tol) {
    std::vector<Matrix> kraus;
    kraus.reserve(povm.size());
    for (const auto &e : povm.effects()) kraus.push_back(psd_sqrt(e, tol));
    return MeasurementFamily::make(std::move(kraus));
}

MeasurementFamily conjugate_measurement(const Unitary &u1, const MeasurementFamily &family,
                                        const Unitary &u2) {
    require_same_dim(u1.dim(), family.dim(), "left unitary");
    require_same_dim(u2.dim(), family.dim(), "right unitary");
    std::vector<Matrix> kraus;
    kraus.reserve(family.size());
    for (const auto &m : family.kraus()) kraus.push_back(u1.matrix() * m * u2.matrix());
    return MeasurementFamily::make(std::move(kraus), family.labels());
}

// ----------------------------------------------------------------- updates

namespace {

const Matrix &outcome_op(const MeasurementFamily &family, std::size_t k) {
    if (k >= family.size()) {
        throw Error(ErrorCode::UnknownOutcome, "outcome index " + std::to_string(k) +
                                                   " outside family of size " +
                                                   std::to_string(family.size()));
    }
    return family[k];
}

} // namespace

double born_probability(const MeasurementFamily &family, std::size_t k,
                        const PureState &psi) {
    const Matrix &m = outcome_op(family, k);
    require_same_dim(m.cols(), psi.dim(), "state");
    return (m * psi.amplitudes()).squaredNorm();
}

double born_probability(const MeasurementFamily &family, std::size_t k,
                        const DensityOperator &rho) {
    const Matrix &m = outcome_op(family, k);
    require_same_dim(m.cols(), rho.dim(), "state");
    return (m * rho.matrix() * m.adjoint()).trace().real();
}

double born_probability(const Povm &povm, std::size_t k, const DensityOperator &rho) {
    if (k >= povm.size()) {
        throw Error(ErrorCode::UnknownOutcome, "outcome index outside POVM");
    }
    require_same_dim(povm.dim(), rho.dim(), "state");
    return (povm[k] * rho.matrix()).trace().real();
}

PureState selective_update(const MeasurementFamily &family, std::size_t k,
                           const PureState &psi, const Tolerances &tol) {
    const double p = born_probability(family, k, psi);
    if (p <= tol.zero_branch) {
        throw Error(ErrorCode::ZeroProbabilityBranch,
                    "outcome '" + family.labels()[k] + "' has probability " + std::to_string(p));
    }
    return PureState::normalized(family[k] * psi.amplitudes());
}

DensityOperator selective_update(const MeasurementFamily &family, std::size_t k,
                                 const DensityOperator &rho, const Tolerances &tol) {
    const double p = born_probability(family, k, rho);
    if (p <= tol.zero_branch) {
        throw Error(ErrorCode::ZeroProbabilityBranch,
                    "outcome '" + family.labels()[k] + "' has probability " + std::to_string(p));
    }
    const Matrix &m = family[k];
    return DensityOperator::make(hermitian_part(m * rho.matrix() * m.adjoint() / p),
                                 Tolerances{}.scaled(1e4));
}

DensityOperator nonselective_update(const MeasurementFamily &family,
                                    const DensityOperator &rho) {
    require_same_dim(family.dim(), rho.dim(), "state");
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto &m : family.kraus()) out += m * rho.matrix() * m.adjoint();
    return DensityOperator::make(hermitian_part(out), Tolerances{}.scaled(1e4));
}

// ------------------------------------------------------------------ phases

Matrix anyonic_commutator(const Matrix &a, const Matrix &b, double phi) {
    require_square(a, "operator");
    require_square(b, "operator");
    require_same_dim(a.rows(), b.rows(), "operator pair");
    return a * b - std::polar(1.0, phi) * (b * a);
}

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi - 1e-13) r = 0.0;
    return r;
}

double angle_distance(double a, double b) {
    const double d = wrap_angle(a - b);
    return std::min(d, kTwoPi - d);
}

PhaseFit extract_phase(const Matrix &a, const Matrix &b, const Tolerances &tol) {
    require_square(a, "operator");
    require_square(b, "operator");
    require_same_dim(a.rows(), b.rows(), "operator pair");
    const Matrix ab = a * b;
    const Matrix ba = b * a;
    const double n_ab = ab.norm();
    const double n_ba = ba.norm();
    if (n_ab <= tol.zero_product || n_ba <= tol.zero_product) {
        throw Error(ErrorCode::ZeroProduct, "operator product vanishes; phase undefined");
    }
    PhaseFit fit;
    fit.lambda = (ba.conjugate().cwiseProduct(ab)).sum() / (n_ba * n_ba);
    fit.fit_residual = max_abs(ab - fit.lambda * ba) / std::max(1.0, max_abs(ab));
    fit.modulus_deviation = std::abs(std::abs(fit.lambda) - 1.0);
    fit.unimodular = fit.modulus_deviation <= tol.unimodular;
    fit.proportional = fit.fit_residual <= tol.phase_fit && fit.unimodular;
    fit.phase = wrap_angle(std::arg(fit.lambda));
    return fit;
}

std::string to_string(CommutationKind kind) {
    switch (kind) {
    case CommutationKind::Bosonic: return "bosonic";
    case CommutationKind::Fermionic: return "fermionic";
    case CommutationKind::Anyonic: return "anyonic";
    case CommutationKind::None: return "none";
    }
    return "none";
}

bool is_hermitian(const Matrix &m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).norm() <= tol;
}

bool is_psd(const Matrix &m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

Classification classify_commutation(const Matrix &a, const Matrix &b,
                                    const Tolerances &tol) {
    Classification c;
    c.fit = extract_phase(a, b, tol);
    c.a_self_adjoint = is_hermitian(a, tol.completeness);
    c.b_self_adjoint = is_hermitian(b, tol.completeness);
    c.a_psd = c.a_self_adjoint && is_psd(a, tol.psd);
    c.b_psd = c.b_self_adjoint && is_psd(b, tol.psd);
    if (!c.fit.proportional) return c;

    const double to_zero = angle_distance(c.fit.phase, 0.0);
    const double to_pi = angle_distance(c.fit.phase, std::numbers::pi);
    if (to_zero <= tol.phase_match) c.kind = CommutationKind::Bosonic;
    else if (to_pi <= tol.phase_match) c.kind = CommutationKind::Fermionic;
    else c.kind = CommutationKind::Anyonic;

    if (c.a_self_adjoint || c.b_self_adjoint) {
        c.brooke_consistent = c.kind != CommutationKind::Anyonic;
    }
    if (c.a_self_adjoint && c.b_self_adjoint && (c.a_psd || c.b_psd)) {
        c.brooke_consistent = c.kind == CommutationKind::Bosonic;
    }
    return c;
}

// --------------------------------------------------------------- embedding

Matrix kron(const Matrix &a, const Matrix &b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix embed_local(const LocalOperatorSpec &spec) {
    if (spec.dims.empty() || spec.span == 0 || spec.factor + spec.span > spec.dims.size()) {
        throw Error(ErrorCode::LayoutMismatch, "factor range outside the layout");
    }
    Eigen::Index before = 1, inside = 1, after = 1;
    for (std::size_t i = 0; i < spec.dims.size(); ++i) {
        if (spec.dims[i] < 1) throw Error(ErrorCode::LayoutMismatch, "factor dimension < 1");
        if (i < spec.factor) before *= spec.dims[i];
        else if (i < spec.factor + spec.span) inside *= spec.dims[i];
        else after *= spec.dims[i];
    }
    if (spec.op.rows() != inside || spec.op.cols() != inside) {
        throw Error(ErrorCode::LayoutMismatch,
                    "operator of size " + std::to_string(spec.op.rows()) +
                        " does not match factor dimension " + std::to_string(inside));
    }
    return kron(kron(Matrix::Identity(before, before), spec.op),
                Matrix::Identity(after, after));
}

// ------------------------------------------------------------------ random

Matrix haar_unitary(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix z(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = cd(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const cd d = r(j, j);
        q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : cd(1.0);
    }
    return q;
}

PureState random_state(Eigen::Index dim, std::mt19937_64 &rng) {
    return PureState::normalized(haar_unitary(dim, rng).col(0));
}

DensityOperator random_density(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix z(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = cd(g(rng), g(rng));
    }
    Matrix rho = z * z.adjoint();
    rho /= rho.trace().real();
    return DensityOperator::make(hermitian_part(rho), Tolerances{}.scaled(1e2));
}

MeasurementFamily random_family(Eigen::Index dim, std::size_t outcomes,
                                std::mt19937_64 &rng) {
    if (outcomes == 0) throw Error(ErrorCode::InvalidArgument, "family needs an outcome");
    const auto n = static_cast<Eigen::Index>(outcomes);
    const Matrix w = haar_unitary(dim * n, rng);
    std::vector<Matrix> kraus;
    for (Eigen::Index k = 0; k < n; ++k) kraus.push_back(w.block(k * dim, 0, dim, dim));
    return MeasurementFamily::make(std::move(kraus));
}

} // namespace causim
