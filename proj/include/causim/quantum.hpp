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

#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causim/report.hpp"

namespace causim {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical thresholds. Verifiers accept a scaled copy.
struct Tolerances {
    double state_norm = 1e-12;
    double hermitian = 1e-12;
    double psd = 1e-10;
    double trace = 1e-12;
    double completeness = 1e-10;
    double effect_bound = 1e-10;
    double unitary = 1e-10;
    double sqrt_negative = 1e-8;
    double phase_fit = 1e-9;
    double unimodular = 1e-8;
    double zero_product = 1e-12;
    double zero_branch = 1e-14;
    double phase_match = 1e-8;
    double fidelity = 1e-9;
    double commutator = 1e-9;
    double signalling = 1e-10;

    [[nodiscard]] Tolerances scaled(double factor) const;
};

class PureState {
  public:
    /// Throws InvalidState unless the norm is 1 within tolerance.
    static PureState make(Vector amplitudes, const Tolerances &tol = {});
    /// Normalizes first; throws InvalidState for the zero vector.
    static PureState normalized(Vector amplitudes);
    static PureState basis(Eigen::Index dim, Eigen::Index k);

    [[nodiscard]] const Vector &amplitudes() const noexcept { return v_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return v_.size(); }

  private:
    explicit PureState(Vector v) : v_(std::move(v)) {}
    Vector v_;
};

class DensityOperator {
  public:
    /// Throws InvalidState unless Hermitian, PSD and unit trace.
    static DensityOperator make(Matrix rho, const Tolerances &tol = {});
    static DensityOperator from_pure(const PureState &psi);

    [[nodiscard]] const Matrix &matrix() const noexcept { return rho_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return rho_.rows(); }

  private:
    explicit DensityOperator(Matrix rho) : rho_(std::move(rho)) {}
    Matrix rho_;
};

class Unitary {
  public:
    /// Throws NotUnitary unless U†U = 1 within tolerance.
    static Unitary make(Matrix u, const Tolerances &tol = {});
    static Unitary identity(Eigen::Index dim);

    [[nodiscard]] const Matrix &matrix() const noexcept { return u_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return u_.rows(); }

  private:
    explicit Unitary(Matrix u) : u_(std::move(u)) {}
    Matrix u_;
};

/// Finite Kraus family {M_k} with Σ M_k†M_k = 1.
class MeasurementFamily {
  public:
    /// Throws DimensionMismatch or InvalidMeasurement.
    static MeasurementFamily make(std::vector<Matrix> kraus,
                                  std::vector<std::string> labels = {},
                                  const Tolerances &tol = {});

    [[nodiscard]] const std::vector<Matrix> &kraus() const noexcept { return kraus_; }
    [[nodiscard]] const Matrix &operator[](std::size_t k) const { return kraus_.at(k); }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept { return labels_; }
    [[nodiscard]] std::size_t size() const noexcept { return kraus_.size(); }
    [[nodiscard]] Eigen::Index dim() const { return kraus_.front().rows(); }
    /// Index of `label`; throws UnknownOutcome.
    [[nodiscard]] std::size_t outcome(const std::string &label) const;

  private:
    MeasurementFamily(std::vector<Matrix> k, std::vector<std::string> l)
        : kraus_(std::move(k)), labels_(std::move(l)) {}
    std::vector<Matrix> kraus_;
    std::vector<std::string> labels_;
};

/// Effects {E_k}: Hermitian, 0 <= E_k <= 1, Σ E_k = 1.
class Povm {
  public:
    /// Throws DimensionMismatch or InvalidPovm.
    static Povm make(std::vector<Matrix> effects, const Tolerances &tol = {});

    [[nodiscard]] const std::vector<Matrix> &effects() const noexcept { return effects_; }
    [[nodiscard]] const Matrix &operator[](std::size_t k) const { return effects_.at(k); }
    [[nodiscard]] std::size_t size() const noexcept { return effects_.size(); }
    [[nodiscard]] Eigen::Index dim() const { return effects_.front().rows(); }

  private:
    explicit Povm(std::vector<Matrix> e) : effects_(std::move(e)) {}
    std::vector<Matrix> effects_;
};

/// `op` acting on factors [factor, factor + span) of a tensor layout.
struct LocalOperatorSpec {
    Matrix op;
    std::size_t factor = 0;
    std::vector<Eigen::Index> dims;
    std::size_t span = 1;
};

/// Completeness residual ‖Σ M†M − 1‖_F and the worst residual of
/// E(A) + E(B) = 1 over two-block partitions of the outcomes.
VerificationReport validate_measurement(const std::vector<Matrix> &kraus,
                                        const Tolerances &tol = {});

Povm povm_from_measurement(const MeasurementFamily &family);

/// Principal square roots of the effects.
MeasurementFamily measurement_from_povm(const Povm &povm, const Tolerances &tol = {});

/// Principal square root of a Hermitian PSD matrix; eigenvalues slightly
/// below zero are clamped, larger negatives raise NotPSD.
Matrix psd_sqrt(const Matrix &m, const Tolerances &tol = {});

/// {U1 M_k U2}.
MeasurementFamily conjugate_measurement(const Unitary &u1,
                                        const MeasurementFamily &family,
                                        const Unitary &u2);

double born_probability(const MeasurementFamily &family, std::size_t k,
                        const PureState &psi);
double born_probability(const MeasurementFamily &family, std::size_t k,
                        const DensityOperator &rho);
double born_probability(const Povm &povm, std::size_t k, const DensityOperator &rho);

/// M_k ψ / ‖M_k ψ‖; throws ZeroProbabilityBranch.
PureState selective_update(const MeasurementFamily &family, std::size_t k,
                           const PureState &psi, const Tolerances &tol = {});
DensityOperator selective_update(const MeasurementFamily &family, std::size_t k,
                                 const DensityOperator &rho, const Tolerances &tol = {});

/// Σ M_k ρ M_k†.
DensityOperator nonselective_update(const MeasurementFamily &family,
                                    const DensityOperator &rho);

/// AB − e^{iφ} BA.
Matrix anyonic_commutator(const Matrix &a, const Matrix &b, double phi);

struct PhaseFit {
    /// AB = λ BA within the fit tolerance.
    bool proportional = false;
    bool unimodular = false;
    cd lambda{0.0, 0.0};
    /// arg λ in [0, 2π); meaningful when proportional.
    double phase = 0.0;
    double fit_residual = 0.0;
    double modulus_deviation = 0.0;
};

/// Least-squares λ = ⟨BA, AB⟩ / ⟨BA, BA⟩; throws ZeroProduct when AB or BA
/// vanishes.
PhaseFit extract_phase(const Matrix &a, const Matrix &b, const Tolerances &tol = {});

enum class CommutationKind { Bosonic, Fermionic, Anyonic, None };

std::string to_string(CommutationKind kind);

struct Classification {
    CommutationKind kind = CommutationKind::None;
    PhaseFit fit;
    bool a_self_adjoint = false;
    bool b_self_adjoint = false;
    bool a_psd = false;
    bool b_psd = false;
    /// False means the phase contradicts the self-adjoint / PSD constraints.
    bool brooke_consistent = true;
};

Classification classify_commutation(const Matrix &a, const Matrix &b,
                                    const Tolerances &tol = {});

/// Distance between two angles on the circle.
double angle_distance(double a, double b);
/// Angle reduced to [0, 2π).
double wrap_angle(double a);

Matrix embed_local(const LocalOperatorSpec &spec);
Matrix kron(const Matrix &a, const Matrix &b);

bool is_hermitian(const Matrix &m, double tol);
bool is_psd(const Matrix &m, double tol);

Matrix haar_unitary(Eigen::Index dim, std::mt19937_64 &rng);
PureState random_state(Eigen::Index dim, std::mt19937_64 &rng);
DensityOperator random_density(Eigen::Index dim, std::mt19937_64 &rng);
/// Random `outcomes`-element Kraus family from a Haar isometry.
MeasurementFamily random_family(Eigen::Index dim, std::size_t outcomes,
                                std::mt19937_64 &rng);

} // namespace causim
