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

#include <string>
#include <string_view>

#include "causim/quantum.hpp"

namespace causim::ops {

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();
/// diag(1, ω, ω², …) with ω = e^{2πi/d}.
Matrix clock(Eigen::Index d);
/// |j⟩ -> |j+1 mod d⟩.
Matrix shift(Eigen::Index d);
/// Rank-one projector on the k-th vector of the computational ('z') or
/// Fourier ('x') basis.
Matrix projector(char basis, Eigen::Index d, Eigen::Index k);
/// Control on the first qubit.
Matrix cnot();
Matrix controlled_phase(double theta);
/// (1 ⊗ H) CP(θ) (1 ⊗ H); equals CNOT at θ = π and 1 at θ = 0.
Matrix partial_cnot(double theta);

MeasurementFamily projective(char basis, Eigen::Index d);
/// {√((1 + ε σ)/2), √((1 − ε σ)/2)} with σ = σ_z or σ_x.
MeasurementFamily weak(char axis, double epsilon);
MeasurementFamily single_unitary(const Matrix &u);

/// Evaluates an operator expression such as
/// "kron(pauli_x, identity(2)) * exp(i*pi/3)". Throws ParseError with the
/// character offset of the problem.
Matrix evaluate(std::string_view expression);

/// As `evaluate`, requiring a 1×1 result.
cd evaluate_scalar(std::string_view expression);

} // namespace causim::ops
