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

#include "causim/error.hpp"

namespace causim {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSite: return "InvalidSite";
    case ErrorCode::SiteMismatch: return "SiteMismatch";
    case ErrorCode::NotLatticeSite: return "NotLatticeSite";
    case ErrorCode::NotAcausal: return "NotAcausal";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::NoFoliationFound: return "NoFoliationFound";
    case ErrorCode::NonIsometry: return "NonIsometry";
    case ErrorCode::InvalidFoliation: return "InvalidFoliation";
    case ErrorCode::FoliationMismatch: return "FoliationMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidMeasurement: return "InvalidMeasurement";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::ZeroProduct: return "ZeroProduct";
    case ErrorCode::BadCausalPlacement: return "BadCausalPlacement";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace causim
