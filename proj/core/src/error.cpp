#include "pvmk/error.hpp"

namespace pvmk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AsymmetricDistance: return "AsymmetricDistance";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::ZeroDistanceDistinctPoints: return "ZeroDistanceDistinctPoints";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::NonzeroSelfDistance: return "NonzeroSelfDistance";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StaleVertexSet: return "StaleVertexSet";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::OverlappingBranches: return "OverlappingBranches";
    case ErrorCode::InvalidIfs: return "InvalidIfs";
    case ErrorCode::TowerTooLarge: return "TowerTooLarge";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::BranchOutOfRange: return "BranchOutOfRange";
    case ErrorCode::WordTooLong: return "WordTooLong";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SumNotIdentity: return "SumNotIdentity";
    case ErrorCode::CrossProductNonzero: return "CrossProductNonzero";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::MismatchedMeasures: return "MismatchedMeasures";
    case ErrorCode::KindViolation: return "KindViolation";
    case ErrorCode::ZeroMassEverywhere: return "ZeroMassEverywhere";
  }
  return "Unknown";
}

}  // namespace pvmk
