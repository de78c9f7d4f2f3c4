// Copyright (c) 2026 The abspose authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace abspose {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometry.
struct NonPositiveDepth : Error { using Error::Error; };
struct ZeroArea : Error { using Error::Error; };
struct ZeroExtent : Error { using Error::Error; };

// Root fitting.
struct DegenerateConfiguration : Error { using Error::Error; };
struct NoConsensus : Error { using Error::Error; };
struct EmptyMask : Error { using Error::Error; };

// Heatmaps / losses / regressor.
struct JointCountMismatch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };

// Metrics.
struct DegenerateGt : Error { using Error::Error; };
struct EmptySet : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct SchemaMismatch : Error { using Error::Error; };

// Synthetic scenes.
struct ConstantInput : Error { using Error::Error; };
struct PlacementFailure : Error { using Error::Error; };

// I/O. ParseError covers malformed JSON, SchemaError a violated document
// invariant, IoError a filesystem-level failure.
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace abspose
