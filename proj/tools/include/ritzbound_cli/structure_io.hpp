#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "ritzbound/extraction.hpp"

namespace ritzbound::cli {

/// A perturbation structure reduced to the data a user of an eigensolver has:
/// Ritz values, residual norms and optionally the tail spectrum.
using Structure = std::variant<SymmetricPerturbation, SvdPerturbation>;

/// JSON document:
///   {"kind": "symmetric" | "svd",
///    "theta": [...],
///    "residual_norms_e": [...],
///    "residual_norms_f": [...],     (svd only)
///    "tail_spectrum": [...],        (optional)
///    "tail_estimate": [...]}        (optional, symmetric only)
/// Symmetric theta ascending, svd theta descending.
Structure parse_structure(std::istream &in);
Structure read_structure(const std::filesystem::path &path);

/// Only the fields listed above are written; blocks and vectors are dropped.
void write_structure(const Structure &s, std::ostream &out);
void write_structure(const Structure &s, const std::filesystem::path &path);

} // namespace ritzbound::cli
