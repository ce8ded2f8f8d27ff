#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsm/linops.hpp"

namespace dsm {

/// Malformed file, unsupported kind, or filesystem failure.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads a Matrix Market matrix ("coordinate" or "array", field "real",
/// symmetry "symmetric" or "general"). A "general" file whose entries are
/// asymmetric beyond the operator tolerance is rejected.
SymmetricOperator read_matrix_market(const std::filesystem::path& path);

/// Writes coordinate real symmetric format: the lower triangle, 1-based
/// indices, 17 significant digits (lossless for doubles).
void write_matrix_market(const SymmetricOperator& A, const std::filesystem::path& path);

/// Reads a vector: either a Matrix Market "array real general" n-by-1
/// file, or plain text with one value per line and '#' comments. The
/// format is detected from the first line.
std::vector<double> read_vector(const std::filesystem::path& path);

/// Writes plain text, one value per line at 17 significant digits, with
/// optional '#' comment lines first.
void write_vector(std::span<const double> v, const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});

/// Shared formatting helper: shortest representation at 17 significant
/// digits, stable across runs on one platform.
std::string format_double(double v);

}  // namespace dsm
