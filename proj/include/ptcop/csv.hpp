#pragma once

#include <string>

#include "ptcop/common.hpp"

namespace ptcop {

// Read a rectangular numeric CSV. Errors carry 1-based row/column locations.
Matrix read_csv(const std::string& path, bool has_header = false);

// Write comma-separated values at 17 significant digits so equal matrices
// serialize to equal bytes.
void write_csv(const std::string& path, const Matrix& values);

std::string format_double(double v);

}  // namespace ptcop
