// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/common.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace gomp::csv {

/// Nine significant digits, shortest %g form.
std::string format_number(double v);

/// Opens `path` for writing; failures carry the path in the message.
std::ofstream open_for_write(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Parses "re+imj", "re-imj", "re", "imj" (also accepts 'i').
cplx parse_complex(std::string_view token);
std::string format_complex(cplx z);

/// Complex matrix file: first line "rows,cols", then one line per row with
/// comma separated "re+imj" entries.
CMatrix read_complex_matrix(const std::filesystem::path& path);
void write_complex_matrix(const CMatrix& m, const std::filesystem::path& path);

} // namespace gomp::csv
