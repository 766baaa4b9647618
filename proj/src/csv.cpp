// SPDX-License-Identifier: Apache-2.0

#include "gomp/csv.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace gomp::csv {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view whole)
{
  // from_chars rejects a leading '+'
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("malformed complex entry '" + std::string(whole) + "'");
  return v;
}

} // namespace

std::string format_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::string> split(std::string_view line, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

cplx parse_complex(std::string_view token)
{
  const std::string_view s = trim(token);
  if (s.empty())
    throw std::invalid_argument("empty complex entry");
  const char last = s.back();
  if (last != 'j' && last != 'i' && last != 'J' && last != 'I')
    return {parse_double(s, s), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  // split at the last sign that is not an exponent sign
  std::size_t split_at = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  if (split_at == std::string_view::npos) {
    if (body.empty() || body == "+" || body == "-")
      return {0.0, body == "-" ? -1.0 : 1.0};
    return {0.0, parse_double(body, s)};
  }
  const std::string_view re = body.substr(0, split_at);
  std::string_view im = body.substr(split_at);
  double im_v = 0.0;
  if (im == "+" || im == "-")
    im_v = im == "-" ? -1.0 : 1.0;
  else
    im_v = parse_double(im, s);
  return {parse_double(re, s), im_v};
}

std::string format_complex(cplx z)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

CMatrix read_complex_matrix(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path.string() + "': missing header line");
  const auto head = split(line);
  if (head.size() != 2)
    throw std::runtime_error("'" + path.string() + "': header must be 'rows,cols'");
  long rows = 0;
  long cols = 0;
  try {
    rows = std::stol(head[0]);
    cols = std::stol(head[1]);
  } catch (const std::exception&) {
    throw std::runtime_error("'" + path.string() + "': header must be 'rows,cols'");
  }
  if (rows < 1 || cols < 1)
    throw std::runtime_error("'" + path.string() + "': dimensions must be positive");

  CMatrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw std::runtime_error("'" + path.string() + "': expected " + std::to_string(rows) +
                               " data rows, found " + std::to_string(r));
    const auto cells = split(line);
    if (static_cast<long>(cells.size()) != cols)
      throw std::runtime_error("'" + path.string() + "': row " + std::to_string(r + 1) +
                               " has " + std::to_string(cells.size()) + " entries, expected " +
                               std::to_string(cols));
    for (long c = 0; c < cols; ++c) {
      try {
        m(r, c) = parse_complex(cells[c]);
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error("'" + path.string() + "' row " + std::to_string(r + 1) +
                                 ": " + e.what());
      }
    }
  }
  return m;
}

void write_complex_matrix(const CMatrix& m, const std::filesystem::path& path)
{
  auto out = open_for_write(path);
  out << m.rows() << ',' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c)
        out << ',';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
  if (!out)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}

} // namespace gomp::csv
