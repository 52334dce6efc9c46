#include "l4u/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace l4u {

namespace {

constexpr std::array<char, 4> kMagic = {'C', 'M', 'X', '1'};

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
void put(std::ostream& out, T v) {
  const T le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw Error(ErrorKind::format_error, std::string("truncated cmx1 stream while reading ") + what);
  }
  return to_little(v);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s, std::string_view token) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::format_error, "cannot parse complex token '" + std::string(token) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void write_cmx1(std::ostream& out, const CMatrix& m) {
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() ||
      m.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::invalid_dimension, "matrix too large for cmx1");
  }
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  for (const auto& z : m.data()) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
  if (!out) throw Error(ErrorKind::io_error, "failed writing cmx1 stream");
}

CMatrix read_cmx1(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kMagic) throw Error(ErrorKind::format_error, "missing CMX1 magic");
  const auto rows = get<std::uint32_t>(in, "rows");
  const auto cols = get<std::uint32_t>(in, "cols");
  if (rows == 0 || cols == 0) throw Error(ErrorKind::format_error, "cmx1 header has a zero dimension");
  std::vector<cplx> entries(static_cast<std::size_t>(rows) * cols);
  for (auto& z : entries) {
    const double re = get<double>(in, "payload");
    const double im = get<double>(in, "payload");
    z = {re, im};
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::format_error, "cmx1 payload longer than the header dimensions");
  }
  return CMatrix(rows, cols, std::move(entries));
}

void save_cmx1(const std::filesystem::path& path, const CMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "cannot open '" + path.string() + "' for writing");
  write_cmx1(out, m);
}

CMatrix load_cmx1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + path.string() + "'");
  return read_cmx1(in);
}

std::string format_complex(cplx z) {
  std::string s = format_double(z.real());
  const double im = z.imag();
  if (std::signbit(im)) {
    s += format_double(im);  // carries its own '-'
  } else {
    s += '+';
    s += format_double(im);
  }
  s += 'j';
  return s;
}

cplx parse_complex(std::string_view token) {
  const std::string_view t = trim(token);
  if (t.empty()) throw Error(ErrorKind::format_error, "empty complex token");
  const char last = t.back();
  if (last != 'j' && last != 'i') return {parse_double(t, token), 0.0};
  const std::string_view body = t.substr(0, t.size() - 1);
  // The split point is the last sign that is not part of an exponent and not
  // the leading sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_of = [&](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s, token);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_double(body.substr(0, split), token), imag_of(body.substr(split))};
}

void write_csv(std::ostream& out, const CMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_complex(m(i, j));
    }
    out << '\n';
  }
}

CMatrix read_csv(std::istream& in) {
  std::vector<cplx> entries;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view lv = trim(line);
    if (lv.empty() || lv.front() == '#') continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = lv.find(',', start);
      entries.push_back(parse_complex(lv.substr(start, comma - start)));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw Error(ErrorKind::format_error, "ragged CSV matrix");
    ++rows;
  }
  if (rows == 0) throw Error(ErrorKind::format_error, "CSV matrix has no rows");
  return CMatrix(rows, cols, std::move(entries));
}

}  // namespace l4u
