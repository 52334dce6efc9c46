#pragma once

// "cmx1" binary matrix files and a CSV text form.
//
// cmx1 layout (little-endian): the 4 bytes "CMX1", u32 rows, u32 cols, then
// rows*cols (re, im) float64 pairs in row-major order. The CSV form has one
// matrix row per line with entries written as "re+imj" / "re-imj".

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "l4u/matkit.hpp"

namespace l4u {

void write_cmx1(std::ostream& out, const CMatrix& m);
CMatrix read_cmx1(std::istream& in);

void save_cmx1(const std::filesystem::path& path, const CMatrix& m);
CMatrix load_cmx1(const std::filesystem::path& path);

/// Formats a complex number as "re+imj" with round-trip precision.
std::string format_complex(cplx z);
/// Parses "re", "imj", "re+imj", "re-imj" (also "i" as the imaginary unit).
cplx parse_complex(std::string_view token);

void write_csv(std::ostream& out, const CMatrix& m);
CMatrix read_csv(std::istream& in);

}  // namespace l4u
