#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rankone/matrix.hpp"

namespace rankone {

// Text matrix format:
//
//   m n field
//   a_00 a_01 ... a_0(n-1)
//   ...
//
// field is `real` or `complex`; complex entries are written `re+imi`
// (e.g. `1.5-2i`). Numbers are printed with 17 significant digits.

struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string& what);
    int line;
    int column;
};

DenseMatrix read_matrix(std::istream& in);
DenseMatrix read_matrix_file(const std::filesystem::path& path);

void write_matrix(std::ostream& os, const DenseMatrix& m);

/// Parses `re+imi`, `re-imi` or a plain real number.
bool parse_complex_token(std::string_view token, Complex& out);

} // namespace rankone
