#include "rankone/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace rankone {

ParseError::ParseError(int l, int c, const std::string& what)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what)
    , line(l)
    , column(c)
{}

namespace {

bool parse_double(std::string_view s, double& out)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

struct Token {
    std::string_view text;
    int              column; // 1-based
};

std::vector<Token> split(std::string_view line)
{
    std::vector<Token> out;
    std::size_t        i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        if (i >= line.size())
            break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

} // namespace

bool parse_complex_token(std::string_view token, Complex& out)
{
    double re = 0.0, im = 0.0;
    if (token.empty())
        return false;
    if (token.back() != 'i') {
        if (!parse_double(token, re))
            return false;
        out = {re, 0.0};
        return true;
    }
    auto body = token.substr(0, token.size() - 1);
    // The sign that starts the imaginary part: not the leading sign and not
    // an exponent sign.
    for (std::size_t p = body.size(); p-- > 1;) {
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            if (!parse_double(body.substr(0, p), re) || !parse_double(body.substr(p), im))
                return false;
            out = {re, im};
            return true;
        }
    }
    if (!parse_double(body, im))
        return false;
    out = {0.0, im};
    return true;
}

DenseMatrix read_matrix(std::istream& in)
{
    std::string line;
    int         lineno = 0;

    auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!split(line).empty())
                return true;
        }
        return false;
    };

    if (!next_content_line())
        throw ParseError(1, 1, "missing header 'm n field'");
    auto header = split(line);
    if (header.size() != 3)
        throw ParseError(lineno, 1, "header must be 'm n field'");
    long long m = 0, n = 0;
    auto      parse_dim = [&](const Token& t, long long& v) {
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size() || v < 1)
            throw ParseError(lineno, t.column, "dimension must be a positive integer");
    };
    parse_dim(header[0], m);
    parse_dim(header[1], n);
    Field field;
    try {
        field = parse_field(header[2].text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, header[2].column, e.what());
    }

    Matrix<double>  real_part;
    Matrix<Complex> complex_part;
    if (field == Field::real)
        real_part.resize(m, n);
    else
        complex_part.resize(m, n);

    for (long long i = 0; i < m; ++i) {
        if (!next_content_line())
            throw ParseError(lineno + 1, 1, "expected " + std::to_string(m) + " rows, found " + std::to_string(i));
        auto tokens = split(line);
        if (static_cast<long long>(tokens.size()) != n)
            throw ParseError(lineno, tokens.empty() ? 1 : tokens.back().column,
                             "expected " + std::to_string(n) + " entries, found " + std::to_string(tokens.size()));
        for (long long j = 0; j < n; ++j) {
            const auto& t = tokens[static_cast<std::size_t>(j)];
            if (field == Field::real) {
                double x = 0.0;
                if (!parse_double(t.text, x))
                    throw ParseError(lineno, t.column, "invalid real number '" + std::string(t.text) + "'");
                real_part(i, j) = x;
            } else {
                Complex z;
                if (!parse_complex_token(t.text, z))
                    throw ParseError(lineno, t.column, "invalid complex number '" + std::string(t.text) + "'");
                complex_part(i, j) = z;
            }
        }
    }
    if (next_content_line())
        throw ParseError(lineno, 1, "trailing content after the last row");

    if (field == Field::real)
        return DenseMatrix(std::move(real_part));
    return DenseMatrix(std::move(complex_part));
}

DenseMatrix read_matrix_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open matrix file " + path.string());
    return read_matrix(in);
}

void write_matrix(std::ostream& os, const DenseMatrix& m)
{
    fmt::print(os, "{} {} {}\n", m.rows(), m.cols(), to_string(m.field()));
    m.visit([&](const auto& a) {
        using T = typename std::decay_t<decltype(a)>::Scalar;
        for (Index i = 0; i < a.rows(); ++i) {
            for (Index j = 0; j < a.cols(); ++j) {
                if (j)
                    os << ' ';
                if constexpr (is_complex_v<T>)
                    fmt::print(os, "{:.17g}{:+.17g}i", a(i, j).real(), a(i, j).imag());
                else
                    fmt::print(os, "{:.17g}", a(i, j));
            }
            os << '\n';
        }
    });
}

} // namespace rankone
