#include "tanpq/complex_format.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tanpq {

namespace {

double parse_real(std::string_view text)
{
    if (text.empty()) throw std::invalid_argument("empty number");
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

} // namespace

Complex parse_complex(std::string_view text)
{
    if (text.empty()) throw std::invalid_argument("empty complex literal");

    if (text.back() != 'i') return {parse_real(text), 0.0};

    std::string_view body = text.substr(0, text.size() - 1);
    // Split at the last top-level +/- (not a leading sign, not an exponent sign).
    size_t split = std::string_view::npos;
    for (size_t i = body.size(); i-- > 1;) {
        const char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) {
        // Pure imaginary: "bi", "-i", "i".
        if (body.empty() || body == "+") return {0.0, 1.0};
        if (body == "-") return {0.0, -1.0};
        return {0.0, parse_real(body)};
    }
    const double re = parse_real(body.substr(0, split));
    std::string_view imag = body.substr(split);
    if (imag == "+") return {re, 1.0};
    if (imag == "-") return {re, -1.0};
    return {re, parse_real(imag)};
}

std::string format_complex(Complex z)
{
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

} // namespace tanpq
