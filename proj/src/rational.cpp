#include "basketcheck/rational.hpp"

#include <cctype>

namespace basketcheck {

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::optional<Rational> rational_from_literal(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    std::size_t dot = text.find('.');
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? "" : text.substr(dot + 1);
    if (int_part.empty() || (dot != std::string_view::npos && frac_part.empty())) {
        return std::nullopt;
    }
    for (char c : int_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    for (char c : frac_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }

    BigInt num{std::string(int_part)};
    BigInt den = 1;
    for (char c : frac_part) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    return Rational(num, den);
}

std::string rational_to_string(const Rational& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);

    // A terminating decimal exists iff den = 2^a * 5^b.
    BigInt reduced = den;
    int twos = 0;
    int fives = 0;
    while (reduced % 2 == 0) {
        reduced /= 2;
        ++twos;
    }
    while (reduced % 5 == 0) {
        reduced /= 5;
        ++fives;
    }
    if (reduced != 1) {
        return num.str() + "/" + den.str();
    }

    int digits = twos > fives ? twos : fives;
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt scaled = num;
    for (int i = 0; i < digits; ++i) scaled *= 10;
    scaled /= den;

    std::string s = scaled.str();
    std::string out;
    if (digits == 0) {
        out = s;
    } else {
        while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
        out = s.substr(0, s.size() - digits) + "." + s.substr(s.size() - digits);
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return negative ? "-" + out : out;
}

}  // namespace basketcheck
