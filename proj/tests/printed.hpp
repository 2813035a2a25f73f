#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

// A reference value given as text, e.g. "0.6704". The unit is one in the
// last printed digit.
struct Printed {
    double value;
    double unit;
};

inline Printed printed(std::string_view text)
{
    const std::string s(text);
    const auto dot = s.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
    return {std::strtod(s.c_str(), nullptr), std::pow(10.0, -decimals)};
}

inline bool within_units(double actual, const Printed& expected, double units)
{
    return std::abs(actual - expected.value) <= units * expected.unit * (1.0 + 1e-9);
}
