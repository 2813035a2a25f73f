#pragma once

#include <array>
#include <string_view>

// One-period reference values, k = 1, percentages.
inline constexpr std::array<int, 5> kTablePools{125, 250, 500, 1000, 2000};

struct TableRow {
    std::string_view label;
    std::array<std::string_view, 5> cells;
};

// Independent defaults.
inline constexpr std::array<TableRow, 9> kIndependentTable{{
    {"naive", {"0.8", "0.4", "0.2", "0.1", "0.05"}},
    {"ucb 50", {"1.339", "0.6704", "0.3354", "0.1678", "0.0839"}},
    {"ucb 75", {"2.1396", "1.0734", "0.5376", "0.269", "0.1346"}},
    {"ucb 90", {"3.076", "1.5469", "0.7757", "0.3884", "0.1943"}},
    {"neutral 0.025", {"1.1785", "0.7655", "0.3983", "0.1996", "0.0999"}},
    {"neutral 0.05", {"1.5233", "0.7935", "0.3984", "0.1996", "0.0999"}},
    {"neutral 0.1", {"1.5746", "0.7937", "0.3984", "0.1996", "0.0999"}},
    {"neutral 1", {"1.5748", "0.7937", "0.3984", "0.1996", "0.0999"}},
    {"conservative", {"1.5873", "0.7968", "0.3992", "0.1998", "0.1"}},
}};

// Correlated defaults; rows as above without the naive row, neutral
// constraints 0.01, 0.1, 0.25, 1.
inline constexpr std::array<TableRow, 8> kCorrelatedTable018{{
    {"ucb 50", {"2.172", "1.213", "0.6752", "0.3789", "0.2101"}},
    {"ucb 75", {"4.6205", "2.7141", "1.5935", "0.9371", "0.5494"}},
    {"ucb 90", {"8.3234", "5.1456", "3.166", "1.9408", "1.1889"}},
    {"neutral 0.01", {"0.5893", "0.5555", "0.5146", "0.4673", "0.4145"}},
    {"neutral 0.1", {"3.747", "2.9483", "2.2161", "1.6063", "1.136"}},
    {"neutral 0.25", {"5.1849", "3.6091", "2.4817", "1.701", "1.1664"}},
    {"neutral 1", {"5.3717", "3.6534", "2.491", "1.7028", "1.1669"}},
    {"conservative", {"5.6706", "3.8092", "2.5724", "1.7455", "1.1894"}},
}};

inline constexpr std::array<TableRow, 8> kCorrelatedTable024{{
    {"ucb 50", {"2.5847", "1.4981", "0.871", "0.5069", "0.2939"}},
    {"ucb 75", {"5.7816", "3.5573", "2.1841", "1.3431", "0.8216"}},
    {"ucb 90", {"10.7333", "6.9794", "4.5195", "2.9129", "1.8711"}},
    {"neutral 0.01", {"0.5909", "0.5631", "0.5312", "0.4955", "0.4564"}},
    {"neutral 0.1", {"4.1485", "3.5018", "2.8692", "2.287", "1.7805"}},
    {"neutral 0.25", {"6.4935", "4.9115", "3.6527", "2.6923", "1.977"}},
    {"neutral 1", {"7.1128", "5.1411", "3.7339", "2.7193", "1.9855"}},
    {"conservative", {"7.6721", "5.4633", "3.9248", "2.8324", "2.0527"}},
}};
