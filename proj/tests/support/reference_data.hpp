#pragma once

// Published reference values, typed in by hand. Tests compare library output
// against these and, where noted, against the golden CSV files.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cshor::refdata {

// Printed values are rounded to a fixed number of digits. A computed value
// exactly half a unit away (0.0625 printed as 0.063) must still match, so
// tolerances get this much slack for floating-point noise.
inline constexpr double kRoundingSlack = 1e-9;

struct OrderRow {
    std::uint64_t a;
    std::uint64_t r;
};

inline const std::vector<OrderRow> kOrders21 = {
    {2, 6}, {4, 3}, {5, 6}, {8, 2}, {10, 6}, {11, 6}, {13, 2}, {16, 3}, {17, 6}, {19, 6}, {20, 2},
};

inline const std::vector<OrderRow> kOrders33 = {
    {2, 10}, {4, 5},  {5, 10},  {7, 10},  {8, 10},  {10, 2}, {13, 10}, {14, 10}, {16, 5}, {17, 10},
    {19, 10}, {20, 10}, {23, 2}, {25, 5}, {26, 10}, {28, 10}, {29, 10}, {31, 5}, {32, 2},
};

struct AllowedRow {
    std::uint64_t p;
    std::uint64_t q;
    std::uint64_t n;
    std::uint64_t lambda;
    std::vector<std::uint64_t> periods;
};

inline const std::vector<AllowedRow> kAllowedPeriods = {
    {3, 5, 15, 4, {2, 4}},
    {3, 7, 21, 6, {2, 3, 6}},
    {3, 11, 33, 10, {2, 5, 10}},
    {5, 7, 35, 12, {2, 3, 4, 6, 12}},
    {3, 13, 39, 12, {2, 3, 4, 6, 12}},
    {3, 17, 51, 16, {2, 4, 8, 16}},
    {5, 11, 55, 20, {2, 4, 5, 10, 20}},
    {3, 19, 57, 18, {2, 3, 6, 9, 18}},
    {5, 13, 65, 12, {2, 3, 4, 6, 12}},
    {3, 23, 69, 22, {2, 11, 22}},
    {7, 11, 77, 30, {2, 3, 5, 6, 10, 15, 30}},
    {5, 17, 85, 16, {2, 4, 8, 16}},
    {3, 29, 87, 28, {2, 4, 7, 14, 28}},
};

// Row p-1 holds P_p(k) for k = 0..7 (m = k = 3, forward QFT), as printed.
inline const std::array<std::array<double, 8>, 8> kProbabilities = {{
    {1, 0, 0, 0, 0, 0, 0, 0},
    {0.5, 0, 0, 0, 0.5, 0, 0, 0},
    {0.344, 0.015, 0.063, 0.235, 0.031, 0.235, 0.063, 0.015},
    {0.25, 0, 0.25, 0, 0.25, 0, 0.25, 0},
    {0.219, 0.059, 0.125, 0.19, 0.031, 0.191, 0.125, 0.059},
    {0.188, 0.125, 0.063, 0.125, 0.188, 0.125, 0.063, 0.125},
    {0.156, 0.147, 0.125, 0.103, 0.093, 0.103, 0.125, 0.147},
    {0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125},
}};

// The one printed probability that no exact computation reaches: its mirror
// entry P_5(5) is printed 0.191 and P_p(k) = P_p(8 - k).
inline constexpr std::pair<int, int> kProbabilityErratum = {5, 3};

inline const std::array<double, 8> kSeparability = {1, 0.5, 0.238, 0.25, 0.16, 0.141, 0.129, 0.125};

using C = std::complex<double>;

// rho_3 in units of 1e-3, as printed.
inline const std::array<std::array<C, 8>, 8> kRho3Milli = {{
    {C{344, 0}, C{11, 5}, C{16, 16}, C{-11, -27}, C{0, 0}, C{-11, -27}, C{16, -16}, C{11, -5}},
    {C{11, -5}, C{15, 0}, C{27, 11}, C{-31, -31}, C{-2, -5}, C{0, 22}, C{8, -20}, C{9, -9}},
    {C{16, -16}, C{27, -11}, C{63, 0}, C{-102, -42}, C{-16, -16}, C{5, 11}, C{0, -31}, C{8, -20}},
    {C{-11, 27}, C{-31, 31}, C{-102, 42}, C{235, 0}, C{64, 27}, C{53, 53}, C{5, 11}, C{0, 22}},
    {C{0, 0}, C{-2, 5}, C{-16, 16}, C{64, -27}, C{31, 0}, C{64, 27}, C{-16, -16}, C{-2, -5}},
    {C{-11, -27}, C{0, -22}, C{5, -11}, C{53, -53}, C{64, -27}, C{235, 0}, C{-102, -42}, C{-31, -31}},
    {C{16, 16}, C{8, 20}, C{0, 31}, C{5, -11}, C{-16, 16}, C{-102, 42}, C{63, 0}, C{27, 11}},
    {C{11, 5}, C{9, 9}, C{8, 20}, C{0, -22}, C{-2, 5}, C{-31, 31}, C{27, -11}, C{15, 0}},
}};

// Printed (0, 5) entry; it is not the conjugate of the printed (5, 0) entry.
inline constexpr std::pair<int, int> kRho3Erratum = {0, 5};

struct TableRef {
    std::string figure;
    unsigned n_in;
    unsigned n_out;
    std::vector<std::uint64_t> rows;
};

// Truth tables as published, keyed by library figure name.
inline const std::vector<TableRef> kTables = {
    {"f2_15", 2, 4, {1, 2, 4, 8}},
    {"f2_15_full", 2, 2, {0, 1, 2, 3}},
    {"f4_15", 1, 3, {1, 4}},
    {"f4_15_full", 1, 1, {0, 1}},
    {"f4_21", 3, 5, {1, 4, 16, 1, 4, 16, 1, 4}},
    {"f4_21_partial", 3, 2, {0, 1, 2, 0, 1, 2, 0, 1}},
    {"f4_21_full", 2, 2, {0, 1, 2, 0}},
};

// f~_{4,33}: published table and the table the definition gives.
inline const std::vector<std::uint64_t> kF4_33Printed = {0, 1, 5, 12, 8, 0, 1, 5};
inline const std::vector<std::uint64_t> kF4_33Definition = {0, 1, 5, 10, 8, 0, 1, 5};

struct CaptionCount {
    std::string figure;
    unsigned n_toffoli;
    unsigned n_cnot;
};

inline const std::vector<CaptionCount> kCaptions = {
    {"f2_15", 1, 7},  {"f2_15_full", 0, 2},    {"f4_15", 0, 2},      {"f4_15_full", 0, 1},
    {"f4_21", 2, 12}, {"f4_21_partial", 2, 6}, {"f4_21_full", 1, 3}, {"f4_33_full", 3, 7},
};

}  // namespace cshor::refdata
