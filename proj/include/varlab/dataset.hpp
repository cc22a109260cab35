#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "varlab/errors.hpp"

namespace varlab {

// Generator identity recorded in every output file. Draws are mt19937_64
// words with the top 53 bits scaled by 2^-53, so a spec regenerates the
// same bytes on any platform.
inline constexpr std::string_view kPrngId = "mt19937_64/top53x2^-53";

inline constexpr std::uint64_t kDefaultSeed = 12;

// 10^e by repeated multiplication/division: exact for 0 <= e <= 22 and
// deterministic everywhere (each step is a single correctly-rounded op).
inline double pow10_int(int e) {
    double p = 1.0;
    if (e >= 0)
        for (int i = 0; i < e; ++i) p *= 10.0;
    else
        for (int i = 0; i < -e; ++i) p /= 10.0;
    return p;
}

// Uniform(0,1) draws, optionally shifted by 10^shift_exponent. The shift is
// applied in double precision: downstream algorithms and the exact oracle
// both see the already-shifted doubles.
struct DatasetSpec {
    std::uint64_t size = 0;
    std::optional<int> shift_exponent;
    std::uint64_t seed = kDefaultSeed;
};

inline std::vector<double> generate(const DatasetSpec& spec) {
    std::mt19937_64 engine(spec.seed);
    const double shift = spec.shift_exponent ? pow10_int(*spec.shift_exponent) : 0.0;
    std::vector<double> out;
    out.reserve(spec.size);
    for (std::uint64_t i = 0; i < spec.size; ++i) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        out.push_back(spec.shift_exponent ? u + shift : u);
    }
    return out;
}

} // namespace varlab
