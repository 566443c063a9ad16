#pragma once

#include <cstdint>
#include <random>

namespace specwb {

// std::mt19937_64 (output sequence fixed by the C++ standard) mapped to
// [0, 1) as (x >> 11)·2^-53. Avoids std::uniform_real_distribution, whose
// algorithm is implementation-defined.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace specwb
