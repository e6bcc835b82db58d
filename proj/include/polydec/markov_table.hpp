#pragma once

// Generated by tools/gen_markov_table.py. Do not edit.

#include <array>
#include <cstdint>

namespace polydec {

/// kMarkovCoeffSum[n] = T_n(3): maximal coefficient l1-norm of a degree-n
/// polynomial bounded by 1 on [0, 1].
inline constexpr std::array<std::uint64_t, 25> kMarkovCoeffSum = {
    1ULL,
    3ULL,
    17ULL,
    99ULL,
    577ULL,
    3363ULL,
    19601ULL,
    114243ULL,
    665857ULL,
    3880899ULL,
    22619537ULL,
    131836323ULL,
    768398401ULL,
    4478554083ULL,
    26102926097ULL,
    152139002499ULL,
    886731088897ULL,
    5168247530883ULL,
    30122754096401ULL,
    175568277047523ULL,
    1023286908188737ULL,
    5964153172084899ULL,
    34761632124320657ULL,
    202605639573839043ULL,
    1180872205318713601ULL,
};

}  // namespace polydec
