#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace fmpc {

// Party subsets are bitmasks: bit (j-1) set means party j is a member.
// Parties are indexed 1..m throughout.
using Subset = uint32_t;

inline bool subset_contains(Subset s, int party) {
    return (s >> (party - 1)) & 1u;
}

inline Subset subset_add(Subset s, int party) {
    return s | (Subset{1} << (party - 1));
}

inline int subset_size(Subset s) {
    return std::popcount(s);
}

inline Subset full_set(int m) {
    return (Subset{1} << m) - 1;
}

inline std::vector<int> subset_members(Subset s) {
    std::vector<int> out;
    for (int j = 1; s != 0; ++j, s >>= 1) {
        if (s & 1u) {
            out.push_back(j);
        }
    }
    return out;
}

// Lexicographic order on member sequences ({1,2} < {1,2,3} < {1,3}).
bool subset_lex_less(Subset a, Subset b);

// All J within [m] \ excluded with m-t <= |J| <= t, in lexicographic order.
std::vector<Subset> qualifying_subsets(int m, int t, Subset excluded);

} // namespace fmpc
