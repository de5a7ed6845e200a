#include "fmpc/subset.hpp"

#include <algorithm>

namespace fmpc {

bool subset_lex_less(Subset a, Subset b) {
    const auto ma = subset_members(a);
    const auto mb = subset_members(b);
    return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

std::vector<Subset> qualifying_subsets(int m, int t, Subset excluded) {
    std::vector<Subset> out;
    const Subset universe = full_set(m);
    for (Subset s = 1; s <= universe; ++s) {
        if ((s & excluded) != 0) {
            continue;
        }
        const int sz = subset_size(s);
        if (sz >= m - t && sz <= t) {
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), subset_lex_less);
    return out;
}

} // namespace fmpc
