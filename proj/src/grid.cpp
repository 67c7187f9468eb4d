#include "burgers3d/grid.hpp"

#include "burgers3d/errors.hpp"

#include <string>

namespace burgers3d {

int GridSpec::next_fast_even(int lo) {
    if (lo < 2) return 2;
    for (int m = lo + (lo % 2);; m += 2) {
        int r = m;
        for (int f : {2, 3, 5})
            while (r % f == 0) r /= f;
        if (r == 1) return m;
    }
}

GridSpec GridSpec::standard(int n, DealiasRule rule) {
    GridSpec g;
    g.n = n;
    g.m = next_fast_even(rule == DealiasRule::two_thirds ? 3 * n + 1 : 2 * n + 2);
    g.dealias = rule;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (n < 0) throw ConfigError("GridSpec: truncation N must be nonnegative");
    if (m < 2 || m % 2 != 0)
        throw ConfigError("GridSpec: physical grid size M must be even and >= 2, got " +
                          std::to_string(m));
    if (dealias == DealiasRule::two_thirds && m < 2 * n + 2)
        throw ConfigError("GridSpec: M >= 2N+2 required under the two-thirds rule (M=" +
                          std::to_string(m) + ", N=" + std::to_string(n) + ")");
    if (dealias == DealiasRule::none && m < 2 * n + 1)
        throw ConfigError("GridSpec: M >= 2N+1 required to resolve the retained modes");
}

} // namespace burgers3d
