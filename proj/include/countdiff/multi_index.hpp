#ifndef COUNTDIFF_MULTI_INDEX_HPP
#define COUNTDIFF_MULTI_INDEX_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace countdiff {

/// Exponent vector of a partial derivative.
using MultiIndex = std::vector<unsigned>;

inline unsigned order(const MultiIndex &mu) { return std::accumulate(mu.begin(), mu.end(), 0U); }

/// a <= b componentwise, i.e. b lies in the cone of a.
inline bool in_cone(const MultiIndex &a, const MultiIndex &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline MultiIndex componentwise_max(const MultiIndex &a, const MultiIndex &b) {
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

/// b - a, assuming a <= b.
inline MultiIndex difference(const MultiIndex &b, const MultiIndex &a) {
    MultiIndex r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - a[i];
    return r;
}

inline MultiIndex unit_index(std::size_t n, std::size_t i) {
    MultiIndex r(n, 0);
    r[i] = 1;
    return r;
}

inline std::string index_text(const MultiIndex &mu) {
    std::string s = "(";
    for (std::size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + std::to_string(mu[i]);
    return s + ")";
}

/// All multi-indices in n variables of order <= max_order, by increasing
/// order and lexicographically within one order.
inline std::vector<MultiIndex> indices_up_to(std::size_t n, unsigned max_order) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    for (unsigned k = 0; k <= max_order; ++k) {
        // compositions of k into n parts
        std::vector<MultiIndex> level;
        auto rec = [&](auto &&self, std::size_t i, unsigned left) -> void {
            if (i + 1 == n || n == 0) {
                if (n != 0) cur[i] = left;
                if (n != 0 || left == 0) level.push_back(cur);
                return;
            }
            for (unsigned a = 0; a <= left; ++a) {
                cur[i] = a;
                self(self, i + 1, left - a);
            }
        };
        rec(rec, 0, k);
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

/// Removes elements lying in the cone of another element; keeps a sorted
/// set of minimal generators.
inline std::vector<MultiIndex> minimal_generators(std::vector<MultiIndex> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    std::vector<MultiIndex> out;
    for (const auto &a : set) {
        bool absorbed = false;
        for (const auto &b : set)
            if (b != a && in_cone(b, a)) absorbed = true;
        if (!absorbed) out.push_back(a);
    }
    return out;
}

/// Element of a Janet-complete set: its multiplicative variables and the
/// original generator it was prolonged from.
struct JanetElement {
    MultiIndex index;
    std::vector<bool> multiplicative;
    std::size_t origin = 0;

    bool covers(const MultiIndex &mu) const {
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (mu[i] < index[i]) return false;
            if (mu[i] > index[i] && !multiplicative[i]) return false;
        }
        return true;
    }
};

namespace detail {

inline std::vector<std::vector<bool>> janet_multiplicative(const std::vector<MultiIndex> &set) {
    std::vector<std::vector<bool>> mult(set.size());
    for (std::size_t a = 0; a < set.size(); ++a) {
        const std::size_t n = set[a].size();
        mult[a].assign(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            unsigned top = 0;
            for (const auto &v : set)
                if (std::equal(v.begin(), v.begin() + static_cast<long>(i), set[a].begin())) top = std::max(top, v[i]);
            mult[a][i] = set[a][i] == top;
        }
    }
    return mult;
}

} // namespace detail

/// Janet completion of a set of generators. The cones
/// index + span(multiplicative) of the result are pairwise disjoint and cover
/// the union of the full cones of the generators. `origin` refers to the
/// position in `generators`.
inline std::vector<JanetElement> janet_completion(const std::vector<MultiIndex> &generators) {
    std::vector<MultiIndex> set = generators;
    std::vector<std::size_t> origin(set.size());
    std::iota(origin.begin(), origin.end(), std::size_t{0});
    for (;;) {
        auto mult = detail::janet_multiplicative(set);
        bool added = false;
        for (std::size_t a = 0; a < set.size() && !added; ++a) {
            for (std::size_t i = 0; i < set[a].size() && !added; ++i) {
                if (mult[a][i]) continue;
                MultiIndex next = set[a];
                ++next[i];
                bool covered = false;
                for (std::size_t b = 0; b < set.size() && !covered; ++b)
                    covered = JanetElement{set[b], mult[b], 0}.covers(next);
                if (!covered) {
                    set.push_back(next);
                    origin.push_back(origin[a]);
                    added = true;
                }
            }
        }
        if (!added) {
            std::vector<JanetElement> out;
            for (std::size_t a = 0; a < set.size(); ++a) out.push_back({set[a], mult[a], origin[a]});
            return out;
        }
    }
}

} // namespace countdiff

#endif // COUNTDIFF_MULTI_INDEX_HPP
