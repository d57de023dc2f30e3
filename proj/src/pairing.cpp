#include "diagphase/pairing.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace diagphase {

namespace {

// Residue in 1..N.
int wrap(int x, int N) { return ((x - 1) % N + N) % N + 1; }

std::vector<std::pair<int, int>> odd_set(int k, int N) {
    std::vector<std::pair<int, int>> s;
    for (int j = 0; j <= (N - 1) / 2; ++j) s.emplace_back(wrap(k - j, N), wrap(k + j, N));
    return s;
}

}  // namespace

Schedule pairing_schedule(int N) {
    if (N < 1) throw std::invalid_argument("pairing: N must be at least 1");
    Schedule s;
    s.N = N;
    if (N % 2 == 1) {
        for (int k = 1; k <= N; ++k) s.sets.push_back(odd_set(k, N));
        return s;
    }
    for (int k = 1; k < N; ++k) {
        std::vector<std::pair<int, int>> set;
        for (auto pr : odd_set(k, N - 1))
            if (pr != std::pair{k, k}) set.push_back(pr);
        set.emplace_back(k, N);
        s.sets.push_back(std::move(set));
    }
    std::vector<std::pair<int, int>> self;
    for (int j = 1; j <= N; ++j) self.emplace_back(j, j);
    s.sets.push_back(std::move(self));
    return s;
}

PairingCheck verify_pairing(const Schedule& s) {
    PairingCheck c;
    std::set<std::pair<int, int>> seen;
    bool dup = false, range_ok = true, reuse = false;
    for (const auto& set : s.sets) {
        std::set<int> used;
        for (auto [a, b] : set) {
            if (a < 1 || b < 1 || a > s.N || b > s.N) range_ok = false;
            if (!seen.insert({std::min(a, b), std::max(a, b)}).second) dup = true;
            if (!used.insert(a).second) reuse = true;
            if (b != a && !used.insert(b).second) reuse = true;
        }
    }
    bool all = range_ok;
    for (int i = 1; i <= s.N && all; ++i)
        for (int j = i; j <= s.N; ++j)
            if (!seen.count({i, j})) {
                all = false;
                break;
            }
    c.cover_ok = all;
    c.disjoint_ok = !dup;
    c.no_reuse_ok = !reuse;
    return c;
}

nlohmann::json to_json(const Schedule& s) {
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& set : s.sets) {
        nlohmann::json a = nlohmann::json::array();
        for (auto [i, j] : set) a.push_back({i, j});
        sets.push_back(std::move(a));
    }
    return sets;
}

}  // namespace diagphase
