#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

namespace diagphase {

// N rounds of unordered particle pairs (1-based); (k, k) stands for the one-particle term of k.
struct Schedule {
    int N = 0;
    std::vector<std::vector<std::pair<int, int>>> sets;
};

Schedule pairing_schedule(int N);

struct PairingCheck {
    bool cover_ok = false;     // every pair i <= j appears at least once, nothing out of range
    bool disjoint_ok = false;  // no pair appears twice
    bool no_reuse_ok = false;  // no particle appears in two pairs of one set
    bool all() const { return cover_ok && disjoint_ok && no_reuse_ok; }
};

PairingCheck verify_pairing(const Schedule& s);

nlohmann::json to_json(const Schedule& s);

}  // namespace diagphase
