#include "diagphase/counts.hpp"

#include <algorithm>
#include <stdexcept>

#include "diagphase/circuit.hpp"

namespace diagphase {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

CountTriple poly_phase_counts(int n, int p, bool controlled) {
    if (p < 0) throw std::invalid_argument("poly_phase_counts: negative degree");
    CountTriple c;
    for (int s = 1; s <= std::min(p, n); ++s) {
        int k = controlled ? s : s - 1;
        c.rz += binomial(n, s) * mcp_rz(k);
        c.cnot += binomial(n, s) * mcp_cnot(k);
    }
    if (controlled) c.rz += 1;
    return c;
}

CountTriple comparator_counts(int m) {
    long long mm = m;
    return {4 * mm + 2, 2 * mm + 1 + 6 * mm * mm, 4 * mm * mm};
}

CountTriple increment_counts(int m, bool controlled) {
    long long mm = m;
    long long cph = controlled ? mm * mm : mm * (mm - 1);
    long long ph = controlled ? 0 : mm;
    return {2 * mm, ph + 3 * cph, 2 * cph};
}

CountTriple walsh_counts(int m) {
    long long M = 1LL << m;
    return {0, M - 1, std::max(0LL, M - 2)};
}

CountTriple ppp_counts(int n, int m, const std::vector<int>& degrees) {
    if (degrees.empty()) throw std::invalid_argument("ppp_counts: no pieces");
    CountTriple c = poly_phase_counts(n, degrees[0], false);
    for (std::size_t l = 1; l < degrees.size(); ++l) {
        c += poly_phase_counts(n, std::max(degrees[l], degrees[l - 1]), true);
        c += comparator_counts(m) * 2;
    }
    return c;
}

}  // namespace diagphase
