#pragma once

#include "harmonic/rational.hpp"

#include <vector>

namespace harmonic {

struct KItem {
    Rational lb;     // items are strictly larger than lb
    Rational value;
    int tag = 0;     // caller-defined
};

struct KnapsackSolution {
    Rational value;            // includes the sand term
    std::vector<long> counts;  // by input index
};

// Maximizes sum(q_j * value_j) + sand_rate * (space - sum(q_j * lb_j)) over
// integer q >= 0 with sum(q_j * lb_j) < space. Depth-first branch and bound
// over items by decreasing lb, pruned with the best remaining value/lb ratio.
KnapsackSolution knapsack_max(const std::vector<KItem>& items, const Rational& space, const Rational& sand_rate);

// Exhaustive enumeration of every feasible count vector.
KnapsackSolution knapsack_brute(const std::vector<KItem>& items, const Rational& space, const Rational& sand_rate);

// Calls f(counts) for every feasible count vector.
template <class F>
void enumerate_patterns(const std::vector<Rational>& lbs, const Rational& space, F&& f) {
    std::vector<long> q(lbs.size(), 0);
    auto rec = [&](auto&& self, size_t j, const Rational& left) -> void {
        if (j == lbs.size()) {
            f(q);
            return;
        }
        for (long n = 0;; ++n) {
            Rational rest = left - Rational(n) * lbs[j];
            if (n > 0 && rest.sign() <= 0) break;
            q[j] = n;
            self(self, j + 1, rest);
        }
        q[j] = 0;
    };
    rec(rec, 0, space);
}

}  // namespace harmonic
