#include "harmonic/knapsack.hpp"

#include <algorithm>
#include <numeric>

namespace harmonic {

namespace {

struct Search {
    std::vector<mpq_class> lb, value;
    std::vector<mpq_class> bound_rate;  // best ratio among items j.. and sand
    mpq_class sand_rate;
    std::vector<long> q, best_q;
    mpq_class best;
    bool have = false;
    mpq_class tmp;

    void run(size_t j, const mpq_class& left, const mpq_class& val) {
        if (have) {
            tmp = left * bound_rate[j];
            tmp += val;
            if (cmp(tmp, best) <= 0) return;
        }
        if (j == lb.size()) {
            mpq_class total = val + left * sand_rate;
            if (!have || cmp(total, best) > 0) {
                best = total;
                best_q = q;
                have = true;
            }
            return;
        }
        // largest n with n * lb < left
        mpq_class ratio = left / lb[j];
        mpz_class n;
        mpz_cdiv_q(n.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
        long top = n.get_si() - 1;
        if (top < 0) top = 0;
        for (long m = top; m >= 0; --m) {
            q[j] = m;
            mpq_class rest = left - m * lb[j];
            mpq_class v = val + m * value[j];
            run(j + 1, rest, v);
        }
        q[j] = 0;
    }
};

}  // namespace

KnapsackSolution knapsack_max(const std::vector<KItem>& items, const Rational& space, const Rational& sand_rate) {
    std::vector<size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return items[a].lb > items[b].lb; });

    Search s;
    s.sand_rate = sand_rate.raw();
    for (size_t idx : order) {
        s.lb.push_back(items[idx].lb.raw());
        s.value.push_back(items[idx].value.raw());
    }
    const size_t n = order.size();
    s.bound_rate.assign(n + 1, s.sand_rate);
    for (size_t j = n; j-- > 0;) {
        mpq_class r = s.value[j] / s.lb[j];
        s.bound_rate[j] = cmp(r, s.bound_rate[j + 1]) > 0 ? r : s.bound_rate[j + 1];
    }
    s.q.assign(n, 0);
    s.run(0, space.raw(), mpq_class(0));

    KnapsackSolution out;
    out.value = Rational(s.best);
    out.counts.assign(items.size(), 0);
    for (size_t j = 0; j < n; ++j) out.counts[order[j]] = s.best_q[j];
    return out;
}

KnapsackSolution knapsack_brute(const std::vector<KItem>& items, const Rational& space, const Rational& sand_rate) {
    std::vector<Rational> lbs;
    for (const auto& it : items) lbs.push_back(it.lb);
    KnapsackSolution best;
    bool have = false;
    enumerate_patterns(lbs, space, [&](const std::vector<long>& q) {
        Rational used(0), val(0);
        for (size_t j = 0; j < q.size(); ++j) {
            used += Rational(q[j]) * items[j].lb;
            val += Rational(q[j]) * items[j].value;
        }
        val += sand_rate * (space - used);
        if (!have || val > best.value) {
            best.value = val;
            best.counts = q;
            have = true;
        }
    });
    return best;
}

}  // namespace harmonic
