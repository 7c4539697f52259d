#pragma once

#include "harmonic/params.hpp"

#include <utility>
#include <vector>

namespace harmonic {

enum class Mark { U, N, B, R };
char mark_char(Mark m);

// Weighting context of one class k.
//
// Extreme mode reuses rows 1 and 2 of the type table for the two large
// categories of the class: row 1 holds large items that cannot share a bin
// with the critical item (v = 1), row 2 those that can (v = 0).
struct WeightContext {
    const ParameterSet* p = nullptr;
    DerivedTables d;
    int k = 0;
    int crit = 0;               // medium type with needs = k, 0 if none
    bool small_class = false;   // 1 <= k and redspace_k <= 1/3
    bool small_uses_R = true;   // needs = k items of a small class weigh as mark R
    Rational large_split;       // lower bound of row 1 in extreme mode

    Mode mode() const { return p->mode; }
    // Lower bound of type i as seen by patterns of this class.
    Rational lb(int i) const;
    // Types that take part in patterns (sand excluded).
    std::vector<int> pattern_types() const;
};

WeightContext make_context(const ParameterSet& p, const DerivedTables& d, int k);

// (w_k, v_k) for one item of type i (i < N). In extreme mode rows 1 and 2 are
// the large categories described above.
std::pair<Rational, Rational> weight_pair(const WeightContext& ctx, int type, Mark m);
// Large item of an actual size (extreme mode).
std::pair<Rational, Rational> large_weight(const WeightContext& ctx, const Rational& size);
Rational weight_sand(const WeightContext& ctx, const Rational& space);

struct Pattern {
    std::vector<long> q;  // by type index - 1, sand excluded
    long qR = 0;          // critical items weighed as mark R
    bool operator==(const Pattern&) const = default;
};

Rational pattern_space(const WeightContext& ctx, const Pattern& q);
// which: 0 = w, 1 = v
Rational pattern_weight(const WeightContext& ctx, const Pattern& q, int which);

struct Multipliers {
    Rational y1, y2, y3;
};

Rational omega(const WeightContext& ctx, int type, Mark m, const Multipliers& y);
Rational pattern_omega(const WeightContext& ctx, const Pattern& q, const Multipliers& y);

// w_1k for a medium class, the common weight of the two critical patterns.
Rational critical_weight(const WeightContext& ctx);
// 1 + (1 - r)/2 + r + (1 - large_lb - medium_lb)/(1 - eps)
Rational critical_pattern_weight(const Rational& redfrac, const Rational& large_lb, const Rational& medium_lb,
                                 const Rational& eps);
// y1, y2 of a class for target c (both zero unless c < w_1k).
std::pair<Rational, Rational> critical_multipliers(const WeightContext& ctx, const Rational& c);

struct WeighedItem {
    Rational size;
    int type = 0;
    Mark mark = Mark::U;
};
std::pair<Rational, Rational> total_weight(const WeightContext& ctx, const std::vector<WeighedItem>& items);

}  // namespace harmonic
