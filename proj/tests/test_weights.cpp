#include "harmonic/weights.hpp"

#include <doctest.h>

using namespace harmonic;

namespace {

const ParameterSet& setA() {
    static ParameterSet p = load_params_file(HARMONIC_DATA_DIR "/appendixA.params");
    return p;
}
const ParameterSet& setB() {
    static ParameterSet p = load_params_file(HARMONIC_DATA_DIR "/appendixB.params");
    return p;
}

int type_with_upper(const ParameterSet& p, const Rational& t) {
    for (int i = 1; i <= p.N(); ++i)
        if (!p.is_pseudo(i) && p.upper(i) == t) return i;
    return 0;
}

Pattern empty_pattern(const ParameterSet& p) {
    Pattern q;
    q.q.assign(static_cast<size_t>(p.N() - 1), 0);
    return q;
}

}  // namespace

TEST_CASE("sand weights") {
    WeightContext a = make_context(setA(), tables_of(setA()), 0);
    WeightContext b = make_context(setB(), tables_of(setB()), 0);
    CHECK(weight_sand(b, Rational(1, 1536)) == Rational(1, 1536) * Rational(50, 49));
    CHECK(weight_sand(a, Rational(0)) == Rational(0));
    CHECK(weight_sand(a, Rational(1)) == Rational(100, 99));
}

TEST_CASE("critical pattern of the intermezzo") {
    Rational w = critical_pattern_weight(Rational(176247, 1000000), Rational(341, 512), Rational(1, 3), Rational(1, 50));
    CHECK((w - Rational(158879, 100000)).abs() < Rational(1, 100000));
}

TEST_CASE("the top medium boundary makes the critical pattern weigh c") {
    CHECK(critical_pattern_weight(Rational(0), Rational(1, 2), Rational(41783, 100000), Rational(1, 100)) ==
          Rational(1583, 1000));
}

TEST_CASE("empty pattern is all sand") {
    WeightContext ctx = make_context(setA(), tables_of(setA()), 0);
    Pattern q = empty_pattern(setA());
    CHECK(pattern_weight(ctx, q, 0) == Rational(100, 99));
    CHECK(pattern_weight(ctx, q, 1) == Rational(100, 99));
    CHECK(total_weight(ctx, {{Rational(1, 200), setA().N(), Mark::U}, {Rational(1, 300), setA().N(), Mark::U}}) ==
          std::make_pair(Rational(5, 600) * Rational(100, 99), Rational(5, 600) * Rational(100, 99)));
}

TEST_CASE("single item weights") {
    const auto& p = setA();
    DerivedTables d = tables_of(p);
    int k = 0;
    for (int j = 1; j <= p.K(); ++j)
        if (p.redspace(j) > Rational(1, 3)) {
            k = j;
            break;
        }
    REQUIRE(k > 0);
    WeightContext ctx = make_context(p, d, k);
    REQUIRE(ctx.crit > 0);
    CHECK(weight_pair(ctx, ctx.crit, Mark::R).first == (Rational(1) - p.alpha(ctx.crit)) / Rational(2));
    CHECK(weight_pair(ctx, 1, Mark::U) == std::make_pair(Rational(1), Rational(1)));

    WeightContext small = make_context(p, d, 1);
    int i = type_with_upper(p, Rational(8, 39));
    REQUIRE(d.leaves[i - 1] >= 1);
    CHECK(weight_pair(small, i, Mark::U).second == p.alpha(i) / Rational(d.redfit[i - 1]));

    for (int kk : {0, 1, k})
        for (int t = 1; t < p.N(); ++t)
            for (Mark m : {Mark::U, Mark::N, Mark::B, Mark::R}) {
                auto [w, v] = weight_pair(make_context(p, d, kk), t, m);
                CHECK(w.sign() >= 0);
                CHECK(v.sign() >= 0);
            }
}

TEST_CASE("the critical pattern has equal weights") {
    const auto& p = setA();
    DerivedTables d = tables_of(p);
    for (int k = 1; k <= p.K(); ++k) {
        if (p.redspace(k) <= Rational(1, 3)) continue;
        WeightContext ctx = make_context(p, d, k);
        Pattern q = empty_pattern(p);
        q.q[0] = 1;
        q.q[static_cast<size_t>(ctx.crit - 1)] = 1;
        Rational w = critical_weight(ctx);
        CAPTURE(k);
        CHECK(pattern_weight(ctx, q, 0) == w);
        CHECK(pattern_weight(ctx, q, 1) == w);
    }
}

TEST_CASE("omega mixes the two weights") {
    const auto& p = setA();
    DerivedTables d = tables_of(p);
    int k = 0;
    for (int j = 1; j <= p.K() && !k; ++j)
        if (p.redspace(j) > Rational(1, 3)) k = j;
    WeightContext ctx = make_context(p, d, k);
    Multipliers half{Rational(0), Rational(0), Rational(1, 2)};
    for (int t = 1; t < p.N(); ++t) {
        auto [w, v] = weight_pair(ctx, t, Mark::U);
        CHECK(omega(ctx, t, Mark::U, half) == (w + v) / Rational(2));
    }
    Multipliers y2{Rational(0), Rational(1, 10), Rational(1, 2)};
    long lv = d.leaves[static_cast<size_t>(ctx.crit - 1)];
    int raised = 0;
    for (int t = 3; t < p.N(); ++t) {
        if (t == ctx.crit) continue;
        Rational diff = omega(ctx, t, Mark::U, y2) - omega(ctx, t, Mark::U, half);
        long nd = d.needs[static_cast<size_t>(t - 1)];
        if (nd > 0 && nd <= lv) {
            ++raised;
            CHECK(diff == p.alpha(t) / Rational(d.redfit[static_cast<size_t>(t - 1)]) * Rational(1, 10));
        } else {
            CHECK(diff.is_zero());
        }
    }
    CHECK(raised > 0);

    Multipliers y1{Rational(1, 100), Rational(0), Rational(1, 2)};
    CHECK(omega(ctx, ctx.crit, Mark::N, y1) > omega(ctx, ctx.crit, Mark::N, half));
    CHECK(omega(ctx, ctx.crit, Mark::R, y1) == omega(ctx, ctx.crit, Mark::R, half));
}
