#include "harmonic/postprocess.hpp"

#include <doctest.h>

using namespace harmonic;

namespace {

const ParameterSet& setA() {
    static ParameterSet p = load_params_file(HARMONIC_DATA_DIR "/appendixA.params");
    return p;
}

ParameterSet toy() {
    return load_params(
        "mode: extreme\ntN: 1/100\nredspaces:\n1/2\nexplicit:\n"
        "1 0 1 0 0 0\n"
        "1/2 1/5 2 1 1 0\n"
        "1/3 0 3 0 0 0\n"
        "1/100 0 100 0 0 0\n");
}

bool has(const std::vector<PostViolation>& v, const std::string& name) {
    for (const auto& x : v)
        if (x.property == name) return true;
    return false;
}

PostState packed(const ParameterSet& p, long n, std::uint64_t seed, bool medium_heavy) {
    Packer pk(p);
    for (const auto& s : random_stream(n, seed, medium_heavy)) pk.pack(s);
    PostState s = make_post_state(pk);
    run_postprocess(s);
    return s;
}

}  // namespace

TEST_CASE("removal allowance") {
    CHECK(removal_constant(toy()) == Rational(68));  // 2 * 4 + 12 / (1/5)
}

TEST_CASE("empty packing needs no work") {
    ParameterSet p = toy();
    Packer pk(p);
    PostState s = make_post_state(pk);
    run_postprocess(s);
    CHECK(s.removed_total() == 0);
    CHECK(verify_post_conditions(s).empty());
    CHECK(determine_k(s).k == 0);
    CHECK(determine_k(s).item == -1);
}

TEST_CASE("small hand stream") {
    ParameterSet p = toy();
    Packer pk(p);
    for (int k = 0; k < 5; ++k) pk.pack(Rational(11, 20));
    for (int k = 0; k < 5; ++k) pk.pack(Rational(2, 5));
    PostState s = make_post_state(pk);
    run_postprocess(s);
    auto v = verify_post_conditions(s);
    CHECK_MESSAGE(v.empty(), format_violations(v));
    CHECK(Rational(s.removed_total()) <= removal_constant(p));
    WeightCheck w = check_weight_bound(s);
    CHECK(w.ok);
}

TEST_CASE("random streams satisfy every post condition") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        PostState s = packed(setA(), 3000, seed, seed != 11);
        auto v = verify_post_conditions(s);
        CHECK_MESSAGE(v.empty(), format_violations(v));
        for (long b = 0; b < s.bins_used; ++b)
            if (!s.removed[static_cast<size_t>(b)]) CHECK(s.bin_space(b) <= s.space_before[static_cast<size_t>(b)]);
        for (const auto& x : s.items)
            if (s.alive(x.id)) {
                CHECK_FALSE(x.bonus);
                CHECK_FALSE(is_provisional(x.color));
            }
        WeightCheck w = check_weight_bound(s);
        CHECK(w.ok);
        CHECK(Rational(w.bins_used) <= rmin(w.W, w.V) + w.C);
    }
}

TEST_CASE("injected faults are detected") {
    PostState s = packed(setA(), 3000, 21, true);
    REQUIRE(verify_post_conditions(s).empty());

    SUBCASE("left-over bonus item") {
        for (auto& x : s.items)
            if (s.alive(x.id) && s.is_medium(x.label)) {
                x.bonus = true;
                break;
            }
        CHECK(has(verify_post_conditions(s), "bonus"));
    }
    SUBCASE("red count outside its bounds") {
        int best = 0;
        long most = 0;
        for (int i = 1; i <= s.p->N(); ++i)
            if (s.is_medium(i) && s.census(i).n_red > most) {
                most = s.census(i).n_red;
                best = i;
            }
        REQUIRE(most >= 4);
        for (auto& x : s.items)
            if (s.alive(x.id) && x.label == best && x.color == Color::Red) x.color = Color::Blue;
        CHECK(has(verify_post_conditions(s), "red-bounds"));
    }
    SUBCASE("bin that gained space") {
        long b = 0;
        while (s.removed[static_cast<size_t>(b)]) ++b;
        s.space_before[static_cast<size_t>(b)] -= Rational(1, 1000000);
        CHECK(has(verify_post_conditions(s), "space"));
    }
}
