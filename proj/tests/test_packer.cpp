#include "harmonic/packer.hpp"

#include <doctest.h>

#include <map>

using namespace harmonic;

namespace {

const ParameterSet& setA() {
    static ParameterSet p = load_params_file(HARMONIC_DATA_DIR "/appendixA.params");
    return p;
}

// Large (1/2,1], medium (1/3,1/2] with the given redfrac, small (1/100,1/3], sand.
ParameterSet toy(Mode m, const std::string& medium_redfrac) {
    std::string text = "mode: " + mode_name(m) + "\ntN: 1/100\nredspaces:\n1/2\nexplicit:\n" +
                       "1 0 1 0 0 0\n"
                       "1/2 " + medium_redfrac + " 2 1 1 0\n"
                       "1/3 0 3 0 0 0\n"
                       "1/100 0 100 0 0 0\n";
    return load_params(text);
}

// Adds a medium (1/3,2/5] with leaves 1 and a red small type (1/5,1/3]... (1/100,1/5].
ParameterSet toy_small_red() {
    return load_params(
        "mode: extreme\ntN: 1/100\nredspaces:\n1/5\n2/5\n1/2\nexplicit:\n"
        "1 0 1 0 0 0\n"
        "1/2 0 2 1 0 0\n"
        "2/5 1/5 2 1 2 1\n"
        "1/3 0 3 0 0 0\n"
        "1/5 1/10 5 1 1 0\n"
        "1/100 0 100 0 0 0\n");
}

Item item(const Rational& size, Color c, Mark m = Mark::U, bool bonus = false) {
    Item it;
    it.size = size;
    it.color = c;
    it.mark = m;
    it.bonus = bonus;
    return it;
}

bool has(const std::vector<InvariantViolation>& v, const std::string& name) {
    for (const auto& x : v)
        if (x.property == name) return true;
    return false;
}

}  // namespace

TEST_CASE("classification") {
    Packer pk(setA());
    int t = pk.classify(Rational(1, 4));
    CHECK(setA().upper(t) == Rational(1, 4));
    CHECK(setA().lower(t) == Rational(8, 39));
    CHECK(pk.classify(Rational(1)) == 1);
    CHECK(pk.classify(Rational(1, 100000)) == setA().N());
    CHECK_THROWS(pk.classify(Rational(0)));
    CHECK_THROWS(pk.classify(Rational(11, 10)));
}

TEST_CASE("large items with a medium red fraction share bins in extreme mode") {
    ParameterSet p = toy(Mode::Extreme, "1/5");
    Packer pk(p);
    for (int k = 0; k < 5; ++k) pk.pack(Rational(11, 20));
    for (int k = 0; k < 5; ++k) {
        pk.pack(Rational(2, 5));
        CHECK(pk.check_invariants().empty());
    }
    CHECK(pk.bins_used() == 5);
    for (const auto& b : pk.bins()) CHECK(b.items.size() == 2);
}

TEST_CASE("super mode keeps red mediums away from large items without room") {
    ParameterSet p = toy(Mode::Super, "1/5");
    Packer pk(p);
    for (int k = 0; k < 5; ++k) pk.pack(Rational(11, 20));
    for (int k = 0; k < 5; ++k) pk.pack(Rational(2, 5));
    CHECK(pk.bins_used() == 8);
    std::map<std::string, int> kinds;
    for (const auto& b : pk.bins()) {
        if (b.blue_type == 1) kinds["large"]++;
        else if (b.red_type == 2 && b.red_count == 1 && b.items.size() == 1) kinds["red medium"]++;
        else if (b.blue_type == 2 && b.blue_count == 2) kinds["blue pair"]++;
    }
    CHECK(kinds["large"] == 5);
    CHECK(kinds["red medium"] == 1);
    CHECK(kinds["blue pair"] == 2);
}

TEST_CASE("a single large item opens a definite blue bin") {
    ParameterSet p = toy(Mode::Extreme, "1/5");
    Packer pk(p);
    PlacementEvent e = pk.pack(Rational(3, 5));
    CHECK(e.color == Color::Blue);
    CHECK(e.bin == 0);
    CHECK_FALSE(e.bonus);
    CHECK(pk.bins()[0].mixed == false);
    CHECK(e.line() == "item=0 size=3/5 type=1 color=blue bin=0 bonus=0");
}

TEST_CASE("compatibility with large bins checks the size") {
    ParameterSet p = toy(Mode::Extreme, "1/5");
    Packer pk(p);
    long a = pk.add_raw_bin({item(Rational(11, 20), Color::Blue)});
    long b = pk.add_raw_bin({item(Rational(13, 20), Color::Blue)});
    CHECK(pk.compatible(pk.bins()[a], 2, Rational(2, 5), Color::Red));
    CHECK_FALSE(pk.compatible(pk.bins()[b], 2, Rational(2, 5), Color::Red));
}

TEST_CASE("compatibility needs enough leftover space") {
    const auto& p = setA();
    Packer pk(p);
    DerivedTables d = tables_of(p);
    int i = pk.classify(Rational(41, 200));  // (1/5, 8/39] has leaves 2
    REQUIRE(p.upper(i) == Rational(8, 39));
    REQUIRE(d.leaves[i - 1] == 2);
    int j = 0;
    for (int t = 1; t <= p.N(); ++t)
        if (d.needs[t - 1] == 4 && p.alpha(t) > 0) j = t;
    REQUIRE(j > 0);
    long bin = pk.add_raw_bin({item(Rational(41, 200), Color::Blue)});
    CHECK_FALSE(pk.compatible(pk.bins()[bin], j, p.upper(j), Color::Red));
    int k = 0;
    for (int t = 1; t <= p.N(); ++t)
        if (d.needs[t - 1] >= 1 && d.needs[t - 1] <= 2 && p.alpha(t) > 0) k = t;
    REQUIRE(k > 0);
    CHECK(pk.compatible(pk.bins()[bin], k, p.upper(k), Color::Red));
}

TEST_CASE("mark and color: N-assignment") {
    ParameterSet p = toy(Mode::Extreme, "1/9");
    Packer pk(p);
    Rational sizes[] = {Rational(2, 5), Rational(9, 20), Rational(3, 8), Rational(7, 20), Rational(21, 50)};
    long reds = 0;
    for (int k = 0; k < 5; ++k) pk.add_raw_bin({item(sizes[k], k == 1 ? Color::ProvRed : Color::ProvBlue)});
    pk.mark_and_color(2);
    const auto& items = pk.items();
    for (const auto& it : items) {
        CHECK(it.mark == Mark::N);
        CHECK_FALSE(is_provisional(it.color));
        reds += it.color == Color::Red;
    }
    CHECK(reds == 1);
    CHECK(items[3].color == Color::Red);  // 7/20 is the smallest
    CHECK(pk.counters(2).nM[static_cast<int>(Mark::N)] == 5);
    CHECK(pk.counters(2).n_redM[static_cast<int>(Mark::N)] == 1);
}

TEST_CASE("mark and color: R-assignment fixes a red in a mixed bin") {
    ParameterSet p = toy(Mode::Extreme, "1/9");
    Packer pk(p);
    pk.add_raw_bin({item(Rational(11, 20), Color::Blue), item(Rational(2, 5), Color::Red)});
    for (int k = 0; k < 4; ++k) pk.add_raw_bin({item(Rational(7, 20), Color::ProvBlue)});
    pk.mark_and_color(2);
    const auto& items = pk.items();
    CHECK(items[0].mark == Mark::U);
    CHECK(items[1].mark == Mark::R);
    CHECK(items[1].color == Color::Red);
    for (int k = 2; k < 6; ++k) {
        CHECK(items[k].mark == Mark::R);
        CHECK(items[k].color == Color::Blue);
    }
    CHECK(pk.counters(2).nM[static_cast<int>(Mark::R)] == 5);
}

TEST_CASE("mark and color without candidates does nothing") {
    ParameterSet p = toy(Mode::Extreme, "1/9");
    Packer pk(p);
    pk.add_raw_bin({item(Rational(2, 5), Color::Blue), item(Rational(2, 5), Color::Blue)});
    long before = pk.assignments();
    pk.mark_and_color(2);
    CHECK(pk.assignments() == before);
    for (const auto& it : pk.items()) CHECK(it.mark == Mark::U);
}

TEST_CASE("injected faults are reported") {
    SUBCASE("three open bins in one group") {
        Packer pk(setA());
        for (int k = 0; k < 3; ++k) pk.add_raw_bin({item(Rational(1, 4), Color::Blue)});
        CHECK(has(pk.check_invariants(), "open-bins"));
    }
    SUBCASE("unmixed red bin next to a bonus item that could take it") {
        ParameterSet p = toy_small_red();
        Packer pk(p);
        pk.add_raw_bin({item(Rational(3, 20), Color::Red)});
        pk.add_raw_bin({item(Rational(11, 20), Color::Blue), item(Rational(7, 20), Color::None, Mark::U, true)});
        CHECK(has(pk.check_invariants(), "red-compatible"));
    }
    SUBCASE("provisional item sharing a bin") {
        ParameterSet p = toy(Mode::Extreme, "1/9");
        Packer pk(p);
        pk.add_raw_bin({item(Rational(2, 5), Color::ProvBlue), item(Rational(1, 5), Color::Blue)});
        CHECK(has(pk.check_invariants(), "provisional-shared"));
    }
}

TEST_CASE("random streams keep every invariant") {
    for (std::uint64_t seed : {1u, 2u}) {
        Packer pk(setA());
        for (const auto& s : random_stream(1500, seed, seed == 2)) {
            pk.pack(s);
            auto v = pk.check_invariants();
            REQUIRE_MESSAGE(v.empty(), format_violations(v));
        }
    }
}

TEST_CASE("packing is deterministic") {
    auto stream = random_stream(800, 99, true);
    std::vector<std::string> a, b;
    Packer p1(setA()), p2(setA());
    for (const auto& s : stream) a.push_back(p1.pack(s).line());
    for (const auto& s : stream) b.push_back(p2.pack(s).line());
    CHECK(a == b);
}

TEST_CASE("without red items super mode is plain Harmonic") {
    ParameterSet p = load_params_file(HARMONIC_DATA_DIR "/appendixB.params");
    for (auto& a : p.redfrac) a = Rational(0);
    p.explicit_tables.reset();
    Packer pk(p, derive_tables(p));
    for (const auto& s : random_stream(3000, 5, false)) pk.pack(s);
    std::map<int, int> partial;
    for (const auto& b : pk.bins()) {
        CHECK(b.red_type == 0);
        if (b.blue_count < pk.bluefit(b.blue_type)) partial[b.blue_type]++;
    }
    for (const auto& [t, n] : partial) CHECK(n <= 1);
}

TEST_CASE("trace lines parse back") {
    Packer pk(setA());
    std::string text;
    std::vector<PlacementEvent> ev;
    for (const auto& s : random_stream(200, 3, true)) {
        ev.push_back(pk.pack(s));
        text += ev.back().line() + "\n";
    }
    auto back = parse_trace("# header\n" + text);
    REQUIRE(back.size() == ev.size());
    for (size_t k = 0; k < ev.size(); ++k) CHECK(back[k].line() == ev[k].line());
    CHECK_THROWS_AS(parse_trace("item=1 size=1/2\n"), ParseError);
}

TEST_CASE("item streams") {
    auto v = parse_stream("1/2 # half\n\n1/3\n");
    REQUIRE(v.size() == 2);
    CHECK(v[1] == Rational(1, 3));
    CHECK_THROWS_AS(parse_stream("0.5\n"), ParseError);
}
