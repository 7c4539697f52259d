#pragma once

#include "harmonic/params.hpp"
#include "harmonic/weights.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace harmonic {

enum class Color { None, Blue, Red, ProvBlue, ProvRed };
std::string color_name(Color c);
Color parse_color(const std::string& s);
inline bool is_provisional(Color c) { return c == Color::ProvBlue || c == Color::ProvRed; }
inline bool is_blueish(Color c) { return c == Color::Blue || c == Color::ProvBlue; }
inline bool is_redish(Color c) { return c == Color::Red || c == Color::ProvRed; }

struct Item {
    long id = 0;
    Rational size;
    int type = 0;       // type by size
    int label = 0;      // type the item is counted as
    Color color = Color::None;
    Mark mark = Mark::U;
    bool bonus = false;
    bool reduced = false;  // bonus item relabeled as a small red type
    long bin = -1;
    long assignment = 0;   // Mark-and-Color invocation that marked it, 0 if none
};

struct Bin {
    long id = 0;
    std::vector<long> items;
    bool pure = false;     // pure blue bin
    bool mixed = false;
    int blue_type = 0;     // 0 if none
    int blue_count = 0;
    int red_type = 0;      // red, provisionally red or bonus items
    int red_count = 0;
};

struct PlacementEvent {
    long item = 0;
    Rational size;
    int type = 0;
    Color color = Color::None;
    long bin = 0;
    bool bonus = false;
    std::string line() const;
};

struct TypeCounters {
    long n = 0, n_red = 0, n_bonus = 0;
    long nM[4] = {0, 0, 0, 0};      // by Mark
    long n_redM[4] = {0, 0, 0, 0};
};

struct InvariantViolation {
    std::string property;
    int type = 0;
    long bin = -1;
    std::string detail;
};

class Packer {
public:
    Packer(const ParameterSet& p, DerivedTables d);
    explicit Packer(const ParameterSet& p) : Packer(p, tables_of(p)) {}

    int classify(const Rational& size) const;
    PlacementEvent pack(const Rational& size);

    // Compatibility of an unmixed bin with a new item of the
    // given type, size and color.
    bool compatible(const Bin& b, int type, const Rational& size, Color c) const;

    std::vector<InvariantViolation> check_invariants() const;

    // Runs after every packed item for each medium type with redfrac > 0.
    void mark_and_color(int type);

    long bins_used() const { return static_cast<long>(bins_.size()); }
    const std::vector<Item>& items() const { return items_; }
    const std::vector<Bin>& bins() const { return bins_; }
    const TypeCounters& counters(int type) const { return cnt_.at(static_cast<size_t>(type - 1)); }
    const ParameterSet& params() const { return *p_; }
    const DerivedTables& tables() const { return d_; }
    long assignments() const { return assignment_seq_; }

    bool is_large(int type) const { return is_large_bound(p_->upper(type)); }
    bool is_medium(int type) const { return is_medium_bound(p_->upper(type)); }
    bool is_small(int type) const { return !is_large(type) && !is_medium(type); }
    // leaves of an item, using the size rule for large items in extreme mode
    long leaves_of(const Item& it) const;
    long needs_of(int type) const { return d_.needs.at(static_cast<size_t>(type - 1)); }
    long bluefit(int type) const { return d_.bluefit.at(static_cast<size_t>(type - 1)); }
    long redfit(int type) const { return d_.redfit.at(static_cast<size_t>(type - 1)); }

    // Test hooks for building states by hand.
    TypeCounters& counters_mut(int type) { return cnt_.at(static_cast<size_t>(type - 1)); }
    long add_raw_bin(const std::vector<Item>& contents);

private:
    enum class Where { Open, Compatible, New };
    void pack_super(Item& it);
    void pack_extreme(Item& it);
    long place(long item, Color c);
    long find_open(int type, Color c) const;
    long find_compatible(const Item& it, Color c) const;
    long find_bonus_bin(const Item& it) const;
    long new_bin(bool pure);
    void put(long item, long bin);
    void reindex(long bin);
    void unindex(long bin);
    void make_mixed(long bin);
    void set_color(long item, Color c);
    long propagate(int type);
    void block_R(int type);
    void block_B(int type);
    void block_N(int type);
    long min_x(int type, long n, long n_red, long mult) const;
    void mark_item(long item, Mark m, long assignment);

    const ParameterSet* p_;
    DerivedTables d_;
    std::vector<Item> items_;
    std::vector<Bin> bins_;
    std::vector<TypeCounters> cnt_;
    // indices; sets of bin ids (oldest first) or item ids
    std::vector<std::set<long>> open_blue_, open_red_;      // definite color, same type
    std::vector<std::set<long>> unmixed_blue_, unmixed_red_;
    std::vector<std::set<long>> prov_;                      // provisionally colored items
    std::vector<std::set<long>> bonus_;                     // bonus items by type
    std::vector<std::set<long>> pending_;                   // unmarked blue next to a marked blue
    std::vector<std::set<long>> mixed_red_u_;               // unmarked red medium items in mixed bins
    std::vector<std::set<long>> blue_pairs_u_;              // mixed bins with two unmarked blues
    long assignment_seq_ = 0;
    std::vector<int> medium_red_types_;
};

// Item stream: one rational per line, '#' comments.
std::vector<Rational> parse_stream(const std::string& text);
// Sizes on the grid k/100000. The medium-heavy mix draws 60% medium and 25%
// small sizes; the rest are uniform.
std::vector<Rational> random_stream(long n, std::uint64_t seed, bool medium_heavy);
// Lines as written by PlacementEvent::line().
std::vector<PlacementEvent> parse_trace(const std::string& text);
std::string format_violations(const std::vector<InvariantViolation>& v);

}  // namespace harmonic
