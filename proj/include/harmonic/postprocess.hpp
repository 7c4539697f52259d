#pragma once

#include "harmonic/packer.hpp"

#include <string>
#include <vector>

namespace harmonic {

struct MarkCensus {
    long n = 0, n_red = 0;
};

// Owned copy of a finished packing. Items and bins are never erased; removed
// bins are flagged and their items no longer count.
struct PostState {
    const ParameterSet* p = nullptr;
    DerivedTables d;
    std::vector<Item> items;
    std::vector<Bin> bins;
    std::vector<bool> removed;
    std::vector<Rational> space_before;  // occupied space per bin at the end of packing
    long bins_used = 0;
    long removed_exceptional = 0, removed_final = 0, removed_modify = 0, removed_superfluous = 0;
    std::vector<std::string> log;

    long removed_total() const { return removed_exceptional + removed_final + removed_modify + removed_superfluous; }
    bool alive(long item) const;
    bool is_medium(int type) const { return is_medium_bound(p->upper(type)); }
    bool is_large(int type) const { return is_large_bound(p->upper(type)); }
    bool is_small(int type) const { return !is_medium(type) && !is_large(type); }
    // Items of label type i with mark m (bonus items excluded).
    MarkCensus census(int type, Mark m) const;
    // All items of label type i (bonus items excluded, reduced items count redfit times).
    MarkCensus census(int type) const;
    bool bin_mixed(long bin) const;
    Rational bin_space(long bin) const;
    void remove_bin(long bin, long& counter, const std::string& why);
};

PostState make_post_state(const Packer& pk);

void remove_exceptional_bins(PostState& s);
void final_marking(PostState& s);
void modify_input(PostState& s);
void run_postprocess(PostState& s);

struct PostViolation {
    std::string property;
    int type = 0;
    std::string detail;
};
std::vector<PostViolation> verify_post_conditions(const PostState& s);
std::string format_violations(const std::vector<PostViolation>& v);

// Removal allowance: sum over types with redfrac > 0 of 12/redfrac, plus 2N.
Rational removal_constant(const ParameterSet& p);

struct KChoice {
    int k = 0;
    long item = -1;  // smallest red item in an unmixed bin, -1 if none
};
KChoice determine_k(const PostState& s);

struct WeightCheck {
    int k = 0;
    Rational W, V, C;
    long bins_used = 0;
    bool ok = false;
};
// bins_used <= min(W, V) + C for the realized class k.
WeightCheck check_weight_bound(const PostState& s);

std::string post_summary(const PostState& s);

}  // namespace harmonic
