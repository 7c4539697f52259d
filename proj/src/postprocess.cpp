#include "harmonic/postprocess.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace harmonic {

namespace {

const Rational kTwoThirds(2, 3);

long floor_r(const Rational& r, long n) { return (r * Rational(n)).floor_long(); }

// smallest x >= 0 with floor(r (n + x + 1)) > n_red
long min_x(const Rational& r, long n, long n_red) {
    Rational need = Rational(n_red + 1) / r - Rational(n) - Rational(1);
    return std::max(0L, need.ceil_long());
}

std::vector<long> live_items(const PostState& s, long bin) {
    std::vector<long> out;
    for (long it : s.bins[static_cast<size_t>(bin)].items)
        if (s.items[static_cast<size_t>(it)].bin == bin) out.push_back(it);
    return out;
}

// Items of type i in a bin that are blue with mark m.
std::vector<long> blue_with(const PostState& s, long bin, int i, Mark m) {
    std::vector<long> out;
    for (long it : live_items(s, bin)) {
        const Item& x = s.items[static_cast<size_t>(it)];
        if (x.label == i && x.color == Color::Blue && !x.bonus && x.mark == m) out.push_back(it);
    }
    return out;
}

long blue_count(const PostState& s, long bin, int i) {
    long n = 0;
    for (long it : live_items(s, bin)) {
        const Item& x = s.items[static_cast<size_t>(it)];
        n += x.label == i && x.color == Color::Blue && !x.bonus;
    }
    return n;
}

bool is_red_item(const Item& x, int i) { return x.label == i && x.color == Color::Red && !x.bonus && !x.reduced; }

// Bins (oldest first) with exactly two blue type-i items, both with mark m.
std::vector<long> pair_bins(const PostState& s, int i, Mark m, bool mixed_only) {
    std::vector<long> out;
    for (long b = 0; b < static_cast<long>(s.bins.size()); ++b) {
        if (s.removed[static_cast<size_t>(b)]) continue;
        if (mixed_only && !s.bin_mixed(b)) continue;
        if (blue_count(s, b, i) == 2 && blue_with(s, b, i, m).size() == 2) out.push_back(b);
    }
    return out;
}

// Largest red type-i item with mark m, optionally only in mixed bins.
long largest_red(const PostState& s, int i, Mark m, bool in_mixed) {
    long best = -1;
    for (const Item& x : s.items) {
        if (!s.alive(x.id) || !is_red_item(x, i) || x.mark != m) continue;
        if (in_mixed && !s.bin_mixed(x.bin)) continue;
        if (best < 0 || x.size > s.items[static_cast<size_t>(best)].size) best = x.id;
    }
    return best;
}

// One pass of a final-marking loop: move a red item and x or x+1 blue items
// (in pairs) to mark `to`. Returns false when the loop condition fails.
bool reassign(PostState& s, int i, Mark from, Mark to, bool red_in_mixed, bool pairs_mixed, long x) {
    long red = largest_red(s, i, from, red_in_mixed);
    if (red < 0) return false;
    long nb = (x + 1) / 2;
    auto bins = pair_bins(s, i, from, pairs_mixed);
    if (static_cast<long>(bins.size()) < nb) return false;
    for (long k = 0; k < nb; ++k)
        for (long it : blue_with(s, bins[static_cast<size_t>(k)], i, from)) s.items[static_cast<size_t>(it)].mark = to;
    s.items[static_cast<size_t>(red)].mark = to;
    return true;
}

}  // namespace

bool PostState::alive(long item) const {
    const Item& x = items[static_cast<size_t>(item)];
    return x.bin >= 0 && !removed[static_cast<size_t>(x.bin)];
}

MarkCensus PostState::census(int type, Mark m) const {
    MarkCensus c;
    for (const Item& x : items) {
        if (!alive(x.id) || x.bonus || x.label != type || x.mark != m) continue;
        c.n += 1;
        c.n_red += x.color == Color::Red;
    }
    return c;
}

MarkCensus PostState::census(int type) const {
    MarkCensus c;
    long rf = d.redfit[static_cast<size_t>(type - 1)];
    for (const Item& x : items) {
        if (!alive(x.id) || x.bonus || x.label != type) continue;
        long w = x.reduced ? rf : 1;
        c.n += w;
        if (x.color == Color::Red) c.n_red += w;
    }
    return c;
}

bool PostState::bin_mixed(long bin) const {
    bool blue = false, red = false;
    for (long it : live_items(*this, bin)) {
        const Item& x = items[static_cast<size_t>(it)];
        if (x.bonus || x.reduced || is_redish(x.color))
            red = true;
        else if (is_blueish(x.color))
            blue = true;
    }
    return blue && red;
}

Rational PostState::bin_space(long bin) const {
    Rational s(0);
    for (long it : live_items(*this, bin)) s += items[static_cast<size_t>(it)].size;
    return s;
}

void PostState::remove_bin(long bin, long& counter, const std::string& why) {
    if (removed[static_cast<size_t>(bin)]) return;
    removed[static_cast<size_t>(bin)] = true;
    ++counter;
    log.push_back("remove bin " + std::to_string(bin) + ": " + why);
}

PostState make_post_state(const Packer& pk) {
    PostState s;
    s.p = &pk.params();
    s.d = pk.tables();
    s.items = pk.items();
    s.bins = pk.bins();
    s.removed.assign(s.bins.size(), false);
    s.bins_used = pk.bins_used();
    for (long b = 0; b < s.bins_used; ++b) s.space_before.push_back(s.bin_space(b));
    return s;
}

void remove_exceptional_bins(PostState& s) {
    const long nb = static_cast<long>(s.bins.size());
    std::set<long> groups;  // assignments with a lone blue N- or R-item
    for (long b = 0; b < nb; ++b) {
        if (s.removed[static_cast<size_t>(b)]) continue;
        const Bin& bin = s.bins[static_cast<size_t>(b)];
        bool prov = false;
        for (long it : live_items(s, b)) prov = prov || is_provisional(s.items[static_cast<size_t>(it)].color);
        if (prov) {
            s.remove_bin(b, s.removed_exceptional, "provisionally colored item");
            continue;
        }
        if (bin.pure && bin.blue_type && blue_count(s, b, bin.blue_type) < s.d.bluefit[static_cast<size_t>(bin.blue_type - 1)]) {
            s.remove_bin(b, s.removed_exceptional, "partially filled pure blue bin");
            continue;
        }
        for (long it : live_items(s, b)) {
            const Item& x = s.items[static_cast<size_t>(it)];
            if (x.color == Color::Blue && (x.mark == Mark::N || x.mark == Mark::R) && blue_count(s, b, x.label) == 1)
                groups.insert(x.assignment);
        }
    }
    if (groups.empty()) return;
    for (const Item& x : s.items)
        if (s.alive(x.id) && x.mark != Mark::U && groups.count(x.assignment))
            s.remove_bin(x.bin, s.removed_exceptional,
                         "assignment " + std::to_string(x.assignment) + " has a single blue marked item");
}

void final_marking(PostState& s) {
    const ParameterSet& p = *s.p;
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i) || !s.is_medium(i) || p.alpha(i).sign() <= 0) continue;
        const Rational& r = p.alpha(i);
        auto xR = [&] {
            MarkCensus c = s.census(i, Mark::R);
            return min_x(r, c.n, c.n_red);
        };
        while (reassign(s, i, Mark::N, Mark::R, true, false, xR())) {}
        while (reassign(s, i, Mark::B, Mark::R, true, false, xR())) {}
        while (reassign(s, i, Mark::U, Mark::R, true, false, xR())) {}
        auto xB = [&] {
            MarkCensus c = s.census(i, Mark::B);
            return min_x(r, c.n, c.n_red);
        };
        while (reassign(s, i, Mark::N, Mark::B, false, true, xB())) {}

        // mixed bins holding N-items or red B-items go
        for (const Item& x : s.items) {
            if (!s.alive(x.id) || x.label != i || !s.bin_mixed(x.bin)) continue;
            if (x.mark == Mark::N || (x.mark == Mark::B && x.color == Color::Red))
                s.remove_bin(x.bin, s.removed_final, "mixed bin with a type-" + std::to_string(i) + " " +
                                                         std::string(1, mark_char(x.mark)) + "-item");
        }
        // restore the red fraction of N and B
        for (Mark m : {Mark::N, Mark::B}) {
            for (int guard = 0; guard < 100000; ++guard) {
                MarkCensus c = s.census(i, m);
                long fl = floor_r(r, c.n);
                if (c.n_red == fl) break;
                long victim = -1;
                if (c.n_red > fl) {
                    for (const Item& x : s.items)
                        if (s.alive(x.id) && is_red_item(x, i) && x.mark == m) {
                            victim = x.bin;
                            break;
                        }
                } else {
                    for (auto it = s.items.rbegin(); it != s.items.rend(); ++it)
                        if (s.alive(it->id) && it->label == i && it->color == Color::Blue && it->mark == m) {
                            victim = it->bin;
                            break;
                        }
                }
                if (victim < 0) break;
                s.remove_bin(victim, s.removed_final,
                             std::string("red fraction of ") + mark_char(m) + " for type " + std::to_string(i));
            }
        }
    }
}

void modify_input(PostState& s) {
    const ParameterSet& p = *s.p;
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i) || !s.is_medium(i) || p.alpha(i).sign() <= 0) continue;
        const Rational& r = p.alpha(i);
        for (;;) {
            MarkCensus c = s.census(i, Mark::R);
            long x = min_x(r, c.n, c.n_red);
            long need = (x + 3) / 2;  // |S| with 2|S| in {x+2, x+3}
            std::vector<std::pair<long, long>> group;  // (bonus item, large item)
            for (const Item& b : s.items) {
                if (!s.alive(b.id) || !b.bonus || b.label != i) continue;
                long large = -1;
                for (long it : live_items(s, b.bin))
                    if (it != b.id && s.items[static_cast<size_t>(it)].size > Rational(1, 2)) large = it;
                if (large >= 0) group.emplace_back(b.id, large);
                if (static_cast<long>(group.size()) == need) break;
            }
            if (static_cast<long>(group.size()) < need) break;
            for (size_t g = 0; g < group.size(); ++g) {
                Item& med = s.items[static_cast<size_t>(group[g].first)];
                med.bonus = false;
                med.mark = Mark::R;
                if (g + 1 < group.size()) {
                    Item& big = s.items[static_cast<size_t>(group[g].second)];
                    big.size = med.size;
                    big.type = big.label = i;
                    big.color = Color::Blue;
                    big.mark = Mark::R;
                    med.color = Color::Blue;
                } else {
                    med.color = Color::Red;
                }
            }
            s.log.push_back("type " + std::to_string(i) + ": converted " + std::to_string(need) + " bonus bins");
        }
    }

    // reduced items become redfit_j red items of type j
    const size_t before = s.items.size();
    for (size_t k = 0; k < before; ++k) {
        if (!s.alive(static_cast<long>(k)) || !s.items[k].reduced) continue;
        Item old = s.items[k];
        int j = old.label;
        long rf = s.d.redfit[static_cast<size_t>(j - 1)];
        Rational part = old.size / Rational(rf);
        if (part > p.upper(j)) part = p.upper(j);
        Bin& bin = s.bins[static_cast<size_t>(old.bin)];
        s.items[k].bin = -1;
        for (long c = 0; c < rf; ++c) {
            Item n;
            n.id = static_cast<long>(s.items.size());
            n.size = part;
            n.type = n.label = j;
            n.color = Color::Red;
            n.bin = bin.id;
            bin.items.push_back(n.id);
            s.items.push_back(n);
        }
    }

    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i) || !s.is_medium(i)) continue;
        for (const Item& x : s.items)
            if (s.alive(x.id) && x.label == i && (x.bonus || (p.alpha(i).sign() > 0 && x.mark == Mark::U)))
                s.remove_bin(x.bin, s.removed_modify,
                             std::string(x.bonus ? "bonus" : "unmarked") + " type-" + std::to_string(i) + " item");
    }
    // superfluous red items of small types; repeated since a removal for one
    // type can shift the count of another
    for (long before = -1; before != s.removed_superfluous;) {
    before = s.removed_superfluous;
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i) || !s.is_small(i) || p.alpha(i).sign() <= 0) continue;
        long rf = s.d.redfit[static_cast<size_t>(i - 1)];
        for (int guard = 0; guard < 1000; ++guard) {
            MarkCensus c = s.census(i);
            if (c.n_red <= floor_r(p.alpha(i), c.n)) break;
            // preference: large item plus redfit reds, then reds only, then a
            // bin without marked medium items, then anything holding the reds
            long best[4] = {-1, -1, -1, -1};
            for (long b = 0; b < static_cast<long>(s.bins.size()) && best[0] < 0; ++b) {
                if (s.removed[static_cast<size_t>(b)]) continue;
                long reds = 0, others = 0;
                bool large = false, marked = false;
                for (long it : live_items(s, b)) {
                    const Item& x = s.items[static_cast<size_t>(it)];
                    if (x.label == i && x.color == Color::Red)
                        ++reds;
                    else
                        ++others;
                    large = large || x.size > Rational(1, 2);
                    marked = marked || x.mark != Mark::U;
                }
                if (!reds) continue;
                int rank = reds == rf && large && others == 1 ? 0 : !others ? 1 : !marked ? 2 : 3;
                if (best[rank] < 0) best[rank] = b;
            }
            long pick = -1;
            for (int r = 0; r < 4 && pick < 0; ++r) pick = best[r];
            if (pick >= 0 && pick != best[0])
                s.log.push_back("type " + std::to_string(i) + ": no bin with a large item and redfit reds");
            if (pick < 0) break;
            if (pick == best[3]) {
                // drop only the reds; the marked medium items stay
                for (long it : live_items(s, pick)) {
                    Item& x = s.items[static_cast<size_t>(it)];
                    if (x.label == i && x.color == Color::Red) x.bin = -1;
                }
                ++s.removed_superfluous;
                s.log.push_back("drop type-" + std::to_string(i) + " red items of bin " + std::to_string(pick));
                continue;
            }
            s.remove_bin(pick, s.removed_superfluous, "superfluous type-" + std::to_string(i) + " red items");
        }
        // bins removed earlier may have taken red items of this type with
        // them; drop blue-only bins of the type until the lower bound holds
        for (int guard = 0; guard < 1000; ++guard) {
            MarkCensus c = s.census(i);
            if (c.n_red >= floor_r(p.alpha(i), c.n) - rf) break;
            long pick = -1;
            for (long b = static_cast<long>(s.bins.size()) - 1; b >= 0 && pick < 0; --b) {
                if (s.removed[static_cast<size_t>(b)]) continue;
                auto live = live_items(s, b);
                bool only = !live.empty();
                for (long it : live) {
                    const Item& x = s.items[static_cast<size_t>(it)];
                    only = only && x.label == i && x.color == Color::Blue;
                }
                if (only) pick = b;
            }
            if (pick < 0) break;
            s.remove_bin(pick, s.removed_superfluous, "blue type-" + std::to_string(i) + " surplus");
        }
    }
    }
}

void run_postprocess(PostState& s) {
    remove_exceptional_bins(s);
    if (s.p->mode == Mode::Extreme) {
        final_marking(s);
        modify_input(s);
    }
}

Rational removal_constant(const ParameterSet& p) {
    Rational c(2 * p.N());
    for (int i = 1; i <= p.N(); ++i)
        if (p.alpha(i).sign() > 0) c += Rational(12) / p.alpha(i);
    return c;
}

std::vector<PostViolation> verify_post_conditions(const PostState& s) {
    std::vector<PostViolation> out;
    const ParameterSet& p = *s.p;
    const bool extreme = p.mode == Mode::Extreme;
    for (const Item& x : s.items) {
        if (!s.alive(x.id)) continue;
        if (x.bonus) out.push_back({"bonus", x.label, "item " + std::to_string(x.id) + " is still bonus"});
        if (is_provisional(x.color))
            out.push_back({"provisional", x.label, "item " + std::to_string(x.id) + " is still provisional"});
    }
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i) || p.alpha(i).sign() <= 0) continue;
        const Rational& r = p.alpha(i);
        MarkCensus all = s.census(i);
        long fl = floor_r(r, all.n);
        if (extreme && s.is_medium(i)) {
            for (Mark m : {Mark::N, Mark::B, Mark::R}) {
                MarkCensus c = s.census(i, m);
                if (c.n_red != floor_r(r, c.n))
                    out.push_back({"red-ratio", i,
                                   std::string(1, mark_char(m)) + ": n_red " + std::to_string(c.n_red) + " n " +
                                       std::to_string(c.n)});
            }
            if (all.n_red < fl - 3 || all.n_red > fl)
                out.push_back({"red-bounds", i,
                               "medium n_red " + std::to_string(all.n_red) + " outside [" + std::to_string(fl - 3) +
                                   ", " + std::to_string(fl) + "]"});
        } else if (extreme && s.is_small(i)) {
            long rf = s.d.redfit[static_cast<size_t>(i - 1)];
            if (all.n_red < fl - rf || all.n_red > fl)
                out.push_back({"red-bounds", i,
                               "small n_red " + std::to_string(all.n_red) + " outside [" + std::to_string(fl - rf) +
                                   ", " + std::to_string(fl) + "]"});
        }
    }
    if (extreme) {
        for (const Item& x : s.items) {
            if (!s.alive(x.id) || !s.is_medium(x.label) || x.mark == Mark::U) continue;
            if (x.color == Color::Blue && blue_count(s, x.bin, x.label) != 2)
                out.push_back({"structure", x.label,
                               "blue " + std::string(1, mark_char(x.mark)) + "-item " + std::to_string(x.id) +
                                   " not paired"});
            if (x.mark == Mark::N && s.bin_mixed(x.bin))
                out.push_back({"structure", x.label, "N-item " + std::to_string(x.id) + " in a mixed bin"});
            if (x.mark == Mark::B && x.color == Color::Red && s.bin_mixed(x.bin))
                out.push_back({"structure", x.label, "red B-item " + std::to_string(x.id) + " in a mixed bin"});
        }
        // Enough N-items are at least as large as the smallest red N-item.
        for (int i = 1; i <= p.N(); ++i) {
            if (p.is_pseudo(i) || !s.is_medium(i) || p.alpha(i).sign() <= 0) continue;
            long smallest = -1;
            for (const Item& x : s.items)
                if (s.alive(x.id) && is_red_item(x, i) && x.mark == Mark::N &&
                    (smallest < 0 || x.size < s.items[static_cast<size_t>(smallest)].size))
                    smallest = x.id;
            if (smallest < 0) continue;
            const Item& rr = s.items[static_cast<size_t>(smallest)];
            if (live_items(s, rr.bin).size() != 1)
                out.push_back({"smallest-red", i, "smallest red N-item " + std::to_string(smallest) + " not alone"});
            MarkCensus c = s.census(i, Mark::N);
            long big = 0;
            for (const Item& x : s.items)
                if (s.alive(x.id) && x.label == i && x.mark == Mark::N && x.size >= rr.size) ++big;
            const Rational& r = p.alpha(i);
            Rational need = (r + (Rational(1) - r) / Rational(2)) * Rational(c.n) - Rational(2);
            if (Rational(big) < need)
                out.push_back({"smallest-red", i,
                               std::to_string(big) + " N-items at least as large as the smallest red, need " +
                                   need.str()});
        }
    }
    // No unmixed red bin next to a compatible unmixed bin, on the final bins
    std::map<int, long> unmixed_red, unmixed_blue;  // type -> a witness bin
    std::map<int, long> unmixed_large;               // large items below 2/3
    for (long b = 0; b < static_cast<long>(s.bins.size()); ++b) {
        if (s.removed[static_cast<size_t>(b)] || s.bin_mixed(b)) continue;
        auto live = live_items(s, b);
        if (live.empty()) continue;
        const Item& x = s.items[static_cast<size_t>(live.front())];
        if (x.color == Color::Red) unmixed_red.emplace(x.label, b);
        if (x.color == Color::Blue && !s.bins[static_cast<size_t>(b)].pure) {
            if (extreme && s.is_large(x.label)) {
                if (x.size < kTwoThirds) unmixed_large.emplace(x.label, b);
            } else {
                unmixed_blue.emplace(x.label, b);
            }
        }
    }
    for (const auto& [j, rb] : unmixed_red) {
        long nj = s.d.needs[static_cast<size_t>(j - 1)];
        for (const auto& [i, bb] : unmixed_blue)
            if (s.d.leaves[static_cast<size_t>(i - 1)] >= nj)
                out.push_back({"red-compatible", j,
                               "unmixed red bin " + std::to_string(rb) + " and unmixed type-" + std::to_string(i) +
                                   " bin " + std::to_string(bb)});
        if (!s.is_medium(j))
            for (const auto& [i, bb] : unmixed_large)
                out.push_back({"red-compatible", j,
                               "unmixed red bin " + std::to_string(rb) + " and unmixed large bin " +
                                   std::to_string(bb)});
    }
    for (long b = 0; b < static_cast<long>(s.space_before.size()); ++b)
        if (!s.removed[static_cast<size_t>(b)] && s.bin_space(b) > s.space_before[static_cast<size_t>(b)])
            out.push_back({"space", 0, "bin " + std::to_string(b) + " gained space"});
    Rational C = removal_constant(p);
    if (Rational(s.removed_total()) > C)
        out.push_back({"removals", 0, std::to_string(s.removed_total()) + " bins removed, allowance " + C.str()});
    return out;
}

std::string format_violations(const std::vector<PostViolation>& v) {
    std::ostringstream out;
    for (const auto& x : v) out << x.property << " (type " << x.type << "): " << x.detail << "\n";
    return out.str();
}

KChoice determine_k(const PostState& s) {
    KChoice k;
    for (const Item& x : s.items) {
        if (!s.alive(x.id) || x.color != Color::Red || x.bonus || s.bin_mixed(x.bin)) continue;
        if (k.item < 0 || x.size < s.items[static_cast<size_t>(k.item)].size) k.item = x.id;
    }
    if (k.item >= 0) k.k = static_cast<int>(s.d.needs[static_cast<size_t>(s.items[static_cast<size_t>(k.item)].label - 1)]);
    return k;
}

WeightCheck check_weight_bound(const PostState& s) {
    WeightCheck w;
    w.k = determine_k(s).k;
    WeightContext ctx = make_context(*s.p, s.d, w.k);
    std::vector<WeighedItem> items;
    for (const Item& x : s.items)
        if (s.alive(x.id)) items.push_back({x.size, x.label, x.mark});
    std::tie(w.W, w.V) = total_weight(ctx, items);
    w.C = removal_constant(*s.p);
    w.bins_used = s.bins_used;
    w.ok = Rational(w.bins_used) <= rmin(w.W, w.V) + w.C;
    return w;
}

std::string post_summary(const PostState& s) {
    std::ostringstream out;
    const ParameterSet& p = *s.p;
    out << "bins used: " << s.bins_used << "\n";
    out << "removed: exceptional " << s.removed_exceptional << ", final marking " << s.removed_final
        << ", modification " << s.removed_modify << ", superfluous reds " << s.removed_superfluous << " (total "
        << s.removed_total() << ", allowance " << removal_constant(p).decimal(6) << ")\n";
    out << "type census (n n_red; N B R for medium types):\n";
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i)) continue;
        MarkCensus all = s.census(i);
        if (!all.n) continue;
        out << "  type " << i << ": " << all.n << " " << all.n_red;
        if (s.is_medium(i) && p.alpha(i).sign() > 0)
            for (Mark m : {Mark::N, Mark::B, Mark::R}) {
                MarkCensus c = s.census(i, m);
                out << " | " << mark_char(m) << " " << c.n << " " << c.n_red;
            }
        out << "\n";
    }
    KChoice k = determine_k(s);
    if (k.item >= 0)
        out << "smallest red item in an unmixed bin: item " << k.item << " size "
            << s.items[static_cast<size_t>(k.item)].size.str() << " type " << s.items[static_cast<size_t>(k.item)].label
            << "\n";
    else
        out << "no red item in an unmixed bin\n";
    out << "k: " << k.k << "\n";
    WeightCheck w = check_weight_bound(s);
    out << "W: " << format_both(w.W) << "\nV: " << format_both(w.V) << "\n";
    out << "bins_used <= min(W,V) + C: " << (w.ok ? "holds" : "FAILS") << "\n";
    return out.str();
}

}  // namespace harmonic
