#include "harmonic/packer.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace harmonic {

namespace {

const Rational kTwoThirds(2, 3);

}  // namespace

std::string color_name(Color c) {
    switch (c) {
        case Color::Blue: return "blue";
        case Color::Red: return "red";
        case Color::ProvBlue: return "prov-blue";
        case Color::ProvRed: return "prov-red";
        case Color::None: break;
    }
    return "none";
}

Color parse_color(const std::string& s) {
    if (s == "blue") return Color::Blue;
    if (s == "red") return Color::Red;
    if (s == "prov-blue") return Color::ProvBlue;
    if (s == "prov-red") return Color::ProvRed;
    if (s == "none") return Color::None;
    throw ParseError("unknown color '" + s + "'");
}

std::string PlacementEvent::line() const {
    std::ostringstream out;
    out << "item=" << item << " size=" << size.str() << " type=" << type << " color=" << color_name(color)
        << " bin=" << bin << " bonus=" << (bonus ? 1 : 0);
    return out.str();
}

Packer::Packer(const ParameterSet& p, DerivedTables d) : p_(&p), d_(std::move(d)) {
    size_t n = static_cast<size_t>(p.N());
    cnt_.resize(n);
    for (auto* v : {&open_blue_, &open_red_, &unmixed_blue_, &unmixed_red_, &prov_, &bonus_, &pending_,
                    &mixed_red_u_, &blue_pairs_u_})
        v->resize(n + 1);
    for (int i = 1; i <= p.N(); ++i)
        if (!p.is_pseudo(i) && is_medium(i) && p.alpha(i) > 0) medium_red_types_.push_back(i);
}

int Packer::classify(const Rational& size) const {
    if (size.sign() <= 0 || size > 1) throw std::invalid_argument("item size " + size.str() + " outside (0,1]");
    if (p_->mode == Mode::Extreme && size > Rational(1, 2)) return 1;
    for (int j = p_->N(); j >= 1; --j) {
        if (p_->is_pseudo(j)) continue;
        if (size <= p_->upper(j) && size > p_->lower(j)) return j;
    }
    throw std::invalid_argument("no type contains size " + size.str());
}

long Packer::leaves_of(const Item& it) const {
    if (p_->mode == Mode::Extreme && is_large(it.label)) return it.size < kTwoThirds ? p_->K() : 0;
    return d_.leaves.at(static_cast<size_t>(it.label - 1));
}

long Packer::new_bin(bool pure) {
    Bin b;
    b.id = static_cast<long>(bins_.size());
    b.pure = pure;
    bins_.push_back(b);
    return b.id;
}

void Packer::unindex(long id) {
    const Bin& b = bins_[static_cast<size_t>(id)];
    for (int t : {b.blue_type, b.red_type}) {
        if (!t) continue;
        auto k = static_cast<size_t>(t);
        open_blue_[k].erase(id);
        open_red_[k].erase(id);
        unmixed_blue_[k].erase(id);
        unmixed_red_[k].erase(id);
        blue_pairs_u_[k].erase(id);
    }
    for (long it : b.items) {
        const Item& x = items_[static_cast<size_t>(it)];
        mixed_red_u_[static_cast<size_t>(x.label)].erase(it);
    }
}

void Packer::reindex(long id) {
    Bin& b = bins_[static_cast<size_t>(id)];
    b.blue_type = b.red_type = 0;
    b.blue_count = b.red_count = 0;
    bool blue_prov = false, red_definite = true, blue_unmarked = true;
    for (long it : b.items) {
        const Item& x = items_[static_cast<size_t>(it)];
        if (x.bonus) {
            b.red_type = x.label;
            b.red_count += 1;
            red_definite = false;
        } else if (x.reduced) {
            b.red_type = x.label;
            b.red_count += redfit(x.label);
        } else if (is_blueish(x.color)) {
            b.blue_type = x.label;
            b.blue_count += 1;
            blue_prov = blue_prov || is_provisional(x.color);
            blue_unmarked = blue_unmarked && x.mark == Mark::U;
        } else if (is_redish(x.color)) {
            b.red_type = x.label;
            b.red_count += 1;
            red_definite = red_definite && !is_provisional(x.color);
        }
    }
    b.mixed = b.blue_count > 0 && b.red_count > 0;
    if (b.blue_type) {
        auto k = static_cast<size_t>(b.blue_type);
        if (!blue_prov && b.blue_count < bluefit(b.blue_type)) open_blue_[k].insert(id);
        if (!b.mixed && !b.pure) unmixed_blue_[k].insert(id);
        if (b.mixed && b.blue_count == 2 && blue_unmarked && is_medium(b.blue_type)) blue_pairs_u_[k].insert(id);
    }
    if (b.red_type) {
        auto k = static_cast<size_t>(b.red_type);
        if (red_definite && b.red_count < redfit(b.red_type)) open_red_[k].insert(id);
        if (!b.mixed) unmixed_red_[k].insert(id);
    }
    if (b.mixed)
        for (long it : b.items) {
            const Item& x = items_[static_cast<size_t>(it)];
            if (!x.bonus && !x.reduced && x.color == Color::Red && x.mark == Mark::U && is_medium(x.label))
                mixed_red_u_[static_cast<size_t>(x.label)].insert(it);
        }
}

void Packer::put(long item, long bin) {
    Item& it = items_[static_cast<size_t>(item)];
    Bin& b = bins_[static_cast<size_t>(bin)];
    Rational used = it.size;
    for (long o : b.items) used += items_[static_cast<size_t>(o)].size;
    if (used > 1) throw std::logic_error("bin " + std::to_string(bin) + " overfull");
    unindex(bin);
    b.items.push_back(item);
    it.bin = bin;
    reindex(bin);
}

void Packer::set_color(long item, Color c) {
    Item& it = items_[static_cast<size_t>(item)];
    auto k = static_cast<size_t>(it.label);
    long bin = it.bin;
    if (bin >= 0) unindex(bin);
    it.color = c;
    if (is_provisional(c))
        prov_[k].insert(item);
    else
        prov_[k].erase(item);
    if (bin >= 0) reindex(bin);
}

void Packer::mark_item(long item, Mark m, long assignment) {
    Item& it = items_[static_cast<size_t>(item)];
    if (it.bin >= 0) unindex(it.bin);
    it.mark = m;
    it.assignment = assignment;
    if (it.bin >= 0) reindex(it.bin);
}

long Packer::find_open(int type, Color c) const {
    const auto& s = (c == Color::Red ? open_red_ : open_blue_)[static_cast<size_t>(type)];
    return s.empty() ? -1 : *s.begin();
}

bool Packer::compatible(const Bin& b, int type, const Rational& size, Color c) const {
    if (b.mixed || b.pure || b.items.empty()) return false;
    const bool extreme = p_->mode == Mode::Extreme;
    const Item& first = items_[static_cast<size_t>(b.items.front())];
    if (c == Color::Red) {
        if (!b.blue_type || b.red_type) return false;
        if (extreme && is_large(b.blue_type)) {
            if (is_medium(type)) return size <= Rational(1) - first.size;
            return leaves_of(first) >= needs_of(type);
        }
        return d_.leaves[static_cast<size_t>(b.blue_type - 1)] >= needs_of(type);
    }
    if (!b.red_type || b.blue_type) return false;
    if (extreme && is_large(type)) {
        if (is_medium(b.red_type)) return size <= Rational(1) - first.size;
        return (size < kTwoThirds ? p_->K() : 0) >= needs_of(b.red_type);
    }
    return d_.leaves[static_cast<size_t>(type - 1)] >= needs_of(b.red_type);
}

long Packer::find_compatible(const Item& it, Color c) const {
    long best = -1;
    const auto& sets = c == Color::Red ? unmixed_blue_ : unmixed_red_;
    for (int t = 1; t <= p_->N(); ++t) {
        for (long id : sets[static_cast<size_t>(t)]) {
            if (best >= 0 && id > best) break;
            if (compatible(bins_[static_cast<size_t>(id)], it.label, it.size, c)) {
                best = id;
                break;
            }
        }
    }
    return best;
}

long Packer::find_bonus_bin(const Item& it) const {
    for (long id : unmixed_blue_[1]) {
        const Bin& b = bins_[static_cast<size_t>(id)];
        if (b.blue_count == 1 && compatible(b, it.label, it.size, Color::Red)) return id;
    }
    return -1;
}

long Packer::place(long item, Color c) {
    Item& it = items_[static_cast<size_t>(item)];
    long bin = find_open(it.label, c);
    if (bin >= 0) {
        put(item, bin);
        set_color(item, c);
    } else if ((bin = find_compatible(it, c)) >= 0) {
        for (long o : bins_[static_cast<size_t>(bin)].items) {
            Color oc = items_[static_cast<size_t>(o)].color;
            if (oc == Color::ProvBlue) set_color(o, Color::Blue);
            if (oc == Color::ProvRed) set_color(o, Color::Red);
        }
        put(item, bin);
        set_color(item, c);
    } else {
        bool provisional = p_->mode == Mode::Extreme && is_medium(it.label) && p_->alpha(it.label) > 0;
        Color cc = c;
        if (provisional) cc = c == Color::Red ? Color::ProvRed : Color::ProvBlue;
        bin = new_bin(!provisional && c == Color::Blue && leaves_of(it) == 0);
        put(item, bin);
        set_color(item, cc);
    }
    // a blue medium joining a marked blue item inherits its mark
    if (c == Color::Blue && is_medium(it.label)) {
        for (long o : bins_[static_cast<size_t>(bin)].items) {
            const Item& x = items_[static_cast<size_t>(o)];
            if (o != item && x.label == it.label && x.color == Color::Blue && x.mark != Mark::U) {
                pending_[static_cast<size_t>(it.label)].insert(item);
                break;
            }
        }
    }
    return bin;
}

void Packer::pack_super(Item& it) {
    TypeCounters& c = counters_mut(it.label);
    c.n += 1;
    if (c.n_red < (p_->alpha(it.label) * Rational(c.n)).floor_long()) {
        place(it.id, Color::Red);
        c.n_red += 1;
    } else {
        place(it.id, Color::Blue);
    }
}

void Packer::pack_extreme(Item& it) {
    const int i = it.label;
    TypeCounters& c = counters_mut(i);
    c.n += 1;
    if (c.n_red < (p_->alpha(i) * Rational(c.n)).floor_long()) {
        long q = -1;
        if (!bonus_[static_cast<size_t>(i)].empty()) {
            q = *bonus_[static_cast<size_t>(i)].begin();
        } else if (is_small(i)) {
            for (int j = 1; j <= p_->N(); ++j) {
                const auto& s = bonus_[static_cast<size_t>(j)];
                if (!s.empty() && (q < 0 || *s.begin() < q)) q = *s.begin();
            }
        }
        if (q >= 0) {
            Item& b = items_[static_cast<size_t>(q)];
            const int tq = b.label;
            bonus_[static_cast<size_t>(tq)].erase(q);
            counters_mut(tq).n_bonus -= 1;
            unindex(b.bin);
            b.bonus = false;
            b.label = i;
            b.reduced = b.type != i;
            b.color = Color::Red;
            reindex(b.bin);
            c.n += redfit(i);
            c.n_red += redfit(i);
            place(it.id, Color::Blue);
        } else {
            place(it.id, Color::Red);
            c.n_red += 1;
        }
    } else {
        long bin = -1;
        if (is_medium(i) && p_->alpha(i) > 0) bin = find_bonus_bin(it);
        if (bin >= 0) {
            it.bonus = true;
            put(it.id, bin);
            bonus_[static_cast<size_t>(i)].insert(it.id);
            c.n -= 1;
            c.n_bonus += 1;
        } else {
            place(it.id, Color::Blue);
        }
    }
    for (int t : medium_red_types_) mark_and_color(t);
}

PlacementEvent Packer::pack(const Rational& size) {
    Item it;
    it.id = static_cast<long>(items_.size());
    it.size = size;
    it.type = it.label = classify(size);
    items_.push_back(it);
    Item& ref = items_.back();
    if (p_->mode == Mode::Super)
        pack_super(ref);
    else
        pack_extreme(ref);
    const Item& done = items_[static_cast<size_t>(it.id)];
    PlacementEvent ev;
    ev.item = done.id;
    ev.size = done.size;
    ev.type = done.type;
    ev.color = done.color;
    ev.bin = done.bin;
    ev.bonus = done.bonus;
    return ev;
}

long Packer::min_x(int type, long n, long n_red, long mult) const {
    // smallest x >= 0 with floor(r (n + mult x + 1)) > n_red
    const Rational& r = p_->alpha(type);
    Rational need = (Rational(n_red + 1) / r - Rational(n) - Rational(1)) / Rational(mult);
    return std::max(0L, need.ceil_long());
}

long Packer::propagate(int type) {
    auto& pend = pending_[static_cast<size_t>(type)];
    long done = 0;
    for (long item : std::vector<long>(pend.begin(), pend.end())) {
        pend.erase(item);
        const Item& it = items_[static_cast<size_t>(item)];
        if (it.mark != Mark::U || it.color != Color::Blue) continue;
        for (long o : bins_[static_cast<size_t>(it.bin)].items) {
            const Item& x = items_[static_cast<size_t>(o)];
            if (o != item && x.label == type && x.color == Color::Blue && x.mark != Mark::U) {
                Mark m = x.mark;
                mark_item(item, m, x.assignment);
                counters_mut(type).nM[static_cast<int>(m)] += 1;
                ++done;
                break;
            }
        }
    }
    return done;
}

void Packer::block_R(int i) {
    TypeCounters& c = counters_mut(i);
    const int R = static_cast<int>(Mark::R);
    long x = min_x(i, c.nM[R], c.n_redM[R], 2);
    std::vector<long> blues;
    for (long it : prov_[static_cast<size_t>(i)])
        if (items_[static_cast<size_t>(it)].color == Color::ProvBlue) blues.push_back(it);
    if (static_cast<long>(blues.size()) < x) return;
    long red = -1;
    bool from_bonus = false;
    if (!bonus_[static_cast<size_t>(i)].empty()) {
        red = *bonus_[static_cast<size_t>(i)].begin();
        from_bonus = true;
    } else if (!mixed_red_u_[static_cast<size_t>(i)].empty()) {
        red = *mixed_red_u_[static_cast<size_t>(i)].begin();
    }
    if (red < 0) return;
    long a = ++assignment_seq_;
    if (from_bonus) {
        Item& b = items_[static_cast<size_t>(red)];
        bonus_[static_cast<size_t>(i)].erase(red);
        unindex(b.bin);
        b.bonus = false;
        b.color = Color::Red;
        reindex(b.bin);
        c.n_bonus -= 1;
        c.n += 1;
        c.n_red += 1;
    }
    mark_item(red, Mark::R, a);
    for (long k = 0; k < x; ++k) {
        set_color(blues[static_cast<size_t>(k)], Color::Blue);
        mark_item(blues[static_cast<size_t>(k)], Mark::R, a);
    }
    c.nM[R] += x + 1;
    c.n_redM[R] += 1;
}

void Packer::block_B(int i) {
    TypeCounters& c = counters_mut(i);
    const int B = static_cast<int>(Mark::B);
    long x = min_x(i, c.nM[B], c.n_redM[B], 1);
    long red = -1;
    for (long it : prov_[static_cast<size_t>(i)])
        if (items_[static_cast<size_t>(it)].color == Color::ProvRed) {
            red = it;
            break;
        }
    if (red < 0) return;
    const auto& pairs = blue_pairs_u_[static_cast<size_t>(i)];
    long nb = (x + 1) / 2;  // bins; 2*nb is x or x+1 blue items
    if (static_cast<long>(pairs.size()) < nb) return;
    std::vector<long> chosen(pairs.begin(), std::next(pairs.begin(), nb));
    long a = ++assignment_seq_;
    long blues = 0;
    for (long bin : chosen)
        for (long it : std::vector<long>(bins_[static_cast<size_t>(bin)].items)) {
            const Item& xi = items_[static_cast<size_t>(it)];
            if (xi.label == i && xi.color == Color::Blue) {
                mark_item(it, Mark::B, a);
                ++blues;
            }
        }
    set_color(red, Color::Red);
    mark_item(red, Mark::B, a);
    c.nM[B] += blues + 1;
    c.n_redM[B] += 1;
}

void Packer::block_N(int i) {
    TypeCounters& c = counters_mut(i);
    const int N = static_cast<int>(Mark::N);
    long x = min_x(i, c.nM[N], c.n_redM[N], 2);
    std::vector<long> all(prov_[static_cast<size_t>(i)].begin(), prov_[static_cast<size_t>(i)].end());
    long reds = 0;
    for (long it : all) reds += items_[static_cast<size_t>(it)].color == Color::ProvRed;
    long blues = static_cast<long>(all.size()) - reds;
    if (blues < x || reds < 1) return;
    // largest first; an earlier arrival counts as larger
    std::stable_sort(all.begin(), all.end(), [&](long a, long b) {
        return items_[static_cast<size_t>(a)].size > items_[static_cast<size_t>(b)].size;
    });
    std::vector<long> S(all.begin(), all.begin() + x);
    long smallest = all.back();
    std::set<long> chosen(S.begin(), S.end());
    chosen.insert(smallest);
    long m = 0;
    for (long it : chosen) m += items_[static_cast<size_t>(it)].color == Color::ProvRed;
    // swaps keep the number of red items unchanged
    std::vector<long> outside;
    for (long it : prov_[static_cast<size_t>(i)])
        if (!chosen.count(it)) outside.push_back(it);
    if (m == 0) {
        for (long it : outside)
            if (items_[static_cast<size_t>(it)].color == Color::ProvRed) {
                set_color(it, Color::ProvBlue);
                break;
            }
    } else {
        long flips = m - 1;
        for (long it : outside) {
            if (!flips) break;
            if (items_[static_cast<size_t>(it)].color == Color::ProvBlue) {
                set_color(it, Color::ProvRed);
                --flips;
            }
        }
    }
    long a = ++assignment_seq_;
    for (long it : S) {
        set_color(it, Color::Blue);
        mark_item(it, Mark::N, a);
    }
    set_color(smallest, Color::Red);
    mark_item(smallest, Mark::N, a);
    c.nM[N] += x + 1;
    c.n_redM[N] += 1;
}

void Packer::mark_and_color(int i) {
    propagate(i);
    block_R(i);
    block_B(i);
    block_N(i);
}

long Packer::add_raw_bin(const std::vector<Item>& contents) {
    long bin = new_bin(false);
    for (Item it : contents) {
        it.id = static_cast<long>(items_.size());
        if (!it.type) it.type = classify(it.size);
        if (!it.label) it.label = it.type;
        Color col = it.color;
        it.color = Color::None;
        items_.push_back(it);
        put(it.id, bin);
        set_color(it.id, col);
        if (it.bonus) {
            bonus_[static_cast<size_t>(it.label)].insert(it.id);
            unindex(bin);
            reindex(bin);
        }
    }
    return bin;
}

std::vector<InvariantViolation> Packer::check_invariants() const {
    std::vector<InvariantViolation> out;
    const bool extreme = p_->mode == Mode::Extreme;

    // Open bins with colored items per group. A bin holding a
    // single marked blue medium is waiting for its partner and is not counted.
    std::map<std::tuple<bool, int, int>, std::vector<long>> groups;
    std::set<long> open;
    for (const auto* sets : {&open_blue_, &open_red_})
        for (const auto& s : *sets) open.insert(s.begin(), s.end());
    for (long id : open) {
        const Bin& b = bins_[static_cast<size_t>(id)];
        if (b.blue_count == 1 && is_medium(b.blue_type)) {
            bool waiting = false;
            for (long it : b.items) {
                const Item& x = items_[static_cast<size_t>(it)];
                if (x.label == b.blue_type && x.color == Color::Blue && x.mark != Mark::U) waiting = true;
            }
            if (waiting) continue;
        }
        groups[{b.pure, b.blue_type, b.red_type}].push_back(id);
    }
    for (const auto& [g, ids] : groups)
        if (ids.size() > 2) {
            std::ostringstream d;
            d << ids.size() << " open bins in group (" << std::get<1>(g) << "," << std::get<2>(g) << ")";
            out.push_back({"open-bins", std::get<1>(g) ? std::get<1>(g) : std::get<2>(g), ids[2], d.str()});
        }

    for (int i = 1; i <= p_->N(); ++i) {
        if (p_->is_pseudo(i)) continue;
        const TypeCounters& c = counters(i);
        long fl = (p_->alpha(i) * Rational(c.n)).floor_long();
        if (c.n_red < fl - 1)
            out.push_back({"red-low", i, -1,
                           "n_red " + std::to_string(c.n_red) + " below floor(r n) - 1 = " + std::to_string(fl - 1)});
        if (is_large(i) && c.n_red != 0) out.push_back({"red-low", i, -1, "large type with red items"});
        if (extreme && is_small(i) && c.n_red > fl + redfit(i))
            out.push_back({"red-high", i, -1,
                           "n_red " + std::to_string(c.n_red) + " above floor(r n) + redfit = " +
                               std::to_string(fl + redfit(i))});
        if (!is_medium(i) && c.n_bonus != 0) out.push_back({"bonus-type", i, -1, "bonus items on a non-medium type"});
        const auto& pv = prov_[static_cast<size_t>(i)];
        for (long it : pv) {
            const Item& x = items_[static_cast<size_t>(it)];
            if (bins_[static_cast<size_t>(x.bin)].items.size() != 1)
                out.push_back({"provisional-shared", i, x.bin, "provisional item " + std::to_string(it) + " shares its bin"});
        }
        if (!pv.empty()) {
            long cap = (Rational(5) / p_->alpha(i)).ceil_long();
            if (static_cast<long>(pv.size()) > cap)
                out.push_back({"provisional-count", i, -1,
                               std::to_string(pv.size()) + " provisional items, bound " + std::to_string(cap)});
        }
    }

    // No unmixed red bin while a compatible unmixed bin or bonus item exists.
    for (int j = 1; j <= p_->N(); ++j) {
        const auto& reds = unmixed_red_[static_cast<size_t>(j)];
        if (reds.empty()) continue;
        long nj = needs_of(j);
        for (int i = 1; i <= p_->N(); ++i) {
            if (p_->is_pseudo(i)) continue;
            if (extreme && is_large(i)) {
                if (is_medium(j)) continue;  // size rule only
                for (long id : unmixed_blue_[static_cast<size_t>(i)]) {
                    const Item& x = items_[static_cast<size_t>(bins_[static_cast<size_t>(id)].items.front())];
                    if (leaves_of(x) >= nj)
                        out.push_back({"red-compatible", j, id,
                                       "unmixed red bin " + std::to_string(*reds.begin()) +
                                           " coexists with unmixed large bin"});
                }
                continue;
            }
            if (d_.leaves[static_cast<size_t>(i - 1)] < nj) continue;
            if (!unmixed_blue_[static_cast<size_t>(i)].empty())
                out.push_back({"red-compatible", j, *unmixed_blue_[static_cast<size_t>(i)].begin(),
                               "unmixed red bin " + std::to_string(*reds.begin()) + " coexists with unmixed type-" +
                                   std::to_string(i) + " bin"});
            if (!bonus_[static_cast<size_t>(i)].empty())
                out.push_back({"red-compatible", j, items_[static_cast<size_t>(*bonus_[static_cast<size_t>(i)].begin())].bin,
                               "unmixed red bin " + std::to_string(*reds.begin()) + " coexists with a type-" +
                                   std::to_string(i) + " bonus item"});
        }
    }
    return out;
}

std::vector<Rational> parse_stream(const std::string& text) {
    std::vector<Rational> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) out.push_back(Rational::parse(tok));
    }
    return out;
}

std::vector<Rational> random_stream(long n, std::uint64_t seed, bool medium_heavy) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> grid(1, 100000), pick(0, 99);
    std::vector<Rational> out;
    out.reserve(static_cast<size_t>(n));
    for (long k = 0; k < n; ++k) {
        long x = grid(rng);
        long w = pick(rng);
        if (medium_heavy && w < 60) out.emplace_back(33334 + x % 16667, 100000);
        else if (medium_heavy && w < 85) out.emplace_back(1 + x % 33333, 100000);
        else out.emplace_back(x, 100000);
    }
    return out;
}

std::vector<PlacementEvent> parse_trace(const std::string& text) {
    std::vector<PlacementEvent> out;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string tok;
        PlacementEvent e;
        int seen = 0;
        while (ls >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) throw ParseError("trace line " + std::to_string(lineno) + ": bad field '" + tok + "'");
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            try {
                if (key == "item") e.item = std::stol(val);
                else if (key == "size") e.size = Rational::parse(val);
                else if (key == "type") e.type = std::stoi(val);
                else if (key == "color") e.color = parse_color(val);
                else if (key == "bin") e.bin = std::stol(val);
                else if (key == "bonus") e.bonus = val == "1";
                else throw ParseError("unknown key '" + key + "'");
            } catch (const std::logic_error&) {
                throw ParseError("trace line " + std::to_string(lineno) + ": bad value in '" + tok + "'");
            }
            ++seen;
        }
        if (seen == 0) continue;
        if (seen != 6) throw ParseError("trace line " + std::to_string(lineno) + ": expected 6 fields");
        out.push_back(e);
    }
    return out;
}

std::string format_violations(const std::vector<InvariantViolation>& v) {
    std::ostringstream out;
    for (const auto& x : v) {
        out << x.property << " (type " << x.type;
        if (x.bin >= 0) out << ", bin " << x.bin;
        out << "): " << x.detail << "\n";
    }
    return out.str();
}

}  // namespace harmonic
