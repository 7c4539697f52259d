#pragma once

#include "harmonic/packer.hpp"

#include <string>
#include <vector>

namespace harmonic {

// One of the three lower-bound constructions, keyed by the redfit of the
// smallest adversary type (1, 2 or 3).
struct LowerBoundCase {
    int redfit_last = 2;
    std::string name;                      // "redfit4=2" etc.
    std::vector<Rational> lower;           // adversary type lower bounds, largest first
    std::vector<long> redfit;              // per adversary type (0 for the large type)
    std::vector<Rational> table_alpha;     // free redfracs, from the second type on
    Rational threshold;                    // bound claimed for the case
    std::vector<std::string> input_names;
    std::vector<std::vector<int>> static_patterns;  // single-pattern inputs
    std::vector<int> mixed_pattern;        // q^0 of the mixed input (empty if none)
    long mixed_scale = 2;                  // chi factor of the q^1, q^2 bins
};

LowerBoundCase lower_bound_case(int redfit_last);
LowerBoundCase lower_bound_case(const std::string& name);  // "redfit4=2" or "2"

// Value of every input at the given free redfracs.
std::vector<Rational> input_values(const LowerBoundCase& c, const std::vector<Rational>& alpha);

struct StaticBound {
    std::vector<Rational> values;
    Rational min, max;  // the adversary picks the best input, so max is the bound
};
StaticBound static_lower_bound(const LowerBoundCase& c, const std::vector<Rational>& alpha);

// Mixing weights chi(q^1), chi(q^2) relative to chi(q^0) = 1.
std::pair<Rational, Rational> mixed_chi(const LowerBoundCase& c, const std::vector<Rational>& alpha);

struct GridResult {
    Rational grid_min;               // min over grid points of max over inputs
    std::vector<Rational> argmin;
    std::vector<Rational> lipschitz; // per coordinate, over [0, 1/3]
    Rational slack;                  // sum of lipschitz * step
    Rational certified;              // grid_min - slack
    long points = 0;
};
GridResult grid_min_max(const LowerBoundCase& c, const Rational& step);

// Parameter set that realizes a case for the packer: each adversary type
// becomes a narrow interval (lower, lower + delta].
struct AdversaryParams {
    LowerBoundCase lb;
    ParameterSet p;
    std::vector<int> types;   // type index in p of each adversary type
    Rational delta;           // width of the adversary intervals
    Rational sand;            // sand item size (= t_N)
};
AdversaryParams make_adversary_params(const LowerBoundCase& c, Mode mode, const std::vector<Rational>& alpha,
                                      const Rational& delta = Rational(1, 2000), const Rational& tN = Rational(1, 1000));

struct PatternStream {
    std::vector<Rational> items;
    long opt = 0;
    Rational item_offset;  // added to every lower bound
};
// N copies of the pattern, smallest items first, then sand filling every bin.
PatternStream pattern_stream(const AdversaryParams& a, const std::vector<int>& pattern, long N);

struct AdaptiveResult {
    std::vector<std::string> transcript;
    Rational x;           // last medium item placed in a new bin
    long mediums = 0, larges = 0, small_items = 0, sand_items = 0;
    long alg = 0, opt = 0;
    Rational ratio;
};
// Mixed input: sand, small items of q^0, bisected medium items, then items of
// size 1 - x against the packer's placements.
AdaptiveResult adaptive_medium_stream(const AdversaryParams& a, long N, bool keep_transcript = false);

std::string lower_bound_report(const LowerBoundCase& c, const std::vector<Rational>& alpha);

}  // namespace harmonic
