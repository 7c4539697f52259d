#pragma once

#include "harmonic/knapsack.hpp"
#include "harmonic/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace harmonic {

struct ClassMax {
    Rational value;
    Pattern pattern;  // argmax
    Rational W, V;    // plain weights of the argmax
};

// Maximum of omega over the patterns of the class. For a medium class the
// patterns holding the row-1 large item together with a critical item are
// evaluated with that item as mark R when y1 > 0 (the critical patterns are
// then covered by the y1/y2 terms).
ClassMax class_knapsack(const WeightContext& ctx, const Multipliers& y);

// Space left in the critical pattern; certification needs it to be at most
// the smallest non-sand lower bound.
Rational critical_residual(const WeightContext& ctx);
bool critical_patterns_unique(const WeightContext& ctx);

struct ClassOutcome {
    int k = 0;
    bool feasible = false;
    bool wonly = false;
    Rational y1, y2, y3;
    ClassMax last;
    std::vector<Rational> probes;
};

ClassOutcome dual_feasible(const WeightContext& ctx, const Rational& c, int max_iters = 20);

struct CertEntry {
    int k = 0;
    std::string label;  // "wonly" or a rational
};

struct Certificate {
    std::string digest;
    Mode mode = Mode::Extreme;
    Rational ratio;
    std::vector<CertEntry> entries;
};

struct CertifyResult {
    bool ok = false;
    Certificate cert;
    std::vector<ClassOutcome> classes;
    std::string failure;
};

CertifyResult certify(const ParameterSet& p, const Rational& c, int jobs = 1);

struct VerifyResult {
    bool ok = false;
    int failing_class = -1;
    std::string message;
    std::vector<std::pair<int, Rational>> maxima;
};

VerifyResult verify_certificate(const ParameterSet& p, const Certificate& cert);
// One knapsack at a given y3 (y1, y2 derived from c).
ClassMax evaluate_class(const ParameterSet& p, const DerivedTables& d, int k, const Rational& c,
                        const std::optional<Rational>& y3);

std::string write_certificate(const Certificate& cert);
Certificate read_certificate(const std::string& text);
std::string emit_knapsacks(const ParameterSet& p, const Certificate& cert);

}  // namespace harmonic
