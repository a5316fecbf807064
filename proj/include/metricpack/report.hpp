#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace metricpack {

enum class Verdict { pass, fail, indeterminate };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "indeterminate";
    }
}

// A replayable counterexample: point indices plus the distances that exhibit
// the violation. The layout of `points`/`values` depends on `kind`.
struct WitnessRecord {
    std::string kind;
    std::vector<std::size_t> points;
    std::vector<double> values;
};

// Result of a boolean predicate. `witnesses` is populated only when the
// verdict is false; `exhaustive` is false when a scan budget forced sampling.
struct CheckReport {
    bool verdict = false;
    bool exhaustive = true;
    std::vector<WitnessRecord> witnesses;
};

}  // namespace metricpack
