#pragma once

#include <string>
#include <vector>

namespace bridgesim {

/// One static-validation finding: which field, which rule, and a readable
/// explanation.
struct Diagnostic {
    std::string field;
    std::string rule;
    std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline std::string format(const Diagnostic& d) { return d.field + ": [" + d.rule + "] " + d.message; }

} // namespace bridgesim
